"""Cubic braid group quotients, their group algebras, Hecke quotients and Markov traces."""

__version__ = "0.1.0"
