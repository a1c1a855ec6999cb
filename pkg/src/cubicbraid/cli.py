"""Command-line entry point: ``cubicbraid <command> ...`` or ``python -m cubicbraid``.

Exit codes: 0 when every check passes, 1 on a mismatch, 2 when a run is
aborted for lack of resources (or on bad usage).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from typing import Dict, List, Optional

import numpy as np

EXIT_OK, EXIT_MISMATCH, EXIT_RESOURCE = 0, 1, 2

_UNITS = {"": 1, "k": 2 ** 10, "m": 2 ** 20, "g": 2 ** 30}


def parse_bytes(text: str) -> int:
    t = text.strip().lower().rstrip("b")
    unit = t[-1] if t and t[-1] in "kmg" else ""
    value = int(float(t[: len(t) - len(unit)]) * _UNITS[unit])
    if value < 64 * 2 ** 20:
        raise argparse.ArgumentTypeError("memory cap must be at least 64 MB")
    return value


def _workers(text: str) -> int:
    k = int(text)
    if k < 1:
        raise argparse.ArgumentTypeError("worker count must be at least 1")
    return k


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.bool_,)):
        return bool(x)
    if isinstance(x, (bool, int, float, str)) or x is None:
        return x
    return str(x)


class Runner:
    """Holds the run configuration and the JSON sink."""

    def __init__(self, args: argparse.Namespace):
        self.args = args
        self.records: List[Dict[str, object]] = []

    def emit(self, key: str, value, expected=None) -> bool:
        rec = {"name": key, "got": _jsonable(value)}
        ok = True
        if expected is not None:
            ok = value == expected
            rec["expected"] = _jsonable(expected)
            rec["status"] = "PASS" if ok else "FAIL"
        self.records.append(rec)
        tail = "" if expected is None else ("  PASS" if ok else f"  FAIL (expected {expected})")
        print(f"{key}: {value}{tail}")
        return ok

    def finish(self, ok: bool, extra: Optional[Dict[str, object]] = None) -> int:
        if self.args.json:
            doc = {"command": self.args.command, "records": self.records}
            if extra:
                doc.update(extra)
            with open(self.args.json, "w", encoding="utf-8") as fh:
                json.dump(_jsonable(doc), fh, indent=2, sort_keys=True, ensure_ascii=False)
                fh.write("\n")
        return EXIT_OK if ok else EXIT_MISMATCH


# ---------------------------------------------------------------------------
# commands


def cmd_group(r: Runner) -> int:
    from .grouptable import EXPECTED_ORDERS, get_group, verify_group_facts

    a = r.args
    t0 = time.perf_counter()
    T = get_group(a.n, cache_dir=a.cache_dir)
    ok = r.emit(f"order Gamma_{a.n}", T.order, EXPECTED_ORDERS.get(a.n))
    r.emit("build_ms", round(1000 * (time.perf_counter() - t0), 1))
    if a.action == "check":
        if a.n == 5:
            for k, v in verify_group_facts(T).items():
                ok &= r.emit(k, v, True)
        r.emit("conjugacy classes", T.classes().count)
    return r.finish(ok)


def cmd_kdim(r: Runner) -> int:
    from .coeff import ring_from_name
    from .idealdim import named_kn_dim

    a = r.args
    res = named_kn_dim(a.n, ring_from_name(a.ring), restricted=a.restricted)
    for k, v in res.record().items():
        r.emit(k, v)
    return r.finish(True)


def cmd_udim(r: Runner) -> int:
    from .coeff import ring_from_name
    from .idealdim import named_un_dim

    res = named_un_dim(r.args.n, ring_from_name(r.args.ring or "f4"))
    for k, v in res.record().items():
        r.emit(k, v)
    return r.finish(True)


def cmd_snf(r: Runner) -> int:
    from .idealdim import zmodule_structure

    rep = zmodule_structure(r.args.n)
    for k, v in rep.items():
        r.emit(k, v)
    return r.finish(all(rep["checks"].values()))


def cmd_bmw(r: Runner) -> int:
    from .idealdim import bmw_ideal_suite

    for k, v in bmw_ideal_suite(r.args.n).items():
        r.emit(k, v)
    return r.finish(True)


def cmd_radical(r: Runner) -> int:
    from .coeff import ring_from_name
    from .idealdim import radical_powers

    for k, v in radical_powers(ring_from_name(r.args.ring or "f2")).items():
        r.emit(k, v)
    return r.finish(True)


def cmd_hecke(r: Runner) -> int:
    from itertools import permutations

    from .braidword import element_c
    from .coeff import F4, ring_from_name
    from .hecke import HeckeAlgebra, hecke_ideal_images, itl_battery, project_word, ternary_dim

    a = r.args
    ring = ring_from_name(a.ring or "f4")
    ok = True
    if a.action == "dims":
        import math

        for al, be in permutations(range(3), 2):
            H = HeckeAlgebra(a.n, ring, al, be)
            r.emit(f"dim {H}", H.dim, math.factorial(a.n))
            c = element_c(a.n)
            ok &= r.emit(f"c -> 0 in {H}", project_word(H, c.over(F4) if ring == F4 else c).is_zero(), True)
    elif a.action == "ternary":
        rep = ternary_dim(a.n, ring, route=a.route)
        for k, v in rep.items():
            r.emit(k, v)
        ok = rep["dim"] == rep["expected"]
    elif a.action == "itl":
        for k, v in itl_battery(a.n).items():
            r.emit(k, v)
    else:
        for k, v in hecke_ideal_images(a.n).items():
            r.emit(k, v)
    return r.finish(ok)


def cmd_trace(r: Runner) -> int:
    from .braidword import parse_word
    from .markov import Unreduced, mod4_trace, trace_eval, verify_lemma73_74, verify_q_annihilation

    a = r.args
    if a.action == "verify":
        ok = True
        for k, v in verify_q_annihilation().items():
            r.emit(k, v)
            ok &= v is not False
        rep = verify_lemma73_74()
        for k, v in rep.items():
            r.emit(k, v)
        return r.finish(ok and bool(rep["all_ok"]))
    if not a.word:
        print("trace eval/mod4 needs --word", file=sys.stderr)
        return EXIT_RESOURCE
    w = parse_word(a.word)
    if a.action == "eval":
        try:
            t = trace_eval(w)
        except Unreduced as exc:
            print(f"unreduced: {exc}", file=sys.stderr)
            return EXIT_RESOURCE
        r.records.append({"name": "trace", "got": str(t)})
        print(f"({t.substituted()})·t1")
        if a.verbose:
            print(f"before substitution: {t}")
        return r.finish(True)
    for g, val in zip(("1", "j", "j2"), mod4_trace(w.letters)):
        r.emit(f"tr_{g}", val)
    return r.finish(True)


def cmd_reps(r: Runner) -> int:
    from .reps import check_small_reps, iq_ib_ideals, lemma415_416

    fn = {"small": check_small_reps, "ideals": iq_ib_ideals, "lemma": lemma415_416}[r.args.action]
    rep = fn()
    for k, v in rep.items():
        r.emit(k, v)
    return r.finish(bool(rep["ok"]))


def cmd_verify(r: Runner) -> int:
    from .suite import run_suite

    a = r.args

    def show(c):
        tail = f" ({c.note})" if c.note else ""
        got = "" if c.status == "PASS" else f" got={c.got!r} expected={c.expected!r}"
        print(f"[{c.criterion:>8}] {c.status:<7} {c.name}{got}{tail}  {c.wall_ms:.0f} ms", flush=True)

    only = a.only.split(",") if a.only else None
    checks = run_suite(a.suite, only=only, progress=show)
    statuses = [c.status for c in checks]
    counts = {s: statuses.count(s) for s in sorted(set(statuses))}
    print("summary:", ", ".join(f"{k}={v}" for k, v in counts.items()))
    r.records = [c.record() for c in checks]
    code = r.finish("FAIL" not in statuses, {"suite": a.suite, "counts": counts})
    if code == EXIT_OK and "FAILED" in statuses:
        code = EXIT_RESOURCE
    return code


COMMANDS = {
    "group": cmd_group, "kdim": cmd_kdim, "udim": cmd_udim, "snf": cmd_snf, "bmw": cmd_bmw,
    "radical": cmd_radical, "hecke": cmd_hecke, "trace": cmd_trace, "reps": cmd_reps,
    "verify": cmd_verify,
}

RINGS = ["f2", "f3", "f4", "f5", "f7", "z4j", "z"]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", metavar="PATH", help="write a JSON report here")
    common.add_argument("--cache-dir", help="group table cache (default $CUBICBRAID_CACHE or ~/.cache)")
    common.add_argument("--workers", type=_workers, default=None, help="numba worker threads")
    common.add_argument("--mem-cap", type=parse_bytes, default=None, help="address-space cap, e.g. 2G")

    p = argparse.ArgumentParser(prog="cubicbraid", description=__doc__.splitlines()[0], parents=[common])
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("group", parents=[common], help="build or check Gamma_n")
    g.add_argument("action", choices=["build", "check"])
    g.add_argument("--n", type=int, required=True, choices=[2, 3, 4, 5])

    k = sub.add_parser("kdim", parents=[common], help="dim k[Gamma_n]/(q)")
    k.add_argument("--n", type=int, required=True)
    k.add_argument("--ring", choices=RINGS, default="f2")
    k.add_argument("--restricted", action="store_true", help="close inside the index-3 subgroup")

    u = sub.add_parser("udim", parents=[common], help="dim k[Gamma_n]/(b)")
    u.add_argument("--n", type=int, required=True)
    u.add_argument("--ring", choices=RINGS, default="f4")

    s = sub.add_parser("snf", parents=[common], help="Z-module structure of Z[Gamma_n]/(q)")
    s.add_argument("--n", type=int, required=True, choices=[3, 4])

    b = sub.add_parser("bmw", parents=[common], help="BW relation ideals over F4")
    b.add_argument("--n", type=int, required=True, choices=[3, 4])

    rd = sub.add_parser("radical", parents=[common], help="radical powers of kQ_8 and k[Gamma_3]")
    rd.add_argument("--ring", choices=RINGS, default="f2")

    h = sub.add_parser("hecke", parents=[common], help="cubic Hecke quotients")
    h.add_argument("action", choices=["dims", "ternary", "itl", "images"])
    h.add_argument("--n", type=int, required=True)
    h.add_argument("--ring", choices=["f4", "z4j"], default="f4")
    h.add_argument("--route", choices=["characters", "image"], default="characters")

    t = sub.add_parser("trace", parents=[common], help="Markov trace values")
    t.add_argument("action", choices=["eval", "mod4", "verify"])
    t.add_argument("--word", help='comma separated letters, e.g. "2,-3,1"')
    t.add_argument("--verbose", action="store_true")

    rp = sub.add_parser("reps", parents=[common], help="the 3-dimensional F4 representations")
    rp.add_argument("action", choices=["small", "ideals", "lemma"])

    v = sub.add_parser("verify", parents=[common], help="run the acceptance battery")
    v.add_argument("--suite", choices=["fast", "paper", "extended", "sec44"], default="fast")
    v.add_argument("--only", help="comma separated criterion ids")
    return p


def _configure(args: argparse.Namespace) -> None:
    if args.cache_dir:
        os.environ["CUBICBRAID_CACHE"] = args.cache_dir
    if args.workers:
        import numba

        numba.set_num_threads(min(args.workers, numba.config.NUMBA_NUM_THREADS))
    if args.mem_cap:
        import resource

        _, hard = resource.getrlimit(resource.RLIMIT_AS)
        resource.setrlimit(resource.RLIMIT_AS, (args.mem_cap, hard))


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _configure(args)
    try:
        return COMMANDS[args.command](Runner(args))
    except MemoryError as exc:
        print(f"resource abort: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE


if __name__ == "__main__":
    sys.exit(main())
