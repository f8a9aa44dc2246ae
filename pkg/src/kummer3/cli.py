"""Command-line interface: every command prints one JSON report.

Curve files are JSON objects ``{"field": "Q" | {"Fp": p}, "f": [f0, ..., f7]}``
with optional ``"degenerate": true`` and an optional ``"point": {"a": [...],
"b": [...]}`` (Mumford pair, coefficients low to high) used by ``kappa``,
``height`` and ``wt``.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from fractions import Fraction
from typing import Sequence

from . import __version__
from .algebra.fields import PrimeField
from .curve import Curve, curve_from_json, curve_to_json
from .heights import canonical_height, search_points
from .jacobian import add, identity, point_from_json, point_to_json, random_point
from .kummer import kappa, kappa_coords, kummer_to_json, proportional
from .relations import (
    check_conjecture_d4,
    d,
    dim_even,
    find_relations,
    m,
    quartic_split,
    r1_vector,
    rational_test_points,
    relations_from_json,
    relations_to_json,
    same_span,
    verify_relation,
)
from .remnants import (
    all_translations,
    derive_duplication,
    derive_translation,
    duplication_from_json,
    duplication_to_json,
    is_integral,
    is_scalar_matrix,
    normalized_duplication,
    rank35_report,
    translation_from_json,
    translation_to_json,
    verify_theorem_duplication,
)

COMMANDS = ("kappa", "dims", "relations", "check-d4", "wt", "rank35", "dup",
            "height", "search", "verify")
VERIFY_TRIALS = 100


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="kummer3", description="Explicit Kummer varieties of genus-3 hyperelliptic Jacobians.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("input", nargs="?", help="report file to re-verify (verify only)")
    p.add_argument("--curve", help="curve JSON file")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--primes", type=int, default=2, help="minimum number of primes")
    p.add_argument("--prime-bits", type=int, default=31)
    p.add_argument("--samples", type=int, help="sample points per derivation")
    p.add_argument("--tol", default="1/1000", help="height tolerance (rational)")
    p.add_argument("--max-n", type=int, default=10)
    p.add_argument("--bound", type=int, default=1)
    p.add_argument("--out", help="write the report here instead of stdout")
    p.add_argument("--pretty", action="store_true")
    return p


def _threads() -> int | None:
    raw = os.environ.get("KUMMER3_THREADS")
    if raw is None:
        return None
    n = int(raw)
    if n < 1:
        raise UsageError("KUMMER3_THREADS must be a positive integer")
    return n


def _load_json(path: str) -> dict:
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def _point(c: Curve, obj: dict, key: str = "point"):
    return point_from_json(c, obj[key]) if key in obj else None


# commands ------------------------------------------------------------------------

def cmd_kappa(c, args, raw, rng, ctx):
    P = _point(c, raw) or identity(c)
    return kummer_to_json(c, kappa(c, P))


def cmd_dims(c, args, raw, rng, ctx):
    ds = []
    for n in range(1, 5):
        rep: dict = {}
        ds.append(d(c, n, rng, samples=args.samples, bits=args.prime_bits, report=rep,
                    primes=args.primes))
        ctx["primes"].update(rep.get("primes", ()))
    return {"m": [m(n) for n in range(1, 5)], "e": [dim_even(n) for n in range(1, 5)], "d": ds}


def cmd_relations(c, args, raw, rng, ctx):
    kw = dict(samples=args.samples, bits=args.prime_bits, primes=args.primes)
    rb2 = find_relations(c, 2, rng, **kw)
    rb4 = find_relations(c, 4, rng, **kw)
    ctx["primes"].update(rb2.primes + rb4.primes)
    return {"quadric": relations_to_json(rb2), "quartic": relations_to_json(rb4),
            "quadric_is_R1": same_span(list(rb2.vectors), [r1_vector(c)], c.field),
            "split": quartic_split(c, rb4)}


def cmd_check_d4(c, args, raw, rng, ctx):
    rep: dict = {}
    out = check_conjecture_d4(c, rng, samples=args.samples, bits=args.prime_bits,
                              report=rep, primes=args.primes)
    ctx["primes"].update(rep.get("primes", ()))
    return out


def cmd_wt(c, args, raw, rng, ctx):
    T = _point(c, raw)
    Ws = [derive_translation(c, T, rng=rng)] if T is not None else all_translations(c, rng)
    return {"count": len(Ws), "square_is_scalar": all(is_scalar_matrix(W.M @ W.M) for W in Ws),
            "translations": [translation_to_json(c, W) for W in Ws]}


def cmd_rank35(c, args, raw, rng, ctx):
    return rank35_report(c)


def cmd_dup(c, args, raw, rng, ctx):
    kw = dict(bits=args.prime_bits, primes=args.primes)
    if args.samples:
        kw["samples"] = args.samples
    dup = derive_duplication(c, rng, **kw)
    ctx["primes"].update(dup.primes)
    delta = normalized_duplication(c, dup)
    F = c.field
    e8 = (F(0),) * 7 + (F(1),)
    return {"delta_prime": duplication_to_json(dup), "delta": duplication_to_json(delta),
            "delta_prime_e8": [F.encode(v) for v in dup(e8)],
            "delta_e8": [F.encode(v) for v in delta(e8)],
            "integral": is_integral(delta),
            "solution_dim": dup.info.get("solution_dim"),
            "verified": verify_theorem_duplication(c, dup, VERIFY_TRIALS, rng)
            and verify_theorem_duplication(c, delta, VERIFY_TRIALS, rng)}


def cmd_height(c, args, raw, rng, ctx):
    P = _point(c, raw)
    if P is None:
        raise UsageError("the curve file needs a \"point\" for the height command")
    tol = float(Fraction(args.tol))
    return canonical_height(c, P, tol, args.max_n).to_json(c)


def cmd_search(c, args, raw, rng, ctx):
    res = search_points(c, args.bound, rng=rng)
    return {"bound": args.bound, "count": len(res),
            "points": [{"x": kummer_to_json(c, r.point)["x"],
                        "lifts": [point_to_json(c, P) for P in r.lifts]} for r in res]}


def cmd_verify(args, rng, ctx):
    if not args.input:
        raise UsageError("verify needs a report file")
    rep = _load_json(args.input)
    c = curve_from_json(rep["curve"])
    ctx["curve"] = c
    kind = rep.get("command")
    res = rep["result"]
    if kind == "relations":
        checks = {}
        for key, n in (("quadric", 2), ("quartic", 4)):
            rb = relations_from_json(res[key], c.field)
            checks[key] = all(verify_relation(c, v, n, VERIFY_TRIALS, rng) for v in rb.vectors)
    elif kind == "dup":
        checks = {key: verify_theorem_duplication(c, duplication_from_json(res[key], c.field),
                                                  VERIFY_TRIALS, rng)
                  for key in ("delta_prime", "delta")}
    elif kind == "wt":
        checks = {"translations": all(_check_translation(c, translation_from_json(c, w), rng)
                                      for w in res["translations"])}
    else:
        raise UsageError(f"cannot verify a {kind!r} report")
    return {"kind": kind, "checks": checks, "verified": all(checks.values())}


def _check_translation(c, W, rng) -> bool:
    if isinstance(c.field, PrimeField):
        pts = [random_point(c, rng) for _ in range(VERIFY_TRIALS)]
    else:
        pts = rational_test_points(c)
    return all(proportional(W.apply(kappa_coords(c, P)), kappa_coords(c, add(c, P, W.T)), c.field)
               for P in pts)


HANDLERS = {"kappa": cmd_kappa, "dims": cmd_dims, "relations": cmd_relations,
            "check-d4": cmd_check_d4, "wt": cmd_wt, "rank35": cmd_rank35, "dup": cmd_dup,
            "height": cmd_height, "search": cmd_search}


def run(argv: Sequence[str] | None = None) -> tuple[int, dict, argparse.Namespace | None]:
    """Run one command; returns ``(exit status, report, parsed arguments)``."""
    report: dict = {"version": __version__}
    args = None
    try:
        args = build_parser().parse_args(argv)
        report["command"] = args.command
        report["seed"] = args.seed
        _threads()
        rng = random.Random(args.seed)
        ctx: dict = {"primes": set()}
        if args.command == "verify":
            result = cmd_verify(args, rng, ctx)
            c = ctx["curve"]
        else:
            if not args.curve:
                raise UsageError(f"{args.command} needs --curve")
            raw = _load_json(args.curve)
            c = curve_from_json(raw)
            result = HANDLERS[args.command](c, args, raw, rng, ctx)
        if hasattr(c.field, "p"):
            ctx["primes"].add(c.field.p)
        report.update(curve=curve_to_json(c), primes=sorted(ctx["primes"]), result=result)
        return 0, report, args
    except UsageError as exc:
        report["error"] = {"type": "UsageError", "message": str(exc)}
        return 2, report, args
    except (ValueError, ArithmeticError, RuntimeError, KeyError, OSError) as exc:
        report["error"] = {"type": type(exc).__name__, "message": str(exc)}
        return 1, report, args


def main(argv: Sequence[str] | None = None) -> int:
    status, report, args = run(argv)
    pretty = bool(args and args.pretty)
    text = json.dumps(report, indent=2 if pretty else None, sort_keys=True)
    if args is not None and args.out and status == 0:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
