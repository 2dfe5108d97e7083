"""Command-line entry point: ``tracepp <command> --field m=..,n=.. ...``.

Records go to --out (default stdout) as JSONL or CSV; a one-line summary
goes to stderr.  Exit status is 1 when any rule disagrees with the census
or a consistency check fails, 2 on bad input.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from contextlib import contextmanager
from typing import Iterable, Optional

import numpy as np

from . import constructions as con
from . import linmap as lm
from .criteria import ConsistencyError
from .field import FieldCtx, FieldTooLargeError, make_field
from .search import SHAPES, InfeasibleGridError, check_instance, search
from .xval import adjoint_records, charsum_records, criteria_records, record_ok

FAMILIES = ("ell-lambda", "compose", "affine", "even-lambda")


@contextmanager
def _open_out(path: Optional[str]):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def write_records(records: Iterable[dict], fmt: str, out) -> None:
    if fmt == "jsonl":
        for rec in records:
            out.write(json.dumps(rec) + "\n")
        return
    rows = list(records)
    fields: list[str] = []
    for rec in rows:
        fields += [k for k in rec if k not in fields]
    writer = csv.DictWriter(out, fieldnames=fields, lineterminator="\n")
    writer.writeheader()
    for rec in rows:
        writer.writerow({k: (json.dumps(v) if isinstance(v, (dict, list)) else v) for k, v in rec.items()})


class _Tally:
    """Counts records as they stream past."""

    def __init__(self, ok):
        self.ok = ok
        self.checked = 0
        self.failed = 0

    def __call__(self, records: Iterable[dict]):
        for rec in records:
            self.checked += 1
            if not self.ok(rec):
                self.failed += 1
            yield rec


def _emit(args, records: Iterable[dict], ok) -> int:
    tally = _Tally(ok)
    with _open_out(args.out) as out:
        write_records(tally(records), args.format, out)
    print(json.dumps({"checked": tally.checked, "failed": tally.failed}), file=sys.stderr)
    return 1 if tally.failed else 0


# -- commands ---------------------------------------------------------------

def cmd_field_info(args) -> int:
    ctx = make_field(args.field)
    rec = {
        "field": str(ctx.spec),
        "q": ctx.q,
        "size": ctx.size,
        "modulus": ctx.fmt(ctx.modulus),
        "generator": ctx.fmt(ctx.generator),
        "subfields": ctx.subfield_lattice,
    }
    if ctx.n % 2 and ctx.has_tables:
        rec["abs_S11"] = abs(ctx.S11)
    return _emit(args, [rec], lambda r: True)


def cmd_check(args) -> int:
    ctx = make_field(args.field)
    A = ctx.parse_elt(args.A)
    L = lm.from_json(ctx, args.L)
    rec = check_instance(ctx, A, L, oracle=args.oracle, all_rules=args.all_rules)
    records = list(rec.get("verdicts", []))
    if "error" in rec:
        records.append({"rule": "consistency", "error": rec["error"]})
    if "oracle" in rec:
        records.append({"rule": "oracle", **rec["oracle"]})
    status = _emit(args, records, lambda r: "error" not in r and r.get("oracle", {}).get("agrees") is not False)
    return max(status, 0 if rec["agree"] else 1)


def cmd_search(args) -> int:
    ctx = make_field(args.field)
    A = ctx.parse_elt(args.A)
    records = search(ctx, args.shape, A=A, trials=args.trials, seed=args.seed,
                     max_grid=args.max_grid, emit_pp_only=args.emit_pp_only)
    first = next(records, None)  # surfaces grid/shape errors before any output

    def chained():
        if first is not None:
            yield first
            yield from records

    return _emit(args, chained(), lambda r: r["agree"])


def cmd_xval(args) -> int:
    ctx = make_field(args.field)
    if args.target == "charsum":
        records = charsum_records(ctx, args.trials, args.seed)
    elif args.target == "adjoint":
        records = adjoint_records(ctx, args.trials or 200, args.seed)
    else:
        records = criteria_records(ctx, args.trials or 200, args.seed)
    return _emit(args, records, lambda r: record_ok(args.target, r))


def _ell_sample(ctx: FieldCtx, rng) -> list[int]:
    sub = ctx.elements_of(1)
    while True:
        coeffs = [int(rng.choice(sub)) for _ in range(ctx.m)]
        ell = lm.LinPoly.make(ctx, list(enumerate(coeffs)))
        if len({lm.evaluate(ctx, ell, y) for y in sub}) == ctx.q:
            return coeffs


def _witness(ctx: FieldCtx, rng) -> lm.LinPoly:
    found = con.pp_witnesses(ctx, rng, 1)
    if not found:
        raise ConsistencyError("no permutation witness found by sampling")
    return found[0]


def _construct_one(ctx: FieldCtx, args, idx: int) -> dict:
    rng = np.random.default_rng([args.seed, idx])
    given = lambda text: lm.from_json(ctx, text) if text is not None else None  # noqa: E731
    L, lam = given(args.L), given(args.lam)
    family = args.family
    inputs: dict = {}
    if family == "ell-lambda":
        lam = lam if lam is not None else con.sample_lambda(ctx, rng, "sqrt")
        ell = [ctx.parse_elt(c) for c in json.loads(args.ell)] if args.ell else _ell_sample(ctx, rng)
        inputs = {"lambda": lm.to_json(lam), "ell": [ctx.fmt(c) for c in ell]}
        result = con.construct_ell_lambda(ctx, lam, ell)
    elif family == "compose":
        L = L if L is not None else _witness(ctx, rng)
        rule = "zero" if args.mode == con.PROP_ZERO_TRACE else "identity"
        lam = lam if lam is not None else con.sample_lambda(ctx, rng, rule)
        inputs = {"L": lm.to_json(L), "lambda": lm.to_json(lam), "mode": args.mode}
        result = con.construct_compose(ctx, L, lam, args.mode)
    elif family == "affine":
        L = L if L is not None else _witness(ctx, rng)
        lam = lam if lam is not None else con.find_affine_lambda(ctx, rng)
        if lam is None:
            raise ConsistencyError("no lambda passing the F_q gate found by sampling")
        inputs = {"L": lm.to_json(L), "lambda": lm.to_json(lam)}
        result = con.construct_affine_variants(ctx, L, lam)
    else:
        L = L if L is not None else _witness(ctx, rng)
        lam = lam if lam is not None else con.sample_bijection(ctx, rng)
        inputs = {"L": lm.to_json(L), "lambda": lm.to_json(lam)}
        result = con.lambda_even_derived(ctx, L, lam)
    return {
        "family": family,
        "index": idx,
        "inputs": inputs,
        "verdict": result.verdict.to_dict(),
        "emitted": [{"label": lab, "L": lm.to_json(P), "permutation": True}
                    for lab, P in zip(result.labels, result.polys)],
    }


def cmd_construct(args) -> int:
    ctx = make_field(args.field)
    odd_family = args.family != "even-lambda"
    if odd_family and ctx.n % 2 == 0:
        raise ValueError(f"{args.family} needs odd n, got {ctx.spec}")
    if not odd_family and ctx.n % 2:
        raise ValueError(f"even-lambda needs even n, got {ctx.spec}")
    explicit = args.lam is not None and (args.family == "ell-lambda" or args.L is not None)
    count = 1 if explicit else (args.trials or 20)

    def records():
        for idx in range(count):
            try:
                yield _construct_one(ctx, args, idx)
            except ConsistencyError as exc:
                yield {"family": args.family, "index": idx, "error": str(exc)}

    return _emit(args, records(), lambda r: "error" not in r)


# -- parser -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", required=True, help="m=<int>,n=<int>[,mod=0x<hex>]")
    common.add_argument("--seed", type=int, default=0, help="seed for sampled sweeps")
    common.add_argument("--trials", type=int, default=None, help="sample this many candidates")
    common.add_argument("--format", choices=("jsonl", "csv"), default="jsonl")
    common.add_argument("--out", default=None, help="output path (default stdout)")

    p = argparse.ArgumentParser(prog="tracepp", description="Permutation tests for Tr(A x^(q+1)) + L(x).")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("field-info", parents=[common], help="modulus, generator, subfields, |S(1,1)|")
    s.set_defaults(func=cmd_field_info)

    s = sub.add_parser("check", parents=[common], help="run the criteria on one (A, L)")
    s.add_argument("--A", default="0x1", help="hex element A (default 0x1)")
    s.add_argument("--L", required=True, help='L as JSON, e.g. [[0,"0x1"],[1,"0x2"]]')
    s.add_argument("--oracle", action="store_true", help="compare with the exhaustive census")
    s.add_argument("--all-rules", action="store_true", help="also run the shape-specific rules")
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("search", parents=[common], help="sweep a family of L")
    s.add_argument("--shape", choices=SHAPES, required=True)
    s.add_argument("--A", default="0x1")
    s.add_argument("--max-grid", type=int, default=200_000, help="largest grid swept without --trials")
    s.add_argument("--emit-pp-only", action="store_true",
                   help="only write census-confirmed permutations (disagreements are always written)")
    s.set_defaults(func=cmd_search)

    s = sub.add_parser("xval", parents=[common], help="closed forms against direct computation")
    s.add_argument("--target", choices=("charsum", "criteria", "adjoint"), required=True)
    s.set_defaults(func=cmd_xval)

    s = sub.add_parser("construct", parents=[common], help="build permutations from known ones")
    s.add_argument("--family", choices=FAMILIES, required=True)
    s.add_argument("--L", default=None, help="base L as JSON (sampled if omitted)")
    s.add_argument("--lambda", dest="lam", default=None, help="lambda as JSON (sampled if omitted)")
    s.add_argument("--ell", default=None, help='ell coefficients as a JSON list, e.g. ["0x1"]')
    s.add_argument("--mode", choices=(con.PROP_ZERO_TRACE, con.THM_FIXED_TRACE), default=con.THM_FIXED_TRACE)
    s.set_defaults(func=cmd_construct)
    return p


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, FieldTooLargeError, InfeasibleGridError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ConsistencyError as exc:
        print(f"consistency error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
