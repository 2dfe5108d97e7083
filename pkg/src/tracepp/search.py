"""Run every applicable rule on an instance and sweep candidate families.

Candidates are addressed by index.  Exhaustive sweeps decode the index
into grid coordinates; sampled sweeps draw from a generator seeded with
(seed, index), so a record depends only on the config and its index.
"""

from __future__ import annotations

import math
from typing import Iterator, Optional

import numpy as np

from . import criteria as cr
from . import linmap as lm
from .field import FieldCtx
from .linmap import LinPoly

SHAPES = ("monomial", "binomial", "trinomial-n3")


class InfeasibleGridError(ValueError):
    """The exhaustive grid is too large and no sampling was requested."""


def _profile_dict(prof: cr.MapProfile) -> dict:
    d: dict = {"kind": cr.PERMUTATION if prof.is_permutation else (cr.N_TO_1 if prof.is_N_to_1 else cr.NOT_INJECTIVE)}
    if prof.is_N_to_1 is not None:
        d["N"] = prof.is_N_to_1
    d["fibers"] = [[s, c] for s, c in prof.fibers]
    return d


def _binomial_parts(L: LinPoly) -> Optional[tuple[int, int, int, int]]:
    if len(L) == 1:
        (k, a), = L.terms
        return a, k, 0, k
    if len(L) == 2:
        (k, a), (l, b) = L.terms
        return a, k, b, l
    return None


def _trinomial_parts(ctx: FieldCtx, L: LinPoly) -> Optional[tuple[int, int, int, int]]:
    """(a, b, c, k) with L = (a x + b x^q + c x^(q^2))^(2^k), if L has that shape."""
    if ctx.n != 3 or L.is_zero():
        return None
    k = L.terms[0][0] % ctx.m
    if any(j % ctx.m != k for j, _ in L.terms):
        return None
    a, b, c = (ctx.frobenius(L.coeff(k + i * ctx.m), -k) for i in range(3))
    return a, b, c, k


def rule_verdicts(ctx: FieldCtx, A: int, L: LinPoly, all_rules: bool = True) -> list[cr.Verdict]:
    """Verdicts of the main criterion and, with ``all_rules``, every shape-specific one.

    Shape-specific rules are stated for A = 1, so they see the normalized L.
    """
    odd = ctx.n % 2 == 1
    out = [cr.pp_odd(ctx, L, A)] if odd else [cr.pp_even(ctx, A, L)]
    if not all_rules:
        return out
    if odd:
        out.append(cr.pp_odd_quotient(ctx, L, A))
    Ln = cr.normalize(ctx, A, L)
    if Ln is None or Ln.is_zero():
        return out
    parts = _binomial_parts(Ln)
    if parts is not None:
        if odd:
            out.append(cr.binomial_pp_odd(ctx, *parts))
        else:
            out.append(cr.binomial_even(ctx, *parts, mode="corollary"))
    if odd:
        tri = _trinomial_parts(ctx, Ln)
        if tri is not None:
            out.append(cr.trinomial_n3(ctx, *tri).verdict)
    else:
        out.append(cr.inverse_criterion(ctx, Ln).verdict)
    return out


def check_instance(ctx: FieldCtx, A: int, L: LinPoly, oracle: bool = True, all_rules: bool = True) -> dict:
    """One record: rule verdicts, the census, and whether they all agree.

    A ConsistencyError inside a rule is recorded under "error" and counts
    as a disagreement.
    """
    rec: dict = {"A": ctx.fmt(A), "L": lm.to_json(L)}
    try:
        verdicts = rule_verdicts(ctx, A, L, all_rules)
    except cr.ConsistencyError as exc:
        rec["error"] = str(exc)
        rec["agree"] = False
        return rec
    agree = True
    prof = cr.oracle_profile(ctx, A, L) if oracle else None
    for v in verdicts:
        if prof is not None:
            v.oracle = {"checked": True, "agrees": cr.agrees(v, prof)}
            if v.oracle["agrees"] is False:
                agree = False
    decided = [v for v in verdicts if v.decided]
    if len({v.is_permutation for v in decided}) > 1:
        agree = False
    rec["verdicts"] = [v.to_dict() for v in verdicts]
    if prof is not None:
        rec["oracle"] = _profile_dict(prof)
    rec["agree"] = agree
    return rec


# -- candidate grids --------------------------------------------------------

def grid_size(ctx: FieldCtx, shape: str) -> int:
    nz = ctx.size - 1
    if shape == "monomial":
        return nz * ctx.mn
    if shape == "binomial":
        return math.comb(ctx.mn, 2) * nz * nz
    if shape == "trinomial-n3":
        return ctx.m * (ctx.size ** 3 - 1)
    raise ValueError(f"unknown shape {shape!r}")


def _check_shape(ctx: FieldCtx, shape: str) -> None:
    if shape not in SHAPES:
        raise ValueError(f"unknown shape {shape!r}; expected one of {', '.join(SHAPES)}")
    if shape == "trinomial-n3" and ctx.n != 3:
        raise ValueError("trinomial-n3 needs n = 3")


def grid_params(ctx: FieldCtx, shape: str, idx: int) -> dict:
    nz = ctx.size - 1
    if shape == "monomial":
        k, a = divmod(idx, nz)
        return {"a": a + 1, "k": k}
    if shape == "binomial":
        pair, rest = divmod(idx, nz * nz)
        a, b = divmod(rest, nz)
        k, l = _pair_at(ctx.mn, pair)
        return {"a": a + 1, "k": k, "b": b + 1, "l": l}
    k, rest = divmod(idx, ctx.size ** 3 - 1)
    rest += 1
    a, rest = divmod(rest, ctx.size ** 2)
    b, c = divmod(rest, ctx.size)
    return {"a": a, "b": b, "c": c, "k": k}


def _pair_at(n: int, idx: int) -> tuple[int, int]:
    for k in range(n):
        row = n - 1 - k
        if idx < row:
            return k, k + 1 + idx
        idx -= row
    raise IndexError("pair index out of range")


def sampled_params(ctx: FieldCtx, shape: str, seed: int, idx: int) -> dict:
    rng = np.random.default_rng([seed, idx])
    draw = lambda lo, hi: int(rng.integers(lo, hi))  # noqa: E731
    if shape == "monomial":
        return {"a": draw(1, ctx.size), "k": draw(0, ctx.mn)}
    if shape == "binomial":
        k, l = sorted(int(x) for x in rng.choice(ctx.mn, size=2, replace=False))
        return {"a": draw(1, ctx.size), "k": k, "b": draw(1, ctx.size), "l": l}
    while True:
        a, b, c = draw(0, ctx.size), draw(0, ctx.size), draw(0, ctx.size)
        if a or b or c:
            return {"a": a, "b": b, "c": c, "k": draw(0, ctx.m)}


def params_poly(ctx: FieldCtx, shape: str, p: dict) -> LinPoly:
    if shape == "monomial":
        return lm.monomial(ctx, p["a"], p["k"])
    if shape == "binomial":
        return lm.binomial(ctx, p["a"], p["k"], p["b"], p["l"])
    return cr.trinomial_poly(ctx, p["a"], p["b"], p["c"], p["k"])


def candidates(ctx: FieldCtx, shape: str, *, trials: Optional[int] = None, seed: int = 0,
               max_grid: int = 200_000) -> Iterator[tuple[int, dict]]:
    """(index, params) pairs: the whole grid, or ``trials`` seeded samples."""
    _check_shape(ctx, shape)
    if trials is None:
        total = grid_size(ctx, shape)
        if total > max_grid:
            raise InfeasibleGridError(
                f"{shape} grid has {total} candidates (> {max_grid}); pass --trials to sample")
        for idx in range(total):
            yield idx, grid_params(ctx, shape, idx)
    else:
        for idx in range(trials):
            yield idx, sampled_params(ctx, shape, seed, idx)


def search(ctx: FieldCtx, shape: str, *, A: int = 1, trials: Optional[int] = None, seed: int = 0,
           max_grid: int = 200_000, emit_pp_only: bool = False) -> Iterator[dict]:
    """Classify each candidate; with ``emit_pp_only`` yield census-confirmed permutations only."""
    for idx, p in candidates(ctx, shape, trials=trials, seed=seed, max_grid=max_grid):
        L = params_poly(ctx, shape, p)
        rec = {"index": idx, "shape": shape,
               "params": {key: (ctx.fmt(v) if key in "abc" else v) for key, v in p.items()}}
        rec.update(check_instance(ctx, A, L))
        if emit_pp_only and not (rec.get("oracle", {}).get("kind") == cr.PERMUTATION):
            if rec["agree"]:
                continue
        yield rec
