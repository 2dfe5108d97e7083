"""Cross-validation suites: adjoint identities, closed vs direct Weil sums, rules vs census."""

from __future__ import annotations

from typing import Iterator, Optional

import numpy as np

from . import charsum
from . import linmap as lm
from .constructions import sample_linpoly
from .field import FieldCtx
from .linmap import LinPoly
from .search import check_instance


def adjoint_checks(ctx: FieldCtx, L: LinPoly, M: LinPoly) -> dict[str, bool]:
    """The adjoint identities for one pair (L, M), all exact."""
    Lp = lm.adjoint(ctx, L)
    basis = [1 << i for i in range(ctx.mn)]
    adjunction = all(
        ctx.abs_trace(ctx.mul(a, lm.evaluate(ctx, L, b))) == ctx.abs_trace(ctx.mul(lm.evaluate(ctx, Lp, a), b))
        for a in basis for b in basis
    )
    return {
        "adjunction": adjunction,
        "involution": lm.adjoint(ctx, Lp) == L,
        "composition": lm.adjoint(ctx, lm.compose(ctx, M, L)) == lm.compose(ctx, Lp, lm.adjoint(ctx, M)),
        "kernel_sizes": lm.kernel(ctx, L).size == lm.kernel(ctx, Lp).size,
        "kernel_is_perp_of_image": lm.kernel(ctx, Lp) == ctx.perp(lm.image(ctx, L)),
    }


def adjoint_records(ctx: FieldCtx, trials: int, seed: int) -> Iterator[dict]:
    for idx in range(trials):
        rng = np.random.default_rng([seed, idx])
        L = sample_linpoly(ctx, rng, max_terms=4)
        M = sample_linpoly(ctx, rng, max_terms=4)
        checks = adjoint_checks(ctx, L, M)
        yield {"index": idx, "L": lm.to_json(L), "M": lm.to_json(M), "checks": checks, "ok": all(checks.values())}


def charsum_pairs(ctx: FieldCtx, trials: Optional[int], seed: int) -> Iterator[tuple[int, int, int]]:
    """(index, a, b) with a != 0: every pair, or ``trials`` seeded samples."""
    if trials is None:
        idx = 0
        for a in range(1, ctx.size):
            for b in range(ctx.size):
                yield idx, a, b
                idx += 1
    else:
        for idx in range(trials):
            rng = np.random.default_rng([seed, idx])
            yield idx, int(rng.integers(1, ctx.size)), int(rng.integers(0, ctx.size))


def charsum_records(ctx: FieldCtx, trials: Optional[int], seed: int) -> Iterator[dict]:
    for idx, a, b in charsum_pairs(ctx, trials, seed):
        direct = charsum.weil_direct(ctx, a, b)
        closed, branch = charsum.weil_closed(ctx, a, b)
        yield {"index": idx, "a": ctx.fmt(a), "b": ctx.fmt(b), "direct": direct, "closed": closed,
               "branch": branch, "match": direct == closed}


def criteria_records(ctx: FieldCtx, trials: int, seed: int) -> Iterator[dict]:
    for idx in range(trials):
        rng = np.random.default_rng([seed, idx])
        A = int(rng.integers(1, ctx.size))
        L = sample_linpoly(ctx, rng)
        rec = {"index": idx}
        rec.update(check_instance(ctx, A, L))
        yield rec


def record_ok(target: str, rec: dict) -> bool:
    return rec[{"adjoint": "ok", "charsum": "match", "criteria": "agree"}[target]]
