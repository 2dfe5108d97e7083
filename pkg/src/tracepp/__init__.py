"""Permutation tests for Tr(A x^(q+1)) + L(x) over binary fields F_{q^n}, q = 2^m."""

from .criteria import ConsistencyError, MapProfile, Verdict, oracle_profile, pp_even, pp_odd
from .field import FieldCtx, FieldSpec, FieldTooLargeError, ReducibleModulusError, Subspace, make_field
from .linmap import LinPoly

__all__ = [
    "ConsistencyError",
    "FieldCtx",
    "FieldSpec",
    "FieldTooLargeError",
    "LinPoly",
    "MapProfile",
    "ReducibleModulusError",
    "Subspace",
    "Verdict",
    "make_field",
    "oracle_profile",
    "pp_even",
    "pp_odd",
]
