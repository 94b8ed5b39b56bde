"""Exact factorization and dressing of rational loops.

Thin wrapper around the C++ core; all heavy lifting happens in `_rloop`.
Loops, factor lists and matrices travel as canonical JSON strings.
"""

from ._rloop import (
    EngineError,
    dress_simple_pole,
    factor,
    mkdv_q,
    mkdv_residual,
    multiply,
    permute,
    twisted_pair,
    verify,
)

__all__ = [
    "EngineError",
    "dress_simple_pole",
    "factor",
    "mkdv_q",
    "mkdv_residual",
    "multiply",
    "permute",
    "twisted_pair",
    "verify",
]
