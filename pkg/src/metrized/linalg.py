"""Exact rational linear solves on top of the integer Bareiss kernel.

The kernel is compiled from ``_bareiss.pyx`` when available; otherwise the
pure-Python twin is used.  ``METRIZED_PURE=1`` forces the fallback.
"""
from __future__ import annotations

import os
from fractions import Fraction
from math import lcm

from .errors import SolverInconsistency

if os.environ.get("METRIZED_PURE") == "1":
    from . import _bareiss_py as _kernel
    BACKEND = "python"
else:
    try:
        from . import _bareiss as _kernel
        BACKEND = "compiled"
    except ImportError:
        from . import _bareiss_py as _kernel
        BACKEND = "python"

__all__ = ["BACKEND", "solve", "solve_overdetermined", "integer_rows"]


def integer_rows(rows):
    """Scale every rational row by the lcm of its denominators."""
    out = []
    for row in rows:
        den = 1
        for q in row:
            if q:
                den = lcm(den, q.denominator)
        out.append([q.numerator * (den // q.denominator) for q in row])
    return out


def solve(A, B, kernel=None):
    """Solve ``A X = B`` for a nonsingular square rational ``A``.

    ``B`` is a list of right-hand-side rows (``n x k``).  Returns ``X`` as
    rows of Fractions.
    """
    k = kernel or _kernel
    n = len(A)
    if n == 0:
        return []
    M = integer_rows([[Fraction(a) for a in A[i]] + [Fraction(b) for b in B[i]] for i in range(n)])
    if k.eliminate(M, n) < n:
        raise SolverInconsistency("singular system")
    D, X = k.back_substitute(M, n)
    return [[Fraction(x, D) for x in row] for row in X]


def solve_overdetermined(A, b, kernel=None):
    """Unique solution of a consistent system with full column rank.

    Raises :class:`SolverInconsistency` if the columns are dependent or
    the equations contradict each other.
    """
    k = kernel or _kernel
    m = len(A)
    n = len(A[0]) if m else 0
    M = integer_rows([[Fraction(a) for a in A[i]] + [Fraction(b[i])] for i in range(m)])
    rank = k.eliminate(M, n)
    if rank < n:
        raise SolverInconsistency(f"rank {rank} < {n} unknowns")
    for row in M[n:]:
        if row[n] != 0:
            raise SolverInconsistency("inconsistent equations")
    D, X = k.back_substitute(M, n)
    return [Fraction(row[0], D) for row in X]
