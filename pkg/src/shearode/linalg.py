"""Exact linear algebra over Q(i).

Rows are scaled to Gaussian integers and reduced with Bareiss' fraction-free
elimination; only the final back-substitution divides.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import List, Optional, Sequence

from .gauss import as_scalar, to_gauss

__all__ = ["exact_nullspace", "solve_linear", "rank"]


def _lcm_denominator(row) -> int:
    d = 1
    for v in row:
        g = to_gauss(v)
        for q in (g.re, g.im):
            d = d * q.denominator // math.gcd(d, q.denominator)
    return d


def _integral_rows(M):
    rows = []
    for row in M:
        row = [as_scalar(v) for v in row]
        d = _lcm_denominator(row)
        rows.append([as_scalar(v * d) for v in row])
    return rows


def _echelon(M, ncols):
    """Fraction-free row echelon form; returns (rows, pivot columns)."""
    A = [list(r) for r in _integral_rows(M)]
    pivots: List[int] = []
    prev = Fraction(1)
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(A)) if A[i][col]), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        pr = A[r]
        for i in range(r + 1, len(A)):
            row = A[i]
            f = row[col]
            if not f:
                for j in range(col + 1, ncols):
                    if row[j]:
                        row[j] = as_scalar(row[j] * pr[col] / prev)
                row[col] = Fraction(0)
                continue
            for j in range(col + 1, ncols):
                # Bareiss step: exact division by the previous pivot
                row[j] = as_scalar((pr[col] * row[j] - f * pr[j]) / prev)
            row[col] = Fraction(0)
        prev = pr[col]
        pivots.append(col)
        r += 1
        if r == len(A):
            break
    return A[:r], pivots


def rank(M: Sequence[Sequence], ncols: Optional[int] = None) -> int:
    if not M:
        return 0
    ncols = len(M[0]) if ncols is None else ncols
    return len(_echelon(M, ncols)[1])


def _reduced(M, ncols):
    rows, pivots = _echelon(M, ncols)
    # back substitution to reduced form, pivots normalised to 1
    R = []
    for row, pc in zip(rows, pivots):
        inv = 1 / to_gauss(row[pc])
        R.append([as_scalar(v * inv) for v in row])
    for k in range(len(R) - 1, -1, -1):
        pc = pivots[k]
        for i in range(k):
            f = R[i][pc]
            if f:
                R[i] = [as_scalar(a - f * b) for a, b in zip(R[i], R[k])]
    return R, pivots


def exact_nullspace(M: Sequence[Sequence], ncols: Optional[int] = None) -> List[list]:
    """Basis of ``{v : M v = 0}``, one vector per free column.

    Each basis vector has a 1 in its free column and 0 in every other free
    column, so the basis is canonical for a given column order.
    """
    if ncols is None:
        if not M:
            raise ValueError("ncols is required for an empty matrix")
        ncols = len(M[0])
    if not M:
        return [[Fraction(int(i == j)) for i in range(ncols)] for j in range(ncols)]
    R, pivots = _reduced(M, ncols)
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for row, pc in zip(R, pivots):
            v[pc] = as_scalar(-row[fc])
        basis.append(v)
    return basis


def solve_linear(M: Sequence[Sequence], b: Sequence) -> Optional[list]:
    """One exact solution of ``M x = b`` (free unknowns set to 0), or None."""
    ncols = len(M[0]) if M else 0
    aug = [list(row) + [rhs] for row, rhs in zip(M, b)]
    if not aug:
        return [Fraction(0)] * ncols
    R, pivots = _reduced(aug, ncols + 1)
    if ncols in pivots:
        return None
    x = [Fraction(0)] * ncols
    for row, pc in zip(R, pivots):
        x[pc] = row[ncols]
    return x
