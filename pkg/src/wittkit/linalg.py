"""Exact linear algebra over Z/p^N.

Z/p^N is a chain ring, not a field, so plain Gaussian elimination is not
enough: a row's p-torsion multiples generate span elements no unit pivot can
reach.  The Howell form repairs this by inserting p^(N-v) multiples of each
pivot row back into the working set, which makes span membership decidable by
left-to-right reduction and makes kernels complete.

Vectors are 1-D int64 numpy arrays, spans are stacked rows.  All arithmetic
stays below 2^63: entries are reduced mod p^N <= 5^6 after every operation.
"""

from __future__ import annotations

import numpy as np

__all__ = ["howell_rows", "left_kernel", "solve_combination", "SpanZpN", "vp"]

_MAX_MODULUS = 5**8  # keeps entry*entry well inside int64


def vp(x: int, p: int, cap: int) -> int:
    """p-adic valuation of x, with vp(0) = cap."""
    if x == 0:
        return cap
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


def _as_matrix(rows, ncols=None):
    a = np.asarray(rows, dtype=np.int64)
    if a.ndim == 1:
        a = a.reshape(1, -1) if a.size else a.reshape(0, ncols or 0)
    return a


def howell_rows(rows, p: int, N: int) -> np.ndarray:
    """Howell form of the row span of `rows` over Z/p^N.

    The result H satisfies:
      * same row span as the input,
      * echelon: pivot columns strictly increase, pivot entries are p^v,
      * entries above a pivot are reduced below p^v,
      * closure: p^(N-v) times a pivot row lies in the span of later rows.
    """
    m = p**N
    if m > _MAX_MODULUS:
        raise OverflowError(f"modulus {m} exceeds supported bound {_MAX_MODULUS}")
    A = _as_matrix(rows) % m
    if A.shape[0] == 0 or A.shape[1] == 0:
        return A.reshape(0, A.shape[1] if A.ndim == 2 else 0)
    ncols = A.shape[1]
    work = [r.copy() for r in A if r.any()]
    pivots = []  # (col, row)
    for col in range(ncols):
        cand = [r for r in work if r[col] != 0]
        # rows whose leading entry is further right wait for their column
        cand = [r for r in cand if not r[:col].any()]
        if not cand:
            continue
        vals = [vp(int(r[col]), p, N) for r in cand]
        k = vals.index(min(vals))
        piv, v = cand[k], vals[k]
        work = [r for r in work if r is not piv]
        unit = int(piv[col]) // p**v
        piv = (piv * pow(unit, -1, m)) % m  # leading entry becomes p^v
        new_work = []
        for r in work:
            if r[col] != 0 and not r[:col].any():
                q = int(r[col]) // p**v
                r = (r - q * piv) % m
            if r.any():
                new_work.append(r)
        work = new_work
        if v > 0:
            tail = (piv * p ** (N - v)) % m
            if tail.any():
                work.append(tail)
        pivots.append((col, piv))
    # reduce entries above each pivot to their canonical range
    pivots.sort(key=lambda cp: cp[0])
    H = [row for _, row in pivots]
    cols = [c for c, _ in pivots]
    for i in range(len(H)):
        for j in range(i + 1, len(H)):
            cj = cols[j]
            pv = p ** vp(int(H[j][cj]), p, N)
            q = int(H[i][cj]) // pv
            if q:
                H[i] = (H[i] - q * H[j]) % m
    return np.array(H, dtype=np.int64) if H else np.zeros((0, ncols), dtype=np.int64)


class SpanZpN:
    """Immutable row span over Z/p^N with canonical reduction."""

    def __init__(self, rows, p: int, N: int, ncols: int | None = None):
        self.p = p
        self.N = N
        self.m = p**N
        A = _as_matrix(rows, ncols)
        self.ncols = A.shape[1] if A.size or A.ndim == 2 else (ncols or 0)
        self.rows = howell_rows(A, p, N)
        self._pivot_cols = [int(np.nonzero(r)[0][0]) for r in self.rows]
        self._pivot_vals = [
            p ** vp(int(r[c]), p, N) for r, c in zip(self.rows, self._pivot_cols)
        ]

    def reduce(self, v) -> np.ndarray:
        """Canonical representative of v modulo the span."""
        r = np.asarray(v, dtype=np.int64) % self.m
        for row, c, pv in zip(self.rows, self._pivot_cols, self._pivot_vals):
            q = int(r[c]) // pv
            if q:
                r = (r - q * row) % self.m
        return r

    def contains(self, v) -> bool:
        return not self.reduce(v).any()

    def is_zero(self) -> bool:
        return self.rows.shape[0] == 0


def left_kernel(A, p: int, N: int) -> np.ndarray:
    """Generators of {y : y @ A == 0 mod p^N}, stacked as rows."""
    M = _as_matrix(A)
    r, c = M.shape
    m = p**N
    if r == 0:
        return np.zeros((0, 0), dtype=np.int64)
    aug = np.hstack([M % m, np.eye(r, dtype=np.int64)])
    H = howell_rows(aug, p, N)
    out = [row[c:] for row in H if not row[:c].any()]
    return (
        np.array(out, dtype=np.int64) if out else np.zeros((0, r), dtype=np.int64)
    )


def solve_combination(gens, target, p: int, N: int):
    """Coefficients c with c @ gens == target mod p^N, or None.

    Complete over Z/p^N: a combination is found whenever one exists.
    """
    m = p**N
    G = _as_matrix(gens)
    t = np.asarray(target, dtype=np.int64) % m
    if G.shape[0] == 0:
        return np.zeros(0, dtype=np.int64) if not t.any() else None
    stacked = np.vstack([G % m, t.reshape(1, -1)])
    K = left_kernel(stacked, p, N)
    g = G.shape[0]
    for row in K:
        last = int(row[g])
        if last % p != 0:
            coeffs = (-row[:g] * pow(last, -1, m)) % m
            return coeffs.astype(np.int64)
    return None
