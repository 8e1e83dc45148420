"""Exact integer and modular matrix helpers.

Integer matrices are numpy arrays.  Products run in int64 when a cheap
bound rules out overflow and fall back to Python integers (object dtype)
otherwise, so results are always exact.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .errors import TwistcheckError

_INT64_SAFE = 2**62


def max_abs(a: np.ndarray) -> int:
    if a.size == 0:
        return 0
    return int(max(abs(int(a.max())), abs(int(a.min()))))


def canonical(a: np.ndarray) -> np.ndarray:
    """Return int64 storage when the entries fit, object storage otherwise."""
    if a.dtype == object:
        if max_abs(a) < _INT64_SAFE:
            return a.astype(np.int64)
        return a
    return a.astype(np.int64, copy=False)


def imatmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    n = a.shape[1]
    if a.dtype != object and b.dtype != object:
        if max_abs(a) * max_abs(b) * max(n, 1) < _INT64_SAFE:
            return a @ b
    return canonical(a.astype(object) @ b.astype(object))


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


def int_inverse(m: np.ndarray) -> np.ndarray:
    """Inverse of an integer matrix that is unimodular over Z."""
    n = m.shape[0]
    rows = [[Fraction(int(m[i, j])) for j in range(n)] + [Fraction(int(i == j)) for j in range(n)]
            for i in range(n)]
    for c in range(n):
        piv = next((r for r in range(c, n) if rows[r][c] != 0), None)
        if piv is None:
            raise TwistcheckError("matrix is singular")
        rows[c], rows[piv] = rows[piv], rows[c]
        pv = rows[c][c]
        rows[c] = [x / pv for x in rows[c]]
        for r in range(n):
            if r != c and rows[r][c] != 0:
                f = rows[r][c]
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[c])]
    out = [[rows[i][n + j] for j in range(n)] for i in range(n)]
    if any(x.denominator != 1 for row in out for x in row):
        raise TwistcheckError("matrix is not invertible over the integers")
    return canonical(np.array([[int(x) for x in row] for row in out], dtype=object))


def det(m: np.ndarray) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    a = [[int(x) for x in row] for row in m.tolist()]
    n = len(a)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def mod_matmul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    return (a.astype(np.int64) @ b.astype(np.int64)) % p


def mod_inverse(m: np.ndarray, p: int) -> np.ndarray:
    """Gauss-Jordan inverse over the prime field F_p."""
    n = m.shape[0]
    a = np.concatenate([m.astype(np.int64) % p, np.eye(n, dtype=np.int64)], axis=1)
    for c in range(n):
        nz = np.nonzero(a[c:, c])[0]
        if len(nz) == 0:
            raise TwistcheckError(f"matrix is singular mod {p}")
        piv = c + int(nz[0])
        if piv != c:
            a[[c, piv]] = a[[piv, c]]
        a[c] = (a[c] * pow(int(a[c, c]), -1, p)) % p
        col = a[:, c].copy()
        col[c] = 0
        a = (a - np.outer(col, a[c])) % p
    return a[:, n:].copy()


def mod_det(m: np.ndarray, p: int) -> int:
    return det(m) % p


def power(m: np.ndarray, e: int, mul, ident: np.ndarray) -> np.ndarray:
    """m**e for e >= 0 by repeated squaring under the product `mul`."""
    result = ident
    base = m
    while e:
        if e & 1:
            result = mul(result, base)
        e >>= 1
        if e:
            base = mul(base, base)
    return result
