"""Independent reference implementations used to derive expected values.

Nothing here imports the package's linear algebra or group code: matrices
are tuples of tuples of Python ints, determinants use Fractions, closures
are plain breadth-first searches.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Iterable, List, Sequence, Set, Tuple

Mat = Tuple[Tuple[int, ...], ...]


def eye(n: int) -> Mat:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def matmul(a: Mat, b: Mat, p: int = 0) -> Mat:
    n, m, k = len(a), len(b[0]), len(b)
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            s = sum(a[i][t] * b[t][j] for t in range(k))
            row.append(s % p if p else s)
        out.append(tuple(row))
    return tuple(out)


def det(a: Mat) -> Fraction:
    """Gaussian elimination over the rationals."""
    m = [[Fraction(x) for x in row] for row in a]
    n = len(m)
    d = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            d = -d
        d *= m[c][c]
        for r in range(c + 1, n):
            f = m[r][c] / m[c][c]
            for t in range(c, n):
                m[r][t] -= f * m[c][t]
    return d


def det_mod(a: Mat, p: int) -> int:
    return int(det(a)) % p


def transvection_f2(lift: Sequence[int]) -> Mat:
    """v -> v + (v . a) a over F2, written out coordinate by coordinate."""
    g = len(lift)
    a = [x % 2 for x in lift]
    cols = []
    for j in range(g):
        e = [int(i == j) for i in range(g)]
        dot = sum(x * y for x, y in zip(e, a)) % 2
        cols.append([(e[i] + dot * a[i]) % 2 for i in range(g)])
    return tuple(tuple(cols[j][i] for j in range(g)) for i in range(g))


def closure(gens: Iterable[Mat], p: int, n: int) -> Set[Mat]:
    gens = [tuple(tuple(x % p for x in row) for row in g) for g in gens]
    seen = {eye(n)}
    todo = [eye(n)]
    while todo:
        x = todo.pop()
        for g in gens:
            y = matmul(x, g, p)
            if y not in seen:
                seen.add(y)
                todo.append(y)
    return seen


def all_invertible(n: int, p: int) -> List[Mat]:
    """Every invertible n x n matrix over F_p (tiny n only)."""
    out = []
    for entries in itertools.product(range(p), repeat=n * n):
        m = tuple(tuple(entries[i * n:(i + 1) * n]) for i in range(n))
        if det_mod(m, p):
            out.append(m)
    return out


def gl_order(n: int, q: int) -> int:
    out = 1
    for i in range(n):
        out *= q ** n - q ** i
    return out
