"""The action of words on first homology.

Rational matrices act on the basis x_1..x_{g-1} of H_1(N_g; Q) (integer
entries, since every generator is unimodular), F2 matrices on all g
coordinates, F_p matrices are the rational ones reduced mod p.  Matrices
act on column vectors and a word's matrix is the ordered product of its
factors, so the rightmost factor is applied first.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .catalog import Catalog, rational_action
from .errors import DimensionMismatch, OneSidedCurve, TwistcheckError
from .surface import F2, Q, CoeffSystem, dim, reduce_lift
from .words import SYMMETRY, TWIST, Generator, Word


@dataclass(frozen=True, eq=False)
class RepMatrix:
    coeff: CoeffSystem
    entries: np.ndarray

    def __post_init__(self):
        self.entries.setflags(write=False)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def __eq__(self, other) -> bool:
        if not isinstance(other, RepMatrix):
            return NotImplemented
        return self.coeff == other.coeff and np.array_equal(self.entries, other.entries)

    def __hash__(self):
        return hash((self.coeff, self.entries.tobytes()))

    def __matmul__(self, other: "RepMatrix") -> "RepMatrix":
        if self.coeff != other.coeff or self.dim != other.dim:
            raise DimensionMismatch("matrices over different systems or dimensions")
        return RepMatrix(self.coeff, _mul(self.coeff, self.entries, other.entries))

    def inverse(self) -> "RepMatrix":
        return RepMatrix(self.coeff, _inv(self.coeff, self.entries))

    def det(self) -> int:
        d = linalg.det(self.entries)
        return d % self.coeff.p if self.coeff.p else d

    def is_identity(self) -> bool:
        return np.array_equal(self.entries, np.eye(self.dim, dtype=np.int64))

    def apply(self, v) -> tuple:
        out = _mul(self.coeff, self.entries, np.array(v, dtype=np.int64).reshape(-1, 1))
        return tuple(int(x) for x in out[:, 0])

    def reduce_to(self, coeff: CoeffSystem) -> "RepMatrix":
        """Reduce a rational matrix to F_p (p odd)."""
        if self.coeff != Q or coeff.tag != "Fp":
            raise TwistcheckError("only rational matrices reduce to F_p")
        return RepMatrix(coeff, linalg.canonical(self.entries % coeff.p))

    def tolist(self):
        return [[int(x) for x in row] for row in self.entries]

    def __str__(self):
        return "[" + ",\n ".join("[" + ", ".join(str(x) for x in row) + "]"
                                 for row in self.tolist()) + "]"


def _mul(coeff: CoeffSystem, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if coeff.p is None:
        return linalg.imatmul(a, b)
    return linalg.mod_matmul(a, b, coeff.p)


def _inv(coeff: CoeffSystem, a: np.ndarray) -> np.ndarray:
    if coeff.p is None:
        return linalg.int_inverse(a)
    return linalg.mod_inverse(a, coeff.p)


def identity(c: Catalog, coeff: CoeffSystem) -> RepMatrix:
    return RepMatrix(coeff, np.eye(dim(c.params, coeff), dtype=np.int64))


def _finite(coeff: CoeffSystem, m: np.ndarray) -> np.ndarray:
    return linalg.canonical(m % coeff.p) if coeff.p else m


def _twist_outer(c: Catalog, curve: str, coeff: CoeffSystem) -> np.ndarray:
    cv = c.curve(curve)
    if not cv.two_sided:
        raise OneSidedCurve(f"curve {curve} is one-sided and has no Dehn twist")
    a = np.array(cv.lift.lift, dtype=np.int64)
    if coeff == F2:
        return np.outer(a % 2, a % 2)
    red = np.array(reduce_lift(cv.lift.lift, Q), dtype=np.int64)
    p = np.array(cv.pairing[:-1], dtype=np.int64)
    return np.outer(red, p)


def twist_power(c: Catalog, curve: str, coeff: CoeffSystem, e: int) -> RepMatrix:
    """T^e = I + e <., a> a (the rank-one part squares to zero)."""
    key = ("twist", curve, coeff, e)
    hit = c._memo.get(key)
    if hit is None:
        n = dim(c.params, coeff)
        m = np.eye(n, dtype=np.int64) + e * _twist_outer(c, curve, coeff)
        hit = RepMatrix(coeff, _finite(coeff, m))
        c._memo[key] = hit
    return hit


def twist_matrix(c: Catalog, curve: str, coeff: CoeffSystem) -> RepMatrix:
    return twist_power(c, curve, coeff, 1)


def symmetry_matrix(c: Catalog, sym: str, coeff: CoeffSystem, inverse: bool = False) -> RepMatrix:
    key = ("sym", sym, coeff, inverse)
    hit = c._memo.get(key)
    if hit is None:
        m = c.symmetry(sym).matrix()
        if coeff == F2:
            ent = m % 2
        else:
            ent = rational_action(m)
        if inverse:
            ent = _inv(Q if coeff != F2 else F2, ent)
        hit = RepMatrix(coeff, _finite(coeff, ent))
        c._memo[key] = hit
    return hit


def generator_matrix(c: Catalog, gen: Generator, e: int, coeff: CoeffSystem) -> RepMatrix:
    if gen.kind == TWIST:
        return twist_power(c, gen.curve, coeff, e)
    if gen.kind != SYMMETRY:
        raise TwistcheckError(f"unknown generator kind {gen.kind!r}")
    key = ("sympow", gen.name, coeff, e)
    hit = c._memo.get(key)
    if hit is None:
        base = symmetry_matrix(c, gen.name, coeff, inverse=e < 0)
        ident = np.eye(base.dim, dtype=np.int64)
        hit = RepMatrix(coeff, linalg.power(base.entries, abs(e),
                                            lambda x, y: _mul(coeff, x, y), ident))
        c._memo[key] = hit
    return hit


def evaluate(c: Catalog, w: Word, coeff: CoeffSystem) -> RepMatrix:
    n = dim(c.params, coeff)
    acc = np.eye(n, dtype=np.int64)
    for gen, e in w.factors:
        acc = _mul(coeff, acc, generator_matrix(c, gen, e, coeff).entries)
    return RepMatrix(coeff, acc)


def d_value(c: Catalog, w: Word) -> int:
    d = evaluate(c, w, Q).det()
    if d not in (1, -1):
        raise TwistcheckError(f"determinant {d} is not a unit; the word does not act unimodularly")
    return d


def image_of_class(c: Catalog, w: Word, curve: str, coeff: CoeffSystem) -> tuple:
    v = reduce_lift(c.curve(curve).lift.lift, coeff)
    return evaluate(c, w, coeff).apply(v)


def quotient_mod2(m: RepMatrix) -> np.ndarray:
    """The action of an F2 matrix (fixing w) on F2^g / <w> in the basis x_1..x_{g-1}."""
    if m.coeff != F2:
        raise TwistcheckError("expected an F2 matrix")
    return rational_action(np.array(m.entries, dtype=np.int64)) % 2


def f2_orthogonal(m: RepMatrix) -> bool:
    e = np.array(m.entries, dtype=np.int64)
    n = e.shape[0]
    return bool(np.array_equal((e.T @ e) % 2, np.eye(n, dtype=np.int64))
                and np.array_equal(e @ np.ones(n, dtype=np.int64) % 2, np.ones(n, dtype=np.int64)))


def conjugation_sign(c: Catalog, f: Word, u: str, v: str, coeff: CoeffSystem = Q) -> int:
    """s with f T_u f^-1 = T_v^s, or 0 when neither sign holds."""
    fm = evaluate(c, f, coeff)
    lhs = fm @ twist_matrix(c, u, coeff) @ fm.inverse()
    for s in (1, -1):
        if lhs == twist_power(c, v, coeff, s):
            return s
    return 0
