"""Matrix groups over F2 and F_p: stabilizer chains and a brute-force oracle.

A matrix is stored as the codes of its columns, where the code of a vector
(v_0, ..., v_{n-1}) over F_p is sum v_i p^i (for F2 this is a bitmask).
The group acts on nonzero vectors; base points are always basis vectors
(a nontrivial matrix moves some basis vector), so the image of a base
point is just a column code.

The chain is built by the deterministic incremental Schreier-Sims
algorithm.  The two hot loops, orbit extension and Schreier-generator
sifting, are compiled with numba.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, List, Optional, Sequence, Set, Tuple

import numpy as np
from numba import njit

from .errors import CapExceeded, DimensionMismatch, TwistcheckError

DEFAULT_MAX_POINTS = 1 << 20
DEFAULT_ORACLE_CAP = 10**6


# ---------------------------------------------------------------------------
# kernels


@njit(cache=True)
def _apply(M, v, p, n, pw):
    if p == 2:
        out = 0
        j = 0
        while v:
            if v & 1:
                out ^= M[j]
            v >>= 1
            j += 1
        return out
    out = 0
    for i in range(n):
        s = 0
        vv = v
        for j in range(n):
            d = vv % p
            vv //= p
            if d:
                s += d * ((M[j] // pw[i]) % p)
        out += (s % p) * pw[i]
    return out


@njit(cache=True)
def _mul_into(A, B, out, p, n, pw):
    for j in range(n):
        out[j] = _apply(A, B[j], p, n, pw)


@njit(cache=True)
def _is_identity(M, n, pw):
    for j in range(n):
        if M[j] != pw[j]:
            return False
    return True


@njit(cache=True)
def _extend_orbit(gens, ginvs, done, orb, size, pos_row, PT, U, UI, count, p, n, pw):
    """Close the orbit under gens; returns (size, count)."""
    tmp = np.empty(n, dtype=np.int64)
    progress = True
    while progress:
        progress = False
        for s in range(gens.shape[0]):
            a = done[s]
            while a < size:
                ga = orb[a]
                e = _apply(gens[s], PT[ga], p, n, pw)
                if pos_row[e] < 0:
                    gi = count
                    count += 1
                    PT[gi] = e
                    _mul_into(gens[s], U[ga], tmp, p, n, pw)
                    U[gi, :] = tmp
                    _mul_into(UI[ga], ginvs[s], tmp, p, n, pw)
                    UI[gi, :] = tmp
                    pos_row[e] = gi
                    orb[size] = gi
                    size += 1
                    progress = True
                a += 1
            done[s] = size
    return size, count


@njit(cache=True)
def _sift(h, start, base, nlev, pos, UI, p, n, pw, buf):
    """Strip h in place from level start; returns the level where it stopped."""
    for m in range(start, nlev):
        d = h[base[m]]
        gi = pos[m, d]
        if gi < 0:
            return m
        _mul_into(UI[gi], h, buf, p, n, pw)
        h[:] = buf
    return nlev


@njit(cache=True)
def _scan(level, gens, sdone, orb, size, base, nlev, pos, PT, U, UI, p, n, pw, out):
    """Look for a Schreier generator at `level` that does not sift to the identity.

    Returns the level reached by the residue (stored in `out`), or -1 when
    every Schreier generator of the level sifts through."""
    h = np.empty(n, dtype=np.int64)
    buf = np.empty(n, dtype=np.int64)
    for s in range(gens.shape[0]):
        a = sdone[s]
        while a < size:
            ga = orb[a]
            e = _apply(gens[s], PT[ga], p, n, pw)
            ge = pos[level, e]
            _mul_into(gens[s], U[ga], buf, p, n, pw)
            _mul_into(UI[ge], buf, h, p, n, pw)
            a += 1
            if _is_identity(h, n, pw):
                continue
            j = _sift(h, level + 1, base, nlev, pos, UI, p, n, pw, buf)
            if not _is_identity(h, n, pw):
                sdone[s] = a
                out[:] = h
                return j
        sdone[s] = size
    return -1


# ---------------------------------------------------------------------------
# conversions


def to_codes(entries: np.ndarray, p: int) -> np.ndarray:
    m = np.asarray(entries, dtype=np.int64) % p
    n = m.shape[0]
    pw = p ** np.arange(n, dtype=np.int64)
    return (m * pw[:, None]).sum(axis=0).astype(np.int64)


def from_codes(codes: Sequence[int], p: int, n: int) -> np.ndarray:
    out = np.zeros((n, n), dtype=np.int64)
    for j, c in enumerate(codes):
        c = int(c)
        for i in range(n):
            out[i, j] = c % p
            c //= p
    return out


def _field_of(gens) -> Tuple[int, int]:
    ps = {g.coeff.p for g in gens}
    ns = {g.dim for g in gens}
    if len(ps) > 1 or len(ns) > 1:
        raise DimensionMismatch("generators over different fields or of different sizes")
    p = ps.pop()
    if p is None:
        raise TwistcheckError("stabilizer chains need a finite field (F2 or F_p)")
    return p, ns.pop()


def _code_inverse(codes: np.ndarray, p: int, n: int) -> np.ndarray:
    from .linalg import mod_inverse

    return to_codes(mod_inverse(from_codes(codes, p, n), p), p)


# ---------------------------------------------------------------------------
# stabilizer chain


class StabilizerChain:
    """Base and strong generating set of a matrix group over F_p.

    Use :func:`build_chain`; a finished chain is not modified by queries.
    """

    def __init__(self, p: int, n: int, max_points: int = DEFAULT_MAX_POINTS):
        if p ** n > max_points:
            raise CapExceeded(f"{p}^{n} points exceeds the point cap {max_points}")
        self.p, self.n = p, n
        self.npts = p ** n
        self.pw = p ** np.arange(n, dtype=np.int64)
        self.ident = self.pw.copy()
        self.base: List[int] = []
        self.gens: List[List[np.ndarray]] = []
        self._ginv: List[List[np.ndarray]] = []
        self._orb: List[np.ndarray] = []
        self._size: List[int] = []
        self._odone: List[List[int]] = []
        self._sdone: List[List[int]] = []
        self.pos = np.full((0, self.npts), -1, dtype=np.int32)
        cap = min(self.npts, 1024)
        self.PT = np.zeros(cap, dtype=np.int64)
        self.U = np.zeros((cap, n), dtype=np.int64)
        self.UI = np.zeros((cap, n), dtype=np.int64)
        self.count = 0

    # storage -------------------------------------------------------------

    def _reserve(self, extra: int):
        need = self.count + extra
        cap = self.PT.shape[0]
        if need <= cap:
            return
        while cap < need:
            cap *= 2
        for name in ("PT", "U", "UI"):
            old = getattr(self, name)
            new = np.zeros((cap,) + old.shape[1:], dtype=np.int64)
            new[: self.count] = old[: self.count]
            setattr(self, name, new)

    def _new_level(self, point: int):
        lvl = len(self.base)
        self.base.append(point)
        self.gens.append([])
        self._ginv.append([])
        self._odone.append([])
        self._sdone.append([])
        pos = np.full((lvl + 1, self.npts), -1, dtype=np.int32)
        pos[:lvl] = self.pos
        self.pos = pos
        self._reserve(1)
        gi = self.count
        self.count += 1
        self.PT[gi] = self.pw[point]
        self.U[gi] = self.ident
        self.UI[gi] = self.ident
        self.pos[lvl, self.pw[point]] = gi
        self._orb.append(np.zeros(self.npts, dtype=np.int32))
        self._orb[lvl][0] = gi
        self._size.append(1)

    def _add_gen(self, lvl: int, h: np.ndarray, hinv: np.ndarray):
        self.gens[lvl].append(h)
        self._ginv[lvl].append(hinv)
        self._odone[lvl].append(0)
        self._sdone[lvl].append(0)
        self._reserve(self.npts - self._size[lvl])
        done = np.array(self._odone[lvl], dtype=np.int64)
        size, self.count = _extend_orbit(
            np.array(self.gens[lvl]), np.array(self._ginv[lvl]), done, self._orb[lvl],
            self._size[lvl], self.pos[lvl], self.PT, self.U, self.UI, self.count,
            self.p, self.n, self.pw)
        self._size[lvl] = int(size)
        self._odone[lvl] = [int(x) for x in done]

    def _first_moved(self, h: np.ndarray) -> int:
        for j in range(self.n):
            if h[j] != self.pw[j]:
                return j
        raise TwistcheckError("identity has no moved point")

    def _is_id(self, h) -> bool:
        return bool(np.array_equal(h, self.ident))

    # public --------------------------------------------------------------

    def sift(self, codes: np.ndarray, start: int = 0) -> Tuple[np.ndarray, int]:
        h = np.array(codes, dtype=np.int64)
        buf = np.empty(self.n, dtype=np.int64)
        j = _sift(h, start, np.array(self.base, dtype=np.int64), len(self.base), self.pos,
                  self.UI, self.p, self.n, self.pw, buf)
        return h, int(j)

    def _insert(self, h: np.ndarray, lo: int, j: int):
        """Add residue h (fixing base[:j]) as a strong generator of levels lo..j."""
        if j == len(self.base):
            self._new_level(self._first_moved(h))
        hinv = _code_inverse(h, self.p, self.n)
        for lvl in range(lo, j + 1):
            self._add_gen(lvl, h.copy(), hinv)

    def schreier_sims(self, gens: Iterable[np.ndarray]):
        for g in gens:
            h, j = self.sift(g)
            if not self._is_id(h):
                self._insert(h, 0, j)
        out = np.empty(self.n, dtype=np.int64)
        i = len(self.base) - 1
        while i >= 0:
            base = np.array(self.base, dtype=np.int64)
            sdone = np.array(self._sdone[i], dtype=np.int64)
            j = _scan(i, np.array(self.gens[i]), sdone, self._orb[i], self._size[i], base,
                      len(self.base), self.pos, self.PT, self.U, self.UI, self.p, self.n,
                      self.pw, out)
            self._sdone[i] = [int(x) for x in sdone]
            if j < 0:
                i -= 1
                continue
            self._insert(out.copy(), i + 1, int(j))
            i = int(j)

    def order(self) -> int:
        o = 1
        for s in self._size:
            o *= int(s)
        return o

    def orbit_sizes(self) -> List[int]:
        return [int(s) for s in self._size]

    def orbit(self, lvl: int) -> List[int]:
        return [int(self.PT[gi]) for gi in self._orb[lvl][: self._size[lvl]]]

    def contains_codes(self, codes: np.ndarray) -> bool:
        h, _ = self.sift(codes)
        return self._is_id(h)

    def contains(self, m) -> bool:
        if m.coeff.p != self.p or m.dim != self.n:
            raise DimensionMismatch("matrix does not match the chain's field or dimension")
        return self.contains_codes(to_codes(m.entries, self.p))

    def strong_generators(self) -> List[np.ndarray]:
        return [g for g in self.gens[0]] if self.gens else []


def build_chain(gens, p: Optional[int] = None, n: Optional[int] = None,
                max_points: int = DEFAULT_MAX_POINTS) -> StabilizerChain:
    """Stabilizer chain of the group generated by RepMatrix generators.

    With no generators the field and size must be given explicitly.
    """
    gens = list(gens)
    if gens:
        p2, n2 = _field_of(gens)
        if (p is not None and p != p2) or (n is not None and n != n2):
            raise DimensionMismatch("generators do not match the requested field or size")
        p, n = p2, n2
    if p is None or n is None:
        raise TwistcheckError("field and dimension are needed for an empty generator list")
    ch = StabilizerChain(p, n, max_points)
    ch.schreier_sims(to_codes(g.entries, p) for g in gens)
    return ch


def order(chain: StabilizerChain) -> int:
    return chain.order()


def contains(chain: StabilizerChain, m) -> bool:
    return chain.contains(m)


def same_subgroup(gens_a, gens_b, max_points: int = DEFAULT_MAX_POINTS) -> bool:
    """True iff the two generator lists generate the same group."""
    gens_a, gens_b = list(gens_a), list(gens_b)
    p, n = _field_of(gens_a + gens_b)
    cb = build_chain(gens_b, p, n, max_points)
    if not all(cb.contains(g) for g in gens_a):
        return False
    ca = build_chain(gens_a, p, n, max_points)
    return all(ca.contains(g) for g in gens_b)


@dataclass
class Comparison:
    """Details of a subgroup comparison, for reports."""

    equal: bool
    order_a: int
    order_b: int
    a_in_b: bool
    b_in_a: bool
    base_b: List[int] = field(default_factory=list)
    orbits_b: List[int] = field(default_factory=list)


def compare(gens_a, gens_b, max_points: int = DEFAULT_MAX_POINTS) -> Comparison:
    gens_a, gens_b = list(gens_a), list(gens_b)
    p, n = _field_of(gens_a + gens_b)
    ca = build_chain(gens_a, p, n, max_points)
    cb = build_chain(gens_b, p, n, max_points)
    a_in_b = all(cb.contains(g) for g in gens_a)
    b_in_a = all(ca.contains(g) for g in gens_b)
    return Comparison(a_in_b and b_in_a, ca.order(), cb.order(), a_in_b, b_in_a,
                      list(cb.base), cb.orbit_sizes())


# ---------------------------------------------------------------------------
# oracle


def brute_force_closure(gens, p: Optional[int] = None, n: Optional[int] = None,
                        cap: int = DEFAULT_ORACLE_CAP) -> Set[Tuple[int, ...]]:
    """All elements of the generated group, as tuples of column codes.

    Breadth-first closure under right multiplication by generators; raises
    CapExceeded once more than `cap` elements are found.
    """
    gens = list(gens)
    if gens:
        p, n = _field_of(gens)
    if p is None or n is None:
        raise TwistcheckError("field and dimension are needed for an empty generator list")
    from .linalg import mod_matmul

    mats = [np.asarray(g.entries, dtype=np.int64) % p for g in gens]
    ident = np.eye(n, dtype=np.int64)
    key = lambda m: tuple(int(c) for c in to_codes(m, p))
    seen = {key(ident)}
    frontier = [ident]
    while frontier:
        nxt = []
        for m in frontier:
            for g in mats:
                x = mod_matmul(m, g, p)
                k = key(x)
                if k not in seen:
                    seen.add(k)
                    if len(seen) > cap:
                        raise CapExceeded(f"closure exceeds {cap} elements")
                    nxt.append(x)
        frontier = nxt
    return seen
