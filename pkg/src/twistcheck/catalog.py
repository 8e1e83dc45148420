"""Named curves and symmetries per genus, stored as versioned TOML data.

A curve is an integer lift over x_1..x_g together with the row of signed
pairings <x_i, curve> used by the rational transvection.  A symmetry is an
integer action on x_1..x_g (``action[i]`` is the image of x_{i+1}), a
declared determinant, and a list of curve claims (u, v, s): the symmetry
carries u to +-v and conjugates the twist about u to the twist about v
raised to s.
"""

from __future__ import annotations

import hashlib
import io
import os
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Tuple, Union

import numpy as np
import tomli
import tomlkit

from . import linalg
from .errors import (CatalogParseError, InvariantViolation, SchemaMismatch,
                     TwistcheckError, UnknownName, UnsupportedGenus)
from .surface import F2, Q, HomologyClass, SurfaceParams, reduce_lift

SCHEMA_VERSION = 1
CATALOG_PATH_ENV = "TWISTCHECK_CATALOG_PATH"
SUPPORTED_GENERA = range(5, 21)

ONE_SIDED = "one-sided"
TWO_SIDED = "two-sided"


@dataclass(frozen=True)
class CurveSpec:
    name: str
    sidedness: str
    lift: HomologyClass
    pairing: Tuple[int, ...]
    notes: str = ""

    @property
    def two_sided(self) -> bool:
        return self.sidedness == TWO_SIDED

    def check(self):
        g = len(self.lift.lift)
        if self.sidedness not in (ONE_SIDED, TWO_SIDED):
            raise InvariantViolation(self.name, f"unknown sidedness {self.sidedness!r}")
        if len(self.pairing) != g:
            raise InvariantViolation(self.name, "pairing row length differs from lift length")
        weight = sum(reduce_lift(self.lift.lift, F2))
        if self.two_sided != (weight % 2 == 0):
            raise InvariantViolation(
                self.name, f"{self.sidedness} curve has F2 weight {weight}")
        if tuple(c % 2 for c in self.pairing) != reduce_lift(self.lift.lift, F2):
            raise InvariantViolation(self.name, "pairing row is not the mod-2 pairing with the lift")
        if self.two_sided and sum(self.pairing) != 0:
            # the transvection must fix w = x_1+...+x_g to descend to the quotient
            raise InvariantViolation(self.name, "pairing row does not vanish on w")
        if self.two_sided and sum(a * p for a, p in zip(self.lift.lift, self.pairing)) != 0:
            raise InvariantViolation(self.name, "pairing row does not vanish on the curve itself")


@dataclass(frozen=True)
class SymmetrySpec:
    name: str
    action: Tuple[Tuple[int, ...], ...]
    declared_d: int
    curve_claims: Tuple[Tuple[str, str, int], ...] = ()
    order: int = 2
    provisional: bool = False
    notes: str = ""

    def matrix(self) -> np.ndarray:
        """Integer g x g matrix whose column j is the image of x_{j+1}."""
        return np.array(self.action, dtype=np.int64).T.copy()


@dataclass(frozen=True)
class Catalog:
    params: SurfaceParams
    curves: Dict[str, CurveSpec]
    symmetries: Dict[str, SymmetrySpec]
    disjoint_pairs: Tuple[Tuple[str, str], ...] = ()
    schema_version: int = SCHEMA_VERSION
    twist_convention: str = "right"
    notes: Tuple[str, ...] = ()
    _memo: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    @property
    def g(self) -> int:
        return self.params.g

    def curve(self, name: str) -> CurveSpec:
        try:
            return self.curves[name]
        except KeyError:
            raise UnknownName(f"unknown curve {name!r} at genus {self.g}") from None

    def symmetry(self, name: str) -> SymmetrySpec:
        try:
            return self.symmetries[name]
        except KeyError:
            raise UnknownName(f"unknown symmetry {name!r} at genus {self.g}") from None

    def with_curves(self, extra: Iterable[CurveSpec]) -> "Catalog":
        """A copy with additional (suite-local) curves; existing names may not be rebound."""
        curves = dict(self.curves)
        for c in extra:
            if c.name in curves:
                raise InvariantViolation(c.name, "curve name already bound")
            c.check()
            curves[c.name] = c
        return Catalog(self.params, curves, self.symmetries, self.disjoint_pairs,
                       self.schema_version, self.twist_convention, self.notes)

    def digest(self) -> str:
        return hashlib.sha256(dumps(self).encode()).hexdigest()


def curve_class(c: Catalog, name: str) -> HomologyClass:
    return c.curve(name).lift


# ---------------------------------------------------------------------------
# serialization

def to_document(c: Catalog) -> dict:
    doc = {
        "schema_version": c.schema_version,
        "genus": c.g,
        "twist_convention": c.twist_convention,
        "notes": list(c.notes),
        "curves": [],
        "symmetries": [],
        "disjoint_pairs": [list(p) for p in c.disjoint_pairs],
    }
    for cv in c.curves.values():
        entry = {"name": cv.name, "sidedness": cv.sidedness,
                 "lift": list(cv.lift.lift), "pairing": list(cv.pairing)}
        if cv.notes:
            entry["notes"] = cv.notes
        doc["curves"].append(entry)
    for s in c.symmetries.values():
        entry = {"name": s.name, "declared_d": s.declared_d, "order": s.order,
                 "action": [list(row) for row in s.action],
                 "curve_claims": [list(cl) for cl in s.curve_claims]}
        if s.provisional:
            entry["provisional"] = True
        if s.notes:
            entry["notes"] = s.notes
        doc["symmetries"].append(entry)
    return doc


def _multiline(rows) -> "tomlkit.items.Array":
    arr = tomlkit.array()
    for row in rows:
        arr.append(row)
    return arr.multiline(True)


def dumps(c: Catalog) -> str:
    doc = to_document(c)
    out = tomlkit.document()
    for key in ("schema_version", "genus", "twist_convention"):
        out[key] = doc[key]
    out["notes"] = _multiline(doc["notes"])
    out["disjoint_pairs"] = _multiline(doc["disjoint_pairs"])
    curves = tomlkit.aot()
    for entry in doc["curves"]:
        curves.append(tomlkit.item(entry))
    out["curves"] = curves
    syms = tomlkit.aot()
    for entry in doc["symmetries"]:
        t = tomlkit.table()
        for key, value in entry.items():
            t[key] = _multiline(value) if key in ("action", "curve_claims") else value
        syms.append(t)
    out["symmetries"] = syms
    return tomlkit.dumps(out)


def _int_list(value, where: str, length: Optional[int] = None) -> Tuple[int, ...]:
    if not isinstance(value, list) or not all(isinstance(x, int) and not isinstance(x, bool)
                                              for x in value):
        raise InvariantViolation(where, "expected a list of integers")
    if length is not None and len(value) != length:
        raise InvariantViolation(where, f"expected {length} entries, found {len(value)}")
    return tuple(value)


def _require(d: dict, key: str, where: str):
    if key not in d:
        raise InvariantViolation(where, f"missing field {key!r}")
    return d[key]


def from_document(doc: dict) -> Catalog:
    version = doc.get("schema_version")
    if version != SCHEMA_VERSION:
        raise SchemaMismatch(f"unsupported catalog schema_version {version!r}")
    genus = _require(doc, "genus", "catalog")
    try:
        params = SurfaceParams(genus)
    except TypeError as exc:
        raise InvariantViolation("catalog", str(exc)) from None
    g = params.g

    curves: Dict[str, CurveSpec] = {}
    for raw in doc.get("curves", []):
        name = _require(raw, "name", "curve")
        if name in curves:
            raise InvariantViolation(name, "duplicate curve name")
        cv = CurveSpec(name, _require(raw, "sidedness", name),
                       HomologyClass(_int_list(_require(raw, "lift", name), name, g)),
                       _int_list(_require(raw, "pairing", name), name, g),
                       raw.get("notes", ""))
        cv.check()
        curves[name] = cv

    symmetries: Dict[str, SymmetrySpec] = {}
    for raw in doc.get("symmetries", []):
        name = _require(raw, "name", "symmetry")
        if name in symmetries or name in curves:
            raise InvariantViolation(name, "duplicate name")
        rows = _require(raw, "action", name)
        if not isinstance(rows, list) or len(rows) != g:
            raise InvariantViolation(name, f"action must list {g} images")
        action = tuple(_int_list(row, f"{name}.action", g) for row in rows)
        d = _require(raw, "declared_d", name)
        if d not in (1, -1):
            raise InvariantViolation(name, "declared_d must be +1 or -1")
        claims = []
        for cl in raw.get("curve_claims", []):
            if (not isinstance(cl, list) or len(cl) != 3 or cl[2] not in (1, -1)
                    or not all(isinstance(x, str) for x in cl[:2])):
                raise InvariantViolation(name, f"malformed curve claim {cl!r}")
            for ref in cl[:2]:
                if ref not in curves:
                    raise InvariantViolation(name, f"curve claim references unknown curve {ref!r}")
            claims.append((cl[0], cl[1], cl[2]))
        order = raw.get("order", 2)
        if not isinstance(order, int) or order < 1:
            raise InvariantViolation(name, "order must be a positive integer")
        symmetries[name] = SymmetrySpec(name, action, d, tuple(claims), order,
                                        bool(raw.get("provisional", False)), raw.get("notes", ""))

    pairs = []
    for p in doc.get("disjoint_pairs", []):
        if not isinstance(p, list) or len(p) != 2:
            raise InvariantViolation("disjoint_pairs", f"malformed entry {p!r}")
        for ref in p:
            if ref not in curves:
                raise InvariantViolation("disjoint_pairs", f"unknown curve {ref!r}")
        pairs.append((p[0], p[1]))

    return Catalog(params, curves, symmetries, tuple(pairs), version,
                   doc.get("twist_convention", "right"), tuple(doc.get("notes", [])))


def load_catalog(source: Union[bytes, str, io.IOBase]) -> Catalog:
    """Parse a catalog document from bytes, text, or a binary/text stream."""
    if hasattr(source, "read"):
        source = source.read()
    if isinstance(source, bytes):
        try:
            source = source.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise CatalogParseError(f"catalog is not UTF-8: {exc}") from None
    try:
        doc = tomli.loads(source)
    except tomli.TOMLDecodeError as exc:
        raise CatalogParseError(exc.msg if hasattr(exc, "msg") else str(exc),
                                getattr(exc, "lineno", None), getattr(exc, "colno", None)) from None
    return from_document(doc)


def load_catalog_file(path: Union[str, Path]) -> Catalog:
    with open(path, "rb") as fh:
        return load_catalog(fh)


def builtin_path(g: int) -> Path:
    """Where the catalog for genus g is read from.

    Directories listed in the TWISTCHECK_CATALOG_PATH environment variable
    (os.pathsep separated) are searched first for a file named gNN.toml;
    otherwise the shipped catalog is used.
    """
    name = f"g{g:02d}.toml"
    for d in os.environ.get(CATALOG_PATH_ENV, "").split(os.pathsep):
        if d and (Path(d) / name).is_file():
            return Path(d) / name
    return Path(str(resources.files("twistcheck") / "data" / "catalogs" / name))


def builtin_catalog(params: Union[SurfaceParams, int]) -> Catalog:
    if isinstance(params, int):
        params = SurfaceParams(params)
    if params.g not in SUPPORTED_GENERA:
        raise UnsupportedGenus(
            f"no shipped catalog for genus {params.g} (supported {SUPPORTED_GENERA.start}"
            f"..{SUPPORTED_GENERA.stop - 1})")
    path = builtin_path(params.g)
    cache = _BUILTIN_CACHE.get(path)
    if cache is None:
        cache = load_catalog_file(path)
        if cache.params.g != params.g:
            raise SchemaMismatch(f"{path} describes genus {cache.params.g}, expected {params.g}")
        _BUILTIN_CACHE[path] = cache
    return cache


_BUILTIN_CACHE: Dict[Path, Catalog] = {}


# ---------------------------------------------------------------------------
# validation

@dataclass(frozen=True)
class CheckEntry:
    check: str
    subject: str
    ok: bool
    detail: str = ""

    def to_dict(self) -> dict:
        return {"check": self.check, "subject": self.subject, "ok": self.ok, "detail": self.detail}


@dataclass
class ValidationReport:
    genus: int
    entries: List[CheckEntry] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(e.ok for e in self.entries)

    @property
    def failures(self) -> List[CheckEntry]:
        return [e for e in self.entries if not e.ok]

    def add(self, check: str, subject: str, ok: bool, detail: str = ""):
        self.entries.append(CheckEntry(check, subject, bool(ok), detail))

    def to_dict(self) -> dict:
        return {"genus": self.genus, "ok": self.ok,
                "checks": len(self.entries), "failures": len(self.failures),
                "entries": [e.to_dict() for e in self.entries]}


def rational_action(m: np.ndarray) -> np.ndarray:
    """Reduce an integer action on x_1..x_g to the basis x_1..x_{g-1} of the quotient by w."""
    return linalg.canonical(m[:-1, :-1] - m[-1:, :-1])


def _transport_sign(m: np.ndarray, minv: np.ndarray, u: CurveSpec, v: CurveSpec):
    """Return (image sign, conjugation sign) or None when u is not carried onto +-v."""
    image = reduce_lift(tuple(int(x) for x in m @ np.array(u.lift.lift, dtype=np.int64)), Q)
    target = reduce_lift(v.lift.lift, Q)
    if image == target:
        eps = 1
    elif image == tuple(-x for x in target):
        eps = -1
    else:
        return None
    row = np.array(u.pairing, dtype=np.int64) @ minv
    if tuple(int(x) for x in row) == v.pairing:
        eps2 = 1
    elif tuple(int(-x) for x in row) == v.pairing:
        eps2 = -1
    else:
        return (eps, 0)
    return (eps, eps * eps2)


def validate_catalog(c: Catalog) -> ValidationReport:
    rep = ValidationReport(c.g)
    g = c.g
    w = np.ones(g, dtype=np.int64)

    for cv in c.curves.values():
        try:
            cv.check()
            rep.add("curve-invariants", cv.name, True)
        except InvariantViolation as exc:
            rep.add("curve-invariants", cv.name, False, str(exc))

    for s in c.symmetries.values():
        m = s.matrix()
        mw = m @ w
        descends = bool(np.all(mw == w) or np.all(mw == -w))
        rep.add("w-invariance", s.name, descends, "" if descends else f"M w = {mw.tolist()}")
        d = linalg.det(rational_action(m))
        rep.add("determinant", s.name, d == s.declared_d,
                f"det = {d}, declared {s.declared_d}")
        mq = rational_action(m)
        pw = linalg.power(mq, s.order, linalg.imatmul, linalg.identity(g - 1))
        rep.add("order", s.name, bool(np.array_equal(pw, linalg.identity(g - 1))),
                f"order claim {s.order} at rational homology")
        m2 = m % 2
        orth = np.array_equal((m2.T @ m2) % 2, np.eye(g, dtype=np.int64))
        fixes = np.array_equal((m2 @ w) % 2, w)
        rep.add("f2-orthogonal", s.name, bool(orth and fixes),
                "" if orth and fixes else "F2 matrix is not orthogonal or moves w")
        try:
            minv = linalg.int_inverse(m)
        except TwistcheckError as exc:
            rep.add("integral-inverse", s.name, False, str(exc))
            continue
        for u, v, sign in s.curve_claims:
            res = _transport_sign(m, minv, c.curve(u), c.curve(v))
            subject = f"{s.name}: {u} -> {v}"
            if res is None:
                rep.add("curve-claim", subject, False, "image is not +-v over Q")
            elif res[1] == 0:
                rep.add("curve-claim", subject, False, "pairing row not transported to +-v's row")
            else:
                rep.add("curve-claim", subject, res[1] == sign,
                        f"image sign {res[0]:+d}, conjugation sign {res[1]:+d}, recorded {sign:+d}")

    for u, v in c.disjoint_pairs:
        a, b = c.curve(u), c.curve(v)
        bit = sum(x * y for x, y in zip(a.lift.lift, b.lift.lift)) % 2
        rep.add("disjoint-pair", f"{u},{v}", bit == 0, f"mod-2 pairing {bit}")
    return rep
