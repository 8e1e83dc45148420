"""Replaying claims against the homology representation.

Every status is about the representation on H_1 and its finite
reductions.  A passing generation claim is a necessary condition only: it
says the claimed set and Omori's twists have the same image over F2 (and
F3 when enabled), never that the theorem is proved.
"""

from __future__ import annotations

import dataclasses
import time
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

from . import groupalg, rep
from .catalog import Catalog, builtin_catalog
from .errors import CapExceeded, TwistcheckError
from .suitefiles import SUITE_ORDER, Claim, SuiteInstance, load_suite_file
from .surface import F2, F3, Q, CoeffSystem, SurfaceParams, reduce_lift
from .words import MacroTable, Word, parse_word

PASS = "pass"
FAIL = "fail"
UP_TO_SIGN = "pass-up-to-sign"
SKIPPED = "skipped"
STATUSES = (PASS, FAIL, UP_TO_SIGN, SKIPPED)

GENERATION_LABEL = "necessary condition at F2 level"
CONSISTENT = "consistent at homology/finite-image level"
INCONSISTENT = "inconsistent with the homology representation"


@dataclass
class RunOptions:
    identity_coeffs: Tuple[CoeffSystem, ...] = (Q, F2, F3)
    generation_coeffs: Tuple[CoeffSystem, ...] = (F2,)
    max_points: int = 1 << 16
    strict_signs: bool = False


@dataclass
class ClaimResult:
    id: str
    kind: str
    status: str
    detail: str = ""
    witness: Optional[Dict[str, Any]] = None
    elapsed: float = 0.0
    paper_ref: str = ""
    notes: str = ""
    reuse: str = ""
    capped: bool = False

    def to_dict(self) -> dict:
        d = {"id": self.id, "kind": self.kind, "status": self.status, "detail": self.detail,
             "paper_ref": self.paper_ref, "notes": self.notes}
        if self.reuse:
            d["reuse"] = self.reuse
        if self.witness is not None:
            d["witness"] = self.witness
        if self.capped:
            d["capped"] = True
        d["elapsed"] = round(self.elapsed, 6)
        return d


def summarize(results: Sequence[ClaimResult]) -> Dict[str, int]:
    out = {s: 0 for s in STATUSES}
    for r in results:
        out[r.status] += 1
    return out


@dataclass
class SuiteReport:
    suite_id: str
    params: SurfaceParams
    results: List[ClaimResult]
    elapsed: float = 0.0

    @property
    def summary(self) -> Dict[str, int]:
        return summarize(self.results)

    @property
    def ok(self) -> bool:
        return self.summary[FAIL] == 0

    @property
    def conclusion(self) -> str:
        return CONSISTENT if self.ok else INCONSISTENT

    def up_to_sign(self) -> List[str]:
        return [r.id for r in self.results if r.status == UP_TO_SIGN]

    def to_dict(self) -> dict:
        return {"suite": self.suite_id, "genus": self.params.g, "conclusion": self.conclusion,
                "summary": self.summary, "pass_up_to_sign": self.up_to_sign(),
                "claims": [r.to_dict() for r in self.results]}


# ---------------------------------------------------------------------------
# context


@dataclass
class Context:
    """Everything a claim resolves against: catalog, macros, sets, bound curves."""

    catalog: Catalog
    macros: MacroTable = field(default_factory=MacroTable)
    sets: Dict[str, List[str]] = field(default_factory=dict)
    options: RunOptions = field(default_factory=RunOptions)
    derived: Dict[str, Dict[CoeffSystem, Tuple[int, ...]]] = field(default_factory=dict)
    _chains: Dict[tuple, groupalg.StabilizerChain] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if self.macros.catalog is not self.catalog:
            self.macros = MacroTable(self.macros.scope, dict(self.macros.defs), self.catalog)

    def word(self, text: str) -> Word:
        return parse_word(text, self.macros)

    def matrix(self, text: str, coeff: CoeffSystem) -> rep.RepMatrix:
        return rep.evaluate(self.catalog, self.word(text), coeff)

    def vector(self, name: str, coeff: CoeffSystem) -> Tuple[int, ...]:
        if name in self.derived:
            return self.derived[name][coeff]
        return reduce_lift(self.catalog.curve(name).lift.lift, coeff)

    def set_words(self, ref) -> List[str]:
        if isinstance(ref, list):
            return ref
        if ref not in self.sets:
            raise TwistcheckError(f"unknown generator set {ref!r}")
        return self.sets[ref]

    def chain(self, words: Sequence[str], coeff: CoeffSystem) -> groupalg.StabilizerChain:
        key = (tuple(words), coeff)
        if key not in self._chains:
            mats = [self.matrix(w, coeff) for w in words]
            self._chains[key] = groupalg.build_chain(
                mats, coeff.p, rep.dim(self.catalog.params, coeff), self.options.max_points)
        return self._chains[key]


def context_for(instance: SuiteInstance, catalog: Optional[Catalog] = None,
                options: Optional[RunOptions] = None) -> Context:
    cat = catalog if catalog is not None else builtin_catalog(instance.params)
    return Context(cat, instance.macros, dict(instance.sets), options or RunOptions())


# ---------------------------------------------------------------------------
# claim kinds


def _mat(m: rep.RepMatrix) -> list:
    return m.tolist()


def _check_involution(ctx: Context, p: dict):
    w = p["word"]
    for coeff in (Q, F2):
        m = ctx.matrix(w, coeff)
        sq = m @ m
        if not sq.is_identity():
            return FAIL, f"{w} squared is not the identity over {coeff}", {
                "coeff": str(coeff), "square": _mat(sq)}
    trivial = ctx.matrix(w, Q).is_identity()
    note = "acts trivially on homology" if trivial else "order 2 on homology"
    return PASS, f"{w} squares to the identity over Q and F2 ({note})", None


def _check_identity(ctx: Context, p: dict):
    lhs, rhs = p["lhs"], p["rhs"]
    coeffs = [CoeffSystem.parse(c) for c in p["coeffs"]] if "coeffs" in p else ctx.options.identity_coeffs
    for coeff in coeffs:
        a, b = ctx.matrix(lhs, coeff), ctx.matrix(rhs, coeff)
        if a != b:
            return FAIL, f"{lhs} and {rhs} differ over {coeff}", {
                "coeff": str(coeff), "lhs": _mat(a), "rhs": _mat(b)}
    return PASS, f"{lhs} = {rhs} over " + ", ".join(str(c) for c in coeffs), None


def _vec_sign(img, tgt) -> int:
    if tuple(img) == tuple(tgt):
        return 1
    if tuple(img) == tuple(-x for x in tgt):
        return -1
    return 0


def _check_curve_image(ctx: Context, p: dict):
    w = p["word"]
    src, tgt = p["sources"], p["targets"]
    if len(src) != len(tgt):
        raise TwistcheckError("sources and targets differ in length")
    signs = p.get("signs", [p.get("sign", 1)] * len(src))
    mq, m2 = ctx.matrix(w, Q), ctx.matrix(w, F2)
    parts, status, wit = [], PASS, {}
    for u, v, s in zip(src, tgt, signs):
        iq = mq.apply(ctx.vector(u, Q))
        i2 = m2.apply(ctx.vector(u, F2))
        if p.get("define"):
            if v in ctx.derived or v in ctx.catalog.curves:
                raise TwistcheckError(f"curve name {v!r} is already bound")
            if sum(i2) % 2:
                status = FAIL
                wit[v] = {"F2": list(i2)}
                parts.append(f"{w}({u}) is one-sided, cannot define {v}")
                continue
            ctx.derived[v] = {Q: iq, F2: i2, F3: tuple(x % 3 for x in iq),
                              CoeffSystem("Fp", 5): tuple(x % 5 for x in iq),
                              CoeffSystem("Fp", 7): tuple(x % 7 for x in iq)}
            parts.append(f"{v} := {w}({u})")
            continue
        if i2 != ctx.vector(v, F2):
            status = FAIL
            wit[f"{u}->{v}"] = {"F2_image": list(i2), "F2_target": list(ctx.vector(v, F2))}
            parts.append(f"{w}({u}) != {v} over F2")
            continue
        sg = _vec_sign(iq, ctx.vector(v, Q))
        if sg == 0:
            status = FAIL
            wit[f"{u}->{v}"] = {"Q_image": list(iq), "Q_target": list(ctx.vector(v, Q))}
            parts.append(f"{w}({u}) != +-{v} over Q")
        elif sg == s:
            parts.append(f"{w}({u}) = {'' if s == 1 else '-'}{v}")
        else:
            if status == PASS:
                status = UP_TO_SIGN
            parts.append(f"{w}({u}) = {'-' if s == 1 else ''}{v} (sign differs)")
    if p.get("define") and status == PASS:
        parts.append("bound for later claims")
    return status, "; ".join(parts), wit or None


def _check_dvalue(ctx: Context, p: dict):
    w, expect = p["word"], int(p["expect"])
    d = rep.d_value(ctx.catalog, ctx.word(w))
    if d == expect:
        return PASS, f"D({w}) = {d:+d}", None
    return FAIL, f"D({w}) = {d:+d}, expected {expect:+d}", {"determinant": d}


def _check_generation(ctx: Context, p: dict):
    claimed = ctx.set_words(p["set"])
    against = ctx.set_words(p.get("against", "omori"))
    coeffs = [CoeffSystem.parse(c) for c in p["coeffs"]] if "coeffs" in p else ctx.options.generation_coeffs
    parts = []
    for coeff in coeffs:
        cb = ctx.chain(against, coeff)
        miss = [w for w in claimed if not cb.contains(ctx.matrix(w, coeff))]
        if miss:
            return FAIL, f"over {coeff}: {', '.join(miss)} not in the image of the reference set", {
                "coeff": str(coeff), "outside": miss, "reference_order": str(cb.order())}
        ca = ctx.chain(claimed, coeff)
        miss = [w for w in against if not ca.contains(ctx.matrix(w, coeff))]
        if miss:
            return FAIL, (f"over {coeff}: claimed set generates a proper subgroup "
                          f"(order {ca.order()} of {cb.order()})"), {
                "coeff": str(coeff), "outside": miss, "claimed_order": str(ca.order()),
                "reference_order": str(cb.order())}
        parts.append(f"{coeff}: equal images, order {cb.order()}")
    label = GENERATION_LABEL if [str(c) for c in coeffs] == ["F2"] else \
        "necessary condition at finite-image level (" + ", ".join(str(c) for c in coeffs) + ")"
    return PASS, f"{label}; " + "; ".join(parts), None


def _parse_arrow(item: str) -> Tuple[str, str]:
    if "->" not in item:
        raise TwistcheckError(f"expected 'x_i -> x_j', got {item!r}")
    a, b = (t.strip() for t in item.split("->", 1))
    return a, b


def _check_catalog_action(ctx: Context, p: dict):
    sym = ctx.catalog.symmetry(p["symmetry"])
    s = int(p.get("sign", 1))
    m = sym.matrix()
    parts, status, wit = [], PASS, {}
    # the listed images only mean something if the action descends to rational homology
    mw = tuple(int(x) for x in m.sum(axis=1))
    if any(reduce_lift(mw, Q)):
        status = FAIL
        wit["relation"] = {"M_w": list(mw)}
        parts.append(f"{sym.name} does not preserve the relation 2(x_1+...+x_g) = 0 over Q")
    for item in p["images"]:
        u, v = _parse_arrow(item)
        idx = int(u[1:]) - 1
        col = tuple(int(x) for x in m[:, idx])
        tq = reduce_lift(ctx.catalog.curve(v).lift.lift, Q)
        iq = reduce_lift(col, Q)
        if reduce_lift(col, F2) != reduce_lift(ctx.catalog.curve(v).lift.lift, F2):
            status = FAIL
            wit[item] = {"image": list(col)}
            parts.append(f"{sym.name}({u}) != {v} over F2")
            continue
        sg = _vec_sign(iq, tq)
        if sg == 0:
            status = FAIL
            wit[item] = {"image": list(col)}
            parts.append(f"{sym.name}({u}) != +-{v}")
        elif sg != s:
            if status == PASS:
                status = UP_TO_SIGN
            parts.append(f"{sym.name}({u}) = {'-' if s == 1 else ''}{v} (sign differs)")
        else:
            parts.append(f"{sym.name}({u}) = {'' if s == 1 else '-'}{v}")
    return status, "; ".join(parts), wit or None


_CHECKS = {
    "involution": _check_involution,
    "identity": _check_identity,
    "curveImage": _check_curve_image,
    "dValue": _check_dvalue,
    "generation": _check_generation,
    "catalogAction": _check_catalog_action,
}


def run_claim(ctx: Context, claim: Claim) -> ClaimResult:
    t0 = time.perf_counter()
    capped = False
    try:
        status, detail, witness = _CHECKS[claim.kind](ctx, claim.payload)
    except CapExceeded as exc:
        status, detail, witness, capped = SKIPPED, f"resource cap: {exc}", None, True
    except (TwistcheckError, KeyError, ValueError) as exc:
        status, detail, witness = SKIPPED, f"{type(exc).__name__}: {exc}", None
    return ClaimResult(claim.id, claim.kind, status, detail, witness, time.perf_counter() - t0,
                       claim.paper_ref, claim.notes, claim.reuse, capped)


def run_instance(instance: SuiteInstance, catalog: Optional[Catalog] = None,
                 options: Optional[RunOptions] = None) -> SuiteReport:
    ctx = context_for(instance, catalog, options)
    t0 = time.perf_counter()
    results = [run_claim(ctx, c) for c in instance.claims]
    return SuiteReport(instance.suite_id, instance.params, results, time.perf_counter() - t0)


def run_suite(suite_id: str, params: Union[SurfaceParams, int, Catalog],
              options: Optional[RunOptions] = None) -> SuiteReport:
    catalog = params if isinstance(params, Catalog) else None
    if isinstance(params, Catalog):
        params = params.params
    elif isinstance(params, int):
        params = SurfaceParams(params)
    instance = load_suite_file(suite_id).instantiate(params)
    return run_instance(instance, catalog, options)


def builtin_suites(params: Union[SurfaceParams, int]) -> List[SuiteInstance]:
    if isinstance(params, int):
        params = SurfaceParams(params)
    builtin_catalog(params)  # raises for unsupported genera
    out = []
    for sid in SUITE_ORDER:
        f = load_suite_file(sid)
        if f.applicable(params):
            out.append(f.instantiate(params))
    return out


# ---------------------------------------------------------------------------
# mutation testing


def flip_action_sign(catalog: Catalog, symmetry: str, column: int) -> Catalog:
    """A copy of the catalog with the image of x_{column+1} under a symmetry negated."""
    sym = catalog.symmetry(symmetry)
    action = [list(row) for row in sym.action]
    action[column] = [-x for x in action[column]]
    new = dataclasses.replace(sym, action=tuple(tuple(r) for r in action))
    syms = dict(catalog.symmetries)
    syms[symmetry] = new
    return Catalog(catalog.params, dict(catalog.curves), syms, catalog.disjoint_pairs,
                   catalog.schema_version, catalog.twist_convention, catalog.notes)
