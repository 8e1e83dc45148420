"""Claim files: one TOML document per replay suite.

A suite file declares when it applies (a condition in g, r, k), the named
elements of the proof (macros), named generator sets and an ordered list of
claims.  Strings in macros, sets and claim payloads are templates (see
:mod:`twistcheck.templates`); anchors and notes are kept verbatim.  The
shared file ``common.toml`` contributes sets available to every suite,
notably ``omori``.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any, Dict, List, Optional

import tomli

from . import templates
from .errors import ClaimFileError, InapplicableGenus
from .surface import SurfaceParams
from .words import MacroTable

CLAIM_KINDS = ("involution", "identity", "curveImage", "dValue", "generation", "catalogAction")
SUITE_SCHEMA_VERSION = 1
_VERBATIM = ("id", "kind", "ref", "notes", "when", "for", "reuse")


@dataclass(frozen=True)
class Claim:
    id: str
    kind: str
    payload: Dict[str, Any]
    paper_ref: str = ""
    notes: str = ""
    reuse: str = ""


@dataclass
class SuiteInstance:
    suite_id: str
    title: str
    params: SurfaceParams
    macros: MacroTable
    sets: Dict[str, List[str]]
    claims: List[Claim]
    anchor: str = ""


@dataclass
class SuiteFile:
    suite_id: str
    title: str
    applies: str
    anchor: str = ""
    macros: List[Dict[str, Any]] = field(default_factory=list)
    sets: List[Dict[str, Any]] = field(default_factory=list)
    claims: List[Dict[str, Any]] = field(default_factory=list)
    path: str = ""

    def applicable(self, params: SurfaceParams) -> bool:
        return templates.condition(self.applies, params.env())

    def instantiate(self, params: SurfaceParams, common: Optional["SuiteFile"] = None) -> SuiteInstance:
        if not self.applicable(params):
            raise InapplicableGenus(f"suite {self.suite_id} needs {self.applies}; got g={params.g}")
        env = params.env()
        if common is None and self.suite_id != "common":
            common = load_suite_file("common")
        table = MacroTable(scope=self.suite_id)
        for m in self.macros:
            if _active(m, env):
                table.define(m["name"], templates.substitute(m["word"], env), m.get("ref", ""))
        sets: Dict[str, List[str]] = {}
        for s in (common.sets if common is not None else []) + self.sets:
            if _active(s, env):
                sets[s["name"]] = _set_items(s["words"], env)
        claims: List[Claim] = []
        seen = set()
        for raw in self.claims:
            for c in _expand_claim(raw, env):
                if c.id in seen:
                    raise ClaimFileError(f"{self.suite_id}: duplicate claim id {c.id!r}")
                seen.add(c.id)
                claims.append(c)
        return SuiteInstance(self.suite_id, self.title, params, table, sets, claims, self.anchor)


def _active(entry: Dict[str, Any], env) -> bool:
    return "when" not in entry or templates.condition(entry["when"], env)


def _set_items(items, env) -> List[str]:
    out: List[str] = []
    for it in items:
        if isinstance(it, dict):
            if _active(it, env):
                out.extend(templates.expand_items([it["word"]], env))
        else:
            out.extend(templates.expand_items([it], env))
    return out


def _subst(value, env):
    if isinstance(value, str):
        return templates.substitute(value, env)
    if isinstance(value, list):
        if all(isinstance(v, str) for v in value):
            return templates.expand_items(value, env)
        return [_subst(v, env) for v in value]
    if isinstance(value, dict):
        return {k: _subst(v, env) for k, v in value.items()}
    return value


def _expand_claim(raw: Dict[str, Any], env) -> List[Claim]:
    for key in ("id", "kind"):
        if key not in raw:
            raise ClaimFileError(f"claim is missing {key!r}: {raw}")
    if raw["kind"] not in CLAIM_KINDS:
        raise ClaimFileError(f"claim {raw['id']}: unknown kind {raw['kind']!r}")
    bindings = templates.loop_values(raw["for"], env) if "for" in raw else [{}]
    out = []
    for b in bindings:
        local = {**env, **b}
        if not _active(raw, local):
            continue
        payload = {k: _subst(v, local) for k, v in raw.items() if k not in _VERBATIM}
        cid = templates.substitute(raw["id"], local)
        out.append(Claim(cid, raw["kind"], payload, raw.get("ref", ""), raw.get("notes", ""),
                         raw.get("reuse", "")))
    return out


def parse_suite(text: str, path: str = "<string>") -> SuiteFile:
    try:
        doc = tomli.loads(text)
    except tomli.TOMLDecodeError as exc:
        raise ClaimFileError(f"{path}: {exc}") from None
    if doc.get("schema_version") != SUITE_SCHEMA_VERSION:
        raise ClaimFileError(f"{path}: unsupported schema_version {doc.get('schema_version')!r}")
    try:
        return SuiteFile(
            suite_id=doc["suite"], title=doc.get("title", ""), applies=doc.get("applies", "True"),
            anchor=doc.get("anchor", ""), macros=doc.get("macro", []), sets=doc.get("set", []),
            claims=doc.get("claim", []), path=path)
    except KeyError as exc:
        raise ClaimFileError(f"{path}: missing field {exc}") from None


def suite_dir():
    return resources.files("twistcheck") / "data" / "suites"


def suite_ids() -> List[str]:
    """Identifiers of the shipped suites in their fixed reporting order."""
    return list(SUITE_ORDER)


SUITE_ORDER = ("gensets-even", "gensets-odd", "g12", "r-odd", "r-even", "g10", "g8", "g6",
               "odd-4k1", "odd-4k1-tau", "odd-4k3", "g7", "g5g9")


@functools.lru_cache(maxsize=None)
def load_suite_file(suite_id: str) -> SuiteFile:
    res = suite_dir() / f"{suite_id}.toml"
    if not res.is_file():
        raise ClaimFileError(f"no shipped suite named {suite_id!r}")
    return parse_suite(res.read_text(encoding="utf-8"), str(res))


def load_suite_path(path) -> SuiteFile:
    p = Path(path)
    return parse_suite(p.read_text(encoding="utf-8"), str(p))
