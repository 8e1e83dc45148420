"""Command-line front end.

Every subcommand builds a report dictionary (see ``data/report.schema.json``)
and prints it either as text or, with ``--json``, as canonical JSON.  Exit
codes: 0 all checks passed, 1 a check failed (or passed only up to sign under
``--strict-signs``), 2 usage or data error, 3 a resource cap was hit.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence

from . import __version__, groupalg, rep
from .catalog import Catalog, builtin_catalog, load_catalog_file, validate_catalog
from .errors import CapExceeded, TwistcheckError
from .suitefiles import SUITE_ORDER, Claim, load_suite_file
from .surface import F2, CoeffSystem
from .verify import (FAIL, GENERATION_LABEL, PASS, SKIPPED, STATUSES, UP_TO_SIGN, Context,
                     RunOptions, run_claim, run_instance, summarize)
from .words import MacroTable, format_word

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3
REPORT_SCHEMA_VERSION = 1
COEFF_CHOICES = {"f2": "F2", "q": "Q", "f3": "F3", "f5": "F5", "f7": "F7"}


class UsageError(TwistcheckError):
    pass


@dataclass
class RunConfig:
    genus: Optional[int] = None
    catalog_path: Optional[str] = None
    coeffs: List[CoeffSystem] = field(default_factory=list)
    max_points: int = 1 << 16
    oracle_cap: int = groupalg.DEFAULT_ORACLE_CAP
    strict_signs: bool = False
    json: bool = False
    suite: Optional[str] = None

    def __post_init__(self):
        if self.max_points <= 0 or self.oracle_cap <= 0:
            raise UsageError("caps must be positive")

    def catalog(self) -> Catalog:
        if self.catalog_path:
            c = load_catalog_file(self.catalog_path)
            if self.genus is not None and c.params.g != self.genus:
                raise UsageError(f"catalog {self.catalog_path} is for genus {c.params.g}, "
                                 f"not {self.genus}")
            return c
        if self.genus is None:
            raise UsageError("--genus is required unless --catalog is given")
        return builtin_catalog(self.genus)

    def options(self, default_generation=(F2,)) -> RunOptions:
        finite = tuple(c for c in self.coeffs if c.p is not None)
        gen = finite or default_generation
        ident = tuple(dict.fromkeys(RunOptions().identity_coeffs + tuple(self.coeffs)))
        return RunOptions(identity_coeffs=ident, generation_coeffs=gen,
                          max_points=self.max_points, strict_signs=self.strict_signs)


# ---------------------------------------------------------------------------
# report assembly


def _empty_summary() -> Dict[str, int]:
    return {s: 0 for s in STATUSES}


def _catalog_info(c: Catalog, path: Optional[str]) -> dict:
    return {"source": path or "builtin", "genus": c.params.g,
            "schema_version": c.schema_version, "digest": "sha256:" + c.digest()}


def make_report(command: str, catalog: Optional[dict], payload: dict,
                summary: Dict[str, int], exit_code: int, timings: dict) -> dict:
    return {"report_schema": REPORT_SCHEMA_VERSION, "tool": "twistcheck", "version": __version__,
            "command": command, "catalog": catalog, "payload": payload, "summary": summary,
            "exit_code": exit_code, "timings": timings}


def _claim_exit(summary: Dict[str, int], capped: bool, strict: bool) -> int:
    if summary[FAIL]:
        return EXIT_FAIL
    if capped:
        return EXIT_CAP
    if strict and summary[UP_TO_SIGN]:
        return EXIT_FAIL
    return EXIT_OK


def _split_timings(claims: List[dict]) -> Dict[str, float]:
    out = {}
    for d in claims:
        out[d["id"]] = d.pop("elapsed", 0.0)
    return out


# ---------------------------------------------------------------------------
# named elements and sets at a genus


def genus_context(cfg: RunConfig, catalog: Catalog) -> Context:
    """Macros and sets from the suites applicable at this genus.

    With ``--suite`` only that suite contributes.  Otherwise macros defined
    differently by two suites are dropped, so using them needs ``--suite``.
    """
    params = catalog.params
    ids = [cfg.suite] if cfg.suite else list(SUITE_ORDER)
    table = MacroTable(scope="cli", catalog=catalog)
    ambiguous = set()
    sets: Dict[str, List[str]] = {}
    for sid in ids:
        f = load_suite_file(sid)
        if not f.applicable(params):
            if cfg.suite:
                raise UsageError(f"suite {sid} needs {f.applies}; got g={params.g}")
            continue
        inst = f.instantiate(params)
        for name, d in inst.macros.defs.items():
            if name in ambiguous:
                continue
            if name in table.defs and table.defs[name].text != d.text:
                del table.defs[name]
                ambiguous.add(name)
                continue
            table.define(name, d.text, d.ref)
        for name, words in inst.sets.items():
            sets.setdefault(name, words)
    if not sets:
        sets.update(load_suite_file("common").instantiate(params).sets)
    return Context(catalog, table, sets, cfg.options())


# ---------------------------------------------------------------------------
# commands


def cmd_list_suites(cfg: RunConfig):
    if cfg.genus is None and not cfg.catalog_path:
        rows = [{"suite": s, "title": load_suite_file(s).title, "applies": load_suite_file(s).applies}
                for s in SUITE_ORDER]
        return None, {"suites": rows}, _empty_summary(), EXIT_OK, {}
    c = cfg.catalog()
    rows = []
    for s in SUITE_ORDER:
        f = load_suite_file(s)
        if f.applicable(c.params):
            rows.append({"suite": s, "title": f.title, "applies": f.applies})
    return _catalog_info(c, cfg.catalog_path), {"genus": c.params.g, "suites": rows}, \
        _empty_summary(), EXIT_OK, {}


def cmd_catalog_validate(cfg: RunConfig):
    c = cfg.catalog()
    t0 = time.perf_counter()
    vr = validate_catalog(c)
    summary = _empty_summary()
    summary[PASS] = len(vr.entries) - len(vr.failures)
    summary[FAIL] = len(vr.failures)
    return _catalog_info(c, cfg.catalog_path), vr.to_dict(), summary, \
        EXIT_OK if vr.ok else EXIT_FAIL, {"validate": time.perf_counter() - t0}


def cmd_eval(cfg: RunConfig, word: str):
    c = cfg.catalog()
    ctx = genus_context(cfg, c)
    coeff = cfg.coeffs[0] if cfg.coeffs else CoeffSystem.parse("Q")
    t0 = time.perf_counter()
    w = ctx.word(word)
    m = rep.evaluate(c, w, coeff)
    det = rep.evaluate(c, w, CoeffSystem.parse("Q")).det()
    m2 = rep.evaluate(c, w, F2)
    orth = rep.f2_orthogonal(m2)
    payload = {"word": word, "normal_form": format_word(w), "coeff": str(coeff),
               "matrix": m.tolist(), "det_rational": int(det), "f2_orthogonal": orth}
    summary = _empty_summary()
    summary[PASS if orth else FAIL] = 1
    return _catalog_info(c, cfg.catalog_path), payload, summary, \
        EXIT_OK if orth else EXIT_FAIL, {"eval": time.perf_counter() - t0}


CHECK_KINDS = {
    "involution": (["word"], "involution"),
    "identity": (["lhs", "rhs"], "identity"),
    "dvalue": (["word", "expect"], "dValue"),
    "curve-image": (["word", "source", "target"], "curveImage"),
    "generation": (["set"], "generation"),
    "catalog-action": (["symmetry", "image"], "catalogAction"),
}


def build_check_claim(kind: str, args: Sequence[str], sign: int = 1,
                      against: Optional[str] = None, coeffs: Sequence[CoeffSystem] = ()) -> Claim:
    if kind not in CHECK_KINDS:
        raise UsageError(f"unknown check kind {kind!r}; choose from {', '.join(CHECK_KINDS)}")
    fields, claim_kind = CHECK_KINDS[kind]
    if kind == "catalog-action":
        if len(args) < 2:
            raise UsageError("catalog-action needs a symmetry and at least one 'x_i -> x_j' image")
        payload = {"symmetry": args[0], "images": list(args[1:]), "sign": sign}
    else:
        if len(args) != len(fields):
            raise UsageError(f"{kind} takes {len(fields)} argument(s): {' '.join(fields)}")
        payload = dict(zip(fields, args))
        if kind == "dvalue":
            try:
                payload["expect"] = int(payload["expect"])
            except ValueError:
                raise UsageError("dvalue expectation must be +1 or -1") from None
        if kind == "curve-image":
            payload = {"word": payload["word"], "sources": [payload["source"]],
                       "targets": [payload["target"]], "sign": sign}
        if kind == "generation":
            if against:
                payload["against"] = against
            finite = [str(c) for c in coeffs if c.p is not None]
            if finite:
                payload["coeffs"] = finite
    return Claim(f"check-{kind}", claim_kind, payload)


def cmd_check(cfg: RunConfig, kind: str, args: Sequence[str], sign: int = 1,
              against: Optional[str] = None):
    c = cfg.catalog()
    ctx = genus_context(cfg, c)
    claim = build_check_claim(kind, args, sign, against, cfg.coeffs)
    res = run_claim(ctx, claim)
    if res.status == SKIPPED and not res.capped:
        raise UsageError(f"claim could not be assembled: {res.detail}")
    d = res.to_dict()
    timings = _split_timings([d])
    summary = summarize([res])
    payload = {"claim": d}
    if claim.kind == "generation":
        payload["label"] = GENERATION_LABEL
    return _catalog_info(c, cfg.catalog_path), payload, summary, \
        _claim_exit(summary, res.capped, cfg.strict_signs), timings


def cmd_replay(cfg: RunConfig, suite_id: str):
    c = cfg.catalog()
    ids = list(SUITE_ORDER) if suite_id == "all" else [suite_id]
    reports, timings, results = [], {}, []
    for sid in ids:
        f = load_suite_file(sid)
        if not f.applicable(c.params):
            if suite_id == "all":
                continue
            raise UsageError(f"suite {sid} needs {f.applies}; got g={c.params.g}")
        sr = run_instance(f.instantiate(c.params), c, cfg.options())
        results.extend(sr.results)
        d = sr.to_dict()
        t = _split_timings(d["claims"])
        timings[sid] = {"total": sr.elapsed, "claims": t}
        reports.append(d)
    summary = summarize(results)
    capped = any(r.capped for r in results)
    payload = {"suites": reports, "generation_label": GENERATION_LABEL}
    return _catalog_info(c, cfg.catalog_path), payload, summary, \
        _claim_exit(summary, capped, cfg.strict_signs), timings


def _finite_coeff(cfg: RunConfig) -> CoeffSystem:
    coeff = cfg.coeffs[0] if cfg.coeffs else F2
    if coeff.p is None:
        raise UsageError("group computations need a finite field (f2, f3, f5 or f7)")
    return coeff


def _set_matrices(ctx: Context, name: str, coeff: CoeffSystem):
    return [ctx.matrix(w, coeff) for w in ctx.set_words(name)]


def cmd_gens(cfg: RunConfig, set_a: str, set_b: str):
    c = cfg.catalog()
    ctx = genus_context(cfg, c)
    coeff = _finite_coeff(cfg)
    t0 = time.perf_counter()
    cmp = groupalg.compare(_set_matrices(ctx, set_a, coeff), _set_matrices(ctx, set_b, coeff),
                           cfg.max_points)
    payload = {"set_a": set_a, "set_b": set_b, "words_a": ctx.set_words(set_a),
               "words_b": ctx.set_words(set_b), "coeff": str(coeff), "equal": cmp.equal,
               "a_in_b": cmp.a_in_b, "b_in_a": cmp.b_in_a, "order_a": str(cmp.order_a),
               "order_b": str(cmp.order_b), "label": GENERATION_LABEL if coeff == F2 else
               "necessary condition at finite-image level"}
    summary = _empty_summary()
    summary[PASS if cmp.equal else FAIL] = 1
    return _catalog_info(c, cfg.catalog_path), payload, summary, \
        EXIT_OK if cmp.equal else EXIT_FAIL, {"compare": time.perf_counter() - t0}


def cmd_group_order(cfg: RunConfig, set_name: str, oracle: bool = False):
    c = cfg.catalog()
    ctx = genus_context(cfg, c)
    coeff = _finite_coeff(cfg)
    t0 = time.perf_counter()
    mats = _set_matrices(ctx, set_name, coeff)
    ch = groupalg.build_chain(mats, coeff.p, rep.dim(c.params, coeff), cfg.max_points)
    payload = {"set": set_name, "words": ctx.set_words(set_name), "coeff": str(coeff),
               "order": str(ch.order()), "base": [int(b) for b in ch.base],
               "orbit_sizes": [int(s) for s in ch.orbit_sizes()]}
    timings = {"chain": time.perf_counter() - t0}
    summary = _empty_summary()
    ok = True
    if oracle:
        t1 = time.perf_counter()
        n = len(groupalg.brute_force_closure(mats, cap=cfg.oracle_cap))
        timings["oracle"] = time.perf_counter() - t1
        ok = n == ch.order()
        payload["oracle_order"] = str(n)
        payload["oracle_agrees"] = ok
    summary[PASS if ok else FAIL] = 1
    return _catalog_info(c, cfg.catalog_path), payload, summary, \
        EXIT_OK if ok else EXIT_FAIL, timings


# ---------------------------------------------------------------------------
# text rendering


def render_text(report: dict) -> str:
    lines = []
    cat = report.get("catalog")
    head = f"twistcheck {report['version']} {report['command']}"
    if cat:
        head += f"  genus {cat['genus']}  catalog {cat['source']} ({cat['digest'][:19]})"
    lines.append(head)
    p = report.get("payload") or {}
    cmd = report["command"]
    if "error" in report:
        lines.append(f"error: {report['error']}")
    elif cmd == "list-suites":
        for row in p["suites"]:
            lines.append(f"  {row['suite']:<12} {row['applies']:<40} {row['title']}")
    elif cmd == "catalog-validate":
        for e in p["entries"]:
            if not e["ok"]:
                lines.append(f"  FAIL {e['check']} {e['subject']}: {e['detail']}")
        lines.append(f"  {p['checks']} checks, {p['failures']} failures")
    elif cmd == "eval":
        lines.append(f"  word {p['word']}  (normal form {p['normal_form']}) over {p['coeff']}")
        lines.append("  " + str(rep_text(p["matrix"])).replace("\n", "\n  "))
        lines.append(f"  det over Q: {p['det_rational']:+d}")
        lines.append(f"  F2 orthogonal and fixing w: {p['f2_orthogonal']}")
    elif cmd == "check":
        lines.append(_claim_line(p["claim"]))
    elif cmd == "replay":
        for s in p["suites"]:
            lines.append(f"suite {s['suite']} (g={s['genus']}): {s['conclusion']}")
            for cl in s["claims"]:
                lines.append(_claim_line(cl))
            if s["pass_up_to_sign"]:
                lines.append("  passed up to sign: " + ", ".join(s["pass_up_to_sign"]))
    elif cmd == "gens":
        rel = "equal" if p["equal"] else "different"
        lines.append(f"  <{p['set_a']}> and <{p['set_b']}> over {p['coeff']}: {rel} "
                     f"(orders {p['order_a']}, {p['order_b']}); {p['label']}")
    elif cmd == "group-order":
        lines.append(f"  |<{p['set']}>| over {p['coeff']} = {p['order']}")
        if "oracle_order" in p:
            lines.append(f"  brute-force closure: {p['oracle_order']} "
                         f"({'agrees' if p['oracle_agrees'] else 'DISAGREES'})")
    s = report["summary"]
    lines.append("summary: " + ", ".join(f"{k} {s[k]}" for k in STATUSES)
                 + f"; exit {report['exit_code']}")
    return "\n".join(lines)


def rep_text(rows) -> str:
    return "[" + ",\n ".join("[" + ", ".join(str(x) for x in r) + "]" for r in rows) + "]"


def _claim_line(d: dict) -> str:
    flag = {PASS: "pass", FAIL: "FAIL", UP_TO_SIGN: "pass-up-to-sign", SKIPPED: "skipped"}[d["status"]]
    return f"  [{flag}] {d['id']}: {d['detail']}"


def dump_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True)


# ---------------------------------------------------------------------------
# argument parsing


def _coeff(text: str) -> CoeffSystem:
    key = text.lower()
    if key not in COEFF_CHOICES:
        raise argparse.ArgumentTypeError(f"choose from {', '.join(COEFF_CHOICES)}")
    return CoeffSystem.parse(COEFF_CHOICES[key])


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError("expected an integer") from None
    if v <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _sign(text: str) -> int:
    if text not in ("1", "+1", "-1"):
        raise argparse.ArgumentTypeError("sign must be +1 or -1")
    return int(text)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--genus", "-g", type=int, help="genus of the nonorientable surface")
    common.add_argument("--catalog", help="catalog file to use instead of the shipped one")
    common.add_argument("--coeff", type=_coeff, action="append", default=[],
                        help="coefficient system: f2, q, f3, f5 or f7 (repeatable)")
    common.add_argument("--strict-signs", action="store_true",
                        help="treat pass-up-to-sign as failure")
    common.add_argument("--json", action="store_true", help="print the JSON report")
    common.add_argument("--cap", type=_positive, default=1 << 16,
                        help="largest vector space (points) a stabilizer chain may act on")
    common.add_argument("--oracle-cap", type=_positive, default=groupalg.DEFAULT_ORACLE_CAP,
                        help="largest group the brute-force oracle enumerates")
    common.add_argument("--suite", help="take named elements and sets from this suite only")

    ap = argparse.ArgumentParser(prog="twistcheck", description=(
        "Replay claims about Dehn twists and involutions on nonorientable surfaces "
        "against their action on first homology."))
    ap.add_argument("--version", action="version", version=f"twistcheck {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)
    sub.add_parser("list-suites", parents=[common], help="list the replay suites")
    sub.add_parser("catalog-validate", parents=[common], help="validate a catalog")
    p = sub.add_parser("eval", parents=[common], help="evaluate a word on homology")
    p.add_argument("word")
    p = sub.add_parser("check", parents=[common], help="check one ad-hoc claim")
    p.add_argument("kind", choices=list(CHECK_KINDS))
    p.add_argument("args", nargs="+")
    p.add_argument("--sign", type=_sign, default=1, help="expected sign for curve images")
    p.add_argument("--against", help="reference set for generation checks (default omori)")
    p = sub.add_parser("replay", parents=[common], help="replay a suite (or 'all')")
    p.add_argument("suite_id")
    p = sub.add_parser("gens", parents=[common], help="compare the groups two sets generate")
    p.add_argument("set_a")
    p.add_argument("set_b")
    p = sub.add_parser("group-order", parents=[common], help="order of the group a set generates")
    p.add_argument("set")
    p.add_argument("--oracle", action="store_true", help="also count by brute-force closure")
    return ap


def _dispatch(ns) -> Callable[[RunConfig], tuple]:
    cmd = ns.command
    if cmd == "list-suites":
        return cmd_list_suites
    if cmd == "catalog-validate":
        return cmd_catalog_validate
    if cmd == "eval":
        return lambda cfg: cmd_eval(cfg, ns.word)
    if cmd == "check":
        return lambda cfg: cmd_check(cfg, ns.kind, ns.args, ns.sign, ns.against)
    if cmd == "replay":
        return lambda cfg: cmd_replay(cfg, ns.suite_id)
    if cmd == "gens":
        return lambda cfg: cmd_gens(cfg, ns.set_a, ns.set_b)
    return lambda cfg: cmd_group_order(cfg, ns.set, ns.oracle)


def run(argv: Optional[Sequence[str]] = None) -> tuple:
    """Parse arguments and run one command; returns (report, exit code)."""
    ns = build_parser().parse_args(argv)
    t0 = time.perf_counter()
    cfg = None
    try:
        cfg = RunConfig(ns.genus, ns.catalog, list(ns.coeff), ns.cap, ns.oracle_cap,
                        ns.strict_signs, ns.json, ns.suite)
        catalog, payload, summary, code, timings = _dispatch(ns)(cfg)
    except CapExceeded as exc:
        report = make_report(ns.command, None, {}, _empty_summary(), EXIT_CAP, {})
        report["error"] = f"resource cap: {exc}"
        code = EXIT_CAP
    except (TwistcheckError, OSError) as exc:
        report = make_report(ns.command, None, {}, _empty_summary(), EXIT_USAGE, {})
        report["error"] = f"{type(exc).__name__}: {exc}"
        code = EXIT_USAGE
    else:
        timings["total"] = time.perf_counter() - t0
        report = make_report(ns.command, catalog, payload, summary, code, timings)
    report["timings"].setdefault("total", time.perf_counter() - t0)
    return report, code


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        report, code = run(argv)
    except SystemExit as exc:  # argparse usage errors already exit with 2
        return int(exc.code or 0)
    as_json = "--json" in (argv if argv is not None else sys.argv[1:])
    if as_json:
        print(dump_json(report))
    else:
        print(render_text(report))
    if "error" in report:
        print(f"twistcheck: {report['error']}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
