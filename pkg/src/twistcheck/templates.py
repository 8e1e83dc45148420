"""Genus-parametrised text templates used by macro and claim files.

A template is ordinary word or curve text in which ``{expr}`` is replaced
by the value of an integer expression in g, r, k (and any loop variable).
After substitution every index attached to a handle curve (a, b, c or the
twists A, B, C) is read modulo r, so ``C{r+1}`` means C_1.  Conditions
(`when`, `applies`) use the same expression language with comparisons and
boolean connectives.
"""

from __future__ import annotations

import ast
import operator
import re
from fractions import Fraction
from typing import Dict, List, Mapping

from .errors import ClaimFileError

_BINOPS = {
    ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul,
    ast.Div: operator.truediv, ast.FloorDiv: operator.floordiv, ast.Mod: operator.mod,
    ast.Pow: operator.pow,
}
_CMPOPS = {
    ast.Eq: operator.eq, ast.NotEq: operator.ne, ast.Lt: operator.lt,
    ast.LtE: operator.le, ast.Gt: operator.gt, ast.GtE: operator.ge,
}


def _eval(node, env: Mapping[str, int]):
    if isinstance(node, ast.Expression):
        return _eval(node.body, env)
    if isinstance(node, ast.Constant) and isinstance(node.value, int) and not isinstance(node.value, bool):
        return Fraction(node.value)
    if isinstance(node, ast.Name):
        if node.id not in env:
            raise ClaimFileError(f"unknown template variable {node.id!r}")
        return Fraction(env[node.id])
    if isinstance(node, ast.UnaryOp):
        v = _eval(node.operand, env)
        if isinstance(node.op, ast.USub):
            return -v
        if isinstance(node.op, ast.UAdd):
            return v
        if isinstance(node.op, ast.Not):
            return not v
    if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
        left, right = _eval(node.left, env), _eval(node.right, env)
        try:
            if isinstance(node.op, ast.Div):
                return Fraction(left) / Fraction(right)
            return Fraction(_BINOPS[type(node.op)](left, right))
        except ZeroDivisionError:
            raise ClaimFileError("division by zero in template expression") from None
    if isinstance(node, ast.BoolOp):
        vals = [_eval(v, env) for v in node.values]
        return all(vals) if isinstance(node.op, ast.And) else any(vals)
    if isinstance(node, ast.Compare):
        left = _eval(node.left, env)
        for op, comp in zip(node.ops, node.comparators):
            right = _eval(comp, env)
            if type(op) not in _CMPOPS or not _CMPOPS[type(op)](left, right):
                return False
            left = right
        return True
    raise ClaimFileError(f"unsupported template expression: {ast.dump(node)}")


def evaluate(expr: str, env: Mapping[str, int]) -> int:
    """Evaluate an integer template expression exactly; non-integers are an error."""
    try:
        tree = ast.parse(expr.strip(), mode="eval")
    except SyntaxError as exc:
        raise ClaimFileError(f"bad template expression {expr!r}: {exc.msg}") from None
    value = _eval(tree, env)
    if isinstance(value, bool):
        return int(value)
    if value.denominator != 1:
        raise ClaimFileError(f"template expression {expr!r} is not an integer ({value})")
    return int(value)


def condition(expr: str, env: Mapping[str, int]) -> bool:
    try:
        tree = ast.parse(expr.strip(), mode="eval")
    except SyntaxError as exc:
        raise ClaimFileError(f"bad condition {expr!r}: {exc.msg}") from None
    return bool(_eval(tree, env))


_BRACES = re.compile(r"\{([^{}]*)\}")
_HANDLE_INDEX = re.compile(r"(?<![A-Za-z0-9_])([ABCabc])(\d+)(?![A-Za-z0-9_])")


def substitute(text: str, env: Mapping[str, int]) -> str:
    """Replace every ``{expr}`` and reduce handle-curve indices modulo r."""
    out = _BRACES.sub(lambda m: str(evaluate(m.group(1), env)), text)
    r = env.get("r")
    if r:
        out = _HANDLE_INDEX.sub(lambda m: f"{m.group(1)}{(int(m.group(2)) - 1) % r + 1}", out)
    return out


_LOOP = re.compile(r"^(?P<body>.*?)\s+for\s+(?P<var>[A-Za-z_]\w*)\s+in\s+(?P<lo>.+?)\.\.(?P<hi>.+)$")


def expand_items(items: List[str], env: Mapping[str, int]) -> List[str]:
    """Expand a list whose entries may carry a trailing ``for i in lo..hi`` loop."""
    out: List[str] = []
    for item in items:
        m = _LOOP.match(item.strip())
        if m is None:
            out.append(substitute(item, env))
            continue
        lo, hi = evaluate(m.group("lo"), env), evaluate(m.group("hi"), env)
        for i in range(lo, hi + 1):
            out.append(substitute(m.group("body"), {**env, m.group("var"): i}))
    return out


def loop_values(spec: str, env: Mapping[str, int]) -> List[Dict[str, int]]:
    """Bindings for a claim-level loop ``var in lo..hi``."""
    m = re.match(r"^\s*([A-Za-z_]\w*)\s+in\s+(.+?)\.\.(.+)$", spec)
    if m is None:
        raise ClaimFileError(f"bad loop specification {spec!r}")
    lo, hi = evaluate(m.group(2), env), evaluate(m.group(3), env)
    return [{m.group(1): i} for i in range(lo, hi + 1)]
