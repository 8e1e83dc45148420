"""Words in Dehn twists and symmetries.

Grammar (whitespace is ignored)::

    word := term ("*" term)*
    term := atom ("^" int)?
    atom := ident | "1" | "(" word ")"
    int  := ["-"] digit+          (nonzero)

A product is read with the rightmost factor acting first.  Identifiers
starting with an upper-case letter name twists about the curve with the
same name in lower case (A1 is the twist about a1, E about e); lower-case
identifiers name symmetries.  Macro names take precedence over both, and
"1" is the empty word.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Tuple

from .errors import MacroCycle, OneSidedCurve, UnknownName, WordSyntaxError

TWIST = "twist"
SYMMETRY = "symmetry"


@dataclass(frozen=True)
class Generator:
    name: str
    kind: str

    @property
    def curve(self) -> str:
        """Name of the curve a twist generator is about."""
        return self.name[0].lower() + self.name[1:]


def generator_for(name: str, catalog=None) -> Generator:
    if catalog is None:
        return Generator(name, TWIST if name[0].isupper() else SYMMETRY)
    if name in catalog.symmetries:
        return Generator(name, SYMMETRY)
    if name[0].isupper():
        curve = name[0].lower() + name[1:]
        if curve in catalog.curves:
            if not catalog.curves[curve].two_sided:
                raise OneSidedCurve(f"{name}: curve {curve} is one-sided and has no Dehn twist")
            return Generator(name, TWIST)
    raise UnknownName(f"unknown generator {name!r} at genus {catalog.g}")


Factor = Tuple[Generator, int]


def _reduce(factors: Iterable[Factor]) -> Tuple[Factor, ...]:
    stack: List[Factor] = []
    for gen, e in factors:
        if e == 0:
            continue
        if stack and stack[-1][0] == gen:
            total = stack[-1][1] + e
            stack.pop()
            if total:
                stack.append((gen, total))
        else:
            stack.append((gen, e))
    return tuple(stack)


@dataclass(frozen=True)
class Word:
    factors: Tuple[Factor, ...] = ()

    def __post_init__(self):
        for i, (gen, e) in enumerate(self.factors):
            if e == 0:
                raise ValueError("zero exponent in word")
            if i and self.factors[i - 1][0] == gen:
                raise ValueError("word is not freely reduced")

    @classmethod
    def of(cls, factors: Iterable[Factor]) -> "Word":
        return cls(_reduce(factors))

    @classmethod
    def gen(cls, g: Generator, e: int = 1) -> "Word":
        return cls.of([(g, e)])

    def __mul__(self, other: "Word") -> "Word":
        return multiply(self, other)

    def __len__(self):
        return len(self.factors)

    def __pow__(self, e: int) -> "Word":
        return power(self, e)

    def __str__(self):
        return format_word(self)

    def generators(self) -> List[Generator]:
        return [g for g, _ in self.factors]


def multiply(u: Word, v: Word) -> Word:
    return Word.of(u.factors + v.factors)


def inverse(u: Word) -> Word:
    return Word(tuple((g, -e) for g, e in reversed(u.factors)))


def conjugate(u: Word, by: Word) -> Word:
    """by * u * by^-1."""
    return multiply(multiply(by, u), inverse(by))


def power(u: Word, e: int) -> Word:
    if e < 0:
        u, e = inverse(u), -e
    out = Word()
    for _ in range(e):
        out = multiply(out, u)
    return out


def format_word(u: Word) -> str:
    if not u.factors:
        return "1"
    return "*".join(g.name if e == 1 else f"{g.name}^{e}" for g, e in u.factors)


# ---------------------------------------------------------------------------
# macros


@dataclass(frozen=True)
class MacroDef:
    name: str
    text: str
    ref: str = ""


@dataclass
class MacroTable:
    scope: str = ""
    defs: Dict[str, MacroDef] = field(default_factory=dict)
    catalog: Optional[object] = None
    _cache: Dict[str, Word] = field(default_factory=dict, repr=False)

    def __contains__(self, name: str) -> bool:
        return name in self.defs

    def names(self) -> List[str]:
        return list(self.defs)

    def define(self, name: str, text: str, ref: str = ""):
        self.defs[name] = MacroDef(name, text, ref)
        self._cache.clear()

    def expand(self, name: str, _stack: Tuple[str, ...] = ()) -> Word:
        if name in _stack:
            raise MacroCycle(" -> ".join(_stack + (name,)))
        if name not in self._cache:
            parser = _Parser(self.defs[name].text, self, _stack + (name,))
            self._cache[name] = parser.parse()
        return self._cache[name]

    def check_acyclic(self):
        for name in self.defs:
            self.expand(name)


# ---------------------------------------------------------------------------
# parser


class _Parser:
    def __init__(self, text: str, macros: Optional[MacroTable], stack: Tuple[str, ...] = ()):
        self.text = text
        self.pos = 0
        self.macros = macros
        self.stack = stack
        self.catalog = macros.catalog if macros is not None else None

    def error(self, msg: str):
        raise WordSyntaxError(msg, self.pos)

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def parse(self) -> Word:
        if self.peek() == "":
            self.error("empty word")
        w = self.word()
        if self.peek() != "":
            self.error(f"unexpected {self.peek()!r}")
        return w

    def word(self) -> Word:
        w = self.term()
        while self.peek() == "*":
            self.pos += 1
            w = multiply(w, self.term())
        return w

    def term(self) -> Word:
        base = self.atom()
        if self.peek() == "^":
            self.pos += 1
            self.skip()
            at = self.pos
            e = self.integer()
            if e == 0:
                self.pos = at
                self.error("zero exponent")
            return power(base, e)
        return base

    def integer(self) -> int:
        self.skip()
        start = self.pos
        if self.pos < len(self.text) and self.text[self.pos] in "+-":
            self.pos += 1
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        digits = self.text[start:self.pos]
        if digits in ("", "-", "+"):
            self.pos = start
            self.error("expected an integer exponent")
        return int(digits)

    def atom(self) -> Word:
        c = self.peek()
        if c == "(":
            self.pos += 1
            w = self.word()
            if self.peek() != ")":
                self.error("expected ')'")
            self.pos += 1
            return w
        if c.isalpha() or c == "_":
            start = self.pos
            while self.pos < len(self.text) and (self.text[self.pos].isalnum()
                                                 or self.text[self.pos] in "_'"):
                self.pos += 1
            name = self.text[start:self.pos]
            if self.macros is not None and name in self.macros:
                return self.macros.expand(name, self.stack)
            try:
                return Word.gen(generator_for(name, self.catalog))
            except UnknownName as exc:
                raise UnknownName(f"{exc} (position {start})") from None
        if c == "1":
            # the identity element, as printed for the empty word
            self.pos += 1
            return Word()
        if c == "":
            self.error("unexpected end of input")
        self.error(f"unexpected {c!r}")


def parse_word(text: str, macros: Optional[MacroTable] = None, catalog=None) -> Word:
    """Parse, macro-expand and freely reduce a word.

    When a catalog is given (directly or through the macro table) every
    generator is resolved against it.
    """
    if catalog is not None:
        if macros is None:
            macros = MacroTable(catalog=catalog)
        elif macros.catalog is not catalog:
            macros = MacroTable(macros.scope, dict(macros.defs), catalog)
    return _Parser(text, macros).parse()


def builtin_macros(theorem: str, params) -> MacroTable:
    """The named elements of one theorem's proof, instantiated at the given genus."""
    from .suitefiles import load_suite_file

    return load_suite_file(theorem).instantiate(params).macros
