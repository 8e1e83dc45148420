"""Surface parameters and homology coefficient systems.

H_1(N_g) is generated by the crosscap cores x_1..x_g subject to
2(x_1+...+x_g) = 0.  Classes are stored as integer lifts over the formal
basis.  Over the rationals (and F_p, p odd) the class w = x_1+...+x_g dies
and we use the basis x_1..x_{g-1}; over F2 all g coordinates survive and
the intersection form is the identity Gram matrix.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import TwistcheckError, UnsupportedGenus

MIN_GENUS = 5


@dataclass(frozen=True)
class SurfaceParams:
    g: int
    parity: Optional[str] = None
    r: Optional[int] = None
    k: Optional[int] = None

    def __post_init__(self):
        g = self.g
        if not isinstance(g, int) or isinstance(g, bool):
            raise TypeError("genus must be an integer")
        if g < MIN_GENUS:
            raise UnsupportedGenus(f"genus {g} is below the minimum {MIN_GENUS}")
        derived = {
            "parity": "even" if g % 2 == 0 else "odd",
            "r": (g - 2) // 2 if g % 2 == 0 else (g - 1) // 2,
            "k": (g - 1) // 4 if g % 4 == 1 else (g - 3) // 4 if g % 4 == 3 else None,
        }
        for name, want in derived.items():
            have = getattr(self, name)
            if have is None:
                object.__setattr__(self, name, want)
            elif have != want:
                raise TwistcheckError(f"inconsistent {name}={have!r} for genus {g}")

    @property
    def even(self) -> bool:
        return self.parity == "even"

    def env(self) -> dict:
        """Variables available to genus templates."""
        return {"g": self.g, "r": self.r, "k": self.k if self.k is not None else -1}


@dataclass(frozen=True)
class CoeffSystem:
    tag: str
    p: Optional[int] = None

    def __post_init__(self):
        if self.tag == "F2":
            object.__setattr__(self, "p", 2)
        elif self.tag == "Rational":
            object.__setattr__(self, "p", None)
        elif self.tag == "Fp":
            if self.p not in (3, 5, 7):
                raise TwistcheckError(f"F_p requires p in {{3, 5, 7}}, got {self.p}")
        else:
            raise TwistcheckError(f"unknown coefficient system {self.tag!r}")

    @property
    def modulus(self) -> Optional[int]:
        return self.p

    @property
    def is_finite(self) -> bool:
        return self.p is not None

    def __str__(self):
        return {"F2": "F2", "Rational": "Q"}.get(self.tag, f"F{self.p}")

    @classmethod
    def parse(cls, text: str) -> "CoeffSystem":
        t = text.strip().lower()
        if t in ("f2", "gf2"):
            return F2
        if t in ("q", "rational", "rationals"):
            return Q
        if t in ("f3", "f5", "f7"):
            return cls("Fp", int(t[1:]))
        raise TwistcheckError(f"unknown coefficient system {text!r}")


F2 = CoeffSystem("F2")
Q = CoeffSystem("Rational")
F3 = CoeffSystem("Fp", 3)


@dataclass(frozen=True)
class HomologyClass:
    lift: tuple

    def __post_init__(self):
        object.__setattr__(self, "lift", tuple(int(c) for c in self.lift))

    @property
    def genus(self) -> int:
        return len(self.lift)

    def __add__(self, other: "HomologyClass") -> "HomologyClass":
        _same_length(self.lift, other.lift)
        return HomologyClass(tuple(a + b for a, b in zip(self.lift, other.lift)))

    def __neg__(self) -> "HomologyClass":
        return HomologyClass(tuple(-a for a in self.lift))

    def scale(self, c: int) -> "HomologyClass":
        return HomologyClass(tuple(c * a for a in self.lift))

    def equals_in(self, other: "HomologyClass", coeff: CoeffSystem) -> bool:
        return reduce(self, coeff) == reduce(other, coeff)

    @classmethod
    def basis(cls, g: int, i: int) -> "HomologyClass":
        """The crosscap core x_i (1-based)."""
        if not 1 <= i <= g:
            raise IndexError(f"x_{i} out of range for genus {g}")
        return cls(tuple(1 if j == i - 1 else 0 for j in range(g)))


def _same_length(u: Sequence[int], v: Sequence[int]):
    if len(u) != len(v):
        raise TwistcheckError(f"length mismatch: {len(u)} vs {len(v)}")


def dim(params: SurfaceParams, coeff: CoeffSystem) -> int:
    return params.g if coeff.tag == "F2" else params.g - 1


def reduce_lift(lift: Sequence[int], coeff: CoeffSystem) -> tuple:
    if coeff.tag == "F2":
        return tuple(int(c) % 2 for c in lift)
    last = int(lift[-1])
    out = tuple(int(c) - last for c in lift[:-1])
    if coeff.p is not None:
        out = tuple(c % coeff.p for c in out)
    return out


def reduce(cls: HomologyClass, coeff: CoeffSystem) -> tuple:
    """Canonical coordinates of a class in the given coefficient system."""
    return reduce_lift(cls.lift, coeff)


def mod2_pairing(u: HomologyClass, v: HomologyClass) -> int:
    _same_length(u.lift, v.lift)
    return sum(a * b for a, b in zip(u.lift, v.lift)) % 2


def characteristic_class(params: SurfaceParams) -> HomologyClass:
    return HomologyClass((1,) * params.g)
