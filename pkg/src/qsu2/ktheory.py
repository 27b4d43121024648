"""Formal K-theory classes and the K_0(F)-valued index pairing.

Classes here are free abelian bookkeeping only.  They become numbers through
the semifinite trace (:func:`evaluate_htilde`) or the Haar state
(:func:`h_star`).
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from .algebra import A, B, Element, haar, is_projection, unit
from .errors import NotProjection
from .graded import htilde_phi
from .qfield import ONE, ZERO, QRat, qpow


@dataclass(frozen=True)
class K0FClass:
    """unit_mult [1] + sum_k circle_mults[k] [Tt_k Tt_k^*]."""

    unit_mult: int = 0
    circle_mults: tuple = ()  # sorted (k, mult) pairs with mult != 0

    @classmethod
    def make(cls, unit_mult: int = 0, circle_mults: dict | None = None) -> K0FClass:
        items = tuple(sorted((k, m) for k, m in (circle_mults or {}).items() if m))
        return cls(unit_mult, items)

    def __add__(self, other: K0FClass) -> K0FClass:
        c = Counter(dict(self.circle_mults))
        c.update(dict(other.circle_mults))
        return K0FClass.make(self.unit_mult + other.unit_mult, c)

    def __neg__(self):
        return K0FClass.make(-self.unit_mult, {k: -m for k, m in self.circle_mults})

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, n: int):
        return K0FClass.make(n * self.unit_mult, {k: n * m for k, m in self.circle_mults})


def h_star(c: K0FClass) -> QRat:
    """Haar state on K_0(F): [1] -> 1, [Tt_k Tt_k^*] -> (1 - q^2) q^(2k)."""
    total = QRat(c.unit_mult)
    for k, m in c.circle_mults:
        total += m * (ONE - qpow(2)) * qpow(2 * k)
    return total


@dataclass(frozen=True)
class Generator:
    """Mapping-cone generator [T_k] or [Tt_k], or the class of its adjoint."""

    family: str  # "T" or "Ttilde"
    k: int
    adjoint: bool = False

    def __post_init__(self):
        if self.family not in ("T", "Ttilde"):
            raise ValueError(f"unknown generator family {self.family!r}")
        if self.k < 1:
            raise ValueError("generators need k >= 1")

    def __str__(self):
        base = f"{'T' if self.family == 'T' else 'Tt'}_{self.k}"
        return base + "^*" if self.adjoint else base


def Tk(k: int, adjoint: bool = False) -> Generator:
    return Generator("T", k, adjoint)


def Ttk(k: int, adjoint: bool = False) -> Generator:
    return Generator("Ttilde", k, adjoint)


@dataclass(frozen=True)
class MappingConeClass:
    """Integer combination of generator classes."""

    mults: tuple = ()  # sorted ((family, k), mult) pairs

    @classmethod
    def make(cls, mults: dict) -> MappingConeClass:
        return cls(tuple(sorted((g, m) for g, m in mults.items() if m)))

    @classmethod
    def of(cls, gen: Generator) -> MappingConeClass:
        sign = -1 if gen.adjoint else 1
        return cls.make({(gen.family, gen.k): sign})

    def __add__(self, other):
        c = Counter(dict(self.mults))
        c.update(dict(other.mults))
        return MappingConeClass.make(c)

    def __neg__(self):
        return MappingConeClass.make({g: -m for g, m in self.mults})

    def __sub__(self, other):
        return self + (-other)


@dataclass(frozen=True)
class PairingResult:
    """Formal sum of sign * [p Phi_level]."""

    entries: tuple = field(default=())  # (sign, projection, level)

    def __post_init__(self):
        for _, p, _ in self.entries:
            if not is_projection(p):
                raise NotProjection(f"{p.pretty()} is not a projection")

    def __add__(self, other):
        return PairingResult(self.entries + other.entries)

    def __neg__(self):
        return PairingResult(tuple((-s, p, l) for s, p, l in self.entries))

    def __rmul__(self, n: int):
        if n < 0:
            return (-n) * (-self)
        return PairingResult(self.entries * n)

    def text(self) -> str:
        if not self.entries:
            return "0"
        out = ""
        for s, p, l in self.entries:
            term = f"[{p.pretty()} Phi_{l}]"
            out += (" - " if s < 0 else " + ") + term if out else ("-" if s < 0 else "") + term
        return out


def _range_projection(gen: Generator) -> Element:
    if gen.family == "T":
        return Element.of(A(gen.k, gen.k))
    return Element.of(B(gen.k, 0, gen.k))


def mapping_cone_pairing(gen: Generator) -> PairingResult:
    """Index of [v] against the Kasparov class: -sum_{l<k} [v v^* Phi_l]."""
    p = _range_projection(gen)
    sign = 1 if gen.adjoint else -1
    return PairingResult(tuple((sign, p, l) for l in range(gen.k)))


def pair_class(c: MappingConeClass) -> PairingResult:
    out = PairingResult()
    for (family, k), mult in c.mults:
        out = out + mult * mapping_cone_pairing(Generator(family, k))
    return out


def evaluate_htilde(pr: PairingResult) -> QRat:
    return sum((s * htilde_phi(p, l) for s, p, l in pr.entries), ZERO)


def evaluate_class(c: MappingConeClass) -> QRat:
    return evaluate_htilde(pair_class(c))


def generator_relation_check(k: int, signs=(1, -1, 1, -1)) -> bool:
    """Test [T_k] = [T_{k+1}] - [T_1] + [Tt_{k+1}] - [Tt_1] after evaluation.

    ``signs`` weights the four right-hand terms; anything other than the
    default is a deliberately wrong relation (a negative control).
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    lhs = evaluate_class(MappingConeClass.of(Tk(k)))
    rhs = ZERO
    for s, g in zip(signs, (Tk(k + 1), Tk(1), Ttk(k + 1), Ttk(1))):
        rhs += s * evaluate_class(MappingConeClass.of(g))
    return lhs == rhs


def k1_generator(k: int) -> Element:
    """1 - Tt_k Tt_k^* + Tt_k U_1 Tt_k^*, a unitary of the fixed-point algebra."""
    return unit() - Element.of(B(k, 0, k)) + Element.of(B(k, 1, k))


def haar_of_projection(p: Element) -> QRat:
    if not is_projection(p):
        raise NotProjection(f"{p.pretty()} is not a projection")
    return haar(p)
