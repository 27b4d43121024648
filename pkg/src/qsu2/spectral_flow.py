"""Residue formulas for the semifinite and the modular spectral flow.

Spectral flow is assembled as ``path + eta/2 + kernel``:

* semifinite: from vv^* D to v D v^* for a partial isometry v with v^*v and
  vv^* in the fixed-point algebra, traced with Htilde;
* modular: from D to u D u^* for the self-adjoint unitary
  u_v = [[1 - v^*v, v^*], [v, 1 - vv^*]], weighted with HD.
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import A, B, Element, as_element, graded_component, haar, sigma_pow, unit
from .errors import KernelTermNonzero, NotModular, NotPartialIsometry
from .graded import TraceKind, build_seq, eta_residue, residue_half
from .qfield import ZERO, QRat


class Mat2:
    """2x2 matrix over the algebra; just enough for u_v."""

    __slots__ = ("e",)

    def __init__(self, a, b, c, d):
        self.e = tuple(as_element(x) for x in (a, b, c, d))

    @classmethod
    def identity(cls) -> Mat2:
        return cls(unit(), Element(), Element(), unit())

    def __mul__(self, other: Mat2) -> Mat2:
        a, b, c, d = self.e
        w, x, y, z = other.e
        return Mat2(a * w + b * y, a * x + b * z, c * w + d * y, c * x + d * z)

    def __sub__(self, other: Mat2) -> Mat2:
        return Mat2(*(s - o for s, o in zip(self.e, other.e)))

    def __eq__(self, other):
        if not isinstance(other, Mat2):
            return NotImplemented
        return all(s == o for s, o in zip(self.e, other.e))

    __hash__ = None

    def adjoint(self) -> Mat2:
        a, b, c, d = self.e
        return Mat2(a.adjoint(), c.adjoint(), b.adjoint(), d.adjoint())

    def map(self, f) -> Mat2:
        return Mat2(*(f(x) for x in self.e))

    def trace(self) -> Element:
        return self.e[0] + self.e[3]

    def diagonal(self) -> tuple[Element, Element]:
        return self.e[0], self.e[3]

    def __repr__(self):
        return "Mat2(" + ", ".join(x.pretty() for x in self.e) + ")"


def _fixed_by_sigma(x: Element) -> bool:
    return all(m.degree == 0 for m, _ in x.terms)


@dataclass(frozen=True, eq=False)
class PartialIso:
    v: Element
    degree: int
    name: str = ""

    @property
    def source(self) -> Element:
        return self.v.adjoint() * self.v

    @property
    def range(self) -> Element:
        return self.v * self.v.adjoint()


def make_partial_iso(v, name: str = "") -> PartialIso:
    """Check v v^* v = v, pure first degree, and v^*v, vv^* fixed by sigma."""
    v = as_element(v)
    degrees = v.degrees()
    if len(degrees) != 1:
        raise NotPartialIsometry(f"{v.pretty()} is not of pure degree")
    (d,) = degrees
    if graded_component(v, d) != v:
        raise NotPartialIsometry(f"{v.pretty()} is not of pure degree")
    vs = v.adjoint()
    if v * vs * v != v:
        raise NotPartialIsometry(f"{v.pretty()} is not a partial isometry")
    if not (_fixed_by_sigma(vs * v) and _fixed_by_sigma(v * vs)):
        raise NotPartialIsometry(f"source or range of {v.pretty()} is not sigma-invariant")
    return PartialIso(v=v, degree=d, name=name or v.pretty())


def partial_iso(family: str, k: int) -> PartialIso:
    """Generator T_k (family "T") or Tt_k (family "Ttilde")."""
    if family == "T":
        return make_partial_iso(Element.of(A(k, 0)), name=f"T_{k}")
    if family in ("Ttilde", "Tt"):
        if k < 1:
            raise ValueError("Ttilde_k needs k >= 1")
        return make_partial_iso(Element.of(B(k, 0, 0)), name=f"Ttilde_{k}")
    raise ValueError(f"unknown generator family {family!r}")


@dataclass(frozen=True, eq=False)
class ModularUnitary:
    u: Mat2
    iso: PartialIso


def make_modular_unitary(v) -> ModularUnitary:
    """Build u_v and check u^2 = 1, u = u^* and the modular condition."""
    iso = v if isinstance(v, PartialIso) else make_partial_iso(v)
    x, xs = iso.v, iso.v.adjoint()
    one = unit()
    u = Mat2(one - xs * x, xs, x, one - x * xs)
    if u.adjoint() != u:
        raise NotModular("u_v is not self-adjoint")
    if u * u != Mat2.identity():
        raise NotModular("u_v is not unitary")
    us = u.adjoint()
    for w in (u * us.map(lambda e: sigma_pow(e, 1)), us * u.map(lambda e: sigma_pow(e, 1))):
        if not all(_fixed_by_sigma(e) for e in w.e):
            raise NotModular("u sigma(u^*) or u^* sigma(u) leaves the fixed-point algebra")
    return ModularUnitary(u=u, iso=iso)


def commutator_D(x):
    """[D, x]: each degree-d monomial is multiplied by d (entrywise on Mat2)."""
    if isinstance(x, Mat2):
        return x.map(commutator_D)
    x = as_element(x)
    return Element([(m, c * m.degree) for m, c in x.terms])


def path_term(v, kind=TraceKind.HTILDE, extra: int = 0) -> QRat:
    """Residue of trace(v [D, v^*] (1 + D^2)^(-r)) at r = 1/2.

    For a modular unitary the matrix trace of u [D, u^*] is used.
    """
    kind = TraceKind.parse(kind)
    if isinstance(v, ModularUnitary):
        u = v.u
        x = (u * commutator_D(u.adjoint())).trace()
    else:
        x = v.v * commutator_D(v.v.adjoint())
    return residue_half(build_seq(x, kind, extra=extra))


def eta_term(v: PartialIso, kind=TraceKind.HTILDE, extra: int = 0) -> QRat:
    """Residue of the eta difference, the signed sum over m of trace((v^*v - vv^*) Phi_m)."""
    x = v.source - v.range
    return eta_residue(build_seq(x, kind, extra=extra))


def modular_defect(u: ModularUnitary) -> Mat2:
    """sigma(u^*) u - 1."""
    return u.u.adjoint().map(lambda e: sigma_pow(e, 1)) * u.u - Mat2.identity()


def eta_term_modular(u: ModularUnitary, extra: int = 0) -> QRat:
    # the diagonal entries alone have constant tails; only their sum decays
    x = modular_defect(u).trace()
    return eta_residue(build_seq(x, TraceKind.HD, extra=extra))


def kernel_term(v: PartialIso) -> QRat:
    return haar(v.source - v.range) / 2


def kernel_term_modular(u: ModularUnitary) -> QRat:
    value = haar(modular_defect(u).trace())
    if value:
        raise KernelTermNonzero(f"h(sigma(u^*)u - 1) = {value.pretty()}, expected 0")
    return ZERO


@dataclass(frozen=True)
class FlowTerms:
    path: QRat
    eta: QRat
    kernel: QRat

    @property
    def total(self) -> QRat:
        return self.path + self.eta / 2 + self.kernel


def semifinite_terms(v: PartialIso, extra: int = 0) -> FlowTerms:
    return FlowTerms(
        path=path_term(v, TraceKind.HTILDE, extra=extra),
        eta=eta_term(v, TraceKind.HTILDE, extra=extra),
        kernel=kernel_term(v),
    )


def modular_terms(u: ModularUnitary, extra: int = 0) -> FlowTerms:
    return FlowTerms(
        path=path_term(u, TraceKind.HD, extra=extra),
        eta=eta_term_modular(u, extra=extra),
        kernel=kernel_term_modular(u),
    )


def semifinite_sf(v: PartialIso, extra: int = 0) -> QRat:
    """sf(vv^* D, v D v^*)."""
    return semifinite_terms(v, extra).total


def modular_sf(u: ModularUnitary, extra: int = 0) -> QRat:
    """Modular spectral flow from D to u D u^*."""
    return modular_terms(u, extra).total
