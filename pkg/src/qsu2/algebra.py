"""The graph *-algebra of quantum SU(2) on its spanning monomials.

Two families of monomials span the algebra:

* ``A(k, l)`` stands for T_k T_l^*, with T_0 = p_v and T_k = S_mu^k;
* ``B(k, n, l)`` stands for Tt_k U_n Tt_l^*, with Tt_0 = p_w,
  Tt_k = S_mu^(k-1) S_nu and U_n = S_xi^n (S_xi^* to the power -n when n < 0).

Products of monomials are again monomials or zero, so elements are finite
``{monomial: QRat}`` maps.  The spanning set is not linearly independent
(``A(k,l) = A(k+1,l+1) + B(k+1,0,l+1)``); :meth:`Element.reduced` rewrites to a
basis and element equality is decided on reduced forms.
"""

from __future__ import annotations

from typing import NamedTuple

from .qfield import ONE, ZERO, QRat, geometric_tail, qpow


class Monomial(NamedTuple):
    kind: str  # "A" or "B"
    k: int
    n: int
    l: int

    @property
    def degree(self) -> int:
        return self.k - self.l

    @property
    def bidegree(self) -> tuple[int, int]:
        return (self.k - self.l, self.n)

    def adjoint(self) -> Monomial:
        return Monomial(self.kind, self.l, -self.n, self.k)

    def max_index(self) -> int:
        return max(self.k, self.l, abs(self.n))

    def __str__(self):
        if self.kind == "A":
            return f"A({self.k},{self.l})"
        return f"B({self.k},{self.n},{self.l})"


def A(k: int, l: int) -> Monomial:
    if k < 0 or l < 0:
        raise ValueError("A(k,l) needs k, l >= 0")
    return Monomial("A", k, 0, l)


def B(k: int, n: int, l: int) -> Monomial:
    if k < 0 or l < 0:
        raise ValueError("B(k,n,l) needs k, l >= 0")
    return Monomial("B", k, n, l)


def mono_mul(x: Monomial, y: Monomial) -> Monomial | None:
    """Product of two spanning monomials; ``None`` stands for zero."""
    if x.kind == "A":
        k, l = x.k, x.l
        if y.kind == "A":
            k2, l2 = y.k, y.l
            if k2 >= l:
                return Monomial("A", k + k2 - l, 0, l2)
            return Monomial("A", k, 0, l + l2 - k2)
        if l < y.k:
            return Monomial("B", k + y.k - l, y.n, y.l)
        return None
    if y.kind == "A":
        if y.k < x.l:
            return Monomial("B", x.k, x.n, x.l - y.k + y.l)
        return None
    if x.l == y.k:
        return Monomial("B", x.k, x.n + y.n, y.l)
    return None


class Element:
    """Finite linear combination of monomials with QRat coefficients."""

    __slots__ = ("terms", "_reduced")

    def __init__(self, terms=None):
        acc: dict[Monomial, QRat] = {}
        if terms:
            items = terms.items() if isinstance(terms, dict) else terms
            for mono, c in items:
                c = c if isinstance(c, QRat) else QRat(c)
                acc[mono] = acc.get(mono, ZERO) + c
        self.terms = tuple(sorted((m, c) for m, c in acc.items() if c))
        self._reduced = None

    @classmethod
    def of(cls, mono: Monomial, c=ONE) -> Element:
        return cls({mono: c})

    def __iter__(self):
        return iter(self.terms)

    def __len__(self):
        return len(self.terms)

    def __bool__(self):
        return bool(self.reduced().terms)

    def as_dict(self) -> dict:
        return dict(self.terms)

    def monomials(self):
        return [m for m, _ in self.terms]

    def max_index(self) -> int:
        return max((m.max_index() for m, _ in self.terms), default=0)

    def degrees(self) -> set[int]:
        return {m.degree for m, _ in self.terms}

    # arithmetic

    def __add__(self, other):
        other = as_element(other)
        if other is NotImplemented:
            return other
        return Element(list(self.terms) + list(other.terms))

    __radd__ = __add__

    def __neg__(self):
        return Element([(m, -c) for m, c in self.terms])

    def __sub__(self, other):
        other = as_element(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = as_element(other)
        if other is NotImplemented:
            return other
        return other - self

    def scale(self, c) -> Element:
        c = c if isinstance(c, QRat) else QRat(c)
        return Element([(m, c * a) for m, a in self.terms])

    def __mul__(self, other):
        if isinstance(other, Element):
            out = []
            for m1, c1 in self.terms:
                for m2, c2 in other.terms:
                    p = mono_mul(m1, m2)
                    if p is not None:
                        out.append((p, c1 * c2))
            return Element(out)
        if isinstance(other, Monomial):
            return self * Element.of(other)
        if isinstance(other, (QRat, int)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (QRat, int)):
            return self.scale(other)
        if isinstance(other, Monomial):
            return Element.of(other) * self
        return NotImplemented

    def __pow__(self, e: int):
        if not isinstance(e, int) or e < 0:
            return NotImplemented
        out = unit()
        for _ in range(e):
            out = out * self
        return out

    def adjoint(self) -> Element:
        return Element([(m.adjoint(), c) for m, c in self.terms])

    # normal form and equality

    def reduced(self) -> Element:
        """Rewrite every B(k,0,l) with k, l >= 1 as A(k-1,l-1) - A(k,l).

        What remains (all A-monomials, B-monomials with n != 0 or with k = 0
        or l = 0) is linearly independent, so reduced forms decide equality.
        """
        if self._reduced is None:
            out = []
            for m, c in self.terms:
                if m.kind == "B" and m.n == 0 and m.k >= 1 and m.l >= 1:
                    out.append((A(m.k - 1, m.l - 1), c))
                    out.append((A(m.k, m.l), -c))
                else:
                    out.append((m, c))
            red = Element(out)
            red._reduced = red
            self._reduced = red
        return self._reduced

    def __eq__(self, other):
        other = as_element(other)
        if other is NotImplemented:
            return other
        return self.reduced().terms == other.reduced().terms

    def __hash__(self):
        return hash(self.reduced().terms)

    def structurally_equal(self, other: Element) -> bool:
        return self.terms == other.terms

    # text

    def __repr__(self):
        return f"Element({self.pretty()!r})"

    def __str__(self):
        return self.pretty()

    def pretty(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.terms:
            if c == ONE:
                parts.append(str(m))
            elif c == -ONE:
                parts.append(f"-{m}")
            else:
                t = c.pretty()
                if " " in t or "/" in t:
                    t = f"({t})"
                parts.append(f"{t}*{m}")
        out = parts[0]
        for p in parts[1:]:
            out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return out

    def canonical_text(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"{c.canonical_text()}*{m}" for m, c in self.terms)


def as_element(x):
    if isinstance(x, Element):
        return x
    if isinstance(x, Monomial):
        return Element.of(x)
    if isinstance(x, (QRat, int)):
        return unit().scale(x)
    return NotImplemented


def unit() -> Element:
    """1 = p_v + p_w."""
    return Element([(A(0, 0), ONE), (B(0, 0, 0), ONE)])


# named generators

def p_v() -> Element:
    return Element.of(A(0, 0))


def p_w() -> Element:
    return Element.of(B(0, 0, 0))


def T(k: int) -> Element:
    return Element.of(A(k, 0))


def Tt(k: int) -> Element:
    return Element.of(B(k, 0, 0))


def U(n: int) -> Element:
    return Element.of(B(0, n, 0))


S_mu = lambda: Element.of(A(1, 0))  # noqa: E731
S_nu = lambda: Element.of(B(1, 0, 0))  # noqa: E731
S_xi = lambda: Element.of(B(0, 1, 0))  # noqa: E731


def elem_ops(op: str, x, y=None) -> Element:
    """Element operation by name: add, mul, adjoint or scale (y is the scalar)."""
    x = as_element(x)
    if op == "add":
        return x + as_element(y)
    if op == "mul":
        return x * as_element(y)
    if op == "adjoint":
        return x.adjoint()
    if op == "scale":
        return x.scale(y)
    raise ValueError(f"unknown element operation {op!r}")


# Haar state and modular structure

def haar_monomial(m: Monomial) -> QRat:
    if m.k != m.l:
        return ZERO
    if m.kind == "A":
        return qpow(2 * m.k + 2)
    if m.n:
        return ZERO
    return qpow(2 * m.k) * (ONE - qpow(2))


def haar(x) -> QRat:
    x = as_element(x)
    return sum((c * haar_monomial(m) for m, c in x.terms), ZERO)


def graded_component(x, m: int) -> Element:
    """Part of x of first degree m (the image of the projection Phi_m)."""
    x = as_element(x)
    return Element([(mono, c) for mono, c in x.terms if mono.degree == m])


def sigma_pow(x, j: int) -> Element:
    """j-th power of the modular automorphism: degree-m parts scale by q^(-2mj)."""
    x = as_element(x)
    if j == 0:
        return x
    return Element([(m, c * qpow(-2 * m.degree * j)) for m, c in x.terms])


def kms_defect(x: Monomial, y: Monomial) -> QRat:
    """h(xy) - h(sigma(y) x); identically zero for a KMS state."""
    ex, ey = as_element(x), as_element(y)
    return haar(ex * ey) - haar(sigma_pow(ey, 1) * ex)


def haar_b_power(n: int) -> QRat:
    """h(b^*n b^n) summed as sum_k q^(2kn) h(Tt_k Tt_k^*)."""
    if n < 1:
        raise ValueError("haar_b_power needs n >= 1")
    # h(B(k,0,k)) = (1 - q^2) q^(2k), so the summand is (1 - q^2) q^(2k(n+1))
    c = haar_monomial(B(0, 0, 0))
    return geometric_tail(c, n + 1, 0, "plus")


def is_projection(p: Element) -> bool:
    return p * p == p and p.adjoint() == p

