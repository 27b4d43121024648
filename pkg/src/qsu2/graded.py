"""Traces against the spectral projections Phi_m and their zeta residues.

For an algebra element x the sequence ``m -> trace(x Phi_m)`` is computed
exactly through the rank-one decomposition of Phi_m, either for the
semifinite trace (``Htilde``) or for the modular weight (``HD``).  These
sequences are eventually geometric in |m|, so a finite window together with
two fitted tails describes them completely.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .algebra import A, B, Element, as_element, haar, haar_monomial, mono_mul
from .errors import EtaDivergent, TailFitError
from .qfield import ONE, ZERO, QRat, geometric_tail, qpow


class TraceKind(str, enum.Enum):
    HTILDE = "Htilde"
    HD = "HD"

    @classmethod
    def parse(cls, s) -> TraceKind:
        if isinstance(s, cls):
            return s
        for kind in cls:
            if kind.value.lower() == str(s).lower():
                return kind
        raise ValueError(f"unknown trace kind {s!r} (expected Htilde or HD)")


def _sandwich(left, x: Element, right) -> QRat:
    # h(left * x * right) for monomials left, right
    total = ZERO
    for m, c in x.terms:
        p = mono_mul(left, m)
        if p is None:
            continue
        p = mono_mul(p, right)
        if p is None or p.k != p.l:
            continue
        total += c * haar_monomial(p)
    return total


def htilde_phi(x, m: int) -> QRat:
    """Semifinite trace of x Phi_m, using Phi_m = sum of two rank-one maps."""
    x = as_element(x)
    if m == 0:
        return haar(x)
    a = abs(m)
    if m > 0:
        return _sandwich(A(0, a), x, A(a, 0)) + _sandwich(B(0, 0, a), x, B(a, 0, 0))
    return _sandwich(A(a, 0), x, A(0, a)) + _sandwich(B(a, 0, 0), x, B(0, 0, a))


def hd_phi(x, m: int) -> QRat:
    """Modular weight of x Phi_m: the degree-d part picks up q^(2(m+d))."""
    x = as_element(x)
    parts: dict[int, list] = {}
    for mono, c in x.terms:
        parts.setdefault(mono.degree, []).append((mono, c))
    total = ZERO
    for d, terms in parts.items():
        v = htilde_phi(Element(terms), m)
        if v:
            total += qpow(2 * (m + d)) * v
    return total


def trace_phi(x, m: int, kind: TraceKind) -> QRat:
    return hd_phi(x, m) if TraceKind.parse(kind) is TraceKind.HD else htilde_phi(x, m)


@dataclass(frozen=True)
class GradedSeq:
    """m -> trace(x Phi_m): explicit for |m| <= M, sum of c q^(2s|m|) beyond."""

    window: dict = field(hash=False)
    tail_plus: tuple = ()
    tail_minus: tuple = ()
    M: int = 0

    def tail_value(self, m: int) -> QRat:
        tail = self.tail_plus if m > 0 else self.tail_minus
        a = abs(m)
        return sum((c * qpow(2 * s * a) for s, c in tail), ZERO)

    def __getitem__(self, m: int) -> QRat:
        if abs(m) <= self.M:
            return self.window[m]
        return self.tail_value(m)

    def constant_part(self, side: str) -> QRat:
        tail = self.tail_plus if side == "plus" else self.tail_minus
        return next((c for s, c in tail if s == 0), ZERO)

    def to_json(self) -> dict:
        return {
            "window": {str(m): v.canonical_text() for m, v in sorted(self.window.items())},
            "tail_plus": [[s, c.canonical_text()] for s, c in self.tail_plus],
            "tail_minus": [[s, c.canonical_text()] for s, c in self.tail_minus],
            "M": self.M,
        }


def _fit_tail(values: list, S: int, m0: int) -> list:
    """Solve values[j] = sum_s c_s q^(2s(m0+j)), j = 0..S, exactly.

    Repeatedly applying (shift - q^(2i)) to the data kills the i-th exponent;
    the leading entries of the resulting table give a triangular system for
    d_s = c_s q^(2 s m0).
    """
    ys = [qpow(2 * s) for s in range(S + 1)]
    row = list(values)
    heads = [row[0]]
    for i in range(S):
        row = [row[j + 1] - ys[i] * row[j] for j in range(len(row) - 1)]
        heads.append(row[0])
    # back substitution with weights prod_{t < i} (y_s - y_t)
    d = [ZERO] * (S + 1)
    for i in range(S, -1, -1):
        acc = heads[i]
        for s in range(i + 1, S + 1):
            if d[s]:
                p = ONE
                for t in range(i):
                    p = p * (ys[s] - ys[t])
                acc = acc - d[s] * p
        piv = ONE
        for t in range(i):
            piv = piv * (ys[i] - ys[t])
        d[i] = acc / piv
    return [(s, d[s] * qpow(-2 * s * m0)) for s in range(S + 1) if d[s]]


def _structural_bounds(x: Element) -> tuple[int, int]:
    index = max((max(m.k, m.l) for m, _ in x.terms), default=0)
    nmax = max((abs(m.n) for m, _ in x.terms), default=0)
    return index, nmax


def build_seq(x, kind: TraceKind, extra: int = 0) -> GradedSeq:
    """Window plus verified geometric tails for m -> trace(x Phi_m).

    ``extra`` enlarges the window, which must not change any reduction.
    """
    x = as_element(x)
    kind = TraceKind.parse(kind)
    index, nmax = _structural_bounds(x)
    S = index + nmax + 2
    M = index + (S + 1) + 4 + extra
    check = 4

    def f(m):
        return trace_phi(x, m, kind)

    window = {m: f(m) for m in range(-M, M + 1)}
    m0 = M - S
    tails = []
    for sign in (1, -1):
        vals = [window[sign * (m0 + j)] for j in range(S + 1)]
        tail = _fit_tail(vals, S, m0)
        probe = [sign * m for m in range(M - 2, M + 1)]
        probe += [sign * m for m in range(M + 1, M + 1 + check)]
        for m in probe:
            actual = window[m] if abs(m) <= M else f(m)
            fitted = sum((c * qpow(2 * s * abs(m)) for s, c in tail), ZERO)
            if actual != fitted:
                raise TailFitError(
                    f"tail fit unverified at m = {m} (exponent bound {S} too small?)"
                )
        tails.append(tuple(tail))
    return GradedSeq(window=window, tail_plus=tails[0], tail_minus=tails[1], M=M)


def residue_half(seq: GradedSeq) -> QRat:
    """Residue at r = 1/2 of sum_m f(m) (1 + m^2)^(-r).

    A constant one-sided tail c behaves like c * zeta(2r) up to a function
    holomorphic at r = 1/2, and zeta(2r) has residue 1/2 there.  Decaying
    tails and the finite window give holomorphic contributions.
    """
    return (seq.constant_part("plus") + seq.constant_part("minus")) / 2


def eta_residue(seq: GradedSeq) -> QRat:
    """Exact signed sum sum_{m>0} f(m) - sum_{m<0} f(m).

    The eta integral carries the factor C_r = sqrt(pi) Gamma(r-1/2)/Gamma(r),
    and Gamma(r-1/2) ~ 1/(r-1/2) with Gamma(1/2) = sqrt(pi), so Res C_r = 1
    and the residue is this signed sum itself.
    """
    for s, c in seq.tail_plus + seq.tail_minus:
        if s == 0:
            raise EtaDivergent("eta divergent: the sequence has a constant tail")
    M = seq.M
    total = ZERO
    for m in range(1, M + 1):
        total += seq.window[m] - seq.window[-m]
    for s, c in seq.tail_plus:
        total += geometric_tail(c, s, M + 1, "plus")
    for s, c in seq.tail_minus:
        total -= geometric_tail(c, s, -(M + 1), "minus")
    return total


def full_sum(seq: GradedSeq) -> QRat:
    """sum over all m of f(m); needs both tails to decay."""
    for s, c in seq.tail_plus + seq.tail_minus:
        if s == 0:
            raise EtaDivergent("sum diverges: the sequence has a constant tail")
    total = sum(seq.window.values(), ZERO)
    for s, c in seq.tail_plus:
        total += geometric_tail(c, s, seq.M + 1, "plus")
    for s, c in seq.tail_minus:
        total += geometric_tail(c, s, -(seq.M + 1), "minus")
    return total


def dixmier(x, kind: TraceKind) -> QRat:
    """Common value of the Dixmier traces of x (1 + D^2)^(-1/2)."""
    return 2 * residue_half(build_seq(x, kind))
