"""Exact arithmetic in the rational function field Q(q).

Polynomials are tuples of ``gmpy2.mpq`` coefficients in ascending powers of
``q``; the zero polynomial is the empty tuple.  A :class:`QRat` is a reduced
fraction of two polynomials whose denominator is monic, so two values are
equal exactly when their canonical forms are structurally equal.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational

from gmpy2 import mpq

from .errors import DivergentTail, DivisionByZero, PoleError

_ZERO = mpq(0)
_ONE = mpq(1)


def _rational(c) -> mpq:
    if isinstance(c, mpq):
        return c
    if isinstance(c, (int, Fraction, Rational)):
        return mpq(c)
    raise TypeError(f"exact rational expected, got {type(c).__name__}")


def _trim(c: list) -> tuple:
    while c and not c[-1]:
        c.pop()
    return tuple(c)


class QPoly:
    """Polynomial in q with rational coefficients, ``coeffs[i]`` multiplying q^i."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        self.coeffs = _trim([_rational(c) for c in coeffs])

    @classmethod
    def _raw(cls, coeffs: tuple) -> QPoly:
        p = object.__new__(cls)
        p.coeffs = coeffs
        return p

    @classmethod
    def monomial(cls, e: int, c=1) -> QPoly:
        if e < 0:
            raise ValueError("negative exponent in a polynomial")
        c = _rational(c)
        if not c:
            return cls._raw(())
        return cls._raw((_ZERO,) * e + (c,))

    @classmethod
    def constant(cls, c) -> QPoly:
        return cls.monomial(0, c)

    def __len__(self):
        return len(self.coeffs)

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, QPoly):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"QPoly({[str(c) for c in self.coeffs]})"

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lead(self) -> mpq:
        return self.coeffs[-1] if self.coeffs else _ZERO

    def valuation(self) -> int:
        """Lowest power of q with a nonzero coefficient (-1 for zero)."""
        for i, c in enumerate(self.coeffs):
            if c:
                return i
        return -1

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def is_monomial(self) -> bool:
        return sum(1 for c in self.coeffs if c) == 1

    def terms(self):
        return [(i, c) for i, c in enumerate(self.coeffs) if c]

    def shift(self, e: int) -> QPoly:
        """Multiply by q^e; negative e drops that many (zero) low coefficients."""
        if not self.coeffs or e == 0:
            return self
        if e > 0:
            return QPoly._raw((_ZERO,) * e + self.coeffs)
        if any(self.coeffs[:-e]):
            raise ValueError("shift would discard nonzero coefficients")
        return QPoly._raw(self.coeffs[-e:])

    def __neg__(self):
        return QPoly._raw(tuple(-c for c in self.coeffs))

    def __add__(self, other: QPoly) -> QPoly:
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return QPoly._raw(_trim(out))

    def __sub__(self, other: QPoly) -> QPoly:
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, QPoly):
            c = _rational(other)
            if not c:
                return QPoly._raw(())
            return QPoly._raw(tuple(x * c for x in self.coeffs))
        if not self.coeffs or not other.coeffs:
            return QPoly._raw(())
        # both sides are usually sparse (q-powers, 1 - q^2k, ...)
        ta, tb = self.terms(), other.terms()
        out = [_ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, x in ta:
            for j, y in tb:
                out[i + j] += x * y
        return QPoly._raw(_trim(out))

    __rmul__ = __mul__

    def __divmod__(self, other: QPoly):
        if not other.coeffs:
            raise DivisionByZero("polynomial division by zero")
        r = list(self.coeffs)
        db = len(other.coeffs) - 1
        if len(r) <= db:
            return QPoly._raw(()), self
        inv = 1 / other.coeffs[-1]
        low = [(j, c) for j, c in enumerate(other.coeffs[:-1]) if c]
        quot = [_ZERO] * (len(r) - db)
        for i in range(len(r) - 1 - db, -1, -1):
            c = r[i + db]
            if not c:
                continue
            c = c * inv
            quot[i] = c
            r[i + db] = _ZERO
            for j, b in low:
                r[i + j] -= c * b
        return QPoly._raw(_trim(quot)), QPoly._raw(_trim(r))

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def monic(self) -> QPoly:
        if not self.coeffs or self.coeffs[-1] == 1:
            return self
        return self * (1 / self.coeffs[-1])

    def evaluate(self, x):
        """Horner evaluation; exact when ``x`` is an exact rational."""
        acc = x * 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    # text forms

    def canonical_text(self) -> str:
        parts = []
        for i, c in self.terms():
            if i == 0:
                parts.append(str(c))
            elif i == 1:
                parts.append(f"{c}*q")
            else:
                parts.append(f"{c}*q^{i}")
        return " + ".join(parts) if parts else "0"

    def pretty(self) -> str:
        out = ""
        for i, c in self.terms():
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if i == 0:
                body = str(a)
            else:
                qq = "q" if i == 1 else f"q^{i}"
                body = qq if a == 1 else f"{a}*{qq}"
            if not out:
                out = body if sign == "+" else f"-{body}"
            else:
                out += f" {sign} {body}"
        return out or "0"


def poly_gcd(a: QPoly, b: QPoly) -> QPoly:
    """Monic gcd; gcd(0, 0) is taken to be 1 so it can always divide."""
    while b:
        a, b = b, a % b
    return a.monic() if a else QPoly.constant(1)


class QRat:
    """Element of Q(q) kept in canonical form (reduced, monic denominator)."""

    __slots__ = ("num", "den")

    def __init__(self, num=0, den=1):
        if isinstance(num, QRat) or isinstance(den, QRat):
            value = _as_qrat(num) / _as_qrat(den)
            self.num, self.den = value.num, value.den
            return
        num = num if isinstance(num, QPoly) else QPoly.constant(num)
        den = den if isinstance(den, QPoly) else QPoly.constant(den)
        if not den:
            raise DivisionByZero("zero denominator")
        self.num, self.den = _canonical(num, den)

    @classmethod
    def _raw(cls, num: QPoly, den: QPoly) -> QRat:
        x = object.__new__(cls)
        x.num, x.den = num, den
        return x

    @classmethod
    def q_power(cls, e: int, c=1) -> QRat:
        """c * q^e for any integer e."""
        if e >= 0:
            return cls._raw(QPoly.monomial(e, c), _POLY_ONE) if c else ZERO
        return cls(QPoly.constant(c), QPoly.monomial(-e))

    @classmethod
    def from_coeffs(cls, num, den=(1,)) -> QRat:
        return cls(QPoly(num), QPoly(den))

    def __repr__(self):
        return f"QRat({self.canonical_text()!r})"

    def __str__(self):
        return self.pretty()

    def __bool__(self):
        return bool(self.num)

    def __eq__(self, other):
        if isinstance(other, QRat):
            return self.num == other.num and self.den == other.den
        if isinstance(other, (int, Fraction, mpq)):
            return self == QRat(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.num, self.den))

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    # arithmetic

    def __neg__(self):
        return QRat._raw(-self.num, self.den)

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if not other.num:
            return self
        if not self.num:
            return other
        if self.den == other.den:
            return QRat(self.num + other.num, self.den)
        return QRat(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if not self.num or not other.num:
            return ZERO
        if self.den.is_constant() and other.den.is_constant():
            return QRat._raw(self.num * other.num, _POLY_ONE)
        return QRat(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if not other.num:
            raise DivisionByZero("division by the zero rational function")
        return QRat(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return other / self

    def __pow__(self, e: int):
        if not isinstance(e, int):
            return NotImplemented
        if e < 0:
            return ONE / self ** (-e)
        out, base = ONE, self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    # evaluation and text

    def eval_at(self, q0) -> float:
        return eval_at(self, q0)

    def canonical_text(self) -> str:
        return f"({self.num.canonical_text()})/({self.den.canonical_text()})"

    def pretty(self) -> str:
        if self.den.is_constant():
            return self.num.pretty()
        num, den = self.num, self.den
        if den.coeffs[den.valuation()] < 0:
            num, den = -num, -den
        n = num.pretty()
        if len(num.terms()) > 1:
            n = f"({n})"
        return f"{n}/({den.pretty()})"

    def to_record(self) -> dict:
        return {
            "num": [str(c) for c in self.num.coeffs],
            "den": [str(c) for c in self.den.coeffs],
        }

    @classmethod
    def from_record(cls, rec: dict) -> QRat:
        return cls.from_coeffs([mpq(c) for c in rec["num"]], [mpq(c) for c in rec["den"]])


_POLY_ONE = QPoly.constant(1)


def _canonical(num: QPoly, den: QPoly):
    if not num:
        return QPoly._raw(()), _POLY_ONE
    v = min(num.valuation(), den.valuation())
    if v:
        num, den = num.shift(-v), den.shift(-v)
    if not den.is_constant() and not den.is_monomial():
        quot, rem = divmod(num, den)
        if not rem:
            num, den = quot, _POLY_ONE
        else:
            g = poly_gcd(den, num)
            if not g.is_constant():
                num, den = num // g, den // g
    lead = den.coeffs[-1]
    if lead != 1:
        inv = 1 / lead
        num, den = num * inv, den * inv
    return num, den


def _coerce(x):
    if isinstance(x, QRat):
        return x
    if isinstance(x, (int, Fraction, mpq)):
        return QRat(x)
    return NotImplemented


def _as_qrat(x) -> QRat:
    out = _coerce(x)
    if out is NotImplemented:
        raise TypeError(f"cannot interpret {type(x).__name__} as an element of Q(q)")
    return out


ZERO = QRat._raw(QPoly._raw(()), _POLY_ONE)
ONE = QRat(1)
Q = QRat.q_power(1)


def qpow(e: int) -> QRat:
    """q^e as a field element (e may be negative)."""
    return QRat.q_power(e)


def arith(op: str, a: QRat, b: QRat | None = None) -> QRat:
    """Field operation by name: add, sub, mul, div or neg."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    if op == "neg":
        return -a
    raise ValueError(f"unknown field operation {op!r}")


def q_integer(k: int) -> QRat:
    """[k]_q = (1 - q^{2k}) / (1 - q^2) = 1 + q^2 + ... + q^{2(k-1)}."""
    if k < 0:
        raise ValueError("q-integer needs k >= 0")
    coeffs = [0] * (2 * k - 1) if k else []
    for i in range(k):
        coeffs[2 * i] = 1
    return QRat.from_coeffs(coeffs)


def geometric_tail(c: QRat, s: int, m0: int, direction: str = "plus") -> QRat:
    """Closed form of sum_{m >= m0} c q^{2sm} ("plus") or sum_{m <= m0} c q^{2s|m|} ("minus")."""
    if s < 1:
        raise DivergentTail(f"divergent tail: ratio q^{2 * s} does not decay")
    c = _as_qrat(c)
    ratio = ONE - qpow(2 * s)
    if direction == "plus":
        return c * qpow(2 * s * m0) / ratio
    if direction == "minus":
        if m0 <= 0:
            return c * qpow(2 * s * -m0) / ratio
        # the range m <= m0 covers every m <= 0 plus the finite block 1..m0
        finite = sum((qpow(2 * s * m) for m in range(1, m0 + 1)), ZERO)
        return c * (ONE / ratio + finite)
    raise ValueError(f"direction must be 'plus' or 'minus', not {direction!r}")


def eval_at(x: QRat, q0) -> float:
    """Evaluate at a real 0 < q0 < 1 (exactly in Q, then rounded once)."""
    if not 0 < q0 < 1:
        raise ValueError(f"q0 must lie in (0, 1), got {q0}")
    x = _as_qrat(x)
    r = mpq(q0) if not isinstance(q0, Fraction) else mpq(q0.numerator, q0.denominator)
    d = x.den.evaluate(r)
    if not d:
        raise PoleError(f"pole of {x.pretty()} at q = {q0}")
    return float(x.num.evaluate(r) / d)
