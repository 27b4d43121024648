"""Text syntax for field values and algebra elements.

Expressions are parsed with :mod:`ast` and evaluated over a small whitelist:
integer literals, ``q``, ``+ - * / ^ **`` and the monomial constructors

    A(k,l)  B(k,n,l)  T(k)  Tt(k)  U(n)  adj(x)
    pv  pw  Smu  Snu  Sxi  one

Both the pretty and the canonical output forms of :class:`QRat` and
:class:`Element` parse back to the same value.
"""

from __future__ import annotations

import ast
import re

from .algebra import A, B, Element, Monomial, as_element, unit
from .errors import ParseError
from .qfield import ONE, Q, QRat

_NAMES = {
    "pv": lambda: Element.of(A(0, 0)),
    "pw": lambda: Element.of(B(0, 0, 0)),
    "Smu": lambda: Element.of(A(1, 0)),
    "Snu": lambda: Element.of(B(1, 0, 0)),
    "Sxi": lambda: Element.of(B(0, 1, 0)),
    "one": unit,
    "q": lambda: Q,
}

_CALLS = {
    "A": (2, lambda k, l: Element.of(A(k, l))),
    "B": (3, lambda k, n, l: Element.of(B(k, n, l))),
    "T": (1, lambda k: Element.of(A(k, 0))),
    "Tt": (1, lambda k: Element.of(B(k, 0, 0))),
    "U": (1, lambda n: Element.of(B(0, n, 0))),
}


def _int_arg(node) -> int:
    v = _eval(node)
    if isinstance(v, QRat) and v.num.is_constant() and v.den.is_constant():
        c = v.num.lead / v.den.lead if v else 0
        if c == int(c):
            return int(c)
    raise ParseError(f"expected an integer index, got {ast.unparse(node)!r}")


def _add(a, b):
    if isinstance(a, Element) or isinstance(b, Element):
        return as_element(a) + as_element(b)
    return a + b


def _mul(a, b):
    if isinstance(a, Element) and isinstance(b, Element):
        return a * b
    if isinstance(a, Element):
        return a.scale(b)
    if isinstance(b, Element):
        return b.scale(a)
    return a * b


def _eval(node):
    if isinstance(node, ast.Expression):
        return _eval(node.body)
    if isinstance(node, ast.Constant):
        if isinstance(node.value, bool) or not isinstance(node.value, int):
            raise ParseError(f"only integer literals are allowed, got {node.value!r}")
        return QRat(node.value)
    if isinstance(node, ast.Name):
        if node.id not in _NAMES:
            raise ParseError(f"unknown name {node.id!r}")
        return _NAMES[node.id]()
    if isinstance(node, ast.UnaryOp):
        v = _eval(node.operand)
        if isinstance(node.op, ast.USub):
            return -v
        if isinstance(node.op, ast.UAdd):
            return v
    if isinstance(node, ast.BinOp):
        a, b = _eval(node.left), _eval(node.right)
        op = node.op
        if isinstance(op, ast.Add):
            return _add(a, b)
        if isinstance(op, ast.Sub):
            return _add(a, -b)
        if isinstance(op, ast.Mult):
            return _mul(a, b)
        if isinstance(op, ast.Div):
            if isinstance(b, Element):
                raise ParseError("cannot divide by an algebra element")
            if not b:
                raise ParseError("division by zero")
            return a.scale(ONE / b) if isinstance(a, Element) else a / b
        if isinstance(op, ast.Pow):
            e = _int_arg(node.right)
            if isinstance(a, Element):
                if e < 0:
                    raise ParseError("negative power of an algebra element")
                return a ** e
            return a ** e
    if isinstance(node, ast.Call) and isinstance(node.func, ast.Name):
        name = node.func.id
        if node.keywords:
            raise ParseError("keyword arguments are not allowed")
        if name == "adj":
            if len(node.args) != 1:
                raise ParseError("adj takes one argument")
            return as_element(_eval(node.args[0])).adjoint()
        if name in _CALLS:
            arity, make = _CALLS[name]
            if len(node.args) != arity:
                raise ParseError(f"{name} takes {arity} integer arguments")
            try:
                return make(*(_int_arg(a) for a in node.args))
            except ValueError as exc:
                raise ParseError(str(exc)) from None
        raise ParseError(f"unknown function {name!r}")
    raise ParseError(f"unsupported syntax: {ast.unparse(node)!r}")


def parse_expr(text: str):
    """Parse to a QRat or an Element, whichever the expression denotes."""
    src = re.sub(r"\^", "**", text.strip())
    if not src:
        raise ParseError("empty expression")
    try:
        tree = ast.parse(src, mode="eval")
    except SyntaxError as exc:
        raise ParseError(f"cannot parse {text!r}: {exc.msg}") from None
    try:
        return _eval(tree)
    except RecursionError:
        raise ParseError("expression nested too deeply") from None


def parse_qrat(text: str) -> QRat:
    v = parse_expr(text)
    if not isinstance(v, QRat):
        raise ParseError(f"{text!r} is an algebra element, not a rational function")
    return v


def parse_element(text: str) -> Element:
    return as_element(parse_expr(text))


def parse_monomial(text: str) -> Monomial:
    e = parse_element(text)
    if len(e.terms) != 1 or e.terms[0][1] != ONE:
        raise ParseError(f"{text!r} is not a single monomial")
    return e.terms[0][0]
