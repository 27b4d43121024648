import os

import hypothesis
from hypothesis import strategies as st

from qsu2.algebra import A, B, Element
from qsu2.qfield import QPoly, QRat

hypothesis.settings.register_profile("default", max_examples=60, deadline=None)
hypothesis.settings.register_profile("fast", max_examples=10, deadline=None)
hypothesis.settings.register_profile("thorough", max_examples=500, deadline=None)
hypothesis.settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


small_ints = st.integers(min_value=-5, max_value=5)


@st.composite
def polys(draw, max_degree=4):
    coeffs = draw(st.lists(small_ints, min_size=0, max_size=max_degree + 1))
    return QPoly(coeffs)


@st.composite
def qrats(draw, nonzero=False):
    num = draw(polys())
    den = draw(polys().filter(bool))
    x = QRat(num, den)
    if nonzero and not x:
        x = QRat(1)
    return x


@st.composite
def monomials(draw, hi=6):
    k = draw(st.integers(0, hi))
    l = draw(st.integers(0, hi))
    if draw(st.booleans()):
        return A(k, l)
    return B(k, draw(st.integers(-hi, hi)), l)


@st.composite
def elements(draw, max_terms=4, hi=5):
    terms = draw(st.lists(st.tuples(monomials(hi=hi), qrats()), max_size=max_terms))
    return Element(terms)
