import random

import pytest
from hypothesis import given, settings, strategies as st

from qsu2.algebra import A, B, Element, is_projection, unit
from qsu2.errors import NotProjection
from qsu2.ktheory import (
    K0FClass, MappingConeClass, PairingResult, Tk, Ttk, evaluate_class, evaluate_htilde,
    generator_relation_check, h_star, haar_of_projection, k1_generator, mapping_cone_pairing,
)
from qsu2.qfield import ONE, ZERO, q_integer, qpow
from qsu2.spectral_flow import partial_iso, semifinite_sf


def test_pairing_examples():
    assert mapping_cone_pairing(Tk(2)).entries == (
        (-1, Element.of(A(2, 2)), 0), (-1, Element.of(A(2, 2)), 1))
    assert mapping_cone_pairing(Ttk(1)).entries == ((-1, Element.of(B(1, 0, 1)), 0),)
    assert mapping_cone_pairing(Tk(1, adjoint=True)).entries == ((1, Element.of(A(1, 1)), 0),)
    assert mapping_cone_pairing(Tk(2)).text() == "-[A(2,2) Phi_0] - [A(2,2) Phi_1]"
    assert mapping_cone_pairing(Tk(1, adjoint=True)).text() == "[A(1,1) Phi_0]"


@pytest.mark.parametrize("k", range(1, 13))
def test_evaluate_htilde(k):
    assert evaluate_htilde(mapping_cone_pairing(Tk(k))) == -qpow(4) * (ONE - qpow(2 * k)) / (ONE - qpow(2))
    assert evaluate_htilde(mapping_cone_pairing(Ttk(k))) == -qpow(2) * (ONE - qpow(2 * k))


@pytest.mark.parametrize("k", range(1, 13))
def test_pairing_agrees_with_spectral_flow(k):
    assert evaluate_htilde(mapping_cone_pairing(Tk(k))) == semifinite_sf(partial_iso("T", k))
    assert evaluate_htilde(mapping_cone_pairing(Ttk(k))) == semifinite_sf(partial_iso("Ttilde", k))


def test_adjoint_negates():
    for k in range(1, 5):
        for g in (Tk, Ttk):
            assert evaluate_htilde(mapping_cone_pairing(g(k, True))) == \
                -evaluate_htilde(mapping_cone_pairing(g(k)))


def test_empty_pairing():
    assert evaluate_htilde(PairingResult()) == ZERO
    assert PairingResult().text() == "0"


def test_pairing_rejects_non_projection():
    with pytest.raises(NotProjection):
        PairingResult(((1, Element.of(A(1, 0)), 0),))
    with pytest.raises(NotProjection):
        haar_of_projection(2 * unit())


def test_h_star_examples():
    assert h_star(K0FClass.make(1)) == ONE
    for k in range(5):
        assert h_star(K0FClass.make(0, {k: 1})) == (ONE - qpow(2)) * qpow(2 * k)
    assert h_star(K0FClass.make(1, {0: -1})) == qpow(2)


@given(st.integers(-5, 5), st.dictionaries(st.integers(0, 8), st.integers(-4, 4), max_size=5))
@settings(max_examples=50)
def test_h_star_lands_in_integer_polys_in_q_squared(u, circles):
    v = h_star(K0FClass.make(u, circles))
    assert v.den.coeffs == (1,)
    for i, c in enumerate(v.num.coeffs):
        assert c.denominator == 1
        if c:
            assert i % 2 == 0


@given(st.dictionaries(st.integers(0, 6), st.integers(-3, 3)),
       st.dictionaries(st.integers(0, 6), st.integers(-3, 3)))
@settings(max_examples=30)
def test_h_star_additive(a, b):
    x, y = K0FClass.make(1, a), K0FClass.make(-2, b)
    assert h_star(x + y) == h_star(x) + h_star(y)
    assert h_star(x - y) == h_star(x) - h_star(y)
    assert h_star(3 * x) == 3 * h_star(x)


def test_evaluation_additive():
    rng = random.Random(7)
    for _ in range(20):
        a = MappingConeClass.make({(rng.choice(["T", "Ttilde"]), rng.randint(1, 6)): rng.randint(-3, 3)
                                   for _ in range(3)})
        b = MappingConeClass.make({(rng.choice(["T", "Ttilde"]), rng.randint(1, 6)): rng.randint(-3, 3)
                                   for _ in range(3)})
        assert evaluate_class(a + b) == evaluate_class(a) + evaluate_class(b)
        assert evaluate_class(a - b) == evaluate_class(a) - evaluate_class(b)


@pytest.mark.parametrize("k", range(1, 9))
def test_generator_relation(k):
    assert generator_relation_check(k)
    assert not generator_relation_check(k, signs=(1, 1, 1, -1))


def test_relation_k1_by_hand():
    lhs = -qpow(4) * q_integer(1)
    rhs = -qpow(4) * q_integer(2) + qpow(4) * q_integer(1) - qpow(2) * (ONE - qpow(4)) + qpow(2) * (ONE - qpow(2))
    assert lhs == rhs


def test_relation_rejects_bad_k():
    with pytest.raises(ValueError):
        generator_relation_check(0)


def test_k1_generator_is_unitary():
    for k in range(1, 4):
        w = k1_generator(k)
        assert w * w.adjoint() == unit() == w.adjoint() * w
        assert all(m.degree == 0 for m, _ in w.terms)
    p = Element.of(B(2, 0, 2))
    assert is_projection(p) and haar_of_projection(p) == qpow(4) * (ONE - qpow(2))
