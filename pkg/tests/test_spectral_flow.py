import pytest

from qsu2.algebra import A, B, Element, unit
from qsu2.errors import NotModular, NotPartialIsometry
from qsu2.graded import TraceKind
from qsu2.qfield import ONE, ZERO, Q, q_integer, qpow
from qsu2.spectral_flow import (
    Mat2, commutator_D, eta_term, eta_term_modular, kernel_term, kernel_term_modular,
    make_modular_unitary, make_partial_iso, modular_sf, modular_terms, partial_iso, path_term,
    semifinite_sf, semifinite_terms,
)

KS = range(1, 13)


def test_commutator_examples():
    for k in range(4):
        t = Element.of(A(k, 0))
        assert commutator_D(t) == k * t
        assert t * commutator_D(t.adjoint()) == -k * Element.of(A(k, k))
    assert commutator_D(unit()) == Element()
    m = Mat2(unit(), Element.of(A(0, 2)), Element.of(A(2, 0)), unit())
    assert commutator_D(m).e[1] == -2 * Element.of(A(0, 2))


@pytest.mark.parametrize("k", range(1, 7))
def test_semifinite_terms(k):
    t = semifinite_terms(partial_iso("T", k))
    assert t.path == ONE * -k / 2
    assert t.eta == k - qpow(2) * (ONE + qpow(2)) * q_integer(k)
    assert t.kernel == qpow(2) * (ONE - qpow(2 * k)) / 2
    tt = semifinite_terms(partial_iso("Ttilde", k))
    assert tt.path == ZERO
    assert tt.eta == -(ONE + qpow(2)) * (ONE - qpow(2 * k))
    assert tt.kernel == (ONE - qpow(2)) * (ONE - qpow(2 * k)) / 2


@pytest.mark.parametrize("k", KS)
def test_semifinite_closed_forms(k):
    assert semifinite_sf(partial_iso("T", k)) == -qpow(4) * q_integer(k)
    assert semifinite_sf(partial_iso("Ttilde", k)) == -qpow(2) * (ONE - qpow(2 * k))
    assert semifinite_sf(partial_iso("Ttilde", k)) == -qpow(2) * (ONE - qpow(2)) * q_integer(k)


def test_projection_has_zero_flow():
    assert semifinite_sf(partial_iso("T", 0)) == ZERO
    assert modular_sf(make_modular_unitary(partial_iso("T", 0))) == ZERO


@pytest.mark.parametrize("k", KS)
def test_modular_closed_forms(k):
    u = make_modular_unitary(partial_iso("T", k))
    terms = modular_terms(u)
    assert terms.path == k * qpow(2) * (ONE - qpow(2 * k)) / 2
    assert terms.eta == k * qpow(2) * (ONE - qpow(2 * k))
    assert terms.kernel == ZERO
    assert terms.total == k * qpow(2) * (ONE - qpow(2 * k))
    ut = make_modular_unitary(partial_iso("Ttilde", k))
    assert modular_sf(ut) == k * (ONE - qpow(2)) * (ONE - qpow(2 * k))


@pytest.mark.parametrize("k", KS)
def test_kernel_cancellation(k):
    for fam in ("T", "Ttilde"):
        assert kernel_term_modular(make_modular_unitary(partial_iso(fam, k))) == ZERO


@pytest.mark.parametrize("k", [1, 4, 9])
def test_scale_robustness(k):
    for fam in ("T", "Ttilde"):
        v = partial_iso(fam, k)
        assert semifinite_sf(v) == semifinite_sf(v, extra=5)
        u = make_modular_unitary(v)
        assert modular_sf(u) == modular_sf(u, extra=5)


def test_unitary_examples():
    for v in (partial_iso("T", 2), partial_iso("Ttilde", 3), make_partial_iso(A(2, 1))):
        u = make_modular_unitary(v).u
        assert u * u == Mat2.identity()
        assert u.adjoint() == u


def test_sum_of_edges_runs_checks():
    # no value asserted: this only exercises the symbolic checks end to end
    v = Element.of(A(1, 0)) + Element.of(B(1, 0, 0))
    try:
        u = make_modular_unitary(v)
    except (NotModular, NotPartialIsometry):
        return
    assert u.u * u.u == Mat2.identity()


def test_rejects_non_partial_isometry():
    with pytest.raises(NotPartialIsometry):
        make_partial_iso(2 * Element.of(A(1, 0)))
    with pytest.raises(NotPartialIsometry):
        make_partial_iso(Element.of(A(1, 0)) + Element.of(A(2, 0)))
    with pytest.raises(NotPartialIsometry):
        make_partial_iso(Element.of(A(1, 0)) + Element.of(A(0, 1)))
    with pytest.raises(ValueError):
        partial_iso("X", 1)


def test_path_kind_accepts_text():
    v = partial_iso("T", 3)
    assert path_term(v, "Htilde") == path_term(v, TraceKind.HTILDE)
    assert eta_term(v) == 3 - qpow(2) * (ONE + qpow(2)) * q_integer(3)
    assert kernel_term(v) == qpow(2) * (ONE - qpow(6)) / 2
    assert eta_term_modular(make_modular_unitary(v)) == 3 * Q ** 2 * (ONE - qpow(6))
