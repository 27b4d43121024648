import pytest
from hypothesis import given, settings, strategies as st

from conftest import monomials
from qsu2 import graded
from qsu2.algebra import A, B, Element, haar, unit
from qsu2.errors import EtaDivergent, TailFitError
from qsu2.graded import (
    GradedSeq, TraceKind, build_seq, dixmier, eta_residue, full_sum, hd_phi, htilde_phi,
    residue_half,
)
from qsu2.qfield import ONE, ZERO, eval_at, q_integer, qpow

HT, HD = TraceKind.HTILDE, TraceKind.HD


def test_htilde_of_unit():
    for m in range(-8, 9):
        assert htilde_phi(unit(), m) == qpow(max(0, -2 * m))


@pytest.mark.parametrize("k", range(0, 6))
def test_htilde_tables(k):
    for m in range(-8, 10):
        a = htilde_phi(A(k, k), m)
        b = htilde_phi(B(k, 0, k), m)
        if m >= k + 1:
            assert a == ONE and b == ZERO
        elif m >= 0:
            assert a == qpow(2 * (k - m + 1))
            assert b == qpow(2 * (k - m)) * (ONE - qpow(2))
        else:
            assert a == qpow(2 * (k + abs(m) + 1))
            assert b == qpow(2 * (abs(m) + k)) * (ONE - qpow(2))


def test_htilde_examples():
    assert [htilde_phi(A(1, 1), m) for m in (2, 1, 0, -1)] == [ONE, qpow(2), qpow(4), qpow(6)]
    assert htilde_phi(B(1, 0, 1), 1) == ONE - qpow(2)
    assert htilde_phi(B(1, 0, 1), 2) == ZERO


@pytest.mark.parametrize("k", range(0, 6))
def test_hd_tables(k):
    for m in range(-8, 10):
        assert hd_phi(unit(), m) == qpow(max(0, 2 * m))
        if m >= k + 1:
            assert hd_phi(A(k, k), m) == qpow(2 * m)
            assert hd_phi(B(k, 0, k), m) == ZERO
        else:
            assert hd_phi(A(k, k), m) == qpow(2 * k + 2)
            assert hd_phi(B(k, 0, k), m) == qpow(2 * k) * (ONE - qpow(2))


def test_off_degree_traces_vanish():
    for m in range(-4, 5):
        assert htilde_phi(A(3, 1), m) == ZERO
        assert hd_phi(B(2, 0, 0), m) == ZERO
        assert htilde_phi(B(2, 1, 2), m) == ZERO


def test_build_seq_examples():
    s = build_seq(unit(), HT)
    assert s.tail_plus == ((0, ONE),) and s.tail_minus == ((1, ONE),)
    s = build_seq(A(1, 1), HD)
    assert s.tail_plus == ((1, ONE),) and s.tail_minus == ((0, qpow(4)),)


def test_build_seq_circle_projection_minus_tail():
    # the m <= -1 row is h(Tt_|m| B(1,0,1) Tt_|m|^*) = q^(2|m|) q^2 (1 - q^2)
    s = build_seq(B(1, 0, 1), HT)
    assert s.tail_plus == ()
    assert s.tail_minus == ((1, qpow(2) * (ONE - qpow(2))),)
    for m in range(1, 6):
        assert s[-m] == qpow(2 * m) * qpow(2) * (ONE - qpow(2))


@given(monomials(hi=4), st.sampled_from(list(TraceKind)))
@settings(max_examples=30)
def test_tails_verify_and_extend(m, kind):
    s = build_seq(m, kind)
    for j in range(s.M + 1, s.M + 8):
        assert s[j] == graded.trace_phi(m, j, kind)
        assert s[-j] == graded.trace_phi(m, -j, kind)
    exps = [e for e, _ in s.tail_plus]
    assert len(exps) == len(set(exps))


def test_tail_fit_failure_is_reported(monkeypatch):
    # a sequence that is not eventually geometric with small exponents
    x = Element.of(A(1, 1))
    real = graded.trace_phi
    monkeypatch.setattr(graded, "trace_phi", lambda y, m, kind: real(y, m, kind) + (m * m if m > 0 else 0))
    with pytest.raises(TailFitError, match="tail fit unverified"):
        build_seq(x, HT)


def test_residue_examples():
    assert residue_half(build_seq(unit(), HD)) == ONE / 2
    for k in range(6):
        assert residue_half(build_seq(A(k, k), HD)) == qpow(2 * k + 2) / 2
        assert residue_half(build_seq(B(k, 0, k), HD)) == qpow(2 * k) * (ONE - qpow(2)) / 2


@pytest.mark.parametrize("k", range(1, 7))
def test_eta_examples(k):
    t = Element.of(A(k, 0))
    x = t.adjoint() * t - t * t.adjoint()
    got = eta_residue(build_seq(x, HT))
    assert got == k - qpow(2) * (ONE + qpow(2)) * q_integer(k)
    tt = Element.of(B(k, 0, 0))
    x = tt.adjoint() * tt - tt * tt.adjoint()
    assert eta_residue(build_seq(x, HT)) == -(ONE + qpow(2)) * (ONE - qpow(2 * k))


def test_eta_of_zero_and_divergence():
    assert eta_residue(build_seq(Element(), HT)) == ZERO
    with pytest.raises(EtaDivergent, match="eta divergent"):
        eta_residue(build_seq(unit(), HT))


def test_dixmier_examples():
    for k in range(6):
        assert dixmier(A(k, k), HT) == ONE
        assert dixmier(B(k, 0, k), HT) == ZERO
        assert dixmier(A(k, k), HD) == qpow(2 * k + 2) == haar(A(k, k))


@given(monomials(hi=5))
@settings(max_examples=40)
def test_hd_residue_is_faithful_on_monomials(m):
    assert dixmier(m, HD) == haar(m)


@given(monomials(hi=5))
@settings(max_examples=40)
def test_htilde_residue_is_degenerate(m):
    want = ONE if (m.kind == "A" and m.k == m.l) else ZERO
    assert dixmier(m, HT) == want


@pytest.mark.parametrize("x", [Element.of(B(2, 0, 2)), Element.of(A(0, 0)) - Element.of(A(2, 2)),
                               Element.of(B(1, 0, 1)) - Element.of(B(3, 0, 3))])
def test_decomposition_consistency(x):
    # decaying sequences: exact total against numeric partial sums at q = 1/2
    s = build_seq(x, HT)
    exact = eval_at(full_sum(s), 0.5)
    partial = sum(eval_at(htilde_phi(x, m), 0.5) for m in range(-60, 61))
    assert exact == pytest.approx(partial, abs=1e-12)


def test_window_size_does_not_change_reductions():
    for x in (unit(), Element.of(A(2, 2)), Element.of(B(3, 0, 3))):
        for kind in TraceKind:
            assert residue_half(build_seq(x, kind)) == residue_half(build_seq(x, kind, extra=5))


def test_seq_json():
    s = build_seq(A(1, 1), HD)
    rec = s.to_json()
    assert rec["M"] == s.M
    assert rec["tail_plus"] == [[1, "(1)/(1)"]]
    assert set(rec["window"]) == {str(m) for m in range(-s.M, s.M + 1)}


def test_trace_kind_parse():
    assert TraceKind.parse("hd") is HD and TraceKind.parse("Htilde") is HT
    with pytest.raises(ValueError):
        TraceKind.parse("nope")
    assert isinstance(build_seq(unit(), "HD"), GradedSeq)
