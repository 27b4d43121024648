"""The acceptance criteria as runnable checks.

Each criterion returns a :class:`CriterionResult`; a criterion passes only if
every comparison holds at its tolerance and it finished inside its time
budget.  Random samples use fixed seeds so runs are reproducible.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field

from .algebra import A, B, Element, Monomial, haar, haar_b_power, kms_defect, mono_mul, unit
from .graded import TraceKind, build_seq, dixmier, htilde_phi, residue_half
from .ktheory import Tk, Ttk, evaluate_htilde, generator_relation_check, mapping_cone_pairing
from .oracle import (
    TruncationSpec,
    haar_num,
    homomorphism_check,
    path_matrix,
    relation_check_num,
    residue_num,
    table_check,
    trace_phi_num,
)
from .qfield import ONE, ZERO, eval_at, q_integer, qpow
from .spectral_flow import (
    kernel_term_modular,
    make_modular_unitary,
    modular_defect,
    modular_sf,
    partial_iso,
    semifinite_sf,
)


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    seconds: float = 0.0
    budget: float | None = None
    failures: list = field(default_factory=list)
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        budget = f" (budget {self.budget:g} s)" if self.budget else ""
        extra = f" - {self.detail}" if self.detail else ""
        return f"[{status}] criterion {self.number}: {self.name} in {self.seconds:.2f} s{budget}{extra}"


def _timed(number, name, budget, body) -> CriterionResult:
    t0 = time.perf_counter()
    failures, detail = body()
    dt = time.perf_counter() - t0
    ok = not failures and (budget is None or dt < budget)
    if failures:
        detail = f"{len(failures)} failures, first: {failures[0]}"
    elif budget is not None and dt >= budget:
        detail = f"over time budget ({dt:.2f} s)"
    return CriterionResult(number, name, ok, dt, budget, failures, detail)


def monomials_up_to(index: int, nmax: int = None) -> list[Monomial]:
    nmax = index if nmax is None else nmax
    out = [A(k, l) for k in range(index + 1) for l in range(index + 1)]
    out += [B(k, n, l) for k in range(index + 1) for n in range(-nmax, nmax + 1) for l in range(index + 1)]
    return out


def _random_monomial(rng: random.Random, hi: int = 9) -> Monomial:
    if rng.random() < 0.5:
        return A(rng.randint(0, hi), rng.randint(0, hi))
    return B(rng.randint(0, hi), rng.randint(-hi, hi), rng.randint(0, hi))


def criterion_1(kmax: int = 12) -> CriterionResult:
    def body():
        bad = []
        for k in range(1, kmax + 1):
            got = semifinite_sf(partial_iso("T", k))
            if got != -qpow(4) * q_integer(k):
                bad.append(f"T_{k}: {got}")
            got = semifinite_sf(partial_iso("Ttilde", k))
            if got != -qpow(2) * (ONE - qpow(2 * k)):
                bad.append(f"Ttilde_{k}: {got}")
        return bad, f"k = 1..{kmax}, both families"

    return _timed(1, "semifinite spectral flow closed forms", 5.0, body)


def criterion_2(kmax: int = 12) -> CriterionResult:
    def body():
        bad = []
        for k in range(1, kmax + 1):
            got = modular_sf(make_modular_unitary(partial_iso("T", k)))
            if got != k * qpow(2) * (ONE - qpow(2 * k)):
                bad.append(f"u(T_{k}): {got}")
            got = modular_sf(make_modular_unitary(partial_iso("Ttilde", k)))
            if got != k * (ONE - qpow(2)) * (ONE - qpow(2 * k)):
                bad.append(f"u(Ttilde_{k}): {got}")
        return bad, f"k = 1..{kmax}, both families"

    return _timed(2, "modular index pairings", 5.0, body)


def criterion_3(kmax: int = 10) -> CriterionResult:
    def body():
        bad = []
        if residue_half(build_seq(unit(), TraceKind.HD)) != ONE / 2:
            bad.append("one")
        for k in range(kmax + 1):
            if residue_half(build_seq(A(k, k), TraceKind.HD)) != qpow(2 * k + 2) / 2:
                bad.append(f"A({k},{k})")
            want = qpow(2 * k) * (ONE - qpow(2)) / 2
            if residue_half(build_seq(B(k, 0, k), TraceKind.HD)) != want:
                bad.append(f"B({k},0,{k})")
        return bad, f"k = 0..{kmax}"

    return _timed(3, "modular residue table", 2.0, body)


def criterion_4(index: int = 5) -> CriterionResult:
    def body():
        bad = []
        for k in range(index + 1):
            if dixmier(A(k, k), TraceKind.HTILDE) != ONE:
                bad.append(f"Htilde A({k},{k})")
        monos = monomials_up_to(index)
        for m in monos:
            if m.kind == "B" and dixmier(m, TraceKind.HTILDE) != ZERO:
                bad.append(f"Htilde {m}")
            if dixmier(m, TraceKind.HD) != haar(m):
                bad.append(f"HD {m}")
        return bad, f"{len(monos)} spanning monomials"

    return _timed(4, "Dixmier degeneracy and faithfulness", 5.0, body)


def criterion_5(nmax: int = 8) -> CriterionResult:
    def body():
        bad = [n for n in range(1, nmax + 1)
               if haar_b_power(n) != (ONE - qpow(2)) / (ONE - qpow(2 * n + 2))]
        return bad, f"n = 1..{nmax}"

    return _timed(5, "Haar values of b powers", 1.0, body)


def criterion_6(kmax: int = 12, rel_max: int = 8) -> CriterionResult:
    def body():
        bad = []
        for k in range(1, kmax + 1):
            for gen, fam in ((Tk(k), "T"), (Ttk(k), "Ttilde")):
                if evaluate_htilde(mapping_cone_pairing(gen)) != semifinite_sf(partial_iso(fam, k)):
                    bad.append(str(gen))
        bad += [f"relation k={k}" for k in range(1, rel_max + 1) if not generator_relation_check(k)]
        return bad, f"k = 1..{kmax}; relation k = 1..{rel_max}"

    return _timed(6, "index pairing equals spectral flow", 10.0, body)


def exhaustive_law_failures(index: int = 4) -> list:
    """Associativity, involution and grading on every triple with indices <= index.

    All products go through mono_mul; pairwise tables are precomputed so the
    triple loop becomes an array comparison.
    """
    import numpy as np

    small = monomials_up_to(index)
    ids: dict = {}

    def ident(m):
        if m is None:
            return -1
        return ids.setdefault(m, len(ids))

    for m in small:
        ident(m)
    ns = len(small)
    xy = np.array([[ident(mono_mul(x, y)) for y in small] for x in small], dtype=np.int32)
    middle = [m for m, i in sorted(ids.items(), key=lambda kv: kv[1])]
    lt = np.array([[ident(mono_mul(a, z)) for z in small] for a in middle], dtype=np.int32)
    rt = np.array([[ident(mono_mul(x, b)) for b in middle] for x in small], dtype=np.int32)
    bad = []
    for i in range(ns):
        # left[j, c] = (x_i y_j) z_c ; right[j, c] = x_i (y_j z_c)
        row = xy[i]
        left = np.where(row[:, None] >= 0, lt[np.maximum(row, 0)], -1)
        right = np.where(xy >= 0, rt[i][np.maximum(xy, 0)], -1)
        for j, c in np.argwhere(left != right)[:5]:
            bad.append(f"assoc {small[i]} {small[j]} {small[c]}")
    for x in small:
        for y in small:
            p = mono_mul(x, y)
            rev = mono_mul(y.adjoint(), x.adjoint())
            if (p.adjoint() if p is not None else None) != rev:
                bad.append(f"involution {x} {y}")
            if p is not None and p.bidegree != tuple(a + b for a, b in zip(x.bidegree, y.bidegree)):
                bad.append(f"grading {x} {y}")
    return bad


def algebra_law_failures(seed: int = 7, n_random: int = 500, n_kms: int = 200) -> list:
    bad = exhaustive_law_failures(4)
    rng = random.Random(seed)
    for _ in range(n_random):
        x, y, z = (_random_monomial(rng, 12) for _ in range(3))
        xy, yz = mono_mul(x, y), mono_mul(y, z)
        left = None if xy is None else mono_mul(xy, z)
        right = None if yz is None else mono_mul(x, yz)
        if left != right:
            bad.append(f"assoc {x} {y} {z}")
        if (xy.adjoint() if xy is not None else None) != mono_mul(y.adjoint(), x.adjoint()):
            bad.append(f"involution {x} {y}")
    one = unit()
    for m in monomials_up_to(6):
        e = Element.of(m)
        if not ((one * e).structurally_equal(e) and (e * one).structurally_equal(e)):
            bad.append(f"unit {m}")
    for _ in range(n_kms):
        x, y = _random_monomial(rng, 6), _random_monomial(rng, 6)
        if kms_defect(x, y) != ZERO:
            bad.append(f"kms {x} {y}")
    for m in monomials_up_to(5):
        if m.bidegree != (0, 0) and haar(m) != ZERO:
            bad.append(f"gauge {m}")
    return bad


def criterion_7() -> CriterionResult:
    def body():
        return algebra_law_failures(), "associativity, involution, unit, KMS, gauge"

    return _timed(7, "algebraic property suites", 10.0, body)


def oracle_failures(t: TruncationSpec, haar_tol=1e-8, phi_tol=1e-8, hom_tol=1e-10,
                    res_tol=1e-3, rel_tol=1e-8, mmax: int = 6) -> tuple[list, str]:
    bad = []
    family = monomials_up_to(4, 2)
    # never tighter than the truncation allows (negligible at the default K = 40, q0 = 0.5)
    haar_tol = max(haar_tol, 10 * t.q0 ** (2 * (t.K - 4)))
    phi_tol = max(phi_tol, 10 * t.q0 ** (2 * (t.K - 4 - mmax)))
    worst = {"haar": 0.0, "phi": 0.0, "hom": 0.0, "res": 0.0, "rel": 0.0}
    for m in family:
        err = abs(haar_num(m, t) - eval_at(haar(m), t.q0))
        worst["haar"] = max(worst["haar"], err)
        if err > haar_tol:
            bad.append(f"haar {m}: {err:.2e}")
        op = path_matrix(m, t)
        for j in range(-mmax, mmax + 1):
            err = abs(trace_phi_num(m, j, TraceKind.HTILDE, t, op, warn=False) - eval_at(htilde_phi(m, j), t.q0))
            worst["phi"] = max(worst["phi"], err)
            if err > phi_tol:
                bad.append(f"htilde {m} m={j}: {err:.2e}")
    small = monomials_up_to(2, 1)
    for x in small:
        rep = table_check(x, t, hom_tol)
        worst["hom"] = max(worst["hom"], rep.residual)
        if not rep.passed:
            bad.append(rep.check)
    rng = random.Random(11)
    for _ in range(12):
        x, y = rng.choice(small), rng.choice(small)
        rep = homomorphism_check(x, y, t, hom_tol)
        worst["hom"] = max(worst["hom"], rep.residual)
        if not rep.passed:
            bad.append(rep.check)
    cases = [unit()] + [Element.of(A(k, k)) for k in range(3)] + [Element.of(B(k, 0, k)) for k in range(3)]
    for x in cases:
        for kind in TraceKind:
            est = residue_num(x, kind, t, tol=res_tol)
            err = abs(est.value - eval_at(residue_half(build_seq(x, kind)), t.q0))
            worst["res"] = max(worst["res"], err)
            if err > res_tol:
                bad.append(f"residue {x.pretty()} {kind.value}: {err:.2e}")
    for rep in relation_check_num(t, rel_tol):
        worst["rel"] = max(worst["rel"], rep.residual)
        if not rep.passed:
            bad.append(f"{rep.check}: {rep.residual:.2e}")
    detail = ", ".join(f"{k} {v:.1e}" for k, v in worst.items())
    detail += f" (tolerances haar {haar_tol:.0e}, htilde {phi_tol:.0e})"
    return bad, detail


def criterion_8(t: TruncationSpec | None = None) -> CriterionResult:
    t = t or TruncationSpec(40, 6, 0.5)
    name = "oracle cross-validation" if t == TruncationSpec(40, 6, 0.5) else "oracle subset"
    return _timed(8, f"{name} at q0={t.q0}, K={t.K}, N={t.N}", 40.0,
                  lambda: oracle_failures(t))


def criterion_9(kmax: int = 12) -> CriterionResult:
    def body():
        bad = []
        for k in range(1, kmax + 1):
            for fam in ("T", "Ttilde"):
                u = make_modular_unitary(partial_iso(fam, k))
                if haar(modular_defect(u).trace()) != ZERO:
                    bad.append(f"{fam}_{k}")
                kernel_term_modular(u)
        return bad, f"k = 1..{kmax}, both families"

    return _timed(9, "modular kernel term cancels", 5.0, body)


SYMBOLIC = (criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6,
            criterion_7, criterion_9)


def run_all(quick: bool = False, trunc: TruncationSpec | None = None, stream=None) -> list[CriterionResult]:
    """Run the criteria in order; ``quick`` skips the numeric oracle."""
    results = []
    checks = list(SYMBOLIC[:7]) + ([] if quick else [lambda: criterion_8(trunc)]) + [SYMBOLIC[7]]
    for check in checks:
        res = check()
        results.append(res)
        if stream is not None:
            print(res.line(), file=stream, flush=True)
    return results
