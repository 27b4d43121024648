"""Numeric model on a truncated GNS basis, used to cross-check the exact core.

Basis vectors e_{k,n,l} (0 <= k, l <= K, |n| <= N) are ordered
lexicographically in (k, n + N, l).  They are orthonormal, and
``B(k,n,l) Omega = sqrt(1 - q^2) q^l e_{k,n,l}``.  Left multiplication never
changes l.

There are two ways to get an operator matrix:

* :func:`left_mult_matrix` reads entries off the symbolic product table;
* :func:`path_matrix` multiplies matrices of the graph generators, which are
  written down directly from how edges act on paths.

They are independent, so comparing them tests the product table.  The
generator ``a`` of SU_q(2) (with square-root coefficients) exists only here.
"""

from __future__ import annotations

import math
import os
import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import norm as spnorm
from scipy.special import binom, zeta

from .algebra import A, B, Element, Monomial, as_element, mono_mul
from .graded import TraceKind
from .qfield import eval_at


def oracle_tolerance(default: float) -> float:
    """Float tolerance for oracle checks; QSU2_PRECISION overrides it."""
    env = os.environ.get("QSU2_PRECISION")
    return float(env) if env else default


@dataclass(frozen=True)
class TruncationSpec:
    K: int = 40
    N: int = 6
    q0: float = 0.5

    def __post_init__(self):
        if self.K < 1 or self.N < 0 or not 0 < self.q0 < 1:
            raise ValueError(f"invalid truncation {self}")

    @property
    def dim(self) -> int:
        return (self.K + 1) ** 2 * (2 * self.N + 1)

    def index(self, k: int, n: int, l: int) -> int:
        return (k * (2 * self.N + 1) + (n + self.N)) * (self.K + 1) + l

    def contains(self, k: int, n: int, l: int) -> bool:
        return 0 <= k <= self.K and 0 <= l <= self.K and abs(n) <= self.N


@lru_cache(maxsize=16)
def _labels(t: TruncationSpec):
    k, n, l = np.meshgrid(
        np.arange(t.K + 1), np.arange(-t.N, t.N + 1), np.arange(t.K + 1), indexing="ij"
    )
    return k.ravel(), n.ravel(), l.ravel()


def interior(t: TruncationSpec, k_margin: int, n_margin: int = 0) -> np.ndarray:
    """Indices of basis vectors far enough from the cut for the given shifts."""
    k, n, _ = _labels(t)
    return np.flatnonzero((k <= t.K - k_margin) & (np.abs(n) <= t.N - n_margin))


@dataclass(frozen=True, eq=False)
class TruncatedOp:
    matrix: sp.csr_matrix
    spec: TruncationSpec
    overflow: int = 0  # basis images dropped at the cut

    def __matmul__(self, other: TruncatedOp) -> TruncatedOp:
        return TruncatedOp((self.matrix @ other.matrix).tocsr(), self.spec)

    def adjoint(self) -> TruncatedOp:
        return TruncatedOp(self.matrix.T.tocsr(), self.spec)


def _coeffs(x: Element, q0: float):
    return [(m, eval_at(c, q0)) for m, c in x.terms]


def left_mult_matrix(x, t: TruncationSpec) -> TruncatedOp:
    """Matrix of left multiplication by x, from the symbolic product table."""
    x = as_element(x)
    rows, cols, vals = [], [], []
    overflow = 0
    k_all, n_all, l_all = _labels(t)
    for mono, c in _coeffs(x, t.q0):
        for col, (k, n, l) in enumerate(zip(k_all, n_all, l_all)):
            p = mono_mul(mono, B(int(k), int(n), int(l)))
            if p is None:
                continue
            if not t.contains(p.k, p.n, p.l):
                overflow += 1
                continue
            # the normalisation depends on l only, which is unchanged
            rows.append(t.index(p.k, p.n, p.l))
            cols.append(col)
            vals.append(c)
    mat = sp.csr_matrix((vals, (rows, cols)), shape=(t.dim, t.dim))
    return TruncatedOp(mat, t, overflow)


# generators acting on paths


def _shift(t: TruncationSpec, rule) -> sp.csr_matrix:
    rows, cols = [], []
    for col, (k, n, l) in enumerate(zip(*_labels(t))):
        image = rule(int(k), int(n), int(l))
        if image is not None and t.contains(*image):
            rows.append(t.index(*image))
            cols.append(col)
    return sp.csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(t.dim, t.dim))


@lru_cache(maxsize=16)
def generators(t: TruncationSpec) -> dict:
    """p_v, p_w, S_mu, S_nu, S_xi as sparse 0/1 matrices."""
    return {
        "pv": _shift(t, lambda k, n, l: (k, n, l) if k >= 1 else None),
        "pw": _shift(t, lambda k, n, l: (k, n, l) if k == 0 else None),
        # S_mu extends a path that already left w; S_nu and S_xi need k = 0
        "Smu": _shift(t, lambda k, n, l: (k + 1, n, l) if k >= 1 else None),
        "Snu": _shift(t, lambda k, n, l: (1, n, l) if k == 0 else None),
        "Sxi": _shift(t, lambda k, n, l: (0, n + 1, l) if k == 0 else None),
    }


def _power(m: sp.csr_matrix, e: int, t: TruncationSpec) -> sp.csr_matrix:
    out = sp.identity(t.dim, format="csr")
    for _ in range(e):
        out = (out @ m).tocsr()
    return out


@lru_cache(maxsize=256)
def _path_T(t: TruncationSpec, k: int) -> sp.csr_matrix:
    g = generators(t)
    return g["pv"] if k == 0 else _power(g["Smu"], k, t)


@lru_cache(maxsize=256)
def _path_Tt(t: TruncationSpec, k: int) -> sp.csr_matrix:
    g = generators(t)
    return g["pw"] if k == 0 else (_power(g["Smu"], k - 1, t) @ g["Snu"]).tocsr()


@lru_cache(maxsize=256)
def _path_U(t: TruncationSpec, n: int) -> sp.csr_matrix:
    g = generators(t)
    if n == 0:
        return g["pw"]
    if n > 0:
        return _power(g["Sxi"], n, t)
    return _power(g["Sxi"].T.tocsr(), -n, t)


def monomial_path_matrix(mono: Monomial, t: TruncationSpec) -> sp.csr_matrix:
    if mono.kind == "A":
        return (_path_T(t, mono.k) @ _path_T(t, mono.l).T).tocsr()
    return (_path_Tt(t, mono.k) @ _path_U(t, mono.n) @ _path_Tt(t, mono.l).T).tocsr()


def path_matrix(x, t: TruncationSpec) -> TruncatedOp:
    """Matrix of x built from products of generator matrices."""
    x = as_element(x)
    mat = sp.csr_matrix((t.dim, t.dim))
    for mono, c in _coeffs(x, t.q0):
        mat = mat + c * monomial_path_matrix(mono, t)
    return TruncatedOp(mat.tocsr(), t)


def modular_matrix(t: TruncationSpec) -> TruncatedOp:
    k, _, l = _labels(t)
    return TruncatedOp(sp.diags(t.q0 ** (2.0 * (k - l))).tocsr(), t)


def d_matrix(t: TruncationSpec) -> TruncatedOp:
    k, _, l = _labels(t)
    return TruncatedOp(sp.diags((k - l).astype(float)).tocsr(), t)


# vectors and states


def vector_of(x, t: TruncationSpec) -> np.ndarray:
    """x Omega, expanding A(k,l) = sum_{j>=1} B(k+j,0,l+j) up to the cut."""
    x = as_element(x)
    q0 = t.q0
    s = math.sqrt(1 - q0 * q0)
    vec = np.zeros(t.dim)
    for mono, c in _coeffs(x, q0):
        if mono.kind == "B":
            if t.contains(mono.k, mono.n, mono.l):
                vec[t.index(mono.k, mono.n, mono.l)] += c * s * q0**mono.l
            continue
        j = 1
        while mono.k + j <= t.K and mono.l + j <= t.K:
            vec[t.index(mono.k + j, 0, mono.l + j)] += c * s * q0 ** (mono.l + j)
            j += 1
    return vec


def vacuum(t: TruncationSpec) -> np.ndarray:
    """Omega, the GNS vector of 1 = p_v + p_w."""
    return vector_of(Element([(A(0, 0), 1), (B(0, 0, 0), 1)]), t)


def haar_num(x, t: TruncationSpec) -> float:
    """<Omega, x Omega> with x acting through generator matrices."""
    om = vacuum(t)
    return float(om @ (path_matrix(x, t).matrix @ om))


def _phi_vectors(m: int, t: TruncationSpec):
    # rank-one resolution of Phi_m: T_m, Tt_m for m >= 0, their adjoints below
    a = abs(m)
    if m >= 0:
        return vector_of(A(a, 0), t), vector_of(B(a, 0, 0), t)
    return vector_of(A(0, a), t), vector_of(B(0, 0, a), t)


def _truncation_error(x: Element, m: int, t: TruncationSpec) -> float:
    depth = t.K - abs(m) - x.max_index()
    return t.q0 ** (2 * max(depth, 0))


def trace_phi_num(x, m: int, kind, t: TruncationSpec, op: TruncatedOp | None = None,
                  warn: bool = True) -> float:
    x = as_element(x)
    kind = TraceKind.parse(kind)
    if abs(m) > t.K - x.max_index():
        raise ValueError(f"|m| = {abs(m)} exceeds the truncation K - index = {t.K - x.max_index()}")
    tol = oracle_tolerance(1e-10)
    if warn and _truncation_error(x, m, t) > tol:
        warnings.warn(f"truncation insufficient at m = {m}: tail bound above {tol}", stacklevel=2)
    mat = (op or path_matrix(x, t)).matrix
    if kind is TraceKind.HD:
        mat = modular_matrix(t).matrix @ mat
    return float(sum(v @ (mat @ v) for v in _phi_vectors(m, t)))


def htilde_phi_num(x, m: int, t: TruncationSpec) -> float:
    """Vector-state value <T_m, x T_m> + <Tt_m, x Tt_m> (adjoints for m < 0)."""
    return trace_phi_num(x, m, TraceKind.HTILDE, t)


def hd_phi_num(x, m: int, t: TruncationSpec) -> float:
    return trace_phi_num(x, m, TraceKind.HD, t)


# residues


def _shifted_tail(r: float, start: int, shift: float, terms: int = 12) -> float:
    """sum_{m >= start} (1 + (m - shift)^2)^(-r) through Hurwitz zeta values."""
    a = start - shift
    return float(sum(binom(-r, j) * zeta(2 * r + 2 * j, a) for j in range(terms)))


def zeta_sum(weights: dict, r: float, tails: tuple[float, float], shift: float = 0.0) -> float:
    """sum_m w(m) (1 + (m - shift)^2)^(-r), constant w beyond the window."""
    M = max(abs(m) for m in weights)
    total = sum(w * (1 + (m - shift) ** 2) ** (-r) for m, w in weights.items())
    total += tails[0] * _shifted_tail(r, M + 1, shift)
    total += tails[1] * _shifted_tail(r, M + 1, -shift)
    return total


EPS_LADDER = (0.2, 0.1, 0.05, 0.025)


def richardson(values: list[float]) -> tuple[float, float]:
    """Extrapolate f(eps) on a halving ladder to eps -> 0, two elimination steps."""
    level = list(values)
    for order in (1, 2):
        factor = 2.0**order
        level = [(factor * level[i + 1] - level[i]) / (factor - 1) for i in range(len(level) - 1)]
    return level[-1], abs(level[-1] - level[-2])


@dataclass(frozen=True)
class ResidueEstimate:
    value: float
    error: float
    converged: bool


def residue_num(x, kind, t: TruncationSpec, window: int | None = None,
                shift: float = 0.0, tol: float = 1e-3) -> ResidueEstimate:
    """Residue at r = 1/2 of sum_m w(m) (1 + m^2)^(-r), from numeric traces.

    w(m) is held constant beyond the window, where the decaying parts are
    already below the truncation error.
    """
    x = as_element(x)
    if window is None:
        room = t.K - x.max_index()
        depth = math.ceil(math.log(1e-14) / (2 * math.log(t.q0)))
        # slow decay: split the room between tail convergence and truncation
        window = min(30, room - depth) if room - depth >= 10 else max(2, room // 2)
    op = path_matrix(x, t)
    weights = {m: trace_phi_num(x, m, kind, t, op, warn=False) for m in range(-window, window + 1)}
    tails = (weights[window], weights[-window])
    ladder = [e * zeta_sum(weights, 0.5 + e, tails, shift) for e in EPS_LADDER]
    value, err = richardson(ladder)
    return ResidueEstimate(value, err, err <= tol)


def path_t_dependence(v, t: TruncationSpec, ts=(0.0, 0.5, 1.0)) -> float:
    """Spread over t of Res h~(v[D,v^*] (1 + (D + t v[D,v^*])^2)^(-r)).

    For a pure partial isometry of degree k, v[D,v^*] = -k vv^* commutes with D
    and shifts its spectrum on the range of vv^* by -k t.
    """
    v = as_element(v)
    (k,) = v.degrees()
    rng = v * v.adjoint()
    vals = [residue_num(rng, TraceKind.HTILDE, t, shift=k * s).value * -k for s in ts]
    return max(vals) - min(vals)


# relation checks


@dataclass(frozen=True)
class CheckReport:
    check: str
    residual: float
    tolerance: float
    passed: bool
    interior_dim: int = 0

    def to_json(self) -> dict:
        return {
            "check": self.check,
            "residual": self.residual,
            "tolerance": self.tolerance,
            "pass": self.passed,
        }


def interior_norm(R: sp.spmatrix, cols: np.ndarray) -> float:
    """Upper bound sqrt(|R|_1 |R|_inf) for the operator norm on given columns."""
    sub = sp.csr_matrix(R)[:, cols]
    if sub.nnz == 0:
        return 0.0
    return float(math.sqrt(spnorm(sub, 1) * spnorm(sub, np.inf)))


def _report(name, residual, tol, cols) -> CheckReport:
    return CheckReport(name, residual, tol, bool(residual <= tol), len(cols))


def su2_generators(t: TruncationSpec) -> tuple[sp.csr_matrix, sp.csr_matrix]:
    """a and b from their graph-algebra series, truncated at the cut."""
    g = generators(t)
    X = (g["Smu"] + g["Snu"]).tocsr()
    Xs = X.T.tocsr()
    q0 = t.q0
    a = sp.csr_matrix((t.dim, t.dim))
    b = sp.csr_matrix((t.dim, t.dim))
    Xk = sp.identity(t.dim, format="csr")
    Xsk = sp.identity(t.dim, format="csr")
    for k in range(t.K + 1):
        c = math.sqrt(1 - q0 ** (2 * (k + 1))) - math.sqrt(1 - q0 ** (2 * k))
        a = a + c * (Xk @ Xsk @ Xs)
        b = b + q0**k * (Xk @ g["Sxi"] @ Xsk)
        Xk = (Xk @ X).tocsr()
        Xsk = (Xsk @ Xs).tocsr()
    return a.tocsr(), b.tocsr()


def relation_check_num(t: TruncationSpec, tol: float = 1e-8) -> list[CheckReport]:
    """Residuals of the SU_q(2) relations on the interior subspace."""
    tol = oracle_tolerance(tol)
    a, b = su2_generators(t)
    I = sp.identity(t.dim, format="csr")
    q0 = t.q0
    cols = interior(t, 2, min(2, t.N))
    residuals = {
        "a*a + b*b = 1": a.T @ a + b.T @ b - I,
        "aa* + q^2 bb* = 1": a @ a.T + q0**2 * (b @ b.T) - I,
        "ab = q ba": a @ b - q0 * (b @ a),
        "ab* = q b*a": a @ b.T - q0 * (b.T @ a),
        "b normal": b.T @ b - b @ b.T,
    }
    return [_report(name, interior_norm(R, cols), tol, cols) for name, R in residuals.items()]


def homomorphism_check(x, y, t: TruncationSpec, tol: float = 1e-10) -> CheckReport:
    """left_mult(xy) against left_mult(x) left_mult(y) on interior vectors."""
    x, y = as_element(x), as_element(y)
    lhs = left_mult_matrix(x * y, t).matrix
    rhs = left_mult_matrix(x, t).matrix @ left_mult_matrix(y, t).matrix
    k_margin = 2 * (x.max_index() + y.max_index())
    n_margin = 2 * max((abs(m.n) for m in x.monomials() + y.monomials()), default=0)
    cols = interior(t, k_margin, min(n_margin, t.N))
    return _report(f"hom {x.pretty()} . {y.pretty()}", interior_norm(lhs - rhs, cols), tol, cols)


def table_check(x, t: TruncationSpec, tol: float = 1e-10) -> CheckReport:
    """Product-table matrix against the generator-product matrix."""
    x = as_element(x)
    diff = left_mult_matrix(x, t).matrix - path_matrix(x, t).matrix
    n_margin = 2 * max((abs(m.n) for m in x.monomials()), default=0)
    cols = interior(t, 2 * x.max_index(), min(n_margin, t.N))
    return _report(f"table {x.pretty()}", interior_norm(diff, cols), tol, cols)


def modular_relation_check(x, y, t: TruncationSpec, tol: float = 1e-8) -> CheckReport:
    """<x^* Omega, y^* Omega> = <H y Omega, x Omega>."""
    x, y = as_element(x), as_element(y)
    tol = oracle_tolerance(tol)
    om = vacuum(t)
    X, Y = path_matrix(x, t).matrix, path_matrix(y, t).matrix
    lhs = (X.T @ om) @ (Y.T @ om)
    rhs = (modular_matrix(t).matrix @ (Y @ om)) @ (X @ om)
    return _report(f"modular {x.pretty()}, {y.pretty()}", float(abs(lhs - rhs)), tol, np.arange(t.dim))
