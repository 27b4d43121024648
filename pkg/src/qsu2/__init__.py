"""Exact index computations for quantum SU(2) in its graph-algebra picture."""

from .algebra import A, B, Element, Monomial, haar, mono_mul, sigma_pow, unit
from .graded import TraceKind, build_seq, dixmier, eta_residue, hd_phi, htilde_phi, residue_half
from .qfield import ONE, ZERO, Q, QPoly, QRat, eval_at, geometric_tail, q_integer
from .spectral_flow import make_modular_unitary, modular_sf, partial_iso, semifinite_sf

__all__ = [
    "A", "B", "Element", "Monomial", "haar", "mono_mul", "sigma_pow", "unit",
    "TraceKind", "build_seq", "dixmier", "eta_residue", "hd_phi", "htilde_phi", "residue_half",
    "ONE", "ZERO", "Q", "QPoly", "QRat", "eval_at", "geometric_tail", "q_integer",
    "make_modular_unitary", "modular_sf", "partial_iso", "semifinite_sf",
]
