"""Exception hierarchy.

Every error carries a module-qualified ``code`` so the command line front end
can emit a machine-readable record without inspecting messages.
"""


class QSU2Error(Exception):
    code = "qsu2.error"


class QFieldError(QSU2Error):
    code = "qfield.error"


class DivisionByZero(QFieldError, ZeroDivisionError):
    code = "qfield.division_by_zero"


class PoleError(QFieldError):
    code = "qfield.pole"


class DivergentTail(QFieldError):
    code = "qfield.divergent_tail"


class ParseError(QSU2Error, ValueError):
    code = "parse.error"


class TailFitError(QSU2Error):
    code = "graded_trace.tail_fit_unverified"


class EtaDivergent(QSU2Error):
    code = "graded_trace.eta_divergent"


class NotPartialIsometry(QSU2Error):
    code = "spectral_flow.not_partial_isometry"


class NotModular(QSU2Error):
    code = "spectral_flow.not_modular"


class KernelTermNonzero(QSU2Error):
    code = "spectral_flow.kernel_nonzero"


class NotProjection(QSU2Error):
    code = "ktheory.not_projection"
