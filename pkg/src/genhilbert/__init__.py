"""Generalized Hilbert operators H_{mu,alpha} induced by moment Hankel matrices.

Measures on [0, 1) with their moments and Carleson quotients, Hardy /
Bergman / Bloch norms of truncated power series, the Hankel and integral
forms of the operator, and boundedness / compactness verdicts.
"""

__version__ = "0.1.0"

from .measures import (
    CarlesonReport,
    DensityTerm,
    MeasureSpec,
    SpecError,
    carleson_report,
    log_weighted,
    moment,
    moments,
    power_weighted,
    tail_mass,
)
from .operator import (
    HankelMatrix,
    OperatorConfig,
    apply_hankel,
    apply_integral,
    duality_pairing,
    equivalence_residual,
    gamma_ratio_coeffs,
    hankel_matrix,
)
from .quadrature import QuadratureError, QuadSettings
from .spaces import (
    GridSpec,
    PowerSeries,
    bergman_norm,
    bloch_norm,
    coeff_checks,
    hardy_norm,
    integral_means,
)
from .analyzer import (
    VerdictReport,
    boundedness_verdict,
    classify,
    compactness_verdict,
    embedding_check_bergman,
    embedding_check_hardy,
    sweep,
)

__all__ = [
    "CarlesonReport",
    "DensityTerm",
    "GridSpec",
    "HankelMatrix",
    "MeasureSpec",
    "OperatorConfig",
    "PowerSeries",
    "QuadSettings",
    "QuadratureError",
    "SpecError",
    "VerdictReport",
    "apply_hankel",
    "apply_integral",
    "bergman_norm",
    "bloch_norm",
    "boundedness_verdict",
    "carleson_report",
    "classify",
    "coeff_checks",
    "compactness_verdict",
    "duality_pairing",
    "embedding_check_bergman",
    "embedding_check_hardy",
    "equivalence_residual",
    "gamma_ratio_coeffs",
    "hankel_matrix",
    "hardy_norm",
    "integral_means",
    "log_weighted",
    "moment",
    "moments",
    "power_weighted",
    "sweep",
    "tail_mass",
]
