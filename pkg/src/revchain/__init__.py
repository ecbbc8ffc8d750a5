"""Spectral gaps, Dirichlet forms, asymptotic variances and conductance of
finite reversible Markov kernels."""

from .conductance import (
    StateSet,
    cheeger_check,
    indicator_dirichlet_check,
    kernel_conductance,
    lawler_sokal_diagnostic,
    moment_inequality_check,
    set_conductance,
)
from .dirichlet import (
    OrderingCertificate,
    check_gap_ordering,
    dirichlet_form,
    flow_gamma,
    variational_right_gap,
)
from .errors import (
    ChainSpecError,
    ConsistencyError,
    DimensionError,
    NonUniqueStationaryError,
    NotReversibleError,
    NotVarianceBoundingError,
    SizeError,
)
from .hilbert import center, inner, variance
from .kernel import (
    ReversiblePair,
    apply,
    build_metropolis_hastings,
    check_detailed_balance,
    find_stationary,
    lazy_mixture,
    self_adjoint_defect,
)
from .spectral import decay_bound_check, decompose, gaps, spectral_measure
from .variance import (
    asymptotic_variance,
    check_variance_ordering,
    is_variance_bounding,
    variational_inverse_form,
)

__version__ = "0.1.0"
