"""Metric geometry of the quantised interval X_q = {0} ∪ {q^(2k)} of the Podles sphere."""

from .errors import DomainError, PreconditionError, QIntervalError, SizeCapError, ToleranceUnreachable
from .qcore import (
    ZERO,
    CertifiedValue,
    QParam,
    QPoint,
    diameter_bounds,
    dq,
    embed,
    inv_rho,
    rho,
    tail_sum,
)
from .lipnorm import QFunction, brute_force_seminorm, q2_difference, seminorm, truncation_seminorms
from .spectral import derivative_norm, haar_projection_mass, relation_residuals, rep_A, rep_B
from .transport import StateMeasure, greedy_transport, mk_diameter, mk_distance
from .ghdist import (
    FiniteMetricSpace,
    LineSet,
    convergence_certificate,
    gh_oracle_tiny,
    gh_upper_bound_via_line,
    hausdorff_line,
)
from .continuum import d1, endpoint_gap, phi

__version__ = "0.1.0"
