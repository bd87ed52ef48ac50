"""Triplets of closely embedded Hilbert spaces at desk scale.

Finite-dimensional realizations of operator-range spaces ``D(T)`` and
``R(T)``, the triplets ``(H+; H0; H-)`` they generate, Dirichlet-type spaces
on the polydisc, weighted L^2 triplets, and a coercivity-free weak solver for
degenerate elliptic Dirichlet problems.
"""

from .errors import (
    ConditionC4Missing,
    DegenerateAtNode,
    DimensionMismatch,
    FieldMismatch,
    KernelComponent,
    NoSolution,
    NonFinite,
    NotHermitian,
    NotPositive,
    NumericalFailure,
    PointOutsideDisc,
    PreconditionError,
    SingularFactor,
    SingularHamiltonian,
    SpaceMismatch,
    ToleranceOutOfRange,
    TripletError,
)
from .linops import Factorization, Operator, adjoint, gram, pinv_apply, svd_factorize
from .spaces import (
    DSpace,
    RSpace,
    d_inner,
    d_norm,
    dual_norm,
    dual_norm_oracle,
    kernel_operator,
    range_norm_oracle,
    range_test,
)
from .triplet import (
    Triplet,
    TripletReport,
    apply_a_tilde,
    apply_h_tilde,
    from_factor,
    from_hamiltonian,
    swap,
    theta_pair,
    verify,
)

__version__ = "0.1.0"
