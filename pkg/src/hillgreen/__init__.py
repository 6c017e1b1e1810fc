"""Green's functions of u'' + (a(t) + lambda) u on [0, 1] and the relations between them."""
from ._accel import BACKEND
from .errors import (
    DegenerateIdentity,
    HillGreenError,
    HypothesisViolated,
    InvalidGrid,
    MaxIterExceeded,
    NotContractive,
    NotFound,
    OutOfDomain,
    PotentialDomain,
    QuadratureFailure,
    Resonant,
)
from .greens import (
    BasisKind,
    BCKind,
    GreenKernel,
    basis_green_identity_check,
    basis_solution,
    build_green,
    check_green_definition,
    eval_green,
    green_partials,
)
from .identities import (
    IdentityId,
    ResidualReport,
    decomposition_residual,
    matrix_green_boundary_check,
    remark_residuals,
    sign_comparison_report,
)
from .nonlinear import (
    BoundConstants,
    NonlinearSpec,
    PicardConfig,
    bound_constants,
    distance_bound_check,
    picard_solve,
    reproduce_paper_example,
)
from .ode_core import FundamentalPair, GridSpec, Potential, Trajectory, fundamental_pair, integrate_ivp
from .spectral import EigenSearchConfig, characteristic_value, count_zeros, first_eigenvalue, ordering_check, slope_sign_check

__version__ = "0.1.0"
