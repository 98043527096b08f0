"""Dirichlet-type spaces on the unit ball, at desk scale.

Exact verification of the Richter identity and its radius-R precursor,
Poisson-kernel quadrature, joint m-isometry classification through the
Q_T/B_m form calculus, Gramian defect arrays, and the spherical complex
moment problem with its GNS construction.
"""

from .exactpoly import (
    ComplexRational,
    HermitianPolynomial,
    ball_integral,
    gradient_pairing,
    laplacian,
    sphere_integral,
)
from .dirichlet import (
    PairingResult,
    RichterReport,
    VectorPolynomial,
    circ_inner,
    dirichlet_inner,
    falsify_invariant_kernel,
    verify_radius_identity,
    verify_richter,
)
from .gramian import GramianArray, backward_shift, check_theorem, defect, gramian_of
from .measures import (
    AtomicMeasure,
    Measure,
    PolyWeightMeasure,
    SurfaceMeasure,
    dirac,
    make_b_lambda,
    make_lambda_c,
    measure_from_json,
    measure_to_json,
    poisson_integral,
    surface,
    total_mass,
)
from .moment import (
    KernelTable,
    check_conditions,
    forward_moments,
    gns,
    miso_kernel,
    recover_atoms,
    recover_measure_1d,
    verify_model,
)
from .multiindex import (
    MultiIndex,
    enumerate_exact,
    enumerate_upto,
    multinomial_weight,
)
from .poisson import (
    BallPoint,
    McConfig,
    McResult,
    QuadratureError,
    invariant_poisson_kernel,
    mc_ball,
    mc_sphere,
    poisson_kernel,
)
from .spaces import (
    Custom,
    DirichletBLambda,
    DirichletLambdaC,
    GramTable,
    Hp,
    gram,
    multishift_weights,
    one_d_dirichlet,
)
from .tuples import (
    ClassificationResult,
    TruncatedTuple,
    WindowedForm,
    bm_form,
    classify,
    joint_kernel,
    mult_tuple,
    qt_form,
    scaled_pair,
)

__version__ = "0.1.0"
