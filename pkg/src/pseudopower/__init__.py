"""Exact and high-precision toolkit for non-normal matrices whose powers return to the identity."""
from .errors import (
    ConvergenceError,
    DimensionError,
    PrecisionError,
    PseudopowerError,
    SingularMatrixError,
    ToleranceError,
    ValidationError,
)
from .precision import EXACT, MACHINE, ComplexScalar, Precision, big, default_precision
from .linalg import (
    LU,
    Matrix,
    Vector,
    identity,
    mat_exp_scaled,
    mat_inverse,
    mat_mul,
    mat_pow,
    matvec,
    s_max,
    s_min,
    singular_extremes,
)
from .models import (
    ModelSpec,
    build_block_A,
    build_ehrenfest_H,
    build_matrix,
    build_tilted_pauli,
    build_toeplitz_B,
    ehrenfest_propagator,
    load_matrix,
    propagator,
    save_matrix,
    transfer_from_tight_binding,
)
from .spectral import (
    EigenSystem,
    FourierCoefficients,
    closed_form_f,
    condition_numbers,
    dirichlet_kernel,
    eigen_A,
    eigen_B,
    eigen_tilted_pauli,
    eigenvector_matrix_condition,
    fourier_coefficients,
)
from .pseudospectrum import GridSpec, PseudospectrumMap, SymbolCurve, largest_pseudoeigenvalue, smin_map, symbol_curve
from .dynamics import (
    BoundTrack,
    TimeSeries,
    VectorChoice,
    evolve_f,
    growth_rate_fit,
    make_vectors,
    norm_bounds_track,
    periodicity_check,
)

__version__ = "0.1.0"
