"""Index pairs delta_1([A]) = (ind A^-, ind A^+) for semi-periodic operators on R x B."""

from .errors import (
    AliasedGrid,
    CylIndexError,
    DimensionMismatch,
    MatrixSizeMismatch,
    NoSpectralGap,
    NonClosure,
    NonIntegerResult,
    NotElliptic,
    NotIdempotent,
    NumericalError,
    PhaseJump,
    SchemaError,
    SingularSample,
    SingularSymbol,
    SizeMismatch,
    Unstable,
    ValidationError,
)
from .fedosov import SymbolGrid3, chern_integrand, fedosov_index, odd_chern_integral
from .oracle import (
    TruncatedOperator,
    TruncationWindow,
    assemble_boundary_matrix,
    idempotent_defect_trace,
    index_idempotent,
    numerical_index,
    quantize_symbol,
)
from .pipeline import IndexPair, delta1_analytic, delta1_topological, verify_agreement
from .symbol_core import (
    Base,
    BoundaryOperatorSpec,
    BoundarySymbol,
    CospherePoint,
    OperatorSpec,
    PeriodicFunction,
    SemiPeriodicCoefficient,
    Side,
    SymbolSpec,
    TrigSymbol,
    boundary_operator,
    boundary_symbol,
    check_total_fredholm,
    check_uniform_ellipticity,
    evaluate_principal_symbol,
)
from .winding import LoopSample, noether_index, winding_number

__version__ = "0.1.0"
