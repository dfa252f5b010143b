"""Quench dynamics of the 1D transverse-field XY chain from coherent Gibbs states."""

from .spectrum import (
    DegenerateAngle,
    ModelParams,
    ModeData,
    MomentumGrid,
    bogoliubov_angle,
    delta_theta,
    dispersion,
    mode_data,
    momentum_grid,
)
from .gibbs import (
    FermionTwoPoint,
    InitialStateParams,
    ModeState,
    mode_state,
    two_point,
)
from .loschmidt import (
    QuadratureNonConvergence,
    QuenchProtocol,
    RateTrace,
    detect_cusps,
    mode_amplitude,
    population_imbalance,
    rate_finite,
    rate_integral,
)
from .fisher import (
    BetaCritical,
    Crossing,
    FisherCurve,
    NonMonotoneBracket,
    critical_beta,
    crossing_condition,
    find_crossings,
    fisher_curve,
)
from .pfaffian import NotSkew, pfaffian, pfaffian_cofactor, pfaffian_log
from .magnetization import (
    ContractionTable,
    MagnetizationPoint,
    NegativeLimit,
    OrderParameterResult,
    PatternMismatch,
    contractions,
    correlator_x,
    correlator_y,
    m_z,
    magnetization_point,
    order_parameter,
)

__version__ = "0.1.0"

__all__ = [
    "DegenerateAngle",
    "ModelParams",
    "ModeData",
    "MomentumGrid",
    "bogoliubov_angle",
    "delta_theta",
    "dispersion",
    "mode_data",
    "momentum_grid",
    "FermionTwoPoint",
    "InitialStateParams",
    "ModeState",
    "mode_state",
    "two_point",
    "QuadratureNonConvergence",
    "QuenchProtocol",
    "RateTrace",
    "detect_cusps",
    "mode_amplitude",
    "population_imbalance",
    "rate_finite",
    "rate_integral",
    "BetaCritical",
    "Crossing",
    "FisherCurve",
    "NonMonotoneBracket",
    "critical_beta",
    "crossing_condition",
    "find_crossings",
    "fisher_curve",
    "NotSkew",
    "pfaffian",
    "pfaffian_cofactor",
    "pfaffian_log",
    "ContractionTable",
    "MagnetizationPoint",
    "NegativeLimit",
    "OrderParameterResult",
    "PatternMismatch",
    "contractions",
    "correlator_x",
    "correlator_y",
    "m_z",
    "magnetization_point",
    "order_parameter",
]
