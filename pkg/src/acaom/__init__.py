"""Numerics for auxiliary-cavity-assisted optomechanical cooling and
entanglement: classical steady states, linearized fluctuation dynamics,
steady-state covariances, phonon numbers (analytic and numeric routes),
noise spectra, and Gaussian entanglement measures.
"""

from .cooling import (amplification_factor, effective_response,
                      improvement_rate, net_cooling_rate,
                      phonon_number_analytic, phonon_number_numeric)
from .dynamics import (Basis, CovarianceMatrix, DriftModel, LinearModel,
                       build_drift, check_stability, solve_lyapunov)
from .entanglement import (BipartiteCM, EntanglementReport,
                           entanglement_report, log_negativity_1v1,
                           log_negativity_1v2, residual_contangle,
                           robustness_sweep)
from .errors import (AcaomError, ConfigError, CovarianceError, NumericsError,
                     ParameterError, StabilityError)
from .params import (PRESETS, ScaledParams, SystemParams,
                     derive_dimensionless, fig1_assisted_params, fig1_params,
                     fig10_params)
from .spectra import SpectrumResult, position_spectrum
from .steady_state import (BistabilityPoint, ClassicalSteadyState,
                           bistability_scan, solve_steady_state)

__version__ = "0.1.0"

__all__ = [
    "AcaomError", "Basis", "BipartiteCM", "BistabilityPoint",
    "ClassicalSteadyState", "ConfigError", "CovarianceError",
    "CovarianceMatrix", "DriftModel", "EntanglementReport", "LinearModel",
    "NumericsError", "PRESETS", "ParameterError", "ScaledParams",
    "SpectrumResult", "StabilityError", "SystemParams",
    "amplification_factor", "bistability_scan", "build_drift",
    "check_stability", "derive_dimensionless", "effective_response",
    "entanglement_report", "fig1_assisted_params", "fig1_params",
    "fig10_params", "improvement_rate", "log_negativity_1v1",
    "log_negativity_1v2", "net_cooling_rate", "phonon_number_analytic",
    "phonon_number_numeric", "position_spectrum", "residual_contangle",
    "robustness_sweep", "solve_lyapunov", "solve_steady_state",
]
