"""Adaptive deconvolution of circular densities from noisy data and an error sample."""

from .deconvolution import (DeconvEstimate, contrast_norm_sq, deconvolve,
                            derivative_transform, exact_risk)
from .estimator import CircularDeconvolution
from .selection import (SelectionResult, SelectionTables, empirical_tables, known_tables,
                        select_empirical, select_known)
from .simulation import (DensityModel, ExperimentConfig, RiskReport, rate_regression,
                         run_experiment)
from .spectral import (CircularSample, SpectralVector, convolve_spectra, empirical_coefficient,
                       empirical_spectrum, synthesize, weighted_norm_sq)
from .weights import (ClassSpec, RateOracleResult, WeightSequence, check_class_membership,
                      diagnostic_bounds, make_weights, rate_oracle, rate_prediction)

__version__ = "0.1.0"

__all__ = [
    "CircularDeconvolution", "CircularSample", "ClassSpec", "DeconvEstimate", "DensityModel",
    "ExperimentConfig", "RateOracleResult", "RiskReport", "SelectionResult", "SelectionTables",
    "SpectralVector", "WeightSequence", "check_class_membership", "contrast_norm_sq",
    "convolve_spectra", "deconvolve", "derivative_transform", "diagnostic_bounds",
    "empirical_coefficient", "empirical_spectrum", "empirical_tables", "exact_risk",
    "known_tables", "make_weights", "rate_oracle", "rate_prediction", "rate_regression",
    "run_experiment", "select_empirical", "select_known", "synthesize", "weighted_norm_sq",
]
