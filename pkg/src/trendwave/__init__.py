"""Logistic-wavelet trend decomposition with soliton and information-calculus checks."""
from .decompose import (
    LogisticWave,
    TimeSeries,
    aggregate,
    estimate_saturation,
    extract_waves,
    second_differences,
)
from .fit import MultiLogisticModel, compute_ratio, model_deriv, model_eval, r_squared, refine
from .infocalc import (
    JointDistribution,
    configurational_information_3,
    mutual_information_2,
    mutual_redundancy,
    shannon_entropy,
)
from .logwave import bernoulli, cwt_index, logistic_derivative, psi, psi_ab, scalogram

__version__ = "0.1.0"

__all__ = [
    "JointDistribution", "LogisticWave", "MultiLogisticModel", "TimeSeries",
    "aggregate", "bernoulli", "compute_ratio", "configurational_information_3",
    "cwt_index", "estimate_saturation", "extract_waves", "logistic_derivative",
    "model_deriv", "model_eval", "mutual_information_2", "mutual_redundancy",
    "psi", "psi_ab", "r_squared", "refine", "scalogram", "second_differences",
    "shannon_entropy",
]
