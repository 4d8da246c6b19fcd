"""Determinants of Toeplitz+Hankel matrices with Fisher-Hartwig symbols."""
from .asymptotics import AsymptoticPrediction, full_prediction, predict_value, pure_prediction
from .constants import barnes_g, constant_E, e_hat1, gamma, hankel_F, log_gamma, szego_E, szego_pair_E
from .errors import (
    AccuracyWarning,
    ConditioningError,
    FHDetError,
    HypothesisError,
    UnsupportedPredictionError,
    ValidationError,
)
from .factorization import antisymmetric_plus_factor, wiener_hopf, winding_number
from .structured import LogDet, compose_reduction_rhs, hankel, log_det, th_matrix, toeplitz, truncated_inverse
from .symbols import (
    FourierSeries,
    ProblemSpec,
    Singularity,
    SmoothSpec,
    assemble_pair,
    fourier_fh,
    fourier_jump,
    fourier_smooth,
    fourier_zero,
)

__version__ = "0.1.0"
