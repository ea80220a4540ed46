"""Massive-MIMO rate simulation with densely spaced transmit antennas."""

from .array_geometry import ArrayConfig, beam_pattern, dft_matrix, expansion_coeffs, kernel_f, signature
from .capacity import RateValue, gaussian_capacity, snr_normalize
from .channel_model import (
    AngularChannel,
    PathSet,
    angular_channel,
    factorization_check,
    max_singular_value_diag,
    physical_channel,
    sample_rayleigh_paths,
    truncate_effective,
)
from .covariance import CovarianceSpec, critical_sigma, dense_sigma, extend, hermitian_sqrt, q_from_sigma
from .experiment import ExperimentConfig, RatePoint, StudyConfig, run_sweep, run_theorem_study
from .lmmse_sic import EffectiveChannel, SinrProfile, effective_channel, multiuser_efficiency, sinr_profile
from .scalar_mi import Constellation, mi_constellation, mi_gaussian, qam16, qpsk, qpsk_mi, sic_rate_sum

__version__ = "0.1.0"

__all__ = [
    "ArrayConfig",
    "beam_pattern",
    "dft_matrix",
    "expansion_coeffs",
    "kernel_f",
    "signature",
    "RateValue",
    "gaussian_capacity",
    "snr_normalize",
    "AngularChannel",
    "PathSet",
    "angular_channel",
    "factorization_check",
    "max_singular_value_diag",
    "physical_channel",
    "sample_rayleigh_paths",
    "truncate_effective",
    "CovarianceSpec",
    "critical_sigma",
    "dense_sigma",
    "extend",
    "hermitian_sqrt",
    "q_from_sigma",
    "ExperimentConfig",
    "RatePoint",
    "StudyConfig",
    "run_sweep",
    "run_theorem_study",
    "EffectiveChannel",
    "SinrProfile",
    "effective_channel",
    "multiuser_efficiency",
    "sinr_profile",
    "Constellation",
    "mi_constellation",
    "mi_gaussian",
    "qam16",
    "qpsk",
    "qpsk_mi",
    "sic_rate_sum",
]
