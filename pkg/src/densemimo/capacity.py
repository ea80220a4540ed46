"""Gaussian-input constrained capacity (log-det) and normalizations."""
from __future__ import annotations

from dataclasses import dataclass
import math

import numpy as np

from .array_geometry import ArrayConfig, dft_matrix
from .covariance import hermitian_sqrt

LN2 = math.log(2.0)


@dataclass(frozen=True)
class RateValue:
    """A rate in nats together with its degrees-of-freedom normalizer 2 min(Lt, Lr)."""

    nats: float
    normalizer: float = 1.0

    def __post_init__(self):
        if self.nats < 0:
            raise ValueError(f"rate must be nonnegative, got {self.nats}")
        if not self.normalizer > 0:
            raise ValueError(f"normalizer must be positive, got {self.normalizer}")

    @property
    def bits(self) -> float:
        return self.nats / LN2

    @property
    def normalized(self) -> float:
        return self.nats / self.normalizer


def dof_normalizer(lt: float, lr: float) -> float:
    return 2.0 * min(lt, lr)


def snr_normalize(gamma: float, dt: float, dr: float) -> float:
    """Normalized SNR gamma / (4 Dt Dr)."""
    if not gamma > 0:
        raise ValueError(f"SNR must be positive, got {gamma}")
    for d in (dt, dr):
        if not 0 < d <= 0.5:
            raise ValueError(f"separation must lie in (0, 1/2], got {d}")
    return gamma / (4.0 * dt * dr)


def logdet_identity_plus(a: np.ndarray, snr: float) -> float:
    """ln det(I + snr A A^H) via a Cholesky factor of the smaller Gram matrix."""
    if snr == 0 or a.size == 0:
        return 0.0
    n, m = a.shape
    gram = a.conj().T @ a if m < n else a @ a.conj().T
    k = np.eye(gram.shape[0]) + snr * gram
    chol = np.linalg.cholesky(0.5 * (k + k.conj().T))
    return float(2.0 * np.sum(np.log(np.abs(np.diag(chol)))))


def gaussian_capacity(
    G: np.ndarray, tx: ArrayConfig, Q: np.ndarray, snr_norm: float, normalizer: float = 1.0
) -> RateValue:
    """ln det(I + snr G U^H Q U G^H) for the angular channel G and covariance Q."""
    if snr_norm < 0:
        raise ValueError(f"normalized SNR must be nonnegative, got {snr_norm}")
    G = np.asarray(G, dtype=complex)
    Q = np.asarray(Q, dtype=complex)
    if G.shape[1] != tx.elements or Q.shape != (tx.elements, tx.elements):
        raise ValueError(
            f"shapes G {G.shape}, Q {Q.shape} disagree with {tx.elements} transmit elements"
        )
    if float(np.trace(Q).real) > 1 + 1e-12:
        raise ValueError(f"Tr(Q) = {np.trace(Q).real} violates the power constraint")
    if snr_norm == 0:
        return RateValue(0.0, normalizer)
    u = dft_matrix(tx)
    sigma = u.conj().T @ Q @ u
    a = G @ hermitian_sqrt(sigma)
    try:
        nats = logdet_identity_plus(a, snr_norm)
    except np.linalg.LinAlgError as exc:
        raise ValueError(f"I + snr A A^H is not numerically positive definite: {exc}") from exc
    return RateValue(max(nats, 0.0), normalizer)
