"""Transmit covariances in the angular basis, zero-insertion extension, PSD square roots."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .array_geometry import ArrayConfig, dft_matrix

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_CLAMP = 1e-9


@dataclass(frozen=True)
class CovarianceSpec:
    """Angular-basis covariance ``sigma`` (Hermitian PSD, trace at most ``trace_budget``)."""

    sigma: np.ndarray
    trace_budget: float = 1.0

    def __post_init__(self):
        s = np.asarray(self.sigma, dtype=complex)
        if s.ndim != 2 or s.shape[0] != s.shape[1]:
            raise ValueError(f"covariance must be square, got shape {s.shape}")
        if self.trace_budget > 1 + TRACE_TOL:
            raise ValueError(f"trace budget {self.trace_budget} exceeds the unit power constraint")
        if np.max(np.abs(s - s.conj().T), initial=0.0) > HERMITIAN_TOL:
            raise ValueError("covariance is not Hermitian")
        if s.size and np.linalg.eigvalsh(s).min() < -HERMITIAN_TOL:
            raise ValueError("covariance is not positive semidefinite")
        tr = float(np.trace(s).real)
        if tr > self.trace_budget + TRACE_TOL:
            raise ValueError(f"trace {tr} exceeds budget {self.trace_budget}")
        object.__setattr__(self, "sigma", s)

    @property
    def dim(self) -> int:
        return self.sigma.shape[0]

    def max_scaled_eigenvalue(self, lt: float) -> float:
        """Largest eigenvalue of 2 Lt sigma; bounded uniformly in Lt for admissible families."""
        return float(2 * lt * np.linalg.eigvalsh(self.sigma).max())


def extend(sigma, insert_after: int, zeros: int) -> np.ndarray:
    """Insert ``zeros`` all-zero rows and columns after the first ``insert_after``."""
    sigma = np.asarray(sigma)
    n = sigma.shape[0]
    if sigma.ndim != 2 or sigma.shape[1] != n:
        raise ValueError(f"expected a square matrix, got shape {sigma.shape}")
    if not 0 <= insert_after <= n or zeros < 0:
        raise ValueError(f"cannot insert {zeros} zeros after {insert_after} in a {n}x{n} matrix")
    keep = np.r_[0:insert_after, insert_after + zeros : n + zeros]
    out = np.zeros((n + zeros, n + zeros), dtype=sigma.dtype)
    out[np.ix_(keep, keep)] = sigma
    return out


def dense_sigma(lt: int, m: int) -> CovarianceSpec:
    """Uniform power on the 2 Lt + 1 retained beams, zero on the middle M - (2 Lt + 1)."""
    lt = int(lt)
    n_active = 2 * lt + 1
    if m < n_active:
        raise ValueError(f"M = {m} is smaller than 2 Lt + 1 = {n_active}")
    base = np.eye(n_active, dtype=complex) / n_active
    return CovarianceSpec(extend(base, lt + 1, m - n_active))


def critical_sigma(lt: int) -> CovarianceSpec:
    """Isotropic covariance I / (2 Lt) for the half-wavelength array."""
    if lt < 1:
        raise ValueError(f"Lt must be >= 1, got {lt}")
    n = 2 * int(lt)
    return CovarianceSpec(np.eye(n, dtype=complex) / n)


def q_from_sigma(spec: CovarianceSpec, tx: ArrayConfig) -> np.ndarray:
    """Antenna-domain covariance Q = U sigma U^H."""
    if spec.dim != tx.elements:
        raise ValueError(f"covariance dimension {spec.dim} != transmit elements {tx.elements}")
    u = dft_matrix(tx)
    q = u @ spec.sigma @ u.conj().T
    return 0.5 * (q + q.conj().T)


def hermitian_sqrt(q) -> np.ndarray:
    """Hermitian PSD square root via eigendecomposition.

    Eigenvalues in [-1e-9, 0) are treated as round-off and clamped to zero.
    """
    q = np.asarray(q, dtype=complex)
    w, v = np.linalg.eigh(0.5 * (q + q.conj().T))
    if w.size and w.min() < -PSD_CLAMP:
        raise ValueError(f"matrix is not PSD (min eigenvalue {w.min():.3e})")
    root = (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T
    return 0.5 * (root + root.conj().T)


def closeness_trace(lt: int) -> float:
    """Tr{(E_{Lt,1}(Sigma_2Lt) - Sigma_2Lt+1)^2} for the critical/dense pair used in experiments."""
    diff = extend(critical_sigma(lt).sigma, lt, 1) - dense_sigma(lt, 2 * lt + 1).sigma
    return float(np.trace(diff @ diff).real)
