"""Per-stream SINRs of the LMMSE receiver with successive interference cancellation.

Streams are detected in the natural order 0, 1, ..., M-1. When stream m is
detected, streams 0..m-1 have been cancelled and m+1..M-1 act as interference, so

    Xi_m  = (I + snr sum_{m' > m} a_m' a_m'^H)^{-1},     rho_m = snr a_m^H Xi_m a_m.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .array_geometry import ArrayConfig, dft_matrix
from .capacity import logdet_identity_plus

FACTOR_TOL = 1e-10


@dataclass(frozen=True)
class EffectiveChannel:
    """Precoded channel y = sqrt(snr) A b + w."""

    A: np.ndarray
    snr_norm: float
    dt: float = 0.5

    @property
    def columns(self) -> np.ndarray:
        return self.A.T


@dataclass(frozen=True)
class SinrProfile:
    rho: np.ndarray
    snr_norm: float
    dt: float

    def __post_init__(self):
        rho = np.asarray(self.rho, dtype=float)
        if np.any(rho < 0):
            raise ValueError("SINRs must be nonnegative")
        object.__setattr__(self, "rho", rho)

    def log_sum(self) -> float:
        return float(np.sum(np.log1p(self.rho)))


def effective_channel(
    G, tx_cfg: ArrayConfig, rx_cfg: ArrayConfig, Q_sqrt, snr_norm: float
) -> EffectiveChannel:
    """A = U_r G U_t^H Q^{1/2}, cross-checked against the opposite association order."""
    G = np.asarray(G, dtype=complex)
    Q_sqrt = np.asarray(Q_sqrt, dtype=complex)
    n, m = rx_cfg.elements, tx_cfg.elements
    if G.shape != (n, m) or Q_sqrt.shape != (m, m):
        raise ValueError(f"shapes G {G.shape}, Q^1/2 {Q_sqrt.shape} disagree with arrays ({n}, {m})")
    if snr_norm < 0:
        raise ValueError(f"normalized SNR must be nonnegative, got {snr_norm}")
    ur, ut = dft_matrix(rx_cfg), dft_matrix(tx_cfg)
    a = ((ur @ G) @ ut.conj().T) @ Q_sqrt
    other = ur @ (G @ (ut.conj().T @ Q_sqrt))
    scale = max(np.linalg.norm(a), 1.0)
    if np.linalg.norm(a - other) > FACTOR_TOL * scale:
        raise ArithmeticError("effective channel factors are inconsistent")
    return EffectiveChannel(a, float(snr_norm), tx_cfg.separation)


def _backward_rho(a: np.ndarray, snrs: np.ndarray) -> np.ndarray:
    """SINRs for every SNR in ``snrs`` at once; returns shape (len(snrs), M).

    Xi starts at I for the last stream and absorbs one column per step through a
    rank-1 Sherman-Morrison downdate, O(M N^2) per SNR.
    """
    n, m = a.shape
    s = snrs.size
    xi = np.broadcast_to(np.eye(n, dtype=complex), (s, n, n)).copy()
    rho = np.empty((s, m))
    for col in range(m - 1, -1, -1):
        v = a[:, col]
        xv = xi @ v  # (S, N)
        quad = np.einsum("i,si->s", v.conj(), xv).real
        r = snrs * quad
        rho[:, col] = r
        coef = snrs / (1.0 + r)
        xi -= coef[:, None, None] * xv[:, :, None] * xv.conj()[:, None, :]
        xi = 0.5 * (xi + np.conj(np.swapaxes(xi, 1, 2)))
    return np.clip(rho, 0.0, None)


def _direct_rho(a: np.ndarray, snr: float) -> np.ndarray:
    n, m = a.shape
    rho = np.empty(m)
    for col in range(m):
        tail = a[:, col + 1 :]
        k = np.eye(n) + snr * tail @ tail.conj().T
        rho[col] = snr * float(np.real(a[:, col].conj() @ np.linalg.solve(k, a[:, col])))
    return np.clip(rho, 0.0, None)


def sinr_profile(ch: EffectiveChannel, method: str = "backward") -> SinrProfile:
    """Per-stream SINRs under natural detection order.

    ``method="direct"`` inverts each Xi_m from scratch and serves as the reference.
    """
    if method == "backward":
        rho = _backward_rho(ch.A, np.array([ch.snr_norm], dtype=float))[0]
    elif method == "direct":
        rho = _direct_rho(ch.A, ch.snr_norm)
    else:
        raise ValueError(f"unknown method {method!r}")
    if not np.all(np.isfinite(rho)):
        raise ArithmeticError("SINR recursion produced non-finite values")
    return SinrProfile(rho, ch.snr_norm, ch.dt)


def sinr_profiles(a: np.ndarray, snrs, dt: float = 0.5) -> list[SinrProfile]:
    """Profiles of one precoded channel over a grid of normalized SNRs."""
    snrs = np.asarray(snrs, dtype=float)
    rho = _backward_rho(np.asarray(a, dtype=complex), snrs)
    return [SinrProfile(r, float(g), dt) for r, g in zip(rho, snrs)]


def sum_identity_gap(profile: SinrProfile, ch: EffectiveChannel) -> float:
    """Relative mismatch between sum ln(1 + rho_m) and ln det(I + snr A A^H)."""
    ref = logdet_identity_plus(ch.A, ch.snr_norm)
    return abs(profile.log_sum() - ref) / max(abs(ref), 1e-300) if ref else abs(profile.log_sum())


def multiuser_efficiency(profile: SinrProfile) -> np.ndarray:
    """rho_m / (Dt snr), to be compared against a constant independent of Dt."""
    if profile.snr_norm == 0:
        return np.zeros_like(profile.rho)
    return profile.rho / (profile.dt * profile.snr_norm)


def interference_free_bound(ch: EffectiveChannel) -> np.ndarray:
    """snr ||a_m||^2, an upper bound on each rho_m since Xi_m has spectrum in (0, 1]."""
    return ch.snr_norm * np.sum(np.abs(ch.A) ** 2, axis=0)
