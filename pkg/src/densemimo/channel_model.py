"""Discrete multipath channels in the physical and angular domains."""
from __future__ import annotations

from dataclasses import dataclass, field, replace
import math

import numpy as np

from .array_geometry import ArrayConfig, dft_matrix, kernel_f, signature


def make_rng(seed: int) -> np.random.Generator:
    """Counter-based generator used for every channel draw."""
    return np.random.Generator(np.random.Philox(seed))


def trial_seed(base_seed: int, trial: int) -> int:
    return int(base_seed) ^ int(trial)


@dataclass(frozen=True)
class PathSet:
    """P propagation paths: complex gains and departure/incidence directional cosines."""

    attenuation: np.ndarray
    omega_t: np.ndarray
    omega_r: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.attenuation, dtype=complex).reshape(-1)
        wt = np.asarray(self.omega_t, dtype=float).reshape(-1)
        wr = np.asarray(self.omega_r, dtype=float).reshape(-1)
        if not (a.shape == wt.shape == wr.shape):
            raise ValueError("attenuation and cosine arrays must have equal length")
        if np.any(np.abs(wt) > 1) or np.any(np.abs(wr) > 1):
            raise ValueError("directional cosines must lie in [-1, 1]")
        if not np.all(np.isfinite(a)):
            raise ValueError("attenuations must be finite")
        object.__setattr__(self, "attenuation", a)
        object.__setattr__(self, "omega_t", wt)
        object.__setattr__(self, "omega_r", wr)

    @property
    def count(self) -> int:
        return self.attenuation.size

    @property
    def total_power(self) -> float:
        return float(np.sum(np.abs(self.attenuation) ** 2))

    @classmethod
    def empty(cls) -> "PathSet":
        return cls(np.zeros(0, complex), np.zeros(0), np.zeros(0))

    def __eq__(self, other):
        if not isinstance(other, PathSet):
            return NotImplemented
        return (
            np.array_equal(self.attenuation, other.attenuation)
            and np.array_equal(self.omega_t, other.omega_t)
            and np.array_equal(self.omega_r, other.omega_r)
        )


def sample_rayleigh_paths(P: int, rng_seed: int, clip_eps: float = 0.0) -> PathSet:
    """Independent P-path Rayleigh draw.

    Gains are CN(0, 1/P); departure and incidence angles are uniform on [0, 2 pi)
    and enter through their cosines. With ``clip_eps > 0`` the cosines are scaled
    into [-(1 - eps), 1 - eps], keeping every path away from the array endfire.
    """
    if P < 1:
        raise ValueError(f"path count must be >= 1, got {P}")
    if not 0 <= clip_eps < 1:
        raise ValueError(f"clip_eps must lie in [0, 1), got {clip_eps}")
    rng = make_rng(rng_seed)
    gains = rng.standard_normal((2, P)) * math.sqrt(0.5 / P)
    phi = rng.uniform(0.0, 2 * np.pi, size=(2, P))
    scale = 1.0 - clip_eps
    return PathSet(gains[0] + 1j * gains[1], scale * np.cos(phi[0]), scale * np.cos(phi[1]))


@dataclass(frozen=True)
class AngularChannel:
    """Angular-domain matrix G (N x M) with its link-end arrays."""

    matrix: np.ndarray
    tx_cfg: ArrayConfig
    rx_cfg: ArrayConfig
    tx_index_set: np.ndarray = field(default=None)
    rx_index_set: np.ndarray = field(default=None)

    def __post_init__(self):
        g = np.asarray(self.matrix, dtype=complex)
        if g.shape != (self.rx_cfg.elements, self.tx_cfg.elements):
            raise ValueError(
                f"matrix shape {g.shape} does not match arrays "
                f"({self.rx_cfg.elements}, {self.tx_cfg.elements})"
            )
        object.__setattr__(self, "matrix", g)
        if self.tx_index_set is None:
            object.__setattr__(self, "tx_index_set", self.tx_cfg.retained_indices())
        if self.rx_index_set is None:
            object.__setattr__(self, "rx_index_set", self.rx_cfg.retained_indices())

    @property
    def shape(self):
        return self.matrix.shape


def physical_channel(paths: PathSet, tx: ArrayConfig, rx: ArrayConfig) -> np.ndarray:
    """H = sqrt(NM) sum_p a_p s_r(omega_r,p) s_t(omega_t,p)^H."""
    n_rx, n_tx = rx.elements, tx.elements
    if paths.count == 0:
        return np.zeros((n_rx, n_tx), complex)
    sr = signature(rx, paths.omega_r)  # (N, P)
    st = signature(tx, paths.omega_t)  # (M, P)
    return math.sqrt(n_rx * n_tx) * (sr * paths.attenuation) @ st.conj().T


def angular_channel(paths: PathSet, tx: ArrayConfig, rx: ArrayConfig) -> AngularChannel:
    """Angular-domain channel.

    g[n, m] = sqrt(4 Lt Lr) sum_p a_p f_r(omega_r,p - n/Lr) conj(f_t(omega_t,p - m/Lt)),
    i.e. the DFT-basis coordinates of the path signatures at both ends.
    """
    n_rx, n_tx = rx.elements, tx.elements
    if paths.count == 0:
        return AngularChannel(np.zeros((n_rx, n_tx), complex), tx, rx)
    n = np.arange(n_rx) / rx.length_norm
    m = np.arange(n_tx) / tx.length_norm
    fr = kernel_f(rx, paths.omega_r[None, :] - n[:, None])  # (N, P)
    ft = kernel_f(tx, paths.omega_t[None, :] - m[:, None])  # (M, P)
    g = math.sqrt(4 * tx.length_norm * rx.length_norm) * (fr * paths.attenuation) @ ft.conj().T
    return AngularChannel(g, tx, rx)


def factorization_check(paths: PathSet, tx: ArrayConfig, rx: ArrayConfig) -> float:
    """Frobenius residual of H - U_r G U_t^H / sqrt(4 Dt Dr)."""
    h = physical_channel(paths, tx, rx)
    g = angular_channel(paths, tx, rx).matrix
    rebuilt = dft_matrix(rx) @ g @ dft_matrix(tx).conj().T
    rebuilt /= math.sqrt(4 * tx.separation * rx.separation)
    return float(np.linalg.norm(h - rebuilt))


def truncate_effective(ch: AngularChannel) -> AngularChannel:
    """Copy of ``ch`` with entries outside rx_index_set x tx_index_set set to zero."""
    mask = np.zeros(ch.shape, dtype=bool)
    mask[np.ix_(ch.rx_index_set, ch.tx_index_set)] = True
    return replace(ch, matrix=np.where(mask, ch.matrix, 0))


def max_singular_value_diag(ch: AngularChannel) -> float:
    """Largest singular value of min(2 Lt, 2 Lr)^{-1/2} G."""
    scale = min(2 * ch.tx_cfg.length_norm, 2 * ch.rx_cfg.length_norm)
    if not np.any(ch.matrix):
        return 0.0
    return float(np.linalg.norm(ch.matrix, 2) / math.sqrt(scale))


def power_ratio(ch: AngularChannel) -> float:
    """Fraction of ||G||_F^2 kept by truncate_effective (1.0 for the zero channel)."""
    total = float(np.sum(np.abs(ch.matrix) ** 2))
    if total == 0:
        return 1.0
    kept = float(np.sum(np.abs(truncate_effective(ch).matrix) ** 2))
    return kept / total
