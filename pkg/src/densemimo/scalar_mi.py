"""Mutual information of the scalar channel y = sqrt(rho) x + v, v ~ CN(0, 1).

Finite constellations are handled by Gauss-Hermite quadrature over the noise.
Square constellations (QPSK, 16-QAM) factor into two real PAM channels with
noise variance 1/2 each, and are evaluated on that 1-D rule by default; the
full 2-D rule is kept for arbitrary alphabets and as a cross-check.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
import math

import numpy as np
from numpy.polynomial.hermite import hermgauss
from scipy import integrate

from .capacity import RateValue

DEFAULT_ORDER = 256
MIN_ORDER = 16
GAUSSIAN = "gaussian"
_CHUNK = 512


@dataclass(frozen=True)
class Constellation:
    """Equiprobable complex alphabet with zero mean and unit average energy.

    ``pam`` holds the per-dimension real alphabet when the constellation is the
    Cartesian product pam x j*pam.
    """

    points: np.ndarray
    name: str = "custom"
    pam: np.ndarray | None = field(default=None, compare=False)

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=complex).reshape(-1)
        if pts.size < 2:
            raise ValueError("a constellation needs at least two points")
        if abs(np.mean(pts)) > 1e-12:
            raise ValueError("constellation must have zero mean")
        if abs(np.mean(np.abs(pts) ** 2) - 1) > 1e-12:
            raise ValueError("constellation must have unit average energy")
        object.__setattr__(self, "points", pts)

    @property
    def size(self) -> int:
        return self.points.size

    @classmethod
    def square(cls, levels: int, name: str) -> "Constellation":
        pam = np.arange(-(levels - 1), levels, 2, dtype=float)
        pam /= math.sqrt(2 * np.mean(pam**2))
        pts = (pam[:, None] + 1j * pam[None, :]).reshape(-1)
        return cls(pts, name, pam)


def qpsk() -> Constellation:
    return Constellation.square(2, "qpsk")


def qam16() -> Constellation:
    """Square 16-QAM, levels {+-1, +-3} / sqrt(10) per dimension."""
    return Constellation.square(4, "qam16")


def _logsumexp(e: np.ndarray, axis: int) -> np.ndarray:
    m = e.max(axis=axis, keepdims=True)
    return np.squeeze(m, axis) + np.log(np.exp(e - m).sum(axis=axis))


@lru_cache(maxsize=None)
def _hermite(order: int):
    if order < MIN_ORDER:
        raise ValueError(f"quadrature order {order} below the minimum of {MIN_ORDER}")
    t, w = hermgauss(order)
    t.setflags(write=False)
    w.setflags(write=False)
    return t, w


def mi_gaussian(rho):
    """ln(1 + rho): Gaussian input on the same channel."""
    return np.log1p(rho)


def _as_rho(rho):
    arr = np.asarray(rho, dtype=float)
    if np.any(arr < 0) or not np.all(np.isfinite(arr)):
        raise ValueError("rho must be finite and nonnegative")
    return arr


def _pam_mi(pam: np.ndarray, rho: np.ndarray, order: int) -> np.ndarray:
    """MI of the real channel y = sqrt(rho) x + n, n ~ N(0, 1/2), x uniform on ``pam``."""
    t, w = _hermite(order)
    w = w / math.sqrt(math.pi)
    diff = pam[:, None] - pam[None, :]
    out = np.empty(rho.size)
    flat = rho.reshape(-1)
    for lo in range(0, flat.size, _CHUNK):
        sr = np.sqrt(flat[lo : lo + _CHUNK])
        d = sr[:, None, None, None] * diff[None, :, :, None] + t  # (R, i, j, a)
        e = -(d * d) + t * t
        lse = _logsumexp(e, axis=2)  # (R, i, a)
        out[lo : lo + _CHUNK] = math.log(pam.size) - (lse @ w).mean(axis=1)
    return out.reshape(rho.shape)


def _complex_mi(points: np.ndarray, rho: np.ndarray, order: int) -> np.ndarray:
    t, w = _hermite(order)
    v = (t[:, None] + 1j * t[None, :]).reshape(-1)
    wv = (w[:, None] * w[None, :]).reshape(-1) / math.pi
    nv2 = np.abs(v) ** 2
    diff = points[:, None] - points[None, :]
    out = np.empty(rho.size)
    for idx, r in enumerate(rho.reshape(-1)):
        sr = math.sqrt(r)
        acc = 0.0
        for i in range(points.size):
            d = sr * diff[i][:, None] + v[None, :]  # (j, nodes)
            lse = _logsumexp(-(d.real**2 + d.imag**2) + nv2, axis=0)
            acc += float(lse @ wv)
        out[idx] = math.log(points.size) - acc / points.size
    return out.reshape(rho.shape)


def mi_constellation(c: Constellation, rho, order: int = DEFAULT_ORDER, method: str = "auto"):
    """I(x; sqrt(rho) x + v) in nats for x uniform on ``c``.

    ``method`` is ``"auto"`` (separable rule when available), ``"separable"`` or ``"2d"``.
    """
    r = _as_rho(rho)
    _hermite(order)
    if method == "auto":
        method = "separable" if c.pam is not None else "2d"
    if method == "separable":
        if c.pam is None:
            raise ValueError(f"constellation {c.name!r} is not a product of real alphabets")
        out = 2.0 * _pam_mi(c.pam, r, order)
    elif method == "2d":
        out = _complex_mi(c.points, r, order)
    else:
        raise ValueError(f"unknown method {method!r}")
    out = np.clip(out, 0.0, math.log(c.size))
    out = np.where(r == 0, 0.0, out)
    return out[()] if out.ndim == 0 else out


def _binary_mi(s: float) -> float:
    """I(x; sqrt(s) x + z), x = +-1, z ~ N(0, 1), by adaptive quadrature."""
    if s == 0:
        return 0.0
    sr = math.sqrt(s)
    norm = 1.0 / math.sqrt(2 * math.pi)

    def integrand(z):
        return norm * math.exp(-0.5 * z * z) * np.logaddexp(0.0, -2.0 * s - 2.0 * sr * z)

    opts = dict(epsabs=1e-15, epsrel=1e-13, limit=400)
    left = integrate.quad(integrand, -np.inf, -sr, **opts)[0]
    right = integrate.quad(integrand, -sr, np.inf, **opts)[0]
    return max(math.log(2.0) - left - right, 0.0)


def qpsk_mi(rho):
    """QPSK mutual information as twice a binary antipodal real channel at SNR rho."""
    r = _as_rho(rho)
    out = np.array([2.0 * _binary_mi(float(x)) for x in r.reshape(-1)]).reshape(r.shape)
    return out[()] if out.ndim == 0 else out


def stream_rates(rho, c, order: int = DEFAULT_ORDER):
    """Per-stream rates for ``c`` a Constellation or the string ``"gaussian"``."""
    if isinstance(c, str):
        if c != GAUSSIAN:
            raise ValueError(f"unknown input alphabet {c!r}")
        return mi_gaussian(_as_rho(rho))
    return mi_constellation(c, rho, order=order)


def sic_rate_sum(profile, c, normalizer: float = 1.0, order: int = DEFAULT_ORDER) -> RateValue:
    """Sum over streams of the per-stream MI at the LMMSE-SIC SINRs.

    With ``c == "gaussian"`` this is sum ln(1 + rho_m), the constrained capacity.
    """
    rates = np.atleast_1d(stream_rates(profile.rho, c, order=order))
    return RateValue(math.fsum(rates.tolist()), normalizer)
