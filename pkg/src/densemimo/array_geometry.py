"""Uniform linear array primitives: signature vectors, DFT angular basis, beam kernel.

A directional cosine ``omega`` maps to the unit-norm signature vector

    s(omega)[n] = (L/Delta)^{-1/2} exp(-2 pi j n Delta omega),   n = 0..L/Delta-1

and the grid directions ``k/L`` give an orthonormal (DFT) basis.
"""
from __future__ import annotations

from dataclasses import dataclass
import math

import numpy as np

_INT_TOL = 1e-9


@dataclass(frozen=True)
class ArrayConfig:
    """Uniform linear array with normalized length ``length_norm`` and spacing ``separation``.

    Both are in carrier wavelengths. ``elements`` is derived and must be an integer.
    """

    length_norm: float
    separation: float

    def __post_init__(self):
        if not self.length_norm > 0:
            raise ValueError(f"array length must be positive, got {self.length_norm}")
        if not 0 < self.separation <= 0.5:
            raise ValueError(f"separation must lie in (0, 1/2], got {self.separation}")
        ratio = self.length_norm / self.separation
        if abs(ratio - round(ratio)) > _INT_TOL * max(1.0, ratio):
            raise ValueError(
                f"length {self.length_norm} is not a multiple of separation {self.separation}"
            )

    @property
    def elements(self) -> int:
        return int(round(self.length_norm / self.separation))

    @property
    def critical(self) -> bool:
        return self.separation == 0.5

    def retained_indices(self) -> np.ndarray:
        """Angular indices [0 : L] U [M - L : M) that carry most of the channel power."""
        m = self.elements
        lf = int(math.floor(self.length_norm + _INT_TOL))
        head = set(range(0, min(lf + 1, m)))
        tail = set(range(max(m - lf, 0), m))
        return np.array(sorted(head | tail), dtype=int)


def signature(cfg: ArrayConfig, omega) -> np.ndarray:
    """Signature vector for directional cosine ``omega``.

    ``omega`` may be an array; the result then has shape ``(elements, len(omega))``.
    """
    n = np.arange(cfg.elements)
    omega = np.asarray(omega, dtype=float)
    phase = -2j * np.pi * cfg.separation * np.multiply.outer(n, omega)
    return np.exp(phase) / math.sqrt(cfg.elements)


def dft_matrix(cfg: ArrayConfig) -> np.ndarray:
    """Unitary matrix whose k-th column is ``signature(cfg, k / L)``."""
    k = np.arange(cfg.elements)
    return signature(cfg, k / cfg.length_norm)


def kernel_f(cfg: ArrayConfig, omega):
    """Beam kernel ``s(0)^H s(omega)``, by direct summation.

    The closed Dirichlet form is not used: it is 0/0 on the lattice ``omega in Z / Delta``.
    """
    omega = np.asarray(omega, dtype=float)
    n = np.arange(cfg.elements)
    terms = np.exp(-2j * np.pi * cfg.separation * np.multiply.outer(omega, n))
    out = terms.sum(axis=-1) / cfg.elements
    return out[()] if out.ndim == 0 else out


def expansion_coeffs(cfg: ArrayConfig, omega: float) -> np.ndarray:
    """Coordinates of ``signature(cfg, omega)`` in the DFT basis.

    Entry k is ``s(k/L)^H s(omega) = kernel_f(cfg, omega - k/L)``.
    """
    k = np.arange(cfg.elements)
    return kernel_f(cfg, omega - k / cfg.length_norm)


def beam_pattern(cfg: ArrayConfig, k: int, phi_grid) -> list[tuple[float, float]]:
    """Pairs ``(phi, |kernel_f(k/L - cos phi)|)`` over the given angles."""
    if not 0 <= k < cfg.elements:
        raise ValueError(f"beam index {k} outside [0, {cfg.elements})")
    phi = np.asarray(list(phi_grid), dtype=float)
    if phi.size == 0:
        return []
    mag = np.abs(kernel_f(cfg, k / cfg.length_norm - np.cos(phi)))
    return list(zip(phi.tolist(), mag.tolist()))
