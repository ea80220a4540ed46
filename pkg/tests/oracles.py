"""Independent reference computations used only by the tests."""
from __future__ import annotations

import math

import numpy as np


def mc_mutual_information(points, rho, samples=10**7, seed=0, chunk=250_000):
    """Monte-Carlo I(x; sqrt(rho) x + v) with v ~ CN(0, 1).

    Returns (estimate, standard error). Every noise draw is reused for all sent
    symbols, which averages the symbol analytically.
    """
    points = np.asarray(points, dtype=complex)
    k = points.size
    rng = np.random.default_rng(seed)
    sr = math.sqrt(rho)
    diff = sr * (points[:, None] - points[None, :])  # (i, j)
    total = 0.0
    total_sq = 0.0
    done = 0
    while done < samples:
        n = min(chunk, samples - done)
        v = (rng.standard_normal(n) + 1j * rng.standard_normal(n)) * math.sqrt(0.5)
        d = diff[:, :, None] + v[None, None, :]
        e = -(d.real**2 + d.imag**2) + np.abs(v) ** 2
        m = e.max(axis=1, keepdims=True)
        lse = (m[:, 0, :] + np.log(np.exp(e - m).sum(axis=1))).mean(axis=0)
        total += lse.sum()
        total_sq += (lse**2).sum()
        done += n
    mean = total / samples
    var = total_sq / samples - mean**2
    return math.log(k) - mean, math.sqrt(max(var, 0.0) / samples)


def same_three_sig_figs(value, ref):
    """|value - ref| within half a unit in the third significant digit of ref."""
    if ref == 0:
        return value == 0
    unit = 10.0 ** (math.floor(math.log10(abs(ref))) - 2)
    return abs(value - ref) <= 0.5 * unit


def dirichlet_magnitude(length, sep, omega):
    """|sin(pi L w)| / ((L/D) |sin(pi D w)|), valid off the lattice w in Z / D."""
    n = length / sep
    return abs(math.sin(math.pi * length * omega)) / (n * abs(math.sin(math.pi * sep * omega)))


def kernel_loop(length, sep, omega):
    """Geometric sum (D/L) sum_n exp(-2 pi j n D w), one term at a time."""
    n = int(round(length / sep))
    return sum(complex(math.cos(-2 * math.pi * i * sep * omega), math.sin(-2 * math.pi * i * sep * omega)) for i in range(n)) / n


def channel_entry(paths, lt, dt, lr, dr, n, m):
    """h[n, m] evaluated element by element from the signature definition.

    With N = Lr/Dr and M = Lt/Dt the sqrt(NM) prefactor cancels the signature
    normalizations, leaving sum_p a_p exp(-2 pi j n Dr w_r) exp(+2 pi j m Dt w_t).
    """
    total = 0j
    for a, wt, wr in zip(paths.attenuation, paths.omega_t, paths.omega_r):
        total += a * np.exp(-2j * np.pi * n * dr * wr) * np.exp(2j * np.pi * m * dt * wt)
    return total


def logdet_eig(mat_psd_hermitian, snr):
    """sum ln(1 + snr lambda_i) from the eigenvalues of a Hermitian PSD matrix."""
    lam = np.linalg.eigvalsh(mat_psd_hermitian)
    return float(np.sum(np.log1p(snr * np.clip(lam, 0, None))))
