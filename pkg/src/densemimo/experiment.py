"""Ergodic rate sweeps and the convergence (theorem-trend) studies."""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields
import logging
import math
import os

import numpy as np

from .array_geometry import ArrayConfig
from .capacity import LN2, dof_normalizer, gaussian_capacity
from .channel_model import (
    angular_channel,
    power_ratio,
    sample_rayleigh_paths,
    trial_seed,
    truncate_effective,
)
from .covariance import CovarianceSpec, closeness_trace, critical_sigma, dense_sigma, hermitian_sqrt, q_from_sigma
from .lmmse_sic import effective_channel, multiuser_efficiency, sinr_profile, sinr_profiles
from .scalar_mi import DEFAULT_ORDER, GAUSSIAN, mi_constellation, qam16, qpsk

log = logging.getLogger(__name__)

SCHEMES = ("gaussian", "qpsk", "qam16")
COVARIANCE_MODES = ("auto", "dense", "critical")
SEED_ENV = "DENSEMIMO_SEED"
SUM_IDENTITY_TOL = 1e-8
_FALLBACK_SEED = 2016


class ExperimentError(ValueError):
    """Invalid experiment configuration; the message lists every offending row."""


class SelfCheckError(ArithmeticError):
    """A per-trial runtime identity check failed."""


def default_seed() -> int:
    env = os.environ.get(SEED_ENV)
    if env is None or env.strip() == "":
        return _FALLBACK_SEED
    try:
        return int(env)
    except ValueError as exc:
        raise ExperimentError(f"{SEED_ENV}={env!r} is not an integer") from exc


def db_to_linear(db: float) -> float:
    return 10.0 ** (db / 10.0)


def snr_grid(start: float, stop: float, step: float) -> list[float]:
    """Inclusive dB grid, rounded to 10 decimals so repeated runs agree textually."""
    if step <= 0:
        raise ExperimentError(f"snr step must be positive, got {step}")
    if stop < start:
        raise ExperimentError(f"snr stop {stop} is below start {start}")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return [round(start + i * step, 10) for i in range(count)]


@dataclass
class ExperimentConfig:
    lt: float = 3.0
    lr: float = 1.0
    dt_list: tuple = (0.5, 0.25)
    dr: float = 0.5
    paths: int = 4
    snr_db_start: float = -10.0
    snr_db_stop: float = 15.0
    snr_db_step: float = 1.0
    trials: int = 500
    base_seed: int = field(default_factory=default_seed)
    schemes: tuple = SCHEMES
    covariance: str = "auto"
    clip_eps: float = 0.0
    quad_order: int = DEFAULT_ORDER
    workers: int = 1

    def __post_init__(self):
        self.dt_list = tuple(float(d) for d in self.dt_list)
        self.schemes = tuple(self.schemes)
        if self.trials < 1:
            raise ExperimentError(f"trials must be >= 1, got {self.trials}")
        if self.paths < 1:
            raise ExperimentError(f"paths must be >= 1, got {self.paths}")
        if not self.dt_list:
            raise ExperimentError("dt_list is empty")
        bad = [s for s in self.schemes if s not in SCHEMES]
        if bad or not self.schemes:
            raise ExperimentError(f"schemes must be a nonempty subset of {SCHEMES}, got {self.schemes}")
        if self.covariance not in COVARIANCE_MODES:
            raise ExperimentError(f"covariance must be one of {COVARIANCE_MODES}, got {self.covariance!r}")

    @property
    def snr_grid_db(self) -> list[float]:
        return snr_grid(self.snr_db_start, self.snr_db_stop, self.snr_db_step)

    @property
    def normalizer(self) -> float:
        return dof_normalizer(self.lt, self.lr)

    @classmethod
    def from_mapping(cls, data: dict) -> "ExperimentConfig":
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ExperimentError(f"unknown config keys: {', '.join(unknown)}")
        return cls(**data)


@dataclass(frozen=True)
class RatePoint:
    """Ergodic rate of one scheme at one (normalized SNR, transmit separation).

    ``stderr`` is the standard error of ``normalized_rate``.
    """

    snr_db: float
    scheme: str
    dt: float
    rate_nats: float
    rate_bits: float
    normalized_rate: float
    trials: int
    stderr: float
    normalized_rate_bits: float
    actual_snr_db: float


def covariance_for(mode: str, lt: float, tx: ArrayConfig) -> CovarianceSpec:
    """Transmit covariance for the given mode; ``auto`` picks critical at Dt = 1/2."""
    if mode == "auto":
        mode = "critical" if tx.critical else "dense"
    if mode == "critical":
        if not tx.critical:
            raise ValueError(f"critical covariance needs Dt = 1/2, got Dt = {tx.separation}")
        return critical_sigma(_integer_length(lt))
    return dense_sigma(_integer_length(lt), tx.elements)


def _integer_length(lt: float) -> int:
    if abs(lt - round(lt)) > 1e-9:
        raise ValueError(f"covariance patterns need an integer array length, got {lt}")
    return int(round(lt))


@dataclass(frozen=True)
class _Link:
    dt: float
    tx: ArrayConfig
    rx: ArrayConfig
    q_sqrt: np.ndarray
    q: np.ndarray


def _build_links(cfg: ExperimentConfig) -> list[_Link]:
    errors = []
    links = []
    try:
        rx = ArrayConfig(cfg.lr, cfg.dr)
    except ValueError as exc:
        raise ExperimentError(f"lr={cfg.lr} dr={cfg.dr}: {exc}") from exc
    for dt in cfg.dt_list:
        try:
            tx = ArrayConfig(cfg.lt, dt)
            q = q_from_sigma(covariance_for(cfg.covariance, cfg.lt, tx), tx)
            links.append(_Link(dt, tx, rx, hermitian_sqrt(q), q))
        except ValueError as exc:
            errors.append(f"lt={cfg.lt} dt={dt} covariance={cfg.covariance}: {exc}")
    if errors:
        raise ExperimentError("; ".join(errors))
    return links


def _sweep_trials(cfg: ExperimentConfig, trials: range) -> np.ndarray:
    """Rates in nats, shape (len(trials), len(dt_list), len(snr grid), len(schemes))."""
    links = _build_links(cfg)
    snrs = np.array([db_to_linear(x) for x in cfg.snr_grid_db])
    alphabets = {"qpsk": qpsk(), "qam16": qam16()}
    out = np.empty((len(trials), len(links), snrs.size, len(cfg.schemes)))
    for ti, t in enumerate(trials):
        seed = trial_seed(cfg.base_seed, t)
        paths = sample_rayleigh_paths(cfg.paths, seed, cfg.clip_eps)
        for li, link in enumerate(links):
            g = angular_channel(paths, link.tx, link.rx).matrix
            a = effective_channel(g, link.tx, link.rx, link.q_sqrt, 1.0).A
            profiles = sinr_profiles(a, snrs, link.dt)
            rho = np.stack([p.rho for p in profiles])  # (S, M)
            for si, scheme in enumerate(cfg.schemes):
                if scheme == GAUSSIAN:
                    for k, snr in enumerate(snrs):
                        c_opt = gaussian_capacity(g, link.tx, link.q, snr).nats
                        c_sic = profiles[k].log_sum()
                        if abs(c_sic - c_opt) > SUM_IDENTITY_TOL * max(abs(c_opt), 1.0):
                            raise SelfCheckError(
                                f"sum identity violated: trial={t} seed={seed} dt={link.dt} "
                                f"snr_db={cfg.snr_grid_db[k]} logdet={c_opt!r} sic={c_sic!r}"
                            )
                        out[ti, li, k, si] = c_opt
                else:
                    mi = mi_constellation(alphabets[scheme], rho, order=cfg.quad_order)
                    out[ti, li, :, si] = [math.fsum(row) for row in mi.tolist()]
    return out


def _trial_chunks(trials: int, workers: int) -> list[range]:
    size = max(1, math.ceil(trials / (4 * workers)))
    return [range(lo, min(lo + size, trials)) for lo in range(0, trials, size)]


def _run_trials(fn, cfg, trials: int, workers: int) -> np.ndarray:
    if workers <= 1:
        return fn(cfg, range(trials))
    chunks = _trial_chunks(trials, workers)
    with ProcessPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(fn, [cfg] * len(chunks), chunks))
    return np.concatenate(parts, axis=0)


def _mean_stderr(samples) -> tuple[float, float]:
    """Mean and standard error with exactly rounded sums, so the reduction order is irrelevant."""
    xs = [float(x) for x in samples]
    n = len(xs)
    mean = math.fsum(xs) / n
    if n < 2:
        return mean, 0.0
    var = math.fsum((x - mean) ** 2 for x in xs) / (n - 1)
    return mean, math.sqrt(var / n)


def run_sweep(cfg: ExperimentConfig) -> list[RatePoint]:
    """Average each scheme's rate over independent channel draws, for every (Dt, SNR).

    Trial t draws its paths from seed ``base_seed ^ t``; the same paths serve every
    Dt, so the separations are compared on common channel realizations.
    """
    _build_links(cfg)
    log.info("sweep: %d trials x %d separations x %d SNRs", cfg.trials, len(cfg.dt_list), len(cfg.snr_grid_db))
    rates = _run_trials(_sweep_trials, cfg, cfg.trials, cfg.workers)
    norm = cfg.normalizer
    points = []
    for li, dt in enumerate(cfg.dt_list):
        for k, snr_db in enumerate(cfg.snr_grid_db):
            actual = snr_db + 10.0 * math.log10(4.0 * dt * cfg.dr)
            for si, scheme in enumerate(cfg.schemes):
                mean, se = _mean_stderr(rates[:, li, k, si])
                points.append(
                    RatePoint(
                        snr_db=snr_db,
                        scheme=scheme,
                        dt=dt,
                        rate_nats=mean,
                        rate_bits=mean / LN2,
                        normalized_rate=mean / norm,
                        trials=cfg.trials,
                        stderr=se / norm,
                        normalized_rate_bits=mean / norm / LN2,
                        actual_snr_db=round(actual, 10),
                    )
                )
    return points


@dataclass
class StudyConfig:
    """Settings for the convergence studies.

    Arrays scale with fixed load ``alpha = Lt / Lr``. Studies 1 and 2 walk ``sizes``
    (Lt values) at separation ``dt``; study 3 walks ``dt_list`` at fixed ``lt``.
    ``paths`` defaults to 4 min(Lt, Lr) per size.
    """

    sizes: tuple = (2, 4, 8, 16)
    dt_list: tuple = (0.5, 0.25, 0.125)
    lt: float = 8.0
    alpha: float = 1.0
    dt: float = 0.25
    dr: float = 0.5
    snr_db: float = 0.0
    trials: int = 200
    base_seed: int = field(default_factory=default_seed)
    paths: int | None = None
    clip_eps: float = 0.0
    quad_order: int = DEFAULT_ORDER
    workers: int = 1

    def __post_init__(self):
        self.sizes = tuple(float(s) for s in self.sizes)
        self.dt_list = tuple(float(d) for d in self.dt_list)
        if self.trials < 1:
            raise ExperimentError(f"trials must be >= 1, got {self.trials}")
        if not self.alpha > 0:
            raise ExperimentError(f"alpha must be positive, got {self.alpha}")
        if self.paths is not None and self.paths < 1:
            raise ExperimentError(f"paths must be >= 1, got {self.paths}")


STUDY_DEFAULT_SIZES = {1: (2, 4, 8, 16), 2: (1, 2, 4, 8)}


@dataclass(frozen=True)
class GapPoint:
    """Ergodic normalized gap for one rung of a study ladder.

    ``diagnostic`` names an auxiliary quantity: the kept power fraction (study 1),
    the covariance closeness trace (study 2) or the largest observed multiuser
    efficiency rho_m / (Dt snr) (study 3).
    """

    study: int
    lt: float
    lr: float
    dt: float
    snr_db: float
    gap: float
    stderr: float
    trials: int
    diagnostic: str
    diagnostic_value: float


def _path_count(cfg: StudyConfig, lt: float, lr: float) -> int:
    if cfg.paths is not None:
        return cfg.paths
    return max(1, int(round(4 * min(lt, lr))))


def _study1_trials(args, trials: range) -> np.ndarray:
    cfg, lt = args
    lr = lt / cfg.alpha
    tx, rx = ArrayConfig(lt, cfg.dt), ArrayConfig(lr, cfg.dr)
    q = np.eye(tx.elements, dtype=complex) / tx.elements
    snr = db_to_linear(cfg.snr_db)
    out = np.empty((len(trials), 2))
    for i, t in enumerate(trials):
        paths = sample_rayleigh_paths(_path_count(cfg, lt, lr), trial_seed(cfg.base_seed, t), cfg.clip_eps)
        ch = angular_channel(paths, tx, rx)
        full = gaussian_capacity(ch.matrix, tx, q, snr).nats
        kept = gaussian_capacity(truncate_effective(ch).matrix, tx, q, snr).nats
        out[i] = abs(full - kept), power_ratio(ch)
    return out


def _study2_trials(args, trials: range) -> np.ndarray:
    cfg, lt = args
    lr = lt / cfg.alpha
    tx, rx = ArrayConfig(lt, cfg.dt), ArrayConfig(lr, cfg.dr)
    tx_c, rx_c = ArrayConfig(lt, 0.5), ArrayConfig(lr, 0.5)
    ilt = _integer_length(lt)
    q_dense = q_from_sigma(dense_sigma(ilt, tx.elements), tx)
    q_crit = q_from_sigma(critical_sigma(ilt), tx_c)
    snr = db_to_linear(cfg.snr_db)
    out = np.empty((len(trials), 1))
    for i, t in enumerate(trials):
        paths = sample_rayleigh_paths(_path_count(cfg, lt, lr), trial_seed(cfg.base_seed, t), cfg.clip_eps)
        crit = gaussian_capacity(angular_channel(paths, tx_c, rx_c).matrix, tx_c, q_crit, snr).nats
        dense = gaussian_capacity(truncate_effective(angular_channel(paths, tx, rx)).matrix, tx, q_dense, snr).nats
        out[i, 0] = abs(crit - dense)
    return out


def _study3_trials(args, trials: range) -> np.ndarray:
    cfg, dt = args
    lt = cfg.lt
    lr = lt / cfg.alpha
    tx, rx = ArrayConfig(lt, dt), ArrayConfig(lr, cfg.dr)
    q_sqrt = hermitian_sqrt(q_from_sigma(covariance_for("auto", lt, tx), tx))
    snr = db_to_linear(cfg.snr_db)
    alphabet = qpsk()
    out = np.empty((len(trials), 2))
    for i, t in enumerate(trials):
        paths = sample_rayleigh_paths(_path_count(cfg, lt, lr), trial_seed(cfg.base_seed, t), cfg.clip_eps)
        g = angular_channel(paths, tx, rx).matrix
        profile = sinr_profile(effective_channel(g, tx, rx, q_sqrt, snr))
        qpsk_rate = math.fsum(np.atleast_1d(mi_constellation(alphabet, profile.rho, order=cfg.quad_order)).tolist())
        out[i] = profile.log_sum() - qpsk_rate, float(np.max(multiuser_efficiency(profile)))
    return out


def _check_ladder(values, decreasing: bool, what: str):
    vals = list(values)
    if not vals:
        raise ExperimentError(f"{what} ladder is empty")
    ordered = all(b < a for a, b in zip(vals, vals[1:])) if decreasing else all(b > a for a, b in zip(vals, vals[1:]))
    if not ordered:
        raise ExperimentError(f"{what} ladder must be strictly {'decreasing' if decreasing else 'increasing'}: {vals}")


def run_theorem_study(which: int, sizes=None, cfg: StudyConfig | None = None) -> list[GapPoint]:
    """Normalized gaps along a size (studies 1, 2) or separation (study 3) ladder.

    1: |C(G) - C(G~)| with isotropic Sigma = I/M at separation ``cfg.dt``.
    2: |C(Q_2Lt; G_1/2,1/2) - C(Q_M; G~)| with the critical and dense patterns.
    3: C_opt - C_qpsk (LMMSE-SIC bound) at fixed ``cfg.lt`` for each Dt in the ladder.
    """
    cfg = cfg or StudyConfig()
    if which not in (1, 2, 3):
        raise ExperimentError(f"study must be 1, 2 or 3, got {which}")
    if which == 3:
        ladder = tuple(float(d) for d in (sizes if sizes is not None else cfg.dt_list))
        _check_ladder(ladder, True, "separation")
    else:
        ladder = tuple(float(s) for s in (sizes if sizes is not None else STUDY_DEFAULT_SIZES[which]))
        _check_ladder(ladder, False, "size")
    fn = {1: _study1_trials, 2: _study2_trials, 3: _study3_trials}[which]
    points = []
    for rung in ladder:
        lt = cfg.lt if which == 3 else rung
        dt = rung if which == 3 else cfg.dt
        lr = lt / cfg.alpha
        try:
            ArrayConfig(lt, dt), ArrayConfig(lr, cfg.dr)
            if which == 2:
                dense_sigma(_integer_length(lt), ArrayConfig(lt, dt).elements)
        except ValueError as exc:
            raise ExperimentError(f"study={which} lt={lt} lr={lr} dt={dt} dr={cfg.dr}: {exc}") from exc
        raw = _run_trials(fn, (cfg, rung), cfg.trials, cfg.workers)
        norm = dof_normalizer(lt, lr)
        mean, se = _mean_stderr(raw[:, 0] / norm)
        if which == 1:
            diag = ("power_ratio", _mean_stderr(raw[:, 1])[0])
        elif which == 2:
            diag = ("closeness_trace", closeness_trace(_integer_length(lt)))
        else:
            diag = ("max_multiuser_efficiency", float(np.max(raw[:, 1])))
        log.info("study %d rung %s: gap %.6g +- %.2g", which, rung, mean, se)
        points.append(GapPoint(which, lt, lr, dt, cfg.snr_db, mean, se, cfg.trials, *diag))
    return points
