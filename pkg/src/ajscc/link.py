"""End-to-end Monte-Carlo link: map -> FM tone -> AWGN -> FFT peak -> demap.

Two sources uniform on ``[0, 1]`` are folded onto one voltage ``v_d``
(``x2`` picks the level, ``x1`` the position along it), sent as a
unit-amplitude tone at ``hz_per_volt * v_d`` Hz, received through a
static unit-magnitude complex gain plus circular Gaussian noise, and
recovered from the strongest FFT bin.

Randomness: trial ``i`` of a run seeded with ``seed`` draws everything
(sources, channel phases, noise) from its own stream
``SeedSequence(seed, spawn_key=(i,))`` in a fixed order.  The same trial
therefore sees the same sources and the same normalised noise at every
level count and SNR, which keeps sweeps comparable point to point.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import ConfigError, DomainError
from .mapping import fold


@dataclass(frozen=True)
class LinkParams:
    """Mapping used on the link; ``v1 * levels == d_max`` by construction."""

    levels: int
    d_max: float = 5.0

    def __post_init__(self):
        if int(self.levels) != self.levels or self.levels < 2:
            raise ConfigError(f"link needs at least 2 levels, got {self.levels!r}")
        if not self.d_max > 0:
            raise ConfigError("d_max must be positive")

    @property
    def v1(self) -> float:
        return self.d_max / self.levels

    @property
    def delta(self) -> float:
        return 1.0 / (self.levels - 1)


@dataclass(frozen=True)
class FmConfig:
    hz_per_volt: float = 1000.0
    fs: float = 65536.0
    fft_size: int = 65536
    duration: float = 1.0

    def __post_init__(self):
        if self.fft_size > self.n_samples:
            raise ConfigError("fft_size exceeds the number of samples in the window")
        if self.fft_size < 2:
            raise ConfigError("fft_size must be at least 2")

    @property
    def n_samples(self) -> int:
        return int(round(self.fs * self.duration))

    @property
    def bin_hz(self) -> float:
        return self.fs / self.fft_size


@dataclass(frozen=True)
class ChannelConfig:
    """Static channel.  ``snr_db = inf`` disables the noise."""

    snr_db: float
    gain: complex = 1.0 + 0.0j
    seed: int = 0

    @property
    def noise_var(self) -> float:
        return 0.0 if math.isinf(self.snr_db) and self.snr_db > 0 else 10 ** (-self.snr_db / 10)


@dataclass(frozen=True)
class SweepRow:
    levels: int
    trials: int
    mse_x1: float
    mse_x2: float

    @property
    def mse_sum(self) -> float:
        return self.mse_x1 + self.mse_x2


@dataclass(frozen=True)
class SdrRow:
    csnr_db: float
    sensors: int
    sdr_db: float


def _check_unit(name, x):
    x = np.asarray(x, dtype=float)
    if np.any(~np.isfinite(x)) or np.any(x < 0) or np.any(x > 1):
        raise DomainError(f"{name} outside [0, 1]")
    return x


def link_encode(x1, x2, p: LinkParams):
    """Fold two unit-range sources into ``[0, d_max]``.

    ``x1`` is scaled into the per-level span ``v1`` so the amplitude
    limit holds for every level count.
    """
    x1 = _check_unit("x1", x1)
    x2 = _check_unit("x2", x2)
    level = np.minimum(np.floor(x2 / p.delta), p.levels - 1).astype(np.int64)
    v_d = fold(level, x1 * p.v1, p.v1)
    return v_d.item() if v_d.ndim == 0 else v_d


def link_decode(v_d, p: LinkParams):
    """Inverse of :func:`link_encode`; ``x2`` comes back at its level midpoint.

    Received voltages outside ``[0, d_max]`` are clipped.
    """
    v_d = np.clip(np.asarray(v_d, dtype=float), 0.0, p.d_max)
    level = np.clip(np.floor(v_d / p.v1), 0, p.levels - 1).astype(np.int64)
    frac = (v_d - level * p.v1) / p.v1
    x1 = np.where(level % 2 == 0, frac, 1.0 - frac)
    x2 = np.minimum((level + 0.5) * p.delta, 1.0)
    if x1.ndim == 0:
        return float(x1), float(x2)
    return x1, x2


def _check_tone(freq, fm):
    if not 0 <= freq <= fm.fs / 2:
        raise DomainError(f"tone at {freq} Hz outside [0, fs/2 = {fm.fs / 2}] Hz")


def fm_modulate(v_d: float, fm: FmConfig = FmConfig()) -> np.ndarray:
    """Unit-amplitude cosine at ``hz_per_volt * v_d``, sampled at ``fs``."""
    if not (np.isfinite(v_d) and v_d >= 0):
        raise DomainError(f"v_d must be finite and non-negative, got {v_d}")
    freq = fm.hz_per_volt * v_d
    _check_tone(freq, fm)
    n = np.arange(fm.n_samples)
    return np.cos(2 * np.pi * freq * n / fm.fs)


def _unit_noise(rng, n):
    # circular complex Gaussian, E|z|^2 = 1
    z = rng.standard_normal(2 * n).view(np.complex128)
    z *= math.sqrt(0.5)
    return z


def awgn_apply(w, ch: ChannelConfig) -> np.ndarray:
    """``gain * w`` plus complex noise of variance ``10**(-snr_db/10)`` per sample.

    The unit-amplitude tone counts as unit transmit power.
    """
    out = ch.gain * np.asarray(w, dtype=complex)
    var = ch.noise_var
    if var > 0:
        rng = np.random.default_rng(ch.seed)
        out = out + math.sqrt(var) * _unit_noise(rng, out.shape[-1])
    return out


def _spectrum(w, fm):
    w = np.asarray(w)
    if w.shape[-1] < fm.fft_size:
        raise DomainError(f"need at least {fm.fft_size} samples, got {w.shape[-1]}")
    return np.abs(np.fft.fft(w[..., : fm.fft_size]))


def fft_peak_detect(w, fm: FmConfig = FmConfig()) -> float:
    """Centre frequency of the strongest bin in ``[0, fs/2]``."""
    mag = _spectrum(w, fm)[: fm.fft_size // 2 + 1]
    if not np.any(mag > 0):
        raise DomainError("no spectral peak in an all-zero waveform")
    return float(np.argmax(mag)) * fm.bin_hz


@dataclass(frozen=True)
class _FdmPlan:
    sensors: int
    band_bins: int

    def offsets_hz(self, fm):
        return [s * self.band_bins * fm.bin_hz for s in range(self.sensors)]


def fdm_plan(sensors: int, fm: FmConfig, d_max: float, band_hz: Optional[float] = None) -> _FdmPlan:
    """Split ``[0, fs/2]`` into one search band per sensor.

    One sensor searches the whole half spectrum.  Bands must hold the
    full tone range and must not overlap.
    """
    if int(sensors) != sensors or sensors < 1:
        raise ConfigError(f"sensor count must be a positive integer, got {sensors!r}")
    half_bins = fm.fft_size // 2 + 1
    if band_hz is None:
        band_bins = half_bins // sensors
    else:
        band_bins = int(round(band_hz / fm.bin_hz))
    top = d_max * fm.hz_per_volt / fm.bin_hz
    if band_bins <= top:
        raise ConfigError(f"sub-band of {band_bins} bins cannot hold tones up to {top:g} bins")
    if sensors * band_bins > half_bins:
        raise ConfigError(f"{sensors} sub-bands of {band_bins} bins overlap or exceed fs/2")
    return _FdmPlan(sensors, band_bins)


def _run_trial(trial, seed, p, fm, snr_db, plan):
    """One realisation; returns ``(x1, x2, x1_hat, x2_hat)``."""
    rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(trial,)))
    x1, x2 = rng.random(2)
    phases = rng.uniform(0.0, 2 * np.pi, plan.sensors)
    noise = _unit_noise(rng, fm.n_samples)

    v_d = link_encode(x1, x2, p)
    n = np.arange(fm.n_samples)
    rx = np.zeros(fm.n_samples, dtype=complex)
    for off, ph in zip(plan.offsets_hz(fm), phases):
        freq = off + fm.hz_per_volt * v_d
        _check_tone(freq, fm)
        rx += np.exp(1j * ph) * np.cos(2 * np.pi * freq * n / fm.fs)
    if not (math.isinf(snr_db) and snr_db > 0):
        rx += math.sqrt(10 ** (-snr_db / 10)) * noise

    mag = _spectrum(rx, fm)
    b = plan.band_bins
    # non-coherent combining: re-register every sub-band to 0 Hz, add magnitudes
    combined = mag[:b].copy()
    for s in range(1, plan.sensors):
        combined += mag[s * b : (s + 1) * b]
    f_hat = float(np.argmax(combined)) * fm.bin_hz
    x1_hat, x2_hat = link_decode(f_hat / fm.hz_per_volt, p)
    return x1, x2, x1_hat, x2_hat


def _run_trials(trials, seed, p, fm, snr_db, plan, workers):
    def one(t):
        return _run_trial(t, seed, p, fm, snr_db, plan)

    if workers and workers > 1:
        with ThreadPoolExecutor(workers) as ex:
            out = list(ex.map(one, range(trials)))
    else:
        out = [one(t) for t in range(trials)]
    # rows stay in trial order, so sums do not depend on scheduling
    return np.array(out, dtype=float).reshape(trials, 4)


def mse_sweep(
    levels_list: Sequence[int],
    snr_db: float,
    trials: int,
    seed: int = 0,
    fm: FmConfig = FmConfig(),
    d_max: float = 5.0,
    workers: int = 1,
) -> list[SweepRow]:
    """Per-source MSE of the single-sensor link for each level count."""
    if trials < 1:
        raise ConfigError("trials must be >= 1")
    plan = fdm_plan(1, fm, d_max)
    rows = []
    for L in levels_list:
        r = _run_trials(trials, seed, LinkParams(L, d_max), fm, snr_db, plan, workers)
        rows.append(
            SweepRow(
                levels=int(L),
                trials=trials,
                mse_x1=float(np.mean((r[:, 2] - r[:, 0]) ** 2)),
                mse_x2=float(np.mean((r[:, 3] - r[:, 1]) ** 2)),
            )
        )
    return rows


def sdr_db(x1, x2, x1_hat, x2_hat) -> float:
    """Source power over distortion power of both sources, in dB."""
    sig = np.sum(np.square(x1)) + np.sum(np.square(x2))
    dist = np.sum(np.square(np.subtract(x1_hat, x1))) + np.sum(np.square(np.subtract(x2_hat, x2)))
    if dist == 0:
        return math.inf
    return 10 * math.log10(sig / dist)


def sdr_vs_csnr(
    num_sensors: int,
    csnr_list: Sequence[float],
    trials: int,
    seed: int = 0,
    levels: int = 11,
    fm: FmConfig = FmConfig(),
    d_max: float = 5.0,
    band_hz: Optional[float] = None,
    workers: int = 1,
) -> list[SdrRow]:
    """SDR of ``num_sensors`` FDM replicas of the same sources per CSNR.

    CSNR is per sensor (each tone has unit power).  With one sensor this
    is exactly the :func:`mse_sweep` link.
    """
    if trials < 1:
        raise ConfigError("trials must be >= 1")
    plan = fdm_plan(num_sensors, fm, d_max, band_hz)
    p = LinkParams(levels, d_max)
    rows = []
    for csnr in csnr_list:
        r = _run_trials(trials, seed, p, fm, csnr, plan, workers)
        rows.append(SdrRow(float(csnr), int(num_sensors), sdr_db(r[:, 0], r[:, 1], r[:, 2], r[:, 3])))
    return rows
