"""Ideal rectangular (parallel-lines) 2:1 mapping.

Two bounded voltages are folded onto a single accumulated-length value.
``v_h`` selects a level (a horizontal line of the curve); ``v_t`` is the
position along that line.  Even levels are traversed left to right
(Type 1), odd levels right to left (Type 2), so the curve is continuous.

The scalar API (:func:`encode_ideal`, :func:`decode`) mirrors the
vectorised one (:func:`encode_array`, :func:`decode_array`); both share
the same code path.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DomainError


@dataclass(frozen=True)
class SensorSample:
    v_h: float
    v_t: float


@dataclass(frozen=True)
class EncodedValue:
    v_d: float
    level: int


@dataclass(frozen=True)
class MappingParams:
    """One rectangular mapping.

    Attributes:
        delta_h: spacing between levels along ``v_h`` (V).
        v_r: encoded span of one full level (V).
        levels: number of levels ``L``.
        v_h_max, v_t_max: input ranges (V); inputs start at 0.
        half_offset: report decoded ``v_h`` at the level midpoint
            ``(l + 0.5) * delta_h`` instead of the line ``l * delta_h``.
    """

    delta_h: float
    v_r: float
    levels: int
    v_h_max: float
    v_t_max: float
    half_offset: bool = True

    def __post_init__(self):
        if not (self.delta_h > 0 and self.v_r > 0 and self.v_t_max > 0):
            raise ConfigError("delta_h, v_r and v_t_max must be positive")
        if int(self.levels) != self.levels or self.levels < 1:
            raise ConfigError(f"levels must be a positive integer, got {self.levels!r}")
        if self.v_h_max < 0:
            raise ConfigError("v_h_max must be non-negative")
        # relative slack so e.g. 16 * 0.1875 >= 3.0 is not rejected on rounding
        if self.levels * self.delta_h < self.v_h_max * (1 - 1e-12):
            raise ConfigError(
                f"{self.levels} levels of {self.delta_h} V do not cover v_h_max={self.v_h_max}"
            )

    @property
    def d_max(self) -> float:
        """Largest encoded voltage, ``levels * v_r``."""
        return self.levels * self.v_r


def range_adjust(raw, offset: float = 0.0, gain: float = 1.0):
    """Affine pre-scaler ``(raw - offset) * gain`` for raw sensor voltages."""
    return (np.asarray(raw, dtype=float) - offset) * gain


def _check_range(name, x, hi):
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)):
        raise DomainError(f"{name} must be finite")
    if np.any(x < 0) or np.any(x > hi):
        raise DomainError(f"{name} outside [0, {hi}]")
    return x


def _scalar_or_array(x):
    return x.item() if np.ndim(x) == 0 else x


def quantize_level(v_h, p: MappingParams):
    """Level index ``floor(v_h / delta_h)`` clamped to ``[0, levels - 1]``."""
    v_h = _check_range("v_h", v_h, p.v_h_max)
    lvl = np.clip(np.floor(v_h / p.delta_h), 0, p.levels - 1).astype(np.int64)
    return _scalar_or_array(lvl)


def fold(level, position, v_r):
    """Accumulated length for a level and a position in ``[0, v_r]`` along it.

    Odd levels run backwards.  Shared by every encoder in the package.
    """
    level = np.asarray(level)
    position = np.asarray(position, dtype=float)
    return level * v_r + np.where(level % 2 == 0, position, v_r - position)


def encode_array(v_h, v_t, p: MappingParams):
    """Vectorised encoder; returns ``(v_d, level)`` arrays."""
    lvl = np.asarray(quantize_level(v_h, p))
    v_t = _check_range("v_t", v_t, p.v_t_max)
    v_d = fold(lvl, p.v_r * v_t / p.v_t_max, p.v_r)
    return v_d, lvl


def encode_ideal(s: SensorSample, p: MappingParams) -> EncodedValue:
    v_d, lvl = encode_array(s.v_h, s.v_t, p)
    return EncodedValue(float(v_d), int(lvl))


def decode_array(v_d, p: MappingParams, clip: bool = False):
    """Invert the accumulated length; returns ``(v_h_hat, v_t_hat)``.

    With ``clip=True`` out-of-range inputs (e.g. noisy receptions) are
    clipped into ``[0, levels * v_r]`` instead of raising.
    """
    v_d = np.asarray(v_d, dtype=float)
    if clip:
        v_d = np.clip(v_d, 0.0, p.d_max)
    else:
        v_d = _check_range("v_d", v_d, p.d_max)
    lvl = np.clip(np.floor(v_d / p.v_r), 0, p.levels - 1).astype(np.int64)
    frac = (v_d - lvl * p.v_r) / p.v_r
    v_t = np.where(lvl % 2 == 0, frac, 1.0 - frac) * p.v_t_max
    v_h = (lvl + 0.5) * p.delta_h if p.half_offset else lvl * p.delta_h
    return v_h, v_t


def decode(v_d: float, p: MappingParams, clip: bool = False) -> SensorSample:
    v_h, v_t = decode_array(v_d, p, clip=clip)
    return SensorSample(float(v_h), float(v_t))
