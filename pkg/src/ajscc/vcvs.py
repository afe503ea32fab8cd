"""Behavioural model of the parallel-VCVS switch-stack encoder.

Every level has its own analog switch.  Below its activation threshold a
switch outputs GND; within ``delta_h`` above it passes its VCVS output
(Type 1 on even levels, Type 2 on odd); beyond that it saturates.  The
encoder output is the sum over all switches.

The ``delta_h`` gap of the saturation voltage is neglected, so a
saturated switch outputs exactly ``v_r``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import ConfigError, DomainError
from .mapping import EncodedValue, MappingParams, SensorSample


@dataclass(frozen=True)
class VcvsStackConfig:
    levels: int
    delta_h: float
    v_r: float
    v_t_max: float = 5.0
    activation_thresholds: Optional[tuple] = field(default=None)

    def __post_init__(self):
        if int(self.levels) != self.levels or self.levels < 1:
            raise ConfigError("levels must be a positive integer")
        if not (self.delta_h > 0 and self.v_r > 0 and self.v_t_max > 0):
            raise ConfigError("delta_h, v_r and v_t_max must be positive")
        if self.activation_thresholds is None:
            th = tuple(i * self.delta_h for i in range(self.levels))
            object.__setattr__(self, "activation_thresholds", th)
        th = np.asarray(self.activation_thresholds, dtype=float)
        if th.shape != (self.levels,):
            raise ConfigError(f"need {self.levels} thresholds, got {th.size}")
        if not np.allclose(np.diff(th), self.delta_h, rtol=0, atol=1e-12):
            raise ConfigError("thresholds must be evenly spaced by delta_h")

    @classmethod
    def from_base(cls, levels, delta_h, v_r, base, v_t_max=5.0):
        """Thresholds ``base + i * delta_h``, e.g. to include a sensor offset."""
        th = tuple(base + i * delta_h for i in range(levels))
        return cls(levels, delta_h, v_r, v_t_max, th)

    @classmethod
    def from_mapping(cls, p: MappingParams):
        return cls(p.levels, p.delta_h, p.v_r, p.v_t_max)

    @property
    def thresholds(self) -> np.ndarray:
        return np.asarray(self.activation_thresholds, dtype=float)


def _switch(v_h, threshold, odd, cfg, v_t):
    type1 = cfg.v_r * v_t / cfg.v_t_max
    active = type1 if not odd else cfg.v_r - type1
    return np.where(
        v_h < threshold, 0.0, np.where(v_h < threshold + cfg.delta_h, active, cfg.v_r)
    )


def _check_vt(v_t, cfg):
    v_t = np.asarray(v_t, dtype=float)
    if np.any(~np.isfinite(v_t)) or np.any(v_t < 0) or np.any(v_t > cfg.v_t_max):
        raise DomainError(f"v_t outside [0, {cfg.v_t_max}]")
    return v_t


def switch_output(v_h, level_index: int, cfg: VcvsStackConfig, v_t):
    """Output of a single level's switch: GND, VCVS output, or ``v_r``."""
    if int(level_index) != level_index or not 0 <= level_index < cfg.levels:
        raise DomainError(f"level index {level_index} outside [0, {cfg.levels - 1}]")
    v_t = _check_vt(v_t, cfg)
    out = _switch(np.asarray(v_h, dtype=float), cfg.thresholds[level_index], level_index % 2, cfg, v_t)
    return out.item() if out.ndim == 0 else out


def partial_sum(v_h, level_indices, cfg: VcvsStackConfig, v_t):
    """Sum of the selected switches only (e.g. one two-level stage)."""
    return sum(switch_output(v_h, i, cfg, v_t) for i in level_indices)


def vcvs_encode_array(v_h, v_t, cfg: VcvsStackConfig):
    v_h = np.asarray(v_h, dtype=float)
    if np.any(~np.isfinite(v_h)) or np.any(v_h < 0):
        raise DomainError("v_h must be finite and non-negative")
    v_t = _check_vt(v_t, cfg)
    v_h, v_t = np.broadcast_arrays(v_h, v_t)
    th = cfg.thresholds
    total = np.zeros(v_h.shape)
    for i in range(cfg.levels):
        total += _switch(v_h, th[i], i % 2, cfg, v_t)
    return total


def vcvs_encode(s: SensorSample, cfg: VcvsStackConfig) -> EncodedValue:
    v_d = float(vcvs_encode_array(s.v_h, s.v_t, cfg))
    # the active level is the number of saturated switches
    level = int(np.count_nonzero(s.v_h >= cfg.thresholds + cfg.delta_h))
    return EncodedValue(v_d, min(level, cfg.levels - 1))
