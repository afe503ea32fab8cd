"""Behavioural model of the multi-stage analog divider encoder.

A chain of ``k`` residue stages folds ``v_h`` modulo ``v_ref / 2**k``;
the sign of each stage output is one bit of the quotient, MSB first.
The bits drive a binary-weighted summing amplifier (``bits * v_r``) and
the LSB picks the Type-1 or Type-2 VCVS output that is added on top.

Components are ideal: exact arithmetic, no offsets or slew.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import floor
from typing import Optional

import numpy as np

from .errors import ConfigError, DomainError
from .mapping import EncodedValue, MappingParams, SensorSample, fold

# Comparator metastability band around exact level boundaries.
BOUNDARY_EPS = 1e-9

# Largest usable V_REF per stage count from the published configuration
# table (V_DD = 5 V, V_H0 up to 3 V).  Kept as decimal strings so the
# level-count arithmetic below is exact.
MAX_V_REF = {2: "4", 3: "4.8", 4: "4.8", 5: "4.8", 6: "4.923", 7: "4.987", 8: "4.987"}


@dataclass(frozen=True)
class AdbConfig:
    k: int = 4
    v_ref: float = 3.0
    v_dd: float = 5.0
    v_in_max: float = 3.0
    v_t_max: float = 5.0

    def __post_init__(self):
        if int(self.k) != self.k or self.k < 1:
            raise ConfigError(f"stage count must be a positive integer, got {self.k!r}")
        if not (self.v_ref > 0 and self.v_dd > 0 and self.v_t_max > 0):
            raise ConfigError("v_ref, v_dd and v_t_max must be positive")
        if not 0 < self.v_in_max <= self.v_ref:
            raise ConfigError(f"v_in_max={self.v_in_max} must lie in (0, v_ref={self.v_ref}]")

    @property
    def levels(self) -> int:
        return 2**self.k

    @property
    def delta_h(self) -> float:
        return self.v_ref / 2**self.k

    @property
    def v_r(self) -> float:
        return self.v_dd / 2**self.k

    def mapping_params(self, half_offset: bool = True) -> MappingParams:
        """The ideal mapping this chain realises."""
        return MappingParams(
            delta_h=self.delta_h,
            v_r=self.v_r,
            levels=self.levels,
            v_h_max=self.v_in_max,
            v_t_max=self.v_t_max,
            half_offset=half_offset,
        )


@dataclass(frozen=True)
class StageResult:
    residue: float
    bit: int


@dataclass(frozen=True)
class ConfigRow:
    k: int
    max_n: int
    min_v_ref: float
    min_delta_h: float
    min_n: Optional[int]
    max_v_ref: Optional[float]
    max_delta_h: Optional[float]
    v_r: float


def _residue(v_in, v_ref):
    v_in = np.asarray(v_in, dtype=float)
    return 2.0 * (v_in - v_ref / 2 + np.where(v_in < 0, v_ref, 0.0))


def stage_residue(v_in: float, v_ref: float) -> StageResult:
    """One divider stage.

    The comparator adds ``v_ref`` to negative inputs, the summing
    amplifier subtracts ``v_ref / 2`` and doubles the result.
    """
    if not abs(v_in) <= v_ref:
        raise DomainError(f"stage input {v_in} outside [-{v_ref}, {v_ref}]")
    r = float(_residue(v_in, v_ref))
    return StageResult(r, int(r > 0))


def cascade_array(v_in, k: int, v_ref: float):
    """Run ``k`` stages on an array of inputs.

    Returns ``(bits, residues)``, each shaped ``(..., k)`` with stage 1
    (the MSB) first.
    """
    v = np.asarray(v_in, dtype=float)
    if np.any(~np.isfinite(v)) or np.any(v < 0) or np.any(v > v_ref):
        raise DomainError(f"divider input outside [0, {v_ref}]")
    bits, residues = [], []
    for _ in range(k):
        v = _residue(v, v_ref)
        residues.append(v)
        bits.append((v > 0).astype(np.int64))
    return np.stack(bits, axis=-1), np.stack(residues, axis=-1)


def divider_cascade(v_in: float, cfg: AdbConfig):
    """Bits (MSB first) and per-stage residues for one input voltage.

    Inputs within ``BOUNDARY_EPS`` of ``m * v_ref / 2**k`` may resolve to
    either neighbouring quotient.
    """
    bits, residues = cascade_array(v_in, cfg.k, cfg.v_ref)
    return [int(b) for b in bits], [float(r) for r in residues]


def bits_to_quotient(bits) -> np.ndarray:
    """Integer value of MSB-first bit arrays along the last axis."""
    bits = np.asarray(bits, dtype=np.int64)
    k = bits.shape[-1]
    return bits @ (1 << np.arange(k - 1, -1, -1, dtype=np.int64))


def bits_to_quotient_voltage(bits, v_r: float) -> float:
    bits = np.asarray(bits)
    if bits.ndim != 1 or bits.size < 1:
        raise DomainError("need a non-empty 1-D bit sequence")
    return float(v_r * bits_to_quotient(bits))


def vcvs_outputs(v_t, v_r: float, v_t_max: float):
    """Type-1 (rising) and Type-2 (falling) VCVS outputs."""
    v_t = np.asarray(v_t, dtype=float)
    if np.any(~np.isfinite(v_t)) or np.any(v_t < 0) or np.any(v_t > v_t_max):
        raise DomainError(f"v_t outside [0, {v_t_max}]")
    type1 = v_r * v_t / v_t_max
    type2 = v_r - type1
    if type1.ndim == 0:
        return float(type1), float(type2)
    return type1, type2


def adb_encode_array(v_h, v_t, cfg: AdbConfig, clamp: bool = False):
    """Vectorised divider-chain encoder; returns ``(v_d, bits)``.

    ``clamp`` limits the final adder output to the supply rails.
    """
    v_h = np.asarray(v_h, dtype=float)
    if np.any(v_h > cfg.v_in_max):
        raise DomainError(f"v_h above v_in_max={cfg.v_in_max}")
    bits, _ = cascade_array(v_h, cfg.k, cfg.v_ref)
    quotient = bits_to_quotient(bits)
    type1, _ = vcvs_outputs(v_t, cfg.v_r, cfg.v_t_max)
    # the type selector: LSB 0 passes VCVS 1, LSB 1 passes VCVS 2
    v_d = fold(quotient, type1, cfg.v_r)
    if clamp:
        v_d = np.clip(v_d, 0.0, cfg.v_dd)
    return v_d, bits


def adb_encode(s: SensorSample, cfg: AdbConfig) -> EncodedValue:
    v_d, bits = adb_encode_array(s.v_h, s.v_t, cfg)
    return EncodedValue(float(v_d), int(bits_to_quotient(bits)))


def realized_levels(v_ref: float, k: int, v_in_max: float = 3.0) -> int:
    """How many of the ``2**k`` levels the input range actually reaches."""
    # a top input landing exactly on a level edge counts as reaching it
    return min(2**k, floor(v_in_max * 2**k / v_ref + BOUNDARY_EPS) + 1)


def config_table(
    k: int,
    v_dd: float = 5.0,
    v_in_max: float = 3.0,
    max_v_ref: Optional[float] = None,
) -> ConfigRow:
    """Tuning range of a ``k``-stage chain.

    The minimum ``V_REF`` is the smallest reference whose ``2**k`` levels
    still cover ``[0, v_in_max]``.  The maximum is op-amp limited and comes
    from the stored table (``k`` = 2..8) unless given explicitly; ``k = 1``
    has no tuning range.
    """
    if int(k) != k or not 1 <= k <= 16:
        raise DomainError(f"k must be an integer in [1, 16], got {k!r}")
    if not v_in_max > 0:
        raise DomainError("v_in_max must be positive")
    n = 2**k
    vin = Fraction(str(v_in_max))
    min_v_ref = vin * n / (n - 1)
    row = dict(
        k=k,
        max_n=n,
        min_v_ref=float(min_v_ref),
        min_delta_h=float(min_v_ref / n),
        v_r=v_dd / n,
        min_n=None,
        max_v_ref=None,
        max_delta_h=None,
    )
    if max_v_ref is not None:
        vmax = Fraction(str(max_v_ref))
    elif k in MAX_V_REF:
        vmax = Fraction(MAX_V_REF[k])
    else:
        vmax = None
    if vmax is not None and k > 1:
        row.update(
            max_v_ref=float(vmax),
            max_delta_h=float(vmax / n),
            min_n=floor(vin * n / vmax) + 1,
        )
    return ConfigRow(**row)
