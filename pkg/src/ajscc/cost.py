"""Component counts and power models for both encoder designs.

Calibration data are the published per-module power breakdown of the
16-level divider design (LM324 op-amps, LP2901 comparators) and the
component-count table for 2..128 levels.  Everything else is derived:

* divider chain, standard parts: the analog-divider block scales
  linearly with the stage count, every other subcircuit is constant;
* divider chain, efficient parts (LTC1047 / LTC1441): the standard
  total scaled by the single published 16-level figure;
* switch stack, standard parts: ``a * op_amps + c`` through the two
  published totals (16 and 128 levels);
* nano-meter parts, either design: ``p_opamp * op_amps + p_comparator *
  comparators``, resistors ignored.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Optional, Sequence

from .errors import ConfigError, DomainError

DESIGNS = ("adb", "vcvs")

# Per-subcircuit power of the k = 4 divider design, standard parts (mW).
TABLE2_K = 4
TABLE2_MW = {
    "Analog divider": 14.710,
    "V_T Offset": 0.855,
    "VCVS Type 1,2": 0.963,
    "VCVS Type Selector": 0.002,
    "Bits to Voltage Converter": 3.396,
    "Final Adder": 0.834,
    "V_R Buffer": 0.897,
}
# Published total; the rows above add up to 21.657.
TABLE2_TOTAL_MW = 21.660

# Switch-stack component counts by stage count k (2**k levels):
# op-amps, comparators, multiplexers, resistors.
VCVS_TABLE3 = {
    1: (6, 2, 2, 28),
    2: (10, 4, 4, 47),
    3: (16, 8, 8, 79),
    4: (30, 16, 16, 149),
    5: (56, 32, 32, 283),
    6: (110, 64, 64, 559),
    7: (217, 128, 128, 1103),
}
# Divider-chain counts as published, used to check the closed forms.
ADB_TABLE3 = {
    1: (6, 4, 30),
    2: (7, 6, 37),
    3: (8, 8, 44),
    4: (9, 10, 51),
    5: (10, 12, 58),
    6: (11, 14, 65),
    7: (12, 16, 72),
}

# Published totals of the switch stack, standard parts (mW).
VCVS_ANCHORS_MW = {4: 22.72, 7: 1.215 * 128}
EFFICIENT_ADB_K4_MW = 4.8


@dataclass(frozen=True)
class Bom:
    opamps: int
    comparators: int
    multiplexers: int
    resistors: int
    # True when the counts are not straight from published data
    estimate: bool = False

    def __post_init__(self):
        if min(self.opamps, self.comparators, self.multiplexers, self.resistors) < 0:
            raise DomainError("component counts must be non-negative")


@dataclass(frozen=True)
class DeviceLibrary:
    name: str
    p_opamp_uw: Optional[float] = None
    p_comparator_uw: Optional[float] = None
    # scale applied to the standard divider-design breakdown
    adb_scale: Optional[float] = None
    calibrated: tuple = ()


STANDARD = DeviceLibrary("standard", calibrated=("adb", "vcvs"))
EFFICIENT = DeviceLibrary(
    "efficient", adb_scale=EFFICIENT_ADB_K4_MW / TABLE2_TOTAL_MW, calibrated=("adb",)
)
NANO = DeviceLibrary("nano", p_opamp_uw=8.0, p_comparator_uw=0.0127, calibrated=("adb", "vcvs"))
LIBRARIES = {lib.name: lib for lib in (STANDARD, EFFICIENT, NANO)}


@dataclass(frozen=True)
class PowerReport:
    design: str
    lib: str
    levels: int
    total_mw: float
    # subcircuit -> (mW, percent of total)
    per_subcircuit: dict = field(default_factory=dict)
    estimate: bool = False

    @property
    def mw_per_level(self) -> float:
        return self.total_mw / self.levels


def _vcvs_fit():
    (k1, p1), (k2, p2) = sorted(VCVS_ANCHORS_MW.items())
    o1, o2 = VCVS_TABLE3[k1][0], VCVS_TABLE3[k2][0]
    a = (p2 - p1) / (o2 - o1)
    return a, p1 - a * o1


# mW per op-amp and fixed mW of the switch stack
VCVS_MW_PER_OPAMP, VCVS_FIXED_MW = _vcvs_fit()


def _design(design):
    if design not in DESIGNS:
        raise DomainError(f"unknown design {design!r}; expected one of {DESIGNS}")


def _lib(lib):
    if isinstance(lib, str):
        try:
            return LIBRARIES[lib]
        except KeyError:
            raise ConfigError(f"unknown device library {lib!r}") from None
    return lib


def _vcvs_rows(k, extrapolate):
    if k in VCVS_TABLE3:
        return VCVS_TABLE3[k], False
    if not extrapolate:
        raise DomainError(f"switch-stack counts for k={k} are outside the published table")
    (o6, _, _, r6), (o7, _, _, r7) = VCVS_TABLE3[6], VCVS_TABLE3[7]
    go, gr = o7 / o6, r7 / r6
    steps = k - 7
    n = 2**k
    return (round(o7 * go**steps), n, n, round(r7 * gr**steps)), True


def bom(design: str, k: int, extrapolate: bool = False) -> Bom:
    """Component counts for a ``k``-stage (``2**k``-level) encoder.

    Divider chain: ``k + 5`` op-amps, ``2k + 2`` comparators, ``7k + 23``
    resistors.  Switch stack: published counts for ``k <= 7``; beyond that
    only with ``extrapolate=True``, which doubles comparators/multiplexers
    and continues the last op-amp and resistor growth ratios.
    """
    _design(design)
    if int(k) != k or k < 1:
        raise DomainError(f"k must be a positive integer, got {k!r}")
    if design == "adb":
        if k > 16:
            raise DomainError("divider chains are modelled up to k = 16")
        return Bom(k + 5, 2 * k + 2, 0, 7 * k + 23)
    (o, c, m, r), est = _vcvs_rows(k, extrapolate)
    return Bom(o, c, m, r, estimate=est)


def bom_for_levels(design: str, levels: int) -> Bom:
    """Counts for an arbitrary level count.

    Divider chains round up to the next power of two.  A switch stack
    needs one comparator and one multiplexer per level; op-amps and
    resistors come from the next-lower published row.  Non-power-of-two
    stacks are flagged as estimates.
    """
    _design(design)
    if int(levels) != levels or levels < 2:
        raise DomainError(f"need at least 2 levels, got {levels!r}")
    k = math.ceil(math.log2(levels))
    if design == "adb":
        return bom("adb", k)
    if 2**k == levels:
        return bom("vcvs", k)
    lower = bom("vcvs", k - 1)
    return Bom(lower.opamps, levels, levels, lower.resistors, estimate=True)


def _report(design, lib, levels, parts, total, estimate=False):
    per = {name: (mw, 100.0 * mw / total) for name, mw in parts.items()}
    return PowerReport(design, lib.name, levels, total, per, estimate)


def _adb_standard_parts(k):
    parts = dict(TABLE2_MW)
    parts["Analog divider"] = TABLE2_MW["Analog divider"] * k / TABLE2_K
    total = TABLE2_TOTAL_MW + (parts["Analog divider"] - TABLE2_MW["Analog divider"])
    return parts, total


def _nano(design, b, lib, levels):
    parts = {
        "Op Amps": b.opamps * lib.p_opamp_uw / 1000,
        "Comparators": b.comparators * lib.p_comparator_uw / 1000,
    }
    return _report(design, lib, levels, parts, sum(parts.values()), b.estimate)


def power(design: str, k: int, lib="standard", extrapolate: bool = False) -> PowerReport:
    """Total and per-subcircuit power (mW) of a ``k``-stage encoder."""
    _design(design)
    lib = _lib(lib)
    if design not in lib.calibrated:
        raise ConfigError(f"no {lib.name!r} calibration for the {design!r} design")
    b = bom(design, k, extrapolate)
    levels = 2**k
    if lib.p_opamp_uw is not None:
        return _nano(design, b, lib, levels)
    if design == "adb":
        parts, total = _adb_standard_parts(k)
        if lib.adb_scale is not None:
            parts = {name: mw * lib.adb_scale for name, mw in parts.items()}
            total *= lib.adb_scale
        return _report(design, lib, levels, parts, total)
    parts = {"Op Amps": VCVS_MW_PER_OPAMP * b.opamps, "Fixed": VCVS_FIXED_MW}
    return _report(design, lib, levels, parts, sum(parts.values()), b.estimate)


def power_for_levels(design: str, levels: int, lib="standard") -> PowerReport:
    """Like :func:`power` but for any level count (see :func:`bom_for_levels`)."""
    _design(design)
    lib = _lib(lib)
    b = bom_for_levels(design, levels)
    if design == "adb" or not b.estimate:
        rep = power(design, math.ceil(math.log2(levels)), lib)
        return PowerReport(rep.design, rep.lib, levels, rep.total_mw, rep.per_subcircuit)
    if design not in lib.calibrated:
        raise ConfigError(f"no {lib.name!r} calibration for the {design!r} design")
    if lib.p_opamp_uw is not None:
        return _nano(design, b, lib, levels)
    parts = {"Op Amps": VCVS_MW_PER_OPAMP * b.opamps, "Fixed": VCVS_FIXED_MW}
    return _report(design, lib, levels, parts, sum(parts.values()), estimate=True)


@dataclass(frozen=True)
class CompareRow:
    design: str
    lib: str
    k: int
    levels: int
    bom: Bom
    total_mw: float
    mw_per_level: float

    def flat(self) -> dict:
        d = asdict(self)
        d.update(d.pop("bom"))
        return d


# the three series of the power comparison figure
COMPARE_SERIES = (("adb", "standard"), ("vcvs", "standard"), ("adb", "efficient"))


def compare(k_list: Sequence[int], series=COMPARE_SERIES) -> list[CompareRow]:
    """Power and power-per-level of each design/library series for each ``k``."""
    if not len(k_list):
        raise DomainError("k_list must not be empty")
    rows = []
    for design, lib in series:
        for k in k_list:
            rep = power(design, k, lib)
            rows.append(
                CompareRow(design, lib, k, 2**k, bom(design, k), rep.total_mw, rep.mw_per_level)
            )
    return rows
