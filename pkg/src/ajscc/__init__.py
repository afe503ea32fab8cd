"""Rectangular analog joint source-channel coding (2:1 compression).

Modules:
    mapping  ideal rectangular mapping and its inverse
    adb      multi-stage analog divider encoder and its configuration table
    vcvs     parallel-VCVS switch-stack encoder
    link     FM/AWGN Monte-Carlo link, level-count sweeps, FDM diversity
    cost     component counts and power models
    cli      ``ajscc`` command-line tool
"""

from .adb import (
    AdbConfig,
    ConfigRow,
    StageResult,
    adb_encode,
    bits_to_quotient_voltage,
    config_table,
    divider_cascade,
    stage_residue,
    vcvs_outputs,
)
from .cost import Bom, DeviceLibrary, PowerReport, bom, compare, power, power_for_levels
from .errors import AjsccError, ConfigError, DomainError
from .link import (
    ChannelConfig,
    FmConfig,
    LinkParams,
    SweepRow,
    awgn_apply,
    fft_peak_detect,
    fm_modulate,
    link_decode,
    link_encode,
    mse_sweep,
    sdr_vs_csnr,
)
from .mapping import EncodedValue, MappingParams, SensorSample, decode, encode_ideal, quantize_level
from .vcvs import VcvsStackConfig, switch_output, vcvs_encode

__version__ = "0.1.0"
