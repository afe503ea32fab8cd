# %% [markdown]
# # The divider chain as a level quantizer
#
# Each residue stage doubles its input around `v_ref / 2` and emits one bit.
# `k` stages give the level index MSB first, and `v_ref` sets the level
# spacing, which is how one chip can be tuned to fewer levels.

# %%
import numpy as np

from ajscc import AdbConfig, config_table
from ajscc.adb import adb_encode_array, divider_cascade, realized_levels

cfg = AdbConfig(k=4, v_ref=3.2, v_in_max=3.2)
for v in (0.0, 0.5, 3.1):
    bits, _ = divider_cascade(v, cfg)
    print(v, bits)

# %% [markdown]
# Sweeping `v_h` at mid-range `v_t` gives a 16-step staircase.

# %%
cfg = AdbConfig(k=4, v_ref=3.0)
v_h = np.linspace(0, 3.0, 3001)
v_d, _ = adb_encode_array(v_h, np.full_like(v_h, 2.5), cfg)
print(np.unique(np.round(v_d, 6)))

# %% [markdown]
# Tuning range per stage count (Table 1) and the levels actually realized
# as `v_ref` moves across it.

# %%
for k in range(1, 9):
    print(config_table(k))
row = config_table(4)
for v_ref in np.linspace(row.min_v_ref, row.max_v_ref, 5):
    print(f"v_ref={v_ref:.2f}: {realized_levels(v_ref, 4)} levels")
