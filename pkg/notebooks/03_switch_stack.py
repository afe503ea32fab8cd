# %% [markdown]
# # The switch stack
#
# One switch per level turns on when `v_h` passes its threshold and then
# adds either `v_t`-proportional or complementary voltage, saturating at
# `v_r`. Summing the switches reproduces the same zig-zag as the ideal map.

# %%
import numpy as np

from ajscc import MappingParams, VcvsStackConfig
from ajscc.mapping import encode_array
from ajscc.vcvs import partial_sum, vcvs_encode_array

p = MappingParams(0.1875, 0.3125, 16, 3.0, 5.0, half_offset=False)
cfg = VcvsStackConfig.from_mapping(p)
H, T = np.meshgrid(np.linspace(0.001, 2.999, 400), np.linspace(0, 5, 50))
print("max |stack - ideal|:", np.max(np.abs(vcvs_encode_array(H, T, cfg) - encode_array(H, T, p)[0])))

# %% [markdown]
# Two neighbouring switches alone: off, rising with `v_t`, falling with
# `v_t`, then a flat plateau at `2 * v_r` (Fig. 3a).

# %%
cfg = VcvsStackConfig.from_base(levels=6, delta_h=0.3, v_r=0.4, base=0.65)
for v_h in (1.1, 1.4, 1.7, 2.0):
    out = [float(partial_sum(v_h, [2, 3], cfg, t)) for t in (0.0, 2.5, 5.0)]
    print(v_h, np.round(out, 3))
