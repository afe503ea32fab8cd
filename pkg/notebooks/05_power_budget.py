# %% [markdown]
# # Parts count and power of the two encoders
#
# The divider chain grows by one op-amp and two comparators per stage; the
# switch stack needs a comparator and multiplexer per level. Power follows.

# %%
from ajscc.cost import bom, compare, power, power_for_levels

for k in (4, 7):
    print(k, bom("adb", k), bom("vcvs", k))

# %%
rep = power("adb", 4)
for name, (mw, pct) in rep.per_subcircuit.items():
    print(f"{name:28s} {mw:7.3f} mW {pct:6.2f} %")
print("total", rep.total_mw)

# %% [markdown]
# Power per level: the divider chain wins from 16 levels up (Fig. 6c).

# %%
for row in compare(range(2, 8)):
    print(f"{row.design:5s} {row.lib:9s} k={row.k}  {row.total_mw:8.2f} mW  {row.mw_per_level:7.4f} mW/level")

# %%
print("nano divider, 64 levels:", power("adb", 6, "nano").total_mw * 1000, "uW")
print("nano switch stack, 11 levels:", power_for_levels("vcvs", 11, "nano").total_mw * 1000, "uW")
