# %% [markdown]
# # How many levels over a noisy FM link?
#
# More levels shrink the `x2` quantization error but squeeze each level's
# share of the FM deviation, so a wrong FFT bin costs more on `x1`. The sum
# has a minimum somewhere in between (Fig. 3c).

# %%
from ajscc import mse_sweep, sdr_vs_csnr

for r in mse_sweep([11, 40, 64, 73, 110], -20.0, trials=60, seed=1):
    print(f"L={r.levels:4d}  x1={r.mse_x1:.2e}  x2={r.mse_x2:.2e}  sum={r.mse_sum:.2e}")

# %% [markdown]
# Near the detection threshold, extra sensors on separate FDM sub-bands
# help because their spectra add non-coherently while noise averages
# out (Fig. 3b).

# %%
for s in (1, 2, 3):
    rows = sdr_vs_csnr(s, [-34.0, -30.0], trials=60, seed=3)
    print(s, [round(r.sdr_db, 2) for r in rows])
