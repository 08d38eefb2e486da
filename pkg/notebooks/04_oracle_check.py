# %% [markdown]
# # Checking the eliminated model
#
# Solve the full atom plus cavity master equation and compare its steady
# state with the two-parameter description. The discrepancy shrinks roughly
# as (g/kappa)^2.

# %%
from cavityflip import AtomCavityParams, DriveCondition
from cavityflip.oracle import FullModel, compare
from cavityflip.params import invert, kappa_for_ratio

p = AtomCavityParams(Gamma=1.0, beta=0.8)
drive = DriveCondition.from_flux(0.01 * p.Gamma / p.beta)

for ratio in (5, 10, 20, 50):
    raw = invert(p, kappa_for_ratio(p, ratio))
    report = compare(FullModel.from_raw(raw, drive))
    print(f"kappa/g={ratio:3d}  error={report.elimination_error:.3e}  "
          f"b_out full={report.b_out_full:.6f}  eliminated={report.b_out_analytic:.6f}")
