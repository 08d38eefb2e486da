# %% [markdown]
# # Efficiency of the phase flip
#
# On resonance the weak-field reflectivity is (1 - 2 beta)^2. A sign flip
# needs beta > 0.5, so usable efficiency demands beta well above one half.

# %%
import numpy as np

from cavityflip import linear_reflectivity, required_beta_for_efficiency

for beta in np.linspace(0.5, 1.0, 11):
    print(f"beta={beta:.2f}  eta={linear_reflectivity(beta, 0.0):.4f}")

# %%
for eta in (0.1, 0.36, 0.5, 0.9):
    print(f"eta={eta}: beta >= {required_beta_for_efficiency(eta):.4f}")
