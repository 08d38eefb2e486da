# %% [markdown]
# # Phase-shift spectra
#
# Weak-field phase of the reflected light relative to the saturated response,
# as a function of detuning, for a few values of beta. Below beta = 0.5 the
# maximum sits off resonance; above it the resonant response flips sign.

# %%
import numpy as np

from cavityflip import find_max_phase, phase_spectrum

grid = np.linspace(0.0, 3.0, 31)
betas = (0.2, 0.4, 0.6, 0.8)
spectra = {b: phase_spectrum(b, grid) for b in betas}

print("omega/Gamma " + " ".join(f"beta={b:<6}" for b in betas))
for i, x in enumerate(grid):
    print(f"{x:11.2f} " + " ".join(f"{spectra[b].phase_deg[i]:11.3f}" for b in betas))

# %% [markdown]
# The optimum detuning, refined by golden-section search.

# %%
for b in betas:
    r = find_max_phase(b)
    print(f"beta={b}: {r.phase_star_deg:8.4f} deg at omega = {r.omega_star_over_Gamma:.4f} Gamma")
