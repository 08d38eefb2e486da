# %% [markdown]
# # From weak to strong driving
#
# Sweep the input photon flux across the saturation scale Gamma/beta. The
# reflected phase and reflectivity interpolate between the atom-dressed
# weak-field response and the bare-mirror response.

# %%
from cavityflip import AtomCavityParams, intensity_transition

p = AtomCavityParams(Gamma=1.0, beta=0.8)
table = intensity_transition(p, omega=0.0, flux_decades=(-3, 3, 13))

print(" flux/sat      phase    reflectivity")
for rel, ph, r in zip(table.flux_over_saturation, table.phase_deg, table.reflectivity):
    print(f"{rel:9.3g} {ph:10.3f} {r:14.6f}")

# %% [markdown]
# Off resonance the phase passes smoothly from its weak-field value to zero.

# %%
table = intensity_transition(AtomCavityParams(1.0, 0.4), omega=0.45, flux_decades=(-3, 3, 13))
for rel, ph in zip(table.flux_over_saturation, table.phase_deg):
    print(f"{rel:9.3g} {ph:10.3f}")
