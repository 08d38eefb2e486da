# %% [markdown]
# # Time evolution
#
# Start from the ground state, switch on a CW drive and watch the dipole and
# the reflected field settle to the closed-form steady state.

# %%
from cavityflip import (
    AtomCavityParams,
    BlochState,
    DriveCondition,
    DriveEnvelope,
    IntegratorConfig,
    integrate,
    steady_state,
)

p = AtomCavityParams(Gamma=1.0, beta=0.8)
d = DriveCondition.from_flux(1.0, omega=0.5)
cfg = IntegratorConfig(dt=0.01, t_max=10.0, record_stride=100)
traj = integrate(BlochState.ground(), p, DriveEnvelope.cw(d), cfg)

print("  t    |sigma-|   sigma_z    |b_out|")
for t, s, b in zip(traj.times, traj.states, traj.b_out):
    print(f"{t:4.1f} {abs(s.sigma_minus):9.5f} {s.sigma_z:9.5f} {abs(b):9.5f}")

ref = steady_state(p, d)
print("steady state:", ref)

# %% [markdown]
# A Gaussian pulse: the envelope is any function of time.

# %%
import math

pulse = DriveEnvelope(0.0, lambda t: 0.8 * math.exp(-((t - 4.0) / 1.5) ** 2))
traj = integrate(BlochState.ground(), p, pulse, IntegratorConfig(0.01, 12.0, record_stride=100))
for t, b in zip(traj.times, traj.b_out):
    print(f"{t:5.1f} in={abs(pulse(t)):.4f} out={abs(b):.4f}")
