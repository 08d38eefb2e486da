"""Time-domain Bloch equations in the rotating frame of the drive.

    d<s>/dt  = -(Gamma + i*omega) <s> + 2 c b(t) <sz>
    d<sz>/dt = -2 Gamma (<sz> + 1/2) - c (b*(t) <s> + b(t) <s>*)

with ``c = sqrt(2*beta*Gamma)``. The ``-i*omega`` sign is the one whose fixed
point is exactly :func:`cavityflip.response.steady_state`.

Integration is classical fourth-order Runge-Kutta at a fixed step. Every step
is repeated as two half steps; if the two results differ by more than
``HALF_STEP_TOL`` (relative) the step is rejected as too coarse.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import ConvergenceError, InvalidParameterError, StepInstabilityError
from .params import AtomCavityParams
from .response import BlochState, DriveCondition, output_from_state

HALF_STEP_TOL = 1e-6
MAX_DT_GAMMA = 0.1


@dataclass(frozen=True)
class DriveEnvelope:
    """Drive detuning plus a slowly varying complex amplitude ``envelope(t)``."""

    omega: float
    envelope: Callable[[float], complex]

    @classmethod
    def cw(cls, d: DriveCondition):
        amplitude = d.amplitude
        return cls(omega=d.omega, envelope=lambda t: amplitude)

    def __call__(self, t) -> complex:
        return complex(self.envelope(t))


@dataclass(frozen=True)
class IntegratorConfig:
    dt: float
    t_max: float
    convergence_tol: float = 1e-10
    record_stride: int = 1

    def __post_init__(self):
        if not (math.isfinite(self.dt) and self.dt > 0):
            raise InvalidParameterError(f"dt must be > 0, got {self.dt}")
        if not (math.isfinite(self.t_max) and self.t_max >= 0):
            raise InvalidParameterError(f"t_max must be >= 0, got {self.t_max}")
        if not self.convergence_tol > 0:
            raise InvalidParameterError("convergence_tol must be > 0")
        if int(self.record_stride) != self.record_stride or self.record_stride < 1:
            raise InvalidParameterError("record_stride must be a positive integer")

    @classmethod
    def for_params(cls, p: AtomCavityParams, dt_gamma=0.01, t_max_gamma=40.0, **kwargs):
        """Config with step and horizon given in units of 1/Gamma."""
        return cls(dt=dt_gamma / p.Gamma, t_max=t_max_gamma / p.Gamma, **kwargs)

    def check_stability(self, p: AtomCavityParams):
        if self.dt * p.Gamma > MAX_DT_GAMMA * (1 + 1e-12):
            raise InvalidParameterError(
                f"dt*Gamma = {self.dt * p.Gamma:.3g} exceeds the stability guard {MAX_DT_GAMMA}"
            )


@dataclass
class BlochTrajectory:
    times: list = field(default_factory=list)
    states: list = field(default_factory=list)
    b_out: list = field(default_factory=list)

    def __len__(self):
        return len(self.times)

    @property
    def final(self) -> BlochState:
        return self.states[-1]

    def as_arrays(self):
        """(t, sigma_minus, sigma_z, b_out) as numpy arrays."""
        return (
            np.array(self.times),
            np.array([s.sigma_minus for s in self.states]),
            np.array([s.sigma_z for s in self.states]),
            np.array(self.b_out),
        )


def _rhs(s, z, G, c, b, omega):
    ds = -complex(G, omega) * s + 2.0 * c * b * z
    dz = -2.0 * G * (z + 0.5) - 2.0 * c * (b.conjugate() * s).real
    return ds, dz


def derivative(s: BlochState, p: AtomCavityParams, b: complex, omega: float) -> BlochState:
    """Time derivative of the Bloch vector, returned as a BlochState of rates."""
    ds, dz = _rhs(complex(s.sigma_minus), float(s.sigma_z), p.Gamma, p.coupling, complex(b), float(omega))
    return BlochState(ds, dz)


def _rk4(s, z, t, h, G, c, drive, omega):
    b0 = drive(t)
    bm = drive(t + 0.5 * h)
    b1 = drive(t + h)
    k1s, k1z = _rhs(s, z, G, c, b0, omega)
    k2s, k2z = _rhs(s + 0.5 * h * k1s, z + 0.5 * h * k1z, G, c, bm, omega)
    k3s, k3z = _rhs(s + 0.5 * h * k2s, z + 0.5 * h * k2z, G, c, bm, omega)
    k4s, k4z = _rhs(s + h * k3s, z + h * k3z, G, c, b1, omega)
    return (
        s + h / 6.0 * (k1s + 2.0 * k2s + 2.0 * k3s + k4s),
        z + h / 6.0 * (k1z + 2.0 * k2z + 2.0 * k3z + k4z),
    )


def _checked_step(s, z, t, h, G, c, drive, omega):
    s1, z1 = _rk4(s, z, t, h, G, c, drive, omega)
    sh, zh = _rk4(s, z, t, 0.5 * h, G, c, drive, omega)
    sh, zh = _rk4(sh, zh, t + 0.5 * h, 0.5 * h, G, c, drive, omega)
    # Bloch vector length is at most 1/2, so floor the scale there.
    scale = max(math.sqrt(abs(sh) ** 2 + zh * zh), 0.5)
    err = math.sqrt(abs(s1 - sh) ** 2 + (z1 - zh) ** 2) / scale
    if err > HALF_STEP_TOL:
        raise StepInstabilityError(
            f"half-step estimate differs by {err:.3g} (relative) at t={t:.6g}; reduce dt below {h:.3g}"
        )
    return s1, z1


def _n_steps(cfg):
    return max(1, int(math.ceil(cfg.t_max / cfg.dt - 1e-9))) if cfg.t_max > 0 else 0


def integrate(
    initial: BlochState,
    p: AtomCavityParams,
    drive: DriveEnvelope,
    cfg: IntegratorConfig,
) -> BlochTrajectory:
    """Integrate from ``t = 0`` over ``ceil(t_max/dt)`` steps of size ``dt``.

    States are recorded every ``record_stride`` steps plus the final one.
    ``b_out(t) = envelope(t) + sqrt(2 beta Gamma) sigma_-(t)``.
    """
    if not initial.in_bloch_ball(1e-9):
        raise InvalidParameterError("initial state lies outside the Bloch ball")
    cfg.check_stability(p)
    G, c, omega, h = p.Gamma, p.coupling, float(drive.omega), cfg.dt
    n = _n_steps(cfg)
    stride = int(cfg.record_stride)

    traj = BlochTrajectory()

    def record(t, s, z):
        state = BlochState(s, z)
        traj.times.append(t)
        traj.states.append(state)
        traj.b_out.append(output_from_state(p, drive(t), state))

    s, z = complex(initial.sigma_minus), float(initial.sigma_z)
    record(0.0, s, z)
    for k in range(n):
        t = k * h
        s, z = _checked_step(s, z, t, h, G, c, drive, omega)
        if (k + 1) % stride == 0 or k + 1 == n:
            record((k + 1) * h, s, z)
    return traj


def relax_to_steady(p: AtomCavityParams, d: DriveCondition, cfg: IntegratorConfig | None = None) -> BlochState:
    """Integrate a CW drive from the ground state until the Bloch vector stops moving.

    Convergence: ``|derivative| < convergence_tol * Gamma * max(1, |state|)``.
    Raises ConvergenceError if ``t_max`` is reached first.
    """
    if cfg is None:
        cfg = IntegratorConfig.for_params(p)
    cfg.check_stability(p)
    G, c, omega, h = p.Gamma, p.coupling, d.omega, cfg.dt
    b = d.amplitude
    drive = DriveEnvelope.cw(d)

    def residual(s, z):
        ds, dz = _rhs(s, z, G, c, b, omega)
        norm = math.sqrt(abs(s) ** 2 + z * z)
        return math.sqrt(abs(ds) ** 2 + dz * dz) / (G * max(1.0, norm))

    s, z = 0j, -0.5
    res = residual(s, z)
    n = _n_steps(cfg)
    k = 0
    while res >= cfg.convergence_tol:
        if k >= n:
            raise ConvergenceError(
                f"no steady state within t_max={cfg.t_max:.6g}; final residual {res:.3g}", residual=res
            )
        s, z = _checked_step(s, z, k * h, h, G, c, drive, omega)
        res = residual(s, z)
        k += 1
    return BlochState(s, z)
