"""Steady-state response of the driven atom and the field reflected by the cavity.

Conventions: the drive amplitude ``b_in`` is normalised so that ``|b_in|**2``
is the incident photon flux, ``omega`` is the drive detuning from the atomic
line, and the reflected field is ``b_out = b_in + sqrt(2*beta*Gamma) <sigma_->``.
Phases are in degrees.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DegenerateResponseError, InvalidParameterError, ZeroInputError
from .params import AtomCavityParams

#: |b_out| below this fraction of |b_in| is treated as perfect absorption.
DEGENERATE_RATIO = 1e-14


@dataclass(frozen=True)
class DriveCondition:
    """Coherent continuous-wave drive: detuning ``omega`` and complex ``amplitude``."""

    omega: float
    amplitude: complex

    def __post_init__(self):
        omega = float(self.omega)
        amplitude = complex(self.amplitude)
        if not math.isfinite(omega):
            raise InvalidParameterError(f"omega must be finite, got {omega!r}")
        if not cmath.isfinite(amplitude):
            raise InvalidParameterError(f"amplitude must be finite, got {amplitude!r}")
        object.__setattr__(self, "omega", omega)
        object.__setattr__(self, "amplitude", amplitude)

    @classmethod
    def from_flux(cls, flux, omega=0.0, phase=0.0):
        """Drive with photon flux ``flux`` and global phase ``phase`` (radians)."""
        flux = float(flux)
        if not (math.isfinite(flux) and flux >= 0):
            raise InvalidParameterError(f"photon flux must be finite and >= 0, got {flux!r}")
        return cls(omega=omega, amplitude=cmath.rect(math.sqrt(flux), phase))

    @property
    def flux(self) -> float:
        return abs(self.amplitude) ** 2


@dataclass(frozen=True)
class BlochState:
    """Atomic expectation values <sigma_-> and <sigma_z> (ground state: sigma_z = -1/2)."""

    sigma_minus: complex
    sigma_z: float

    @classmethod
    def ground(cls):
        return cls(0j, -0.5)

    @property
    def bloch_radius_sq(self) -> float:
        """4*(|sigma_-|**2 + sigma_z**2); at most 1 for a physical state."""
        return 4.0 * (abs(self.sigma_minus) ** 2 + self.sigma_z**2)

    def in_bloch_ball(self, tol=1e-9) -> bool:
        return self.bloch_radius_sq <= 1.0 + tol

    def as_array(self) -> np.ndarray:
        return np.array([self.sigma_minus.real, self.sigma_minus.imag, self.sigma_z])


@dataclass(frozen=True)
class ReflectionResponse:
    """Reflected field for one drive condition.

    ``phase_deg`` is arg(b_out/b_in) in (-180, 180]; ``reflectivity`` is
    |b_out/b_in|**2. Points where the phase is undefined carry
    ``degenerate=True`` and a NaN phase.
    """

    b_in: complex
    b_out: complex
    phase_deg: float
    reflectivity: float
    degenerate: bool = False

    @property
    def ratio(self) -> complex:
        return self.b_out / self.b_in


def _denominator(p: AtomCavityParams, omega, flux):
    return p.Gamma**2 + omega**2 + 4.0 * p.beta * p.Gamma * flux


def steady_state(p: AtomCavityParams, d: DriveCondition) -> BlochState:
    """Closed-form stationary solution of the driven Bloch equations."""
    flux = d.flux
    D = _denominator(p, d.omega, flux)
    sigma_z = -(p.Gamma**2 + d.omega**2) / (2.0 * D)
    sigma_minus = -p.coupling * complex(p.Gamma, -d.omega) * d.amplitude / D
    return BlochState(sigma_minus, sigma_z)


def output_from_state(p: AtomCavityParams, b_in: complex, state: BlochState) -> complex:
    """Input-output relation: incident field plus the dipole emission."""
    return b_in + p.coupling * state.sigma_minus


def reflection_ratio(p: AtomCavityParams, omega, flux) -> complex:
    """b_out/b_in at steady state, written as a single rational function of the flux."""
    flux = float(flux)
    if not (math.isfinite(flux) and flux >= 0):
        raise InvalidParameterError(f"photon flux must be finite and >= 0, got {flux!r}")
    G, b = p.Gamma, p.beta
    saturating = 4.0 * b * G * flux
    numerator = complex((1.0 - 2.0 * b) * G, omega) * complex(G, -omega) + saturating
    return numerator / _denominator(p, omega, flux)


def phase_deg(z: complex) -> float:
    """arg(z) in degrees, mapped into (-180, 180]."""
    angle = math.degrees(cmath.phase(z))
    return 180.0 if angle <= -180.0 else angle


def output_amplitude(p: AtomCavityParams, d: DriveCondition) -> ReflectionResponse:
    """Steady-state reflected field, its phase relative to the input and the reflectivity.

    Raises ZeroInputError for a zero drive and DegenerateResponseError when the
    reflected field vanishes (perfect absorption), since no phase exists there.
    """
    if d.amplitude == 0:
        raise ZeroInputError("phase of the reflected field is undefined for zero input")
    ratio = reflection_ratio(p, d.omega, d.flux)
    if abs(ratio) < DEGENERATE_RATIO:
        raise DegenerateResponseError(
            f"reflected field vanishes (|b_out/b_in| = {abs(ratio):.3g}) at "
            f"beta={p.beta}, omega={d.omega}"
        )
    return ReflectionResponse(
        b_in=d.amplitude,
        b_out=ratio * d.amplitude,
        phase_deg=phase_deg(ratio),
        reflectivity=abs(ratio) ** 2,
    )


def weak_field_ratio(p: AtomCavityParams, omega) -> complex:
    """Linear (unsaturated) reflection coefficient (Gamma(1-2beta) + i omega)/(Gamma + i omega)."""
    G = p.Gamma
    return complex(G * (1.0 - 2.0 * p.beta), omega) / complex(G, omega)


def _check_beta(beta):
    beta = float(beta)
    if not 0.0 <= beta <= 1.0:
        raise InvalidParameterError(f"beta must lie in [0, 1], got {beta}")
    return beta


def nonlinear_phase_shift(beta, omega_over_Gamma) -> float:
    """Magnitude of the phase change between the weak- and strong-field reflection, in degrees.

    Both arccos terms are evaluated as ``atan2(|x|, a)``, which is the same
    angle without the round-off hazard of arccos near +-1.
    """
    beta = _check_beta(beta)
    x = abs(float(omega_over_Gamma))
    a = 1.0 - 2.0 * beta
    if a == 0.0 and x == 0.0:
        raise DegenerateResponseError("phase shift undefined at beta = 0.5, omega = 0 (perfect absorption)")
    return math.degrees(math.atan2(x, a) - math.atan2(x, 1.0))


def linear_reflectivity(beta, omega_over_Gamma) -> float:
    """Weak-field efficiency eta = ((1-2beta)**2 + x**2)/(1 + x**2), x = omega/Gamma."""
    beta = _check_beta(beta)
    x2 = float(omega_over_Gamma) ** 2
    return ((1.0 - 2.0 * beta) ** 2 + x2) / (1.0 + x2)


def response_vs_intensity(p: AtomCavityParams, omega, flux_grid: Sequence[float]) -> list[ReflectionResponse]:
    """Reflection across a strictly increasing grid of input photon fluxes.

    Degenerate points do not abort the sweep; they come back flagged.
    """
    fluxes = np.asarray(flux_grid, dtype=float)
    if fluxes.ndim != 1 or np.any(fluxes < 0) or not np.all(np.isfinite(fluxes)):
        raise InvalidParameterError("flux grid must be a 1-D array of finite values >= 0")
    if np.any(np.diff(fluxes) <= 0):
        raise InvalidParameterError("flux grid must be strictly increasing")

    out = []
    for flux in fluxes:
        d = DriveCondition.from_flux(flux, omega)
        try:
            out.append(output_amplitude(p, d))
        except DegenerateResponseError:
            ratio = reflection_ratio(p, omega, flux)
            out.append(
                ReflectionResponse(
                    b_in=d.amplitude,
                    b_out=ratio * d.amplitude,
                    phase_deg=math.nan,
                    reflectivity=abs(ratio) ** 2,
                    degenerate=True,
                )
            )
    return out
