"""Phase-shift spectra, weak-to-strong intensity sweeps and the detuning optimum."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .errors import ConvergenceError, DegenerateResponseError, InvalidParameterError
from .params import AtomCavityParams, saturation_scale
from .response import linear_reflectivity, nonlinear_phase_shift, response_vs_intensity

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0

COARSE_STOP = 10.0
COARSE_STEP = 0.01
REFINE_TOL = 1e-6


@dataclass
class SpectrumResult:
    beta: float
    omega_over_Gamma: np.ndarray
    phase_deg: np.ndarray
    reflectivity: np.ndarray
    degenerate: np.ndarray
    metadata: dict = field(default_factory=dict)

    @property
    def max_sample(self):
        """(omega/Gamma, phase) of the largest finite grid sample."""
        i = int(np.nanargmax(self.phase_deg))
        return float(self.omega_over_Gamma[i]), float(self.phase_deg[i])


@dataclass(frozen=True)
class MaxPhaseResult:
    """Optimum of the nonlinear phase shift over detuning.

    ``open_supremum`` marks beta = 0.5, where 180 degrees is approached as
    omega -> 0+ but not attained.
    """

    beta: float
    omega_star_over_Gamma: float
    phase_star_deg: float
    iterations: int
    open_supremum: bool = False


@dataclass
class IntensityTable:
    flux: np.ndarray
    flux_over_saturation: np.ndarray
    phase_deg: np.ndarray
    reflectivity: np.ndarray
    degenerate: np.ndarray
    metadata: dict = field(default_factory=dict)


def _grid(values):
    grid = np.asarray(values, dtype=float)
    if grid.ndim != 1 or grid.size == 0 or not np.all(np.isfinite(grid)):
        raise InvalidParameterError("grid must be a non-empty 1-D array of finite values")
    if np.any(np.diff(grid) <= 0):
        raise InvalidParameterError("grid must be strictly increasing")
    return grid


def phase_spectrum(beta, grid) -> SpectrumResult:
    """Nonlinear phase shift and weak-field reflectivity over an omega/Gamma grid.

    The perfect-absorption point (beta = 0.5, omega = 0) is flagged with a
    NaN phase instead of raising.
    """
    if not 0.0 <= float(beta) <= 1.0:
        raise InvalidParameterError(f"beta must lie in [0, 1], got {beta}")
    x = _grid(grid)
    phase = np.empty_like(x)
    degenerate = np.zeros(x.shape, dtype=bool)
    for i, xi in enumerate(x):
        try:
            phase[i] = nonlinear_phase_shift(beta, xi)
        except DegenerateResponseError:
            phase[i] = math.nan
            degenerate[i] = True
    refl = np.array([linear_reflectivity(beta, xi) for xi in x])
    meta = {
        "grid_start": float(x[0]),
        "grid_stop": float(x[-1]),
        "grid_points": int(x.size),
        "code_version": __version__,
    }
    return SpectrumResult(float(beta), x, phase, refl, degenerate, meta)


def golden_section_max(f, a, b, tol=REFINE_TOL):
    """Maximise a unimodal ``f`` on [a, b] until the bracket is shorter than ``tol``.

    Returns ``(x, f(x), iterations)``.
    """
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    iterations = 0
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = f(d)
        iterations += 1
    x = 0.5 * (a + b)
    return x, f(x), iterations


def find_max_phase(beta) -> MaxPhaseResult:
    """Detuning (in units of Gamma) maximising the nonlinear phase shift.

    A coarse scan over [0, 10] in steps of 0.01 brackets the peak, then
    golden-section search refines it to 1e-6. For beta > 0.5 the optimum is
    the resonant 180-degree flip at omega = 0.
    """
    beta = float(beta)
    if not 0.0 < beta <= 1.0:
        raise InvalidParameterError(f"beta must lie in (0, 1], got {beta}")
    if beta == 0.5:
        return MaxPhaseResult(beta, 0.0, 180.0, 0, open_supremum=True)

    n = int(round(COARSE_STOP / COARSE_STEP))
    coarse = np.arange(n + 1) * COARSE_STEP
    f = lambda x: nonlinear_phase_shift(beta, x)
    samples = np.array([f(x) for x in coarse])

    interior = (samples[1:-1] > samples[:-2]) & (samples[1:-1] >= samples[2:])
    if np.count_nonzero(interior) > 1:
        raise ConvergenceError(f"phase spectrum for beta={beta} is not unimodal on [0, {COARSE_STOP}]")

    i = int(np.argmax(samples))
    lo = coarse[max(i - 1, 0)]
    hi = coarse[min(i + 1, n)]
    x, fx, iters = golden_section_max(f, lo, hi)
    # a left-edge optimum (the resonant flip) is returned exactly
    if i == 0 and samples[0] >= fx:
        x, fx = 0.0, float(samples[0])
    return MaxPhaseResult(beta, float(x), float(fx), iters)


def intensity_transition(p: AtomCavityParams, omega, flux_decades=(-3.0, 3.0, 61)) -> IntensityTable:
    """Reflection on a logarithmic flux grid spanning ``lo..hi`` decades about Gamma/beta.

    For beta = 0 the grid is centred on Gamma instead (the response is flat).
    """
    lo, hi, points = flux_decades
    if not lo < hi:
        raise InvalidParameterError(f"flux decades need lo < hi, got ({lo}, {hi})")
    if int(points) != points or points < 2:
        raise InvalidParameterError("need at least two flux points")
    scale = saturation_scale(p) if p.beta > 0 else p.Gamma
    rel = np.logspace(lo, hi, int(points))
    flux = scale * rel
    responses = response_vs_intensity(p, omega, flux)
    meta = {
        "Gamma": p.Gamma,
        "beta": p.beta,
        "omega": float(omega),
        "saturation_flux": scale,
        "decades": [float(lo), float(hi), int(points)],
        "code_version": __version__,
    }
    return IntensityTable(
        flux=flux,
        flux_over_saturation=rel,
        phase_deg=np.array([r.phase_deg for r in responses]),
        reflectivity=np.array([r.reflectivity for r in responses]),
        degenerate=np.array([r.degenerate for r in responses]),
        metadata=meta,
    )


def required_beta_for_efficiency(eta_target) -> float:
    """The beta >= 0.5 (phase-flipping branch) whose resonant efficiency equals ``eta_target``."""
    eta = float(eta_target)
    if not 0.0 <= eta <= 1.0:
        raise InvalidParameterError(f"efficiency must lie in [0, 1], got {eta}")
    return (1.0 + math.sqrt(eta)) / 2.0
