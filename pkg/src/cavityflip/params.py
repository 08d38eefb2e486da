"""Cavity-QED rates and the two-parameter eliminated model.

The eliminated (bad-cavity) dynamics depend on two numbers only: the dipole
relaxation rate ``Gamma = g**2/kappa + gamma/2`` and the fraction ``beta`` of
spontaneous emission that leaves through the cavity mode,
``beta * Gamma = g**2/kappa``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DegenerateParameterError, InvalidParameterError


def _finite(name, value):
    value = float(value)
    if not math.isfinite(value):
        raise InvalidParameterError(f"{name} must be finite, got {value!r}")
    return value


@dataclass(frozen=True)
class RawCavityParams:
    """Physical rates of the atom-cavity system (all in inverse time units).

    g
        Atom-field coupling rate, > 0.
    kappa
        Cavity field (amplitude) decay rate, > 0.
    gamma
        Spontaneous emission rate into non-cavity modes, >= 0.
    """

    g: float
    kappa: float
    gamma: float = 0.0

    def __post_init__(self):
        g = _finite("g", self.g)
        kappa = _finite("kappa", self.kappa)
        gamma = _finite("gamma", self.gamma)
        if g <= 0:
            raise InvalidParameterError(f"g must be > 0, got {g}")
        if kappa <= 0:
            raise InvalidParameterError(f"kappa must be > 0, got {kappa}")
        if gamma < 0:
            raise InvalidParameterError(f"gamma must be >= 0, got {gamma}")
        object.__setattr__(self, "g", g)
        object.__setattr__(self, "kappa", kappa)
        object.__setattr__(self, "gamma", gamma)

    @property
    def bad_cavity_ratio(self) -> float:
        """kappa/g; the eliminated model is trustworthy when this is large."""
        return self.kappa / self.g


@dataclass(frozen=True)
class AtomCavityParams:
    """Dipole relaxation rate ``Gamma`` (> 0) and emission factor ``beta`` in [0, 1]."""

    Gamma: float
    beta: float

    def __post_init__(self):
        Gamma = _finite("Gamma", self.Gamma)
        beta = _finite("beta", self.beta)
        if Gamma <= 0:
            raise InvalidParameterError(f"Gamma must be > 0, got {Gamma}")
        if not 0.0 <= beta <= 1.0:
            raise InvalidParameterError(f"beta must lie in [0, 1], got {beta}")
        object.__setattr__(self, "Gamma", Gamma)
        object.__setattr__(self, "beta", beta)

    @property
    def cavity_rate(self) -> float:
        """beta*Gamma, the dipole decay rate through the cavity (g**2/kappa)."""
        return self.beta * self.Gamma

    @property
    def coupling(self) -> float:
        """sqrt(2*beta*Gamma), the atom/input-field coupling amplitude."""
        return math.sqrt(2.0 * self.beta * self.Gamma)


def derive(raw: RawCavityParams) -> AtomCavityParams:
    """Eliminate the cavity: map ``(g, kappa, gamma)`` to ``(Gamma, beta)``."""
    cavity_rate = raw.g * raw.g / raw.kappa
    Gamma = cavity_rate + raw.gamma / 2.0
    return AtomCavityParams(Gamma=Gamma, beta=cavity_rate / Gamma)


def invert(canonical: AtomCavityParams, kappa: float) -> RawCavityParams:
    """Recover ``g`` and ``gamma`` for a chosen cavity decay rate ``kappa``."""
    kappa = _finite("kappa", kappa)
    if kappa <= 0:
        raise InvalidParameterError(f"kappa must be > 0, got {kappa}")
    if canonical.beta == 0:
        raise DegenerateParameterError("beta = 0 requires g = 0, which is not a valid cavity")
    g = math.sqrt(canonical.beta * canonical.Gamma * kappa)
    gamma = 2.0 * (1.0 - canonical.beta) * canonical.Gamma
    return RawCavityParams(g=g, kappa=kappa, gamma=gamma)


def kappa_for_ratio(canonical: AtomCavityParams, kappa_over_g: float) -> float:
    """Cavity decay rate giving the requested ``kappa/g`` at fixed ``(Gamma, beta)``.

    From ``g**2/kappa = beta*Gamma`` and ``g = kappa/r`` follows
    ``kappa = r**2 * beta * Gamma``.
    """
    ratio = _finite("kappa_over_g", kappa_over_g)
    if ratio <= 0:
        raise InvalidParameterError(f"kappa_over_g must be > 0, got {ratio}")
    if canonical.beta == 0:
        raise DegenerateParameterError("kappa/g is undefined for beta = 0")
    return ratio * ratio * canonical.cavity_rate


def saturation_scale(canonical: AtomCavityParams) -> float:
    """Input photon flux ``Gamma/beta`` at which the atom starts to saturate."""
    if canonical.beta == 0:
        raise DegenerateParameterError("saturation scale Gamma/beta is undefined for beta = 0")
    return canonical.Gamma / canonical.beta
