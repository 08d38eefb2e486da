"""Full driven atom-cavity master equation on a truncated Fock space.

This is the model the two-parameter Bloch description is obtained from by
eliminating the cavity field. It is used only as an independent check.

Frame and conventions (rotating at the drive frequency; atom and cavity
resonant with each other, both detuned by ``omega`` from the drive)::

    H = omega (a^dag a + s^+ s^-) + i g (a^dag s^- - s^+ a) + i sqrt(2 kappa) (b a^dag - b^* a)
    collapse operators: sqrt(2 kappa) a,  sqrt(gamma) s^-
    b_out = sqrt(2 kappa) <a> - b_in

Eliminating ``a`` for ``kappa >> g`` gives ``a ~ (g s^- + sqrt(2 kappa) b)/kappa``,
hence dipole decay ``g**2/kappa + gamma/2``, drive ``2 sqrt(2 g**2/kappa) b <s_z>``
and ``b_out = b_in + sqrt(2 g**2/kappa) <s^->``, i.e. the Bloch equations with
``Gamma``, ``beta`` from :func:`cavityflip.params.derive`.

Basis ordering is atom (x) Fock, atom index 0 = ground, 1 = excited.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import LinAlgWarning, expm, solve

from .errors import InvalidParameterError, SolverError, TruncationError
from .params import RawCavityParams, derive
from .response import BlochState, DriveCondition, output_from_state, reflection_ratio, steady_state

DEFAULT_TRUNCATION = 12
TOP_LEVEL_TOL = 1e-6
RESIDUAL_TOL = 1e-10


@dataclass(frozen=True)
class FullModel:
    """Atom-cavity rates, CW drive and Fock truncation ``N`` (photon numbers 0..N).

    ``g = 0`` is allowed here (empty-cavity checks) even though the eliminated
    model requires ``g > 0``.
    """

    g: float
    kappa: float
    gamma: float
    drive: DriveCondition
    truncation: int = DEFAULT_TRUNCATION

    def __post_init__(self):
        for name in ("g", "kappa", "gamma"):
            value = float(getattr(self, name))
            if not math.isfinite(value) or value < 0:
                raise InvalidParameterError(f"{name} must be finite and >= 0, got {value!r}")
            object.__setattr__(self, name, value)
        if self.kappa <= 0:
            raise InvalidParameterError("kappa must be > 0")
        if int(self.truncation) != self.truncation or self.truncation < 1:
            raise InvalidParameterError(f"truncation must be an integer >= 1, got {self.truncation!r}")
        object.__setattr__(self, "truncation", int(self.truncation))

    @classmethod
    def from_raw(cls, raw: RawCavityParams, drive: DriveCondition, truncation=DEFAULT_TRUNCATION):
        return cls(raw.g, raw.kappa, raw.gamma, drive, truncation)

    @property
    def raw(self) -> RawCavityParams:
        return RawCavityParams(self.g, self.kappa, self.gamma)

    @property
    def dim(self) -> int:
        return 2 * (self.truncation + 1)


@dataclass(frozen=True)
class Operators:
    a: np.ndarray
    sm: np.ndarray
    sz: np.ndarray


def operators(truncation: int) -> Operators:
    """Cavity annihilation, atomic lowering and atomic inversion (eigenvalues +-1/2)."""
    n = truncation + 1
    a_fock = np.diag(np.sqrt(np.arange(1, n, dtype=float)), 1)
    sm_atom = np.array([[0.0, 1.0], [0.0, 0.0]])
    sz_atom = np.diag([-0.5, 0.5])
    return Operators(
        a=np.kron(np.eye(2), a_fock).astype(complex),
        sm=np.kron(sm_atom, np.eye(n)).astype(complex),
        sz=np.kron(sz_atom, np.eye(n)).astype(complex),
    )


@dataclass
class DensityMatrix:
    """Steady-state density operator plus how it was obtained."""

    rho: np.ndarray
    truncation: int
    route: str = "direct"
    residual: float = float("nan")
    metadata: dict = field(default_factory=dict)

    def is_hermitian(self, tol=1e-10):
        return np.max(np.abs(self.rho - self.rho.conj().T)) <= tol

    def trace(self) -> complex:
        return np.trace(self.rho)

    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(0.5 * (self.rho + self.rho.conj().T))[0])

    def top_level_population(self) -> float:
        """Probability of the highest retained photon number."""
        n = self.truncation + 1
        diag = np.real(np.diag(self.rho)).reshape(2, n)
        return float(diag[:, -1].sum())


def _vec(m):
    return m.reshape(-1, order="F")


def _unvec(v, dim):
    return v.reshape(dim, dim, order="F")


def hamiltonian(m: FullModel, ops: Operators | None = None) -> np.ndarray:
    ops = ops or operators(m.truncation)
    a, sm = ops.a, ops.sm
    ad, sp = a.conj().T, sm.conj().T
    b = m.drive.amplitude
    drive = math.sqrt(2.0 * m.kappa)
    H = m.drive.omega * (ad @ a + sp @ sm)
    H = H + 1j * m.g * (ad @ sm - sp @ a)
    H = H + 1j * drive * (b * ad - np.conj(b) * a)
    return H


def collapse_operators(m: FullModel, ops: Operators | None = None) -> list:
    ops = ops or operators(m.truncation)
    return [math.sqrt(2.0 * m.kappa) * ops.a, math.sqrt(m.gamma) * ops.sm]


def build_generator(m: FullModel) -> np.ndarray:
    """Liouvillian superoperator acting on column-stacked density matrices."""
    ops = operators(m.truncation)
    H = hamiltonian(m, ops)
    eye = np.eye(m.dim)
    # vec(A X B) = (B^T kron A) vec(X)
    L = -1j * (np.kron(eye, H) - np.kron(H.T, eye))
    for c in collapse_operators(m, ops):
        cdc = c.conj().T @ c
        L = L + np.kron(c.conj(), c) - 0.5 * np.kron(eye, cdc) - 0.5 * np.kron(cdc.T, eye)
    return L


def apply_generator(m: FullModel, rho: np.ndarray) -> np.ndarray:
    """L(rho) evaluated directly from H and the collapse operators (no superoperator)."""
    ops = operators(m.truncation)
    H = hamiltonian(m, ops)
    out = -1j * (H @ rho - rho @ H)
    for c in collapse_operators(m, ops):
        cd = c.conj().T
        out = out + c @ rho @ cd - 0.5 * (cd @ c @ rho + rho @ cd @ c)
    return out


def _solve_direct(L, dim):
    # replace one equation by the trace condition
    A = L.copy()
    trace_row = _vec(np.eye(dim)).conj()
    A[0, :] = trace_row
    rhs = np.zeros(dim * dim, dtype=complex)
    rhs[0] = 1.0
    with warnings.catch_warnings():
        warnings.simplefilter("error", LinAlgWarning)
        try:
            v = solve(A, rhs)
        except (np.linalg.LinAlgError, LinAlgWarning) as exc:
            raise SolverError(f"steady state is not unique (singular solve): {exc}") from exc
    return _unvec(v, dim)


def _solve_propagate(L, dim, rate_scale, max_doublings=60):
    rho = np.zeros((dim, dim), dtype=complex)
    rho[0, 0] = 1.0
    v = _vec(rho)
    P = expm(L / rate_scale)
    res = math.inf
    for _ in range(max_doublings):
        v = P @ v
        res = np.linalg.norm(L @ v)
        if res < RESIDUAL_TOL:
            break
        P = P @ P
    else:
        raise SolverError(f"propagation did not reach a steady state, residual {res:.3g}", residual=res)
    return _unvec(v, dim)


def steady_density(m: FullModel, route="direct", check_truncation=True) -> DensityMatrix:
    """Stationary state of the full model.

    ``route="direct"`` solves L(rho) = 0 with tr(rho) = 1 replacing one row;
    ``route="propagate"`` applies exp(L t) with doubling horizons from the
    vacuum-ground state until the residual drops below 1e-10.
    """
    L = build_generator(m)
    if route == "direct":
        rho = _solve_direct(L, m.dim)
    elif route == "propagate":
        rates = [m.kappa, m.g, m.gamma / 2, m.g * m.g / m.kappa + m.gamma / 2]
        rho = _solve_propagate(L, m.dim, max(r for r in rates if r > 0))
    else:
        raise ValueError(f"unknown route {route!r}")
    rho = 0.5 * (rho + rho.conj().T)
    rho = rho / np.trace(rho).real
    residual = float(np.linalg.norm(L @ _vec(rho)))
    if residual > RESIDUAL_TOL * max(1.0, m.kappa):
        raise SolverError(f"steady state residual {residual:.3g} too large", residual=residual)
    dm = DensityMatrix(rho, m.truncation, route=route, residual=residual)
    if check_truncation and dm.top_level_population() >= TOP_LEVEL_TOL:
        raise TruncationError(
            f"top Fock level population {dm.top_level_population():.3g} >= {TOP_LEVEL_TOL}; increase truncation",
            residual=residual,
        )
    return dm


def expectations(rho: DensityMatrix):
    """(<a>, <sigma_->, <sigma_z>) for a density matrix."""
    ops = operators(rho.truncation)
    r = rho.rho
    return (
        complex(np.trace(ops.a @ r)),
        complex(np.trace(ops.sm @ r)),
        float(np.trace(ops.sz @ r).real),
    )


@dataclass(frozen=True)
class OracleReport:
    """Full-model steady state compared with the closed-form eliminated model."""

    model: FullModel
    route: str
    residual: float
    cavity_amplitude: complex
    state: BlochState
    b_out_full: complex
    b_out_eliminated: complex
    analytic_state: BlochState
    b_out_analytic: complex
    elimination_error: float


def _rel(x, ref):
    ref_mag = abs(ref)
    return abs(x - ref) if ref_mag == 0 else abs(x - ref) / ref_mag


def compare(m: FullModel, route="direct") -> OracleReport:
    dm = steady_density(m, route=route)
    a, sm, sz = expectations(dm)
    b_in = m.drive.amplitude
    b_out_full = math.sqrt(2.0 * m.kappa) * a - b_in
    if m.g == 0:
        # uncoupled, undriven atom relaxes to ground; the cavity is a bare mirror
        analytic = BlochState.ground()
        b_out_analytic = b_in
        b_out_elim = b_in
    else:
        p = derive(m.raw)
        analytic = steady_state(p, m.drive)
        b_out_analytic = reflection_ratio(p, m.drive.omega, m.drive.flux) * b_in
        b_out_elim = output_from_state(p, b_in, BlochState(sm, sz))
    error = max(
        _rel(sm, analytic.sigma_minus),
        _rel(sz, analytic.sigma_z),
        _rel(b_out_full, b_out_analytic),
    )
    return OracleReport(
        model=m,
        route=dm.route,
        residual=dm.residual,
        cavity_amplitude=a,
        state=BlochState(sm, sz),
        b_out_full=b_out_full,
        b_out_eliminated=b_out_elim,
        analytic_state=analytic,
        b_out_analytic=b_out_analytic,
        elimination_error=error,
    )


def elimination_error(m: FullModel) -> float:
    """Largest relative deviation of <sigma_->, <sigma_z> and b_out from the eliminated model."""
    return compare(m).elimination_error
