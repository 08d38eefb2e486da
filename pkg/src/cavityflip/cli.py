"""``cavityflip <mode> --config <path> [--out <path>] [--format csv|json]``

Exit codes: 0 success, 2 invalid config, 3 degenerate response,
4 non-convergence, 5 I/O failure.
"""
from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from . import __version__
from .artifacts import Table, render
from .config import FORMATS, MODES, RunConfig, parse_config
from .dynamics import DriveEnvelope, IntegratorConfig, integrate
from .errors import (
    ConfigError,
    ConvergenceError,
    DegenerateResponseError,
    InvalidParameterError,
    StepInstabilityError,
    ZeroInputError,
)
from .oracle import DEFAULT_TRUNCATION, FullModel, compare
from .params import invert, kappa_for_ratio
from .response import BlochState, DriveCondition, output_amplitude, reflection_ratio, steady_state
from .sweep import find_max_phase, intensity_transition, phase_spectrum

EXIT_OK, EXIT_CONFIG, EXIT_DEGENERATE, EXIT_CONVERGENCE, EXIT_IO = 0, 2, 3, 4, 5


class DegenerateOutput(Exception):
    """Artifact was written but contains undefined phases."""

    def __init__(self, table, summary):
        self.table = table
        self.summary = summary


def _base_meta(cfg: RunConfig):
    p = cfg.canonical
    meta = {"code_version": __version__, "Gamma": p.Gamma, "beta": p.beta}
    if cfg.raw is not None:
        meta.update(g=cfg.raw.g, kappa=cfg.raw.kappa, gamma=cfg.raw.gamma)
    return meta


def run_steady(cfg: RunConfig):
    p = cfg.canonical
    d = DriveCondition.from_flux(cfg.flux, cfg.omega)
    s = steady_state(p, d)
    ratio = reflection_ratio(p, d.omega, d.flux)
    b_out = ratio * d.amplitude
    try:
        phase = output_amplitude(p, d).phase_deg
    except ZeroInputError:
        phase = math.nan
    columns = ["omega", "flux", "re_sigma_minus", "im_sigma_minus", "sigma_z",
               "re_b_out", "im_b_out", "phase_deg", "reflectivity"]
    row = [d.omega, d.flux, s.sigma_minus.real, s.sigma_minus.imag, s.sigma_z,
           b_out.real, b_out.imag, phase, abs(ratio) ** 2]
    table = Table("steady", columns, [row], _base_meta(cfg))
    summary = f"steady: sigma_z={s.sigma_z:.6g} reflectivity={abs(ratio) ** 2:.6g} phase={phase:.6g} deg"
    return table, summary


def run_phase_spectrum(cfg: RunConfig):
    g = cfg.grid
    grid = np.linspace(g["start"], g["stop"], g["num"])
    spectrum = phase_spectrum(cfg.canonical.beta, grid)
    rows = [[float(x), float(ph), float(r)] for x, ph, r in zip(spectrum.omega_over_Gamma, spectrum.phase_deg, spectrum.reflectivity)]
    meta = {**_base_meta(cfg), **spectrum.metadata}
    if spectrum.degenerate.any():
        meta["degenerate_omega_over_gamma"] = [float(x) for x in spectrum.omega_over_Gamma[spectrum.degenerate]]
    table = Table("phase-spectrum", ["omega_over_gamma", "phase_deg", "reflectivity"], rows, meta)
    x, ph = spectrum.max_sample
    summary = f"phase-spectrum: beta={spectrum.beta:g} max sampled |dphi|={ph:.6g} deg at omega/Gamma={x:.6g}"
    if spectrum.degenerate.any():
        raise DegenerateOutput(table, summary + " (degenerate point flagged)")
    return table, summary


def run_intensity_sweep(cfg: RunConfig):
    s = cfg.sweep
    t = intensity_transition(cfg.canonical, cfg.omega, (s["lo"], s["hi"], s["points"]))
    rows = [[float(f), float(f_rel), float(ph), float(r)]
            for f, f_rel, ph, r in zip(t.flux, t.flux_over_saturation, t.phase_deg, t.reflectivity)]
    meta = {**_base_meta(cfg), **t.metadata}
    table = Table("intensity-sweep", ["flux", "flux_over_saturation", "phase_deg", "reflectivity"], rows, meta)
    summary = (f"intensity-sweep: reflectivity {t.reflectivity[0]:.6g} -> {t.reflectivity[-1]:.6g} "
               f"over {len(rows)} points")
    if t.degenerate.any():
        raise DegenerateOutput(table, summary + " (degenerate point flagged)")
    return table, summary


def run_dynamics(cfg: RunConfig):
    p = cfg.canonical
    d = DriveCondition.from_flux(cfg.flux, cfg.omega)
    opts = dict(cfg.integrator)
    icfg = IntegratorConfig(
        dt=opts.get("dt", 0.01 / p.Gamma),
        t_max=opts.get("t_max", 40.0 / p.Gamma),
        convergence_tol=opts.get("convergence_tol", 1e-10),
        record_stride=int(opts.get("record_stride", 10)),
    )
    traj = integrate(BlochState.ground(), p, DriveEnvelope.cw(d), icfg)
    rows = [[t, s.sigma_minus.real, s.sigma_minus.imag, s.sigma_z, b.real, b.imag]
            for t, s, b in zip(traj.times, traj.states, traj.b_out)]
    meta = {**_base_meta(cfg), "omega": d.omega, "flux": d.flux, "dt": icfg.dt, "t_max": icfg.t_max,
            "record_stride": icfg.record_stride}
    columns = ["t", "re_sigma_minus", "im_sigma_minus", "sigma_z", "re_b_out", "im_b_out"]
    final = traj.final
    summary = f"dynamics: {len(rows)} samples, final sigma_z={final.sigma_z:.6g}"
    return Table("dynamics", columns, rows, meta), summary


def run_max_phase(cfg: RunConfig):
    r = find_max_phase(cfg.canonical.beta)
    columns = ["beta", "omega_star_over_gamma", "phase_star_deg", "iterations", "open_supremum"]
    table = Table("max-phase", columns, [[r.beta, r.omega_star_over_Gamma, r.phase_star_deg, r.iterations,
                                          r.open_supremum]], _base_meta(cfg))
    kind = "sup" if r.open_supremum else "max"
    summary = (f"max-phase: phase*={r.phase_star_deg:.4g} deg at omega*={r.omega_star_over_Gamma:.4g} Gamma "
               f"(beta={r.beta:g}, {kind})")
    return table, summary


def run_verify_oracle(cfg: RunConfig):
    p = cfg.canonical
    if cfg.raw is not None:
        raw = cfg.raw
    else:
        raw = invert(p, kappa_for_ratio(p, cfg.oracle["kappa_over_g"]))
    d = DriveCondition.from_flux(cfg.flux, cfg.omega)
    truncation = int(cfg.oracle.get("truncation", DEFAULT_TRUNCATION))
    rep = compare(FullModel.from_raw(raw, d, truncation), route=cfg.oracle.get("route", "direct"))
    columns = ["g", "kappa", "gamma", "Gamma", "beta", "kappa_over_g", "omega", "flux", "truncation", "route",
               "residual", "elimination_error",
               "re_b_out_full", "im_b_out_full", "re_b_out_eliminated", "im_b_out_eliminated",
               "re_b_out_analytic", "im_b_out_analytic"]
    row = [raw.g, raw.kappa, raw.gamma, p.Gamma, p.beta, raw.bad_cavity_ratio, d.omega, d.flux, truncation,
           rep.route, rep.residual, rep.elimination_error,
           rep.b_out_full.real, rep.b_out_full.imag, rep.b_out_eliminated.real, rep.b_out_eliminated.imag,
           rep.b_out_analytic.real, rep.b_out_analytic.imag]
    table = Table("verify-oracle", columns, [row], {"code_version": __version__})
    summary = (f"verify-oracle: kappa/g={raw.bad_cavity_ratio:.4g} elimination_error={rep.elimination_error:.3g} "
               f"residual={rep.residual:.3g}")
    return table, summary


RUNNERS = {
    "steady": run_steady,
    "phase-spectrum": run_phase_spectrum,
    "intensity-sweep": run_intensity_sweep,
    "dynamics": run_dynamics,
    "max-phase": run_max_phase,
    "verify-oracle": run_verify_oracle,
}


def _emit(table, cfg, out):
    text = render(table, cfg.output_format)
    if cfg.output_path is None:
        out.write(text)
    else:
        with open(cfg.output_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def run(cfg: RunConfig, out=None, err=None) -> int:
    """Execute one configured run; returns the process exit code.

    The summary line goes to ``err`` when the artifact itself is written to
    standard output, otherwise to ``out``.
    """
    out = out or sys.stdout
    err = err or sys.stderr
    say = err if cfg.output_path is None else out
    code = EXIT_OK
    try:
        table, summary = RUNNERS[cfg.mode](cfg)
    except DegenerateOutput as exc:
        table, summary, code = exc.table, exc.summary, EXIT_DEGENERATE
    except DegenerateResponseError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_DEGENERATE
    except (ConvergenceError, StepInstabilityError) as exc:
        print(f"error: {exc}", file=err)
        return EXIT_CONVERGENCE
    except InvalidParameterError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_CONFIG
    try:
        _emit(table, cfg, out)
    except OSError as exc:
        print(f"error: cannot write output: {exc}", file=err)
        return EXIT_IO
    print(summary, file=say)
    return code


def build_parser():
    parser = argparse.ArgumentParser(prog="cavityflip", description=__doc__.splitlines()[0])
    parser.add_argument("mode", choices=MODES)
    parser.add_argument("--config", required=True, help="JSON run configuration")
    parser.add_argument("--out", help="output file (default: config output.path, else stdout)")
    parser.add_argument("--format", choices=FORMATS, help="output format (overrides the config)")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        with open(args.config, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return EXIT_IO
    try:
        cfg = parse_config(text, mode=args.mode).with_overrides(out=args.out, fmt=args.format)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
