"""Strict JSON run configuration.

Example::

    {
      "mode": "steady",
      "canonical": {"Gamma": 1.0, "beta": 0.8},
      "drive": {"omega": 0.0, "flux": 1.0},
      "output": {"path": "steady.csv", "format": "csv"}
    }

Exactly one of ``canonical`` ({Gamma, beta}) or ``raw`` ({g, kappa, gamma})
must be given. Unknown keys are rejected at every level.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field, replace

from .errors import ConfigError, InvalidParameterError
from .params import AtomCavityParams, RawCavityParams, derive

SCHEMA_VERSION = 1
MODES = ("steady", "phase-spectrum", "intensity-sweep", "dynamics", "max-phase", "verify-oracle")
FORMATS = ("csv", "json")

_TOP_KEYS = {"schema_version", "mode", "canonical", "raw", "drive", "grid", "sweep", "integrator", "oracle", "output"}
_BLOCK_KEYS = {
    "canonical": ({"Gamma", "beta"}, set()),
    "raw": ({"g", "kappa"}, {"gamma"}),
    "drive": (set(), {"omega", "flux"}),
    "grid": ({"start", "stop", "num"}, set()),
    "sweep": ({"lo", "hi", "points"}, set()),
    "integrator": (set(), {"dt", "t_max", "convergence_tol", "record_stride"}),
    "oracle": (set(), {"kappa_over_g", "truncation", "route"}),
    "output": (set(), {"path", "format"}),
}
# blocks (and drive fields) each mode cannot run without
_MODE_NEEDS = {
    "steady": ({"drive"}, {"flux"}),
    "phase-spectrum": ({"grid"}, set()),
    "intensity-sweep": ({"sweep"}, set()),
    "dynamics": ({"drive"}, {"flux"}),
    "max-phase": (set(), set()),
    "verify-oracle": ({"drive"}, {"flux"}),
}


@dataclass(frozen=True)
class RunConfig:
    mode: str
    canonical: AtomCavityParams
    raw: RawCavityParams | None = None
    omega: float = 0.0
    flux: float | None = None
    grid: dict | None = None
    sweep: dict | None = None
    integrator: dict = field(default_factory=dict)
    oracle: dict = field(default_factory=dict)
    output_path: str | None = None
    output_format: str = "csv"

    def with_overrides(self, out=None, fmt=None):
        cfg = self
        if out is not None:
            cfg = replace(cfg, output_path=out)
        if fmt is not None:
            cfg = replace(cfg, output_format=fmt)
        return validate(cfg)


def _block(doc, name):
    block = doc.get(name)
    if block is None:
        return None
    if not isinstance(block, dict):
        raise ConfigError(f"'{name}' must be an object")
    required, optional = _BLOCK_KEYS[name]
    unknown = set(block) - required - optional
    if unknown:
        raise ConfigError(f"unknown key(s) in '{name}': {', '.join(sorted(unknown))}")
    missing = required - set(block)
    if missing:
        raise ConfigError(f"'{name}' is missing: {', '.join(sorted(missing))}")
    return block


def _number(block, name, key, default=None):
    value = block.get(key, default) if block else default
    if value is None:
        return None
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"'{name}.{key}' must be a number, got {value!r}")
    return float(value)


def validate(cfg: RunConfig) -> RunConfig:
    if cfg.mode not in MODES:
        raise ConfigError(f"mode must be one of {', '.join(MODES)}; got {cfg.mode!r}")
    if cfg.output_format not in FORMATS:
        raise ConfigError(f"output format must be csv or json; got {cfg.output_format!r}")
    blocks, drive_fields = _MODE_NEEDS[cfg.mode]
    for name in blocks - {"drive"}:
        if getattr(cfg, name) is None:
            raise ConfigError(f"mode '{cfg.mode}' requires a '{name}' block")
    if "flux" in drive_fields and cfg.flux is None:
        raise ConfigError(f"mode '{cfg.mode}' requires 'drive.flux'")
    if cfg.mode == "verify-oracle" and cfg.raw is None and "kappa_over_g" not in cfg.oracle:
        raise ConfigError("verify-oracle needs either a 'raw' block or 'oracle.kappa_over_g'")
    if cfg.oracle.get("route", "direct") not in ("direct", "propagate"):
        raise ConfigError("'oracle.route' must be 'direct' or 'propagate'")
    if cfg.raw is not None and "kappa_over_g" in cfg.oracle:
        raise ConfigError("'oracle.kappa_over_g' conflicts with an explicit 'raw' block")
    return cfg


def parse_config(text: str, mode: str | None = None) -> RunConfig:
    """Parse and validate a JSON run configuration.

    ``mode``, when given, overrides the config's own ``mode`` entry.
    Raises ConfigError naming the offending key, or the line/column of a
    JSON syntax error.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    if not isinstance(doc, dict):
        raise ConfigError("configuration must be a JSON object")
    unknown = set(doc) - _TOP_KEYS
    if unknown:
        raise ConfigError(f"unknown top-level key(s): {', '.join(sorted(unknown))}")
    version = doc.get("schema_version", SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        raise ConfigError(f"unsupported schema_version {version!r} (expected {SCHEMA_VERSION})")

    canonical_block, raw_block = _block(doc, "canonical"), _block(doc, "raw")
    if (canonical_block is None) == (raw_block is None):
        raise ConfigError("exactly one parameter block ('canonical' or 'raw') is required")
    try:
        if raw_block is not None:
            raw = RawCavityParams(
                _number(raw_block, "raw", "g"),
                _number(raw_block, "raw", "kappa"),
                _number(raw_block, "raw", "gamma", 0.0),
            )
            canonical = derive(raw)
        else:
            raw = None
            canonical = AtomCavityParams(
                _number(canonical_block, "canonical", "Gamma"),
                _number(canonical_block, "canonical", "beta"),
            )
    except InvalidParameterError as exc:
        raise ConfigError(f"invalid parameters: {exc}") from exc

    drive = _block(doc, "drive") or {}
    flux = _number(drive, "drive", "flux")
    if flux is not None and flux < 0:
        raise ConfigError("'drive.flux' must be >= 0")

    grid = _block(doc, "grid")
    if grid is not None:
        grid = {
            "start": _number(grid, "grid", "start"),
            "stop": _number(grid, "grid", "stop"),
            "num": int(_number(grid, "grid", "num")),
        }
    sweep = _block(doc, "sweep")
    if sweep is not None:
        sweep = {
            "lo": _number(sweep, "sweep", "lo"),
            "hi": _number(sweep, "sweep", "hi"),
            "points": int(_number(sweep, "sweep", "points")),
        }
    integrator = {k: _number(doc["integrator"], "integrator", k) for k in (_block(doc, "integrator") or {})}
    oracle = dict(_block(doc, "oracle") or {})
    for key in ("kappa_over_g", "truncation"):
        if key in oracle:
            oracle[key] = _number(oracle, "oracle", key)
    output = _block(doc, "output") or {}

    mode = mode or doc.get("mode")
    if mode is None:
        raise ConfigError("no mode given (set 'mode' in the config or pass it on the command line)")
    cfg = RunConfig(
        mode=mode,
        canonical=canonical,
        raw=raw,
        omega=_number(drive, "drive", "omega", 0.0),
        flux=flux,
        grid=grid,
        sweep=sweep,
        integrator=integrator,
        oracle=oracle,
        output_path=output.get("path"),
        output_format=output.get("format", "csv"),
    )
    return validate(cfg)
