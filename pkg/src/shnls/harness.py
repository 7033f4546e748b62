"""Run orchestration: TOML configs, initial-data construction, execution
with persisted artifacts, and alpha-continuation sweeps.

Per-run file tree:

    <out>/config.resolved.toml      resolved copy of the configuration
    <out>/diagnostics.csv           one row per diagnostics record
    <out>/snapshots/t_<i>.bin       raw little-endian complex128 samples
    <out>/snapshots/t_<i>.json      sidecar: dims, n, box lengths, t
    <out>/summary.json              termination reason, drifts, regime

A sweep adds sweep_report.json and sweep_report.csv next to its per-run
directories.  Everything is deterministic for a fixed config: two
executions produce byte-identical diagnostics files.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, replace
from functools import lru_cache
from pathlib import Path

import numpy as np
import tomli

from . import diagnostics, groundstate, stepper
from .diagnostics import BlowupPolicy
from .spectral import Grid
from .stepper import StepControl
from .system import NLS, SH, SN, EquationSpec, validate_regime

SNAPSHOT_FORMAT_VERSION = "1"

INITIAL_KINDS = ("gaussian", "plane-wave", "soliton-1d", "townes", "file")


class ConfigError(Exception):
    """A configuration file is missing, unparseable, or inconsistent."""


@dataclass(frozen=True)
class OutputSpec:
    directory: str
    diagnostics_every: int = 10
    snapshot_every: int = 0

    def __post_init__(self):
        if self.diagnostics_every < 1:
            raise ConfigError("output.diagnostics_every must be >= 1")
        if self.snapshot_every < 0:
            raise ConfigError("output.snapshot_every must be >= 0")
        if self.snapshot_every and self.snapshot_every % self.diagnostics_every:
            raise ConfigError("output.snapshot_every must be a multiple of "
                              "output.diagnostics_every")


@dataclass(frozen=True)
class RunConfig:
    grid: Grid
    equation: EquationSpec
    initial_kind: str
    initial_params: tuple[tuple[str, object], ...]
    control: StepControl
    policy: BlowupPolicy
    output: OutputSpec
    seed: int = 0
    noise_amplitude: float = 0.0

    def initial(self) -> dict:
        return dict(self.initial_params)


@dataclass(frozen=True)
class SweepConfig:
    base: RunConfig
    alphas: tuple[float, ...]
    include_nls_baseline: bool
    directory: str

    def __post_init__(self):
        if len(self.alphas) == 0:
            raise ConfigError("sweep.alphas must be a nonempty list")
        if any(a <= 0 for a in self.alphas):
            raise ConfigError("sweep.alphas must all be positive")
        if any(b >= a for a, b in zip(self.alphas, self.alphas[1:])):
            raise ConfigError("sweep.alphas must be strictly decreasing")
        if self.base.equation.kind == NLS:
            raise ConfigError("sweep base equation must be sh or sn "
                              "(the nls baseline is a sweep option)")


def _table(doc: dict, name: str, path) -> dict:
    try:
        section = doc[name]
    except KeyError:
        raise ConfigError(f"{path}: missing [{name}] section") from None
    if not isinstance(section, dict):
        raise ConfigError(f"{path}: [{name}] must be a table")
    return dict(section)


def _build_run_config(doc: dict, path) -> RunConfig:
    grid_t = _table(doc, "grid", path)
    eq_t = _table(doc, "equation", path)
    init_t = _table(doc, "initial", path)
    ctrl_t = _table(doc, "control", path)
    blow_t = dict(doc.get("blowup", {}))
    out_t = _table(doc, "output", path)
    try:
        grid = Grid(n=tuple(grid_t["n"]), box_length=tuple(grid_t["box_length"]))
        equation = EquationSpec(kind=eq_t["kind"],
                                sigma=float(eq_t.get("sigma", 1.0)),
                                alpha=float(eq_t.get("alpha", 0.0)))
        initial_kind = str(init_t.pop("kind"))
        seed = int(init_t.pop("seed", 0))
        noise = float(init_t.pop("noise_amplitude", 0.0))
        control = StepControl(t_end=float(ctrl_t["t_end"]),
                              dt_init=float(ctrl_t.get("dt_init", 1e-3)),
                              dt_min=float(ctrl_t.get("dt_min", 1e-9)),
                              dt_max=float(ctrl_t.get("dt_max", 1e-3)),
                              safety=float(ctrl_t.get("safety", 0.5)),
                              max_steps=int(ctrl_t.get("max_steps", 10_000_000)))
        policy = BlowupPolicy(sup_factor=float(blow_t.get("sup_factor", 50.0)),
                              tail_limit=float(blow_t.get("tail_limit", 0.1)),
                              consecutive=int(blow_t.get("consecutive", 3)))
        output = OutputSpec(directory=str(out_t["directory"]),
                            diagnostics_every=int(out_t.get("diagnostics_every", 10)),
                            snapshot_every=int(out_t.get("snapshot_every", 0)))
    except ConfigError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    if initial_kind not in INITIAL_KINDS:
        raise ConfigError(f"{path}: initial.kind must be one of "
                          f"{INITIAL_KINDS}, got {initial_kind!r}")
    cfg = RunConfig(grid=grid, equation=equation, initial_kind=initial_kind,
                    initial_params=tuple(sorted(init_t.items())),
                    control=control, policy=policy, output=output,
                    seed=seed, noise_amplitude=noise)
    _validate_initial(cfg)
    return cfg


def load_run_config(path) -> RunConfig:
    """Parse a run configuration; raises ConfigError with path context."""
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    try:
        with open(path, "rb") as fh:
            doc = tomli.load(fh)
    except tomli.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    return _build_run_config(doc, path)


def load_sweep_config(path) -> SweepConfig:
    """Parse a sweep configuration referencing a base run config."""
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    try:
        with open(path, "rb") as fh:
            doc = tomli.load(fh)
    except tomli.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    sweep_t = _table(doc, "sweep", path)
    try:
        base_ref = str(sweep_t["base"])
        alphas = tuple(float(a) for a in sweep_t["alphas"])
        include = bool(sweep_t.get("include_nls_baseline", False))
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    base = load_run_config(path.parent / base_ref)
    directory = str(sweep_t.get("directory", base.output.directory))
    return SweepConfig(base=base, alphas=alphas, include_nls_baseline=include,
                       directory=directory)


def _validate_initial(cfg: RunConfig) -> None:
    params = cfg.initial()
    kind = cfg.initial_kind
    known = {
        "gaussian": {"amplitude", "width", "center"},
        "plane-wave": {"amplitude", "k_index"},
        "soliton-1d": {"eta"},
        "townes": {"power_multiple"},
        "file": {"path"},
    }[kind]
    extra = set(params) - known
    if extra:
        raise ConfigError(f"initial.{kind} got unknown keys {sorted(extra)}")
    if kind == "soliton-1d" and cfg.grid.dim != 1:
        raise ConfigError("initial.soliton-1d requires a 1D grid")
    if kind == "townes":
        if float(params.get("power_multiple", 1.0)) <= 0:
            raise ConfigError("initial.townes.power_multiple must be > 0")
        if cfg.grid.dim != 2 or cfg.equation.sigma != 1.0:
            raise ConfigError("initial.townes requires dim = 2 and sigma = 1")


@lru_cache(maxsize=8)
def townes_profile(sigma: float = 1.0, dim: int = 2) -> groundstate.RadialProfile:
    """The cached ground-state profile used by the townes generator."""
    return groundstate.solve_ground_state(sigma, dim)


def build_initial(config: RunConfig) -> np.ndarray:
    """Deterministic initial field for the configured generator and seed."""
    grid = config.grid
    params = config.initial()
    kind = config.initial_kind
    if kind == "gaussian":
        amp = float(params.get("amplitude", 1.0))
        width = float(params.get("width", 1.0))
        center = params.get("center", grid.center)
        if len(center) != grid.dim:
            raise ConfigError("initial.gaussian.center has wrong dimension")
        r2 = np.zeros(grid.shape)
        for x, c in zip(grid.meshgrid(), center):
            r2 = r2 + (x - float(c)) ** 2
        v = amp * np.exp(-r2 / (2.0 * width**2)) + 0j
    elif kind == "plane-wave":
        amp = float(params.get("amplitude", 1.0))
        k_index = params.get("k_index", 1)
        modes = [int(k_index)] * grid.dim if np.isscalar(k_index) \
            else [int(m) for m in k_index]
        if len(modes) != grid.dim:
            raise ConfigError("initial.plane-wave.k_index has wrong dimension")
        phase = np.zeros(grid.shape)
        for d, (x, m) in enumerate(zip(grid.meshgrid(), modes)):
            phase = phase + (2 * np.pi * m / grid.box_length[d]) * x
        v = amp * np.exp(1j * phase)
    elif kind == "soliton-1d":
        eta = float(params.get("eta", 1.0))
        x = grid.axis_coordinates(0)
        v = np.sqrt(2.0) * eta / np.cosh(eta * (x - grid.center[0])) + 0j
    elif kind == "townes":
        multiple = float(params.get("power_multiple", 1.0))
        profile = townes_profile(1.0, 2)
        try:
            v = groundstate.deposit(profile, grid)
        except ValueError as exc:  # grid wider than the profile's reach
            raise ConfigError(f"initial.townes: {exc}") from exc
        measured = diagnostics.mass(grid, v)
        v = v * np.sqrt(multiple * profile.power / measured)
    elif kind == "file":
        try:
            bin_path = Path(params["path"])
        except KeyError:
            raise ConfigError("initial.file requires a path") from None
        v = load_snapshot(bin_path, grid)
    else:  # unreachable after config validation
        raise ConfigError(f"unknown initial kind {kind!r}")
    if config.noise_amplitude > 0:
        rng = np.random.default_rng(config.seed)
        noise = rng.standard_normal(grid.shape) + 1j * rng.standard_normal(grid.shape)
        v = v + config.noise_amplitude * noise / np.sqrt(2.0)
    return np.ascontiguousarray(v, dtype=complex)


def write_snapshot(path, grid: Grid, v: np.ndarray, t: float) -> None:
    """Raw interleaved (re, im) float64 little-endian, row-major, with a
    JSON sidecar describing the geometry."""
    path = Path(path)
    np.ascontiguousarray(v, dtype="<c16").tofile(path)
    meta = {"format_version": SNAPSHOT_FORMAT_VERSION, "dim": grid.dim,
            "n": list(grid.n), "box_length": list(grid.box_length),
            "t": float(t)}
    with open(path.with_suffix(".json"), "w") as fh:
        json.dump(meta, fh, indent=2)
        fh.write("\n")


def load_snapshot(bin_path, grid: Grid) -> np.ndarray:
    bin_path = Path(bin_path)
    if not bin_path.exists():
        raise ConfigError(f"initial data file not found: {bin_path}")
    sidecar = bin_path.with_suffix(".json")
    if not sidecar.exists():
        raise ConfigError(f"snapshot sidecar not found: {sidecar}")
    with open(sidecar) as fh:
        meta = json.load(fh)
    if tuple(meta.get("n", ())) != grid.n or \
            tuple(meta.get("box_length", ())) != grid.box_length:
        raise ConfigError(
            f"{bin_path}: snapshot geometry {meta.get('n')} x "
            f"{meta.get('box_length')} does not match the configured grid")
    data = np.fromfile(bin_path, dtype="<c16")
    if data.size != grid.total_samples:
        raise ConfigError(f"{bin_path}: expected {grid.total_samples} "
                          f"samples, found {data.size}")
    return data.reshape(grid.shape).astype(complex)


def _toml_scalar(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, str):
        return json.dumps(value)
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(_toml_scalar(x) for x in value) + "]"
    raise TypeError(f"cannot serialize {type(value)} to TOML")


def write_resolved_toml(sections: dict, path) -> None:
    """Minimal TOML emitter for the two-level resolved-config layout."""
    lines = []
    for name, table in sections.items():
        lines.append(f"[{name}]")
        for key, value in table.items():
            lines.append(f"{key} = {_toml_scalar(value)}")
        lines.append("")
    with open(path, "w") as fh:
        fh.write("\n".join(lines))


def config_sections(config: RunConfig) -> dict:
    initial = {"kind": config.initial_kind, **config.initial(),
               "seed": config.seed, "noise_amplitude": config.noise_amplitude}
    return {
        "grid": {"n": list(config.grid.n),
                 "box_length": list(config.grid.box_length)},
        "equation": {"kind": config.equation.kind,
                     "sigma": config.equation.sigma,
                     "alpha": config.equation.alpha},
        "initial": initial,
        "control": {"t_end": config.control.t_end,
                    "dt_init": config.control.dt_init,
                    "dt_min": config.control.dt_min,
                    "dt_max": config.control.dt_max,
                    "safety": config.control.safety,
                    "max_steps": config.control.max_steps},
        "blowup": {"sup_factor": config.policy.sup_factor,
                   "tail_limit": config.policy.tail_limit,
                   "consecutive": config.policy.consecutive},
        "output": {"directory": config.output.directory,
                   "diagnostics_every": config.output.diagnostics_every,
                   "snapshot_every": config.output.snapshot_every},
    }


def _drift(values: list[float]) -> float:
    ref = values[0]
    dev = max(abs(x - ref) for x in values)
    return dev / abs(ref) if ref != 0 else dev


def execute(config: RunConfig, *, initial: np.ndarray | None = None) -> dict:
    """Run one configuration and persist all artifacts.

    Numerical termination reasons (blow-up detection included) are
    results, not errors; only infrastructure failures raise.  Returns
    the summary dictionary, which is also written to summary.json.
    """
    out_dir = Path(config.output.directory)
    snap_dir = out_dir / "snapshots"
    try:
        snap_dir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OSError(f"cannot create output directory {out_dir}: {exc}") from exc

    write_resolved_toml(config_sections(config), out_dir / "config.resolved.toml")
    v0 = build_initial(config) if initial is None else \
        config.grid.check_field(initial).astype(complex)

    snap_count = 0
    last_snap_step = -1

    def snapshot_observer(step, t, v, record):
        nonlocal snap_count, last_snap_step
        every = config.output.snapshot_every
        if step == 0 or (every and step % every == 0):
            write_snapshot(snap_dir / f"t_{snap_count}.bin", config.grid, v, t)
            snap_count += 1
            last_snap_step = step

    result = stepper.run(config.equation, config.grid, v0, config.control,
                         policy=config.policy,
                         diagnostics_every=config.output.diagnostics_every,
                         observers=(snapshot_observer,))
    if result.steps != last_snap_step:
        write_snapshot(snap_dir / f"t_{snap_count}.bin", config.grid,
                       result.v_final, result.t_final)

    diagnostics.write_csv(result.records, out_dir / "diagnostics.csv")

    regime = validate_regime(config.equation, config.grid.dim)
    summary = {
        "reason": result.reason,
        "t_final": result.t_final,
        "steps": result.steps,
        "mass_drift": _drift([r.mass for r in result.records]),
        "hamiltonian_drift": _drift([r.hamiltonian for r in result.records]),
        "peak_sup_abs": max(r.sup_abs for r in result.records),
        "peak_grad_sq": max(r.grad_sq for r in result.records),
        "regime": {"label": regime.label, "nls_critical": regime.nls_critical,
                   "note": regime.note},
        "blowup_time": result.blowup_time,
        "blowup_condition": result.blowup_condition,
        "records": len(result.records),
        "output_dir": str(out_dir),
    }
    with open(out_dir / "summary.json", "w") as fh:
        json.dump(summary, fh, indent=2)
        fh.write("\n")
    return summary


def _alpha_label(alpha: float) -> str:
    return f"alpha_{alpha:g}"


def alpha_sweep(sweep: SweepConfig) -> dict:
    """Run the base configuration across the alpha list, with an optional
    nls baseline on bit-identical initial data.

    Per-run failures are recorded in the report and do not abort the
    remaining runs.  Writes sweep_report.json and sweep_report.csv under
    the sweep directory and returns the report dictionary.
    """
    sweep_dir = Path(sweep.directory)
    sweep_dir.mkdir(parents=True, exist_ok=True)
    shared = build_initial(sweep.base)

    jobs: list[tuple[str, RunConfig]] = []
    for alpha in sweep.alphas:
        label = _alpha_label(alpha)
        cfg = replace(
            sweep.base,
            equation=EquationSpec(sweep.base.equation.kind,
                                  sweep.base.equation.sigma, alpha),
            output=replace(sweep.base.output,
                           directory=str(sweep_dir / label)))
        jobs.append((label, cfg))
    if sweep.include_nls_baseline:
        cfg = replace(
            sweep.base,
            equation=EquationSpec(NLS, sweep.base.equation.sigma, 0.0),
            output=replace(sweep.base.output,
                           directory=str(sweep_dir / "nls_baseline")))
        jobs.append(("nls_baseline", cfg))

    rows = []
    for label, cfg in jobs:
        alpha = cfg.equation.alpha if cfg.equation.kind != NLS else 0.0
        try:
            summary = execute(cfg, initial=shared.copy())
            rows.append({
                "label": label, "alpha": alpha, "status": "ok",
                "reason": summary["reason"], "t_final": summary["t_final"],
                "peak_sup_abs": summary["peak_sup_abs"],
                "peak_grad_sq": summary["peak_grad_sq"],
                "blowup_time": summary["blowup_time"],
                "output_dir": summary["output_dir"],
            })
        except Exception as exc:  # keep the remaining runs alive
            rows.append({"label": label, "alpha": alpha, "status": "failed",
                         "reason": None, "t_final": None,
                         "peak_sup_abs": None, "peak_grad_sq": None,
                         "blowup_time": None, "error": str(exc)})

    report = {
        "kind": sweep.base.equation.kind,
        "sigma": sweep.base.equation.sigma,
        "alphas": list(sweep.alphas),
        "include_nls_baseline": sweep.include_nls_baseline,
        "runs": rows,
    }
    with open(sweep_dir / "sweep_report.json", "w") as fh:
        json.dump(report, fh, indent=2)
        fh.write("\n")
    cols = ("label", "alpha", "status", "reason", "t_final", "peak_sup_abs",
            "peak_grad_sq", "blowup_time")
    with open(sweep_dir / "sweep_report.csv", "w", newline="") as fh:
        fh.write(",".join(cols) + "\n")
        for row in rows:
            cells = []
            for c in cols:
                val = row.get(c)
                if val is None:
                    cells.append("")
                elif isinstance(val, float):
                    cells.append(f"{val:.17g}")
                else:
                    cells.append(str(val))
            fh.write(",".join(cells) + "\n")
    return report
