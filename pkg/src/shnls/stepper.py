"""Second-order Strang split-step integrator with adaptive dt near blow-up.

One step is U(dt/2) N(dt) U(dt/2): the exact free flow U composed with
the exact nonlinear flow N.  The nonlinear substep multiplies by
e^{i W(v) dt} with the potential W frozen at substep entry; this is
exact, not an approximation, because W depends on v only through |v| and
the substep preserves |v| pointwise (W is real, so d|v|^2/dt = 0 along
the substep).  Both substeps are unimodular multipliers, so the discrete
mass is conserved exactly by every step.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .diagnostics import (BlowupPolicy, DiagnosticsRecord, blowup_check,
                          blowup_conditions)
from .spectral import Grid, NonFiniteFieldError, free_propagator
from .system import EquationSpec, potential

COMPLETED = "completed"
BLOWUP_DETECTED = "blowup-detected"
DT_FLOOR = "dt-floor"
STEP_BUDGET = "step-budget"


@dataclass(frozen=True)
class StepControl:
    """Time-step policy: adaptive dt = clamp(safety / (1 + max W), dt_min,
    dt_max), integrating to t_end within a step budget."""

    t_end: float
    dt_init: float = 1e-3
    dt_min: float = 1e-9
    dt_max: float = 1e-3
    safety: float = 0.5
    max_steps: int = 10_000_000

    def __post_init__(self):
        if not self.t_end >= 0:
            raise ValueError(f"t_end must be >= 0, got {self.t_end}")
        if not 0 < self.dt_min <= self.dt_init <= self.dt_max:
            raise ValueError(
                f"need 0 < dt_min <= dt_init <= dt_max, got "
                f"{self.dt_min}, {self.dt_init}, {self.dt_max}")
        if not 0 < self.safety <= 1:
            raise ValueError(f"safety must be in (0,1], got {self.safety}")
        if self.max_steps <= 0:
            raise ValueError(f"max_steps must be > 0, got {self.max_steps}")


def nonlinear_phase_step(spec: EquationSpec, grid: Grid, v: np.ndarray,
                         dt: float) -> np.ndarray:
    """Exact nonlinear substep v -> v e^{i W(v) dt}; preserves |v| pointwise."""
    w = potential(spec, grid, v)
    return v * np.exp(1j * dt * w)


def strang_step(spec: EquationSpec, grid: Grid, v: np.ndarray,
                dt: float) -> np.ndarray:
    """One symmetric split step of size dt.

    Raises NonFiniteFieldError if the result overflows (the caller must
    reduce dt or stop; this is the blow-up signal).  dt < 0 steps
    backwards, which is exact for both substeps.
    """
    v = grid.check_field(v)
    out = free_propagator(grid, v, dt / 2)
    out = nonlinear_phase_step(spec, grid, out, dt)
    out = free_propagator(grid, out, dt / 2)
    if not np.isfinite(out).all():
        raise NonFiniteFieldError("strang step produced non-finite samples")
    return out


def adapt_dt(spec: EquationSpec, grid: Grid, v: np.ndarray,
             control: StepControl) -> tuple[float, bool]:
    """Proposed dt and whether the dt_min floor truncated it.

    The unclamped rule is safety / (1 + max W(v)): the step shrinks as
    the self-induced potential, and with it the nonlinear phase speed,
    grows.  Deterministic for fixed inputs.
    """
    w_max = float(potential(spec, grid, v).max())
    raw = control.safety / (1.0 + max(w_max, 0.0))
    floor_hit = raw < control.dt_min and control.dt_min < control.dt_max
    return min(max(raw, control.dt_min), control.dt_max), floor_hit


@dataclass
class RunResult:
    v_final: np.ndarray
    t_final: float
    reason: str
    steps: int
    records: list[DiagnosticsRecord] = field(default_factory=list)
    blowup_condition: str | None = None
    blowup_time: float | None = None


def run(spec: EquationSpec, grid: Grid, v0: np.ndarray, control: StepControl,
        *, policy: BlowupPolicy | None = None, diagnostics_every: int = 1,
        observers=()) -> RunResult:
    """Integrate v0 to t_end, or stop early on the blow-up monitor.

    Diagnostics are measured every `diagnostics_every` steps (plus the
    initial and final states); each observer is called as
    observer(step, t, v, record) with a read-only snapshot on the same
    cadence.  Termination reasons: completed, blowup-detected (monitor
    tripped, or the state went non-finite, in which case the last finite
    field is returned), dt-floor (the adaptive rule wants dt below
    dt_min while the monitor is already half-tripped) and step-budget.
    """
    if diagnostics_every < 1:
        raise ValueError("diagnostics_every must be >= 1")
    policy = policy or BlowupPolicy()
    v = np.array(grid.check_field(v0), dtype=complex)
    t = 0.0
    records: list[DiagnosticsRecord] = []
    result = RunResult(v_final=v, t_final=t, reason=COMPLETED, steps=0,
                       records=records)

    def observe(step: int, dt_cur: float) -> DiagnosticsRecord:
        rec = DiagnosticsRecord.measure(spec, grid, v, t, dt_cur)
        records.append(rec)
        snapshot = v.copy()
        snapshot.setflags(write=False)
        for obs in observers:
            obs(step, t, snapshot, rec)
        return rec

    observe(0, control.dt_init)
    if control.t_end == 0:
        return result

    step = 0
    t_end = control.t_end
    while t < t_end * (1 - 1e-15):
        dt, floor_hit = adapt_dt(spec, grid, v, control)
        dt = min(dt, t_end - t)
        try:
            v_new = strang_step(spec, grid, v, dt)
        except NonFiniteFieldError:
            result.reason = BLOWUP_DETECTED
            result.blowup_condition = "non-finite"
            result.blowup_time = t
            break
        v = v_new
        step += 1
        t += dt
        at_end = t >= t_end * (1 - 1e-15)
        if step % diagnostics_every == 0 or at_end:
            observe(step, dt)
            tripped = blowup_check(records, policy)
            if tripped is not None:
                result.reason = BLOWUP_DETECTED
                result.blowup_condition = tripped
                result.blowup_time = t
                break
            if floor_hit and any(blowup_conditions(records[-1], records[0],
                                                   policy)):
                result.reason = DT_FLOOR
                break
        if step >= control.max_steps and not at_end:
            result.reason = STEP_BUDGET
            break

    result.v_final = v
    result.t_final = t
    result.steps = step
    return result
