"""Conserved quantities, norms, the blow-up monitor and the a-priori
boundedness tracker.

A DiagnosticsRecord is one measurement of the run state; the series of
records is what gets persisted (one CSV row per record, 17 significant
digits, fixed column order).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.fft as _fft

from .spectral import Grid, gradient_sq_integral, helmholtz_inverse, integrate
from .system import (EquationSpec, GLOBAL_GUARANTEED, NLS, SN, abs_power,
                     potential, validate_regime)

CSV_COLUMNS = ("t", "mass", "hamiltonian", "grad_sq", "h1_sq", "sup_abs",
               "tail_fraction", "dt_current")
CSV_HEADER = ",".join(CSV_COLUMNS)


def mass(grid: Grid, v: np.ndarray) -> float:
    """N(v): integral of |v|^2 over the box."""
    v = grid.check_field(v)
    return float(integrate(grid, v.real**2 + v.imag**2).real)


def hamiltonian(spec: EquationSpec, grid: Grid, v: np.ndarray) -> float:
    """H(v): integral of |grad v|^2 minus the kind-specific potential term.

    nls: |v|^{2 sigma + 2} / (sigma + 1); sh: u |v|^{sigma+1} / (sigma+1)
    with u the Helmholtz inverse of |v|^{sigma+1}; sn: psi |v|^2 / 2 with
    the mean-removed psi (the omitted constant shifts H by a multiple of
    the conserved mass, so conservation testing is unaffected).
    """
    v = grid.check_field(v)
    kinetic = gradient_sq_integral(grid, v)
    abs2 = v.real**2 + v.imag**2
    if spec.kind == NLS:
        pot = integrate(grid, abs_power(v, 2 * spec.sigma + 2)) / (spec.sigma + 1)
    elif spec.kind == SN:
        psi = potential(spec, grid, v)
        pot = integrate(grid, psi * abs2) / 2.0
    else:
        src = abs_power(v, spec.sigma + 1)
        u = helmholtz_inverse(grid, src, spec.alpha)
        pot = integrate(grid, u * src) / (spec.sigma + 1)
    return float(kinetic - pot)


def sup_abs(v: np.ndarray) -> float:
    """max |v| over the grid."""
    return float(np.sqrt((v.real**2 + v.imag**2).max()))


def tail_fraction(grid: Grid, v: np.ndarray) -> float:
    """Spectral energy share of the outer third of wavenumbers.

    A mode is in the tail when its wavenumber magnitude exceeds 2/3 of
    the axis maximum along any axis (union over axes).  Values near the
    tail_limit mean the run is under-resolved and any computed blow-up
    is no longer trustworthy.
    """
    v = grid.check_field(v)
    power = np.abs(_fft.fftn(v)) ** 2
    mask = np.zeros(grid.shape, dtype=bool)
    for d in range(grid.dim):
        kd = np.abs(grid.wavenumbers(d))
        shape = [1] * grid.dim
        shape[d] = grid.n[d]
        mask |= (kd > (2.0 / 3.0) * kd.max()).reshape(shape)
    total = power.sum()
    if total == 0.0:
        return 0.0
    return float(power[mask].sum() / total)


@dataclass(frozen=True)
class DiagnosticsRecord:
    t: float
    mass: float
    hamiltonian: float
    grad_sq: float
    h1_sq: float
    sup_abs: float
    tail_fraction: float
    dt_current: float

    @classmethod
    def measure(cls, spec: EquationSpec, grid: Grid, v: np.ndarray,
                t: float, dt_current: float) -> "DiagnosticsRecord":
        m = mass(grid, v)
        g = gradient_sq_integral(grid, v)
        return cls(t=float(t), mass=m, hamiltonian=hamiltonian(spec, grid, v),
                   grad_sq=g, h1_sq=m + g, sup_abs=sup_abs(v),
                   tail_fraction=tail_fraction(grid, v),
                   dt_current=float(dt_current))

    def csv_row(self) -> str:
        return ",".join(f"{getattr(self, c):.17g}" for c in CSV_COLUMNS)


def write_csv(records, path) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(CSV_HEADER + "\n")
        for rec in records:
            fh.write(rec.csv_row() + "\n")


def read_csv(path) -> list[DiagnosticsRecord]:
    out = []
    with open(path) as fh:
        header = fh.readline().strip()
        if header != CSV_HEADER:
            raise ValueError(f"unexpected diagnostics header: {header!r}")
        for line in fh:
            vals = [float(x) for x in line.strip().split(",")]
            out.append(DiagnosticsRecord(*vals))
    return out


@dataclass(frozen=True)
class BlowupPolicy:
    """Operational blow-up criterion: sustained sup-norm growth relative
    to the initial record, or loss of spectral resolution."""

    sup_factor: float = 50.0
    tail_limit: float = 0.1
    consecutive: int = 3

    def __post_init__(self):
        if not self.sup_factor > 1:
            raise ValueError(f"sup_factor must be > 1, got {self.sup_factor}")
        if not 0 < self.tail_limit < 1:
            raise ValueError(f"tail_limit must be in (0,1), got {self.tail_limit}")
        if self.consecutive < 1:
            raise ValueError(f"consecutive must be >= 1, got {self.consecutive}")


def blowup_conditions(record: DiagnosticsRecord, first: DiagnosticsRecord,
                      policy: BlowupPolicy) -> tuple[bool, bool]:
    """(sup condition, tail condition) for a single record."""
    return (record.sup_abs > policy.sup_factor * first.sup_abs,
            record.tail_fraction > policy.tail_limit)


def blowup_check(records, policy: BlowupPolicy) -> str | None:
    """None to continue, or the tripped condition name(s).

    Triggers when the sup or tail condition holds for the last
    `policy.consecutive` records; the reference sup-norm is the first
    record of the series.
    """
    if not records:
        raise ValueError("blowup_check needs a nonempty history")
    if len(records) < policy.consecutive:
        return None
    first = records[0]
    window = records[-policy.consecutive:]
    conds = [blowup_conditions(r, first, policy) for r in window]
    sup_trip = all(c[0] for c in conds)
    tail_trip = all(c[1] for c in conds)
    if sup_trip and tail_trip:
        return "sup+tail"
    if sup_trip:
        return "sup"
    if tail_trip:
        return "tail"
    return None


@dataclass(frozen=True)
class AprioriReport:
    """Boundedness summary of the gradient series against the global-
    existence guarantee (finite H1 for sigma below 4/dim)."""

    regime_label: str
    bounded_expected: bool
    max_grad_sq: float
    last_quarter_ratio: float
    divergence_flagged: bool
    satisfies_bound: bool | None


def apriori_tracker(spec: EquationSpec, dim: int, records,
                    growth_threshold: float = 2.0) -> AprioriReport:
    """Check a completed series for gradient boundedness.

    Divergence is flagged when grad_sq increases monotonically through
    the last quarter of the series and grows by more than
    growth_threshold over it.  For global-guaranteed regimes the report
    states whether the qualitative a-priori bound held; other regimes
    report only (the bound's constant is not computable).
    """
    if not records:
        raise ValueError("apriori_tracker needs a nonempty series")
    label = validate_regime(spec, dim).label
    grads = np.array([r.grad_sq for r in records])
    max_grad = float(grads.max())
    tail = grads[-max(2, len(grads) // 4):]
    start = tail[0]
    ratio = float(tail[-1] / start) if start > 0 else (np.inf if tail[-1] > 0 else 1.0)
    monotone = bool(np.all(np.diff(tail) > 0)) if len(tail) > 1 else False
    diverging = monotone and ratio > growth_threshold
    expected = label == GLOBAL_GUARANTEED
    satisfies = (np.isfinite(max_grad) and not diverging) if expected else None
    return AprioriReport(regime_label=label, bounded_expected=expected,
                         max_grad_sq=max_grad, last_quarter_ratio=ratio,
                         divergence_flagged=diverging,
                         satisfies_bound=satisfies)
