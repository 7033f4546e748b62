"""The three systems (NLS, SH, SN): self-induced potentials, nonlinearities,
and parameter-regime classification.

Every system evolves i v_t + Lap v + W(v) v = 0 where W is the real
self-induced potential:

    nls:  W = |v|^{2 sigma}
    sh:   W = B(|v|^{sigma+1}) |v|^{sigma-1},  B = (I - alpha^2 Lap)^{-1}
    sn:   W = psi,  -alpha^2 Lap psi = |v|^2  (mean-removed gauge)
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .spectral import Grid, helmholtz_inverse, poisson_inverse_zero_mean

logger = logging.getLogger(__name__)

NLS = "nls"
SH = "sh"
SN = "sn"
KINDS = (NLS, SH, SN)

# regime labels
GLOBAL_GUARANTEED = "global-guaranteed"
LOCAL_ONLY = "local-only"
BLOWUP_POSSIBLE = "blow-up-possible"
OUTSIDE_THEORY = "outside-theory"

# Pointwise |v|^p floor: |v|^2 below this maps to 0 instead of exp(log(0)).
ABS2_CUTOFF = 1e-300

# Worst relative negative dip of the sh potential already warned about;
# repeats are only logged when they worsen by 10x (spectral-kernel ringing
# on coarse periodic grids produces harmless dips at every step).
_warned_dip = 0.0


@dataclass(frozen=True)
class EquationSpec:
    """Which system to evolve, with its exponent and regularization length.

    sigma >= 1 is required for sh/sn (sigma > 0 suffices for nls); alpha
    must be positive for sh/sn and is ignored for nls.  sn keeps the
    |v|^2 potential source regardless of sigma.
    """

    kind: str
    sigma: float = 1.0
    alpha: float = 0.0

    def __post_init__(self):
        kind = str(self.kind).lower()
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "sigma", float(self.sigma))
        object.__setattr__(self, "alpha", float(self.alpha))
        if kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}, got {self.kind!r}")
        if kind == NLS:
            if not self.sigma > 0:
                raise ValueError(f"nls requires sigma > 0, got {self.sigma}")
        elif not self.sigma >= 1:
            raise ValueError(f"{kind} requires sigma >= 1, got {self.sigma}")
        if kind in (SH, SN) and not self.alpha > 0:
            raise ValueError(f"{kind} requires alpha > 0, got {self.alpha}")
        if not np.isfinite(self.sigma) or not np.isfinite(self.alpha):
            raise ValueError("sigma and alpha must be finite")


def abs_power(v: np.ndarray, p: float) -> np.ndarray:
    """Pointwise |v|^p for p > 0 via exp((p/2) log |v|^2), with cutoff.

    Samples with |v|^2 < 1e-300 map to 0, avoiding NaN from log(0).
    """
    a2 = v.real**2 + v.imag**2 if np.iscomplexobj(v) else np.square(v.astype(float))
    small = a2 < ABS2_CUTOFF
    safe = np.where(small, 1.0, a2)
    out = np.exp((p / 2.0) * np.log(safe))
    out[small] = 0.0
    return out


def potential(spec: EquationSpec, grid: Grid, v: np.ndarray) -> np.ndarray:
    """Self-induced potential W(v) as a real array.

    For nls and sh the result is nonnegative up to rounding; sh
    nonnegativity holds via the positivity of the Helmholtz kernel and is
    checked numerically (violations beyond tolerance are logged, not
    raised, since the periodic box is a surrogate for free space).
    """
    v = grid.check_field(v)
    if spec.kind == NLS:
        return abs_power(v, 2.0 * spec.sigma)
    if spec.kind == SN:
        return poisson_inverse_zero_mean(grid, v.real**2 + v.imag**2, spec.alpha)
    u = helmholtz_inverse(grid, abs_power(v, spec.sigma + 1.0), spec.alpha)
    if spec.sigma != 1.0:
        u = u * abs_power(v, spec.sigma - 1.0)
    floor = u.min()
    top = max(u.max(), 1e-300)
    if floor < -1e-10 * top:
        global _warned_dip
        dip = -floor / top
        if dip > 10.0 * _warned_dip:
            _warned_dip = dip
            logger.warning("sh potential dips negative: min %.3e vs max %.3e "
                           "(further dips logged only if 10x worse)",
                           floor, u.max())
        else:
            logger.debug("sh potential dips negative: min %.3e vs max %.3e",
                         floor, u.max())
    return u


def nonlinearity(spec: EquationSpec, grid: Grid, v: np.ndarray) -> np.ndarray:
    """W(v) * v, the nonlinear term of the evolution equation."""
    return potential(spec, grid, v) * np.asarray(v, dtype=complex)


@dataclass(frozen=True)
class RegimeReport:
    """Classification of (kind, sigma, dim) against the existence theory.

    Advisory only; blow-up-possible runs are the interesting ones.
    """

    kind: str
    sigma: float
    dim: int
    label: str
    nls_critical: bool
    note: str


def _upper(dim: int, num: float) -> float:
    """num / (dim - 2), read as +inf for dim <= 2."""
    return np.inf if dim <= 2 else num / (dim - 2)


def validate_regime(spec: EquationSpec, dim: int) -> RegimeReport:
    """Classify the run against the known existence/blow-up thresholds.

    sh/sn: global for 1 <= sigma < 4/dim, local existence only for
    4/dim <= sigma < 4/(dim-2).  nls: global for sigma < 2/dim, possible
    finite-time blow-up for sigma >= 2/dim (within the local theory
    sigma < 2/(dim-2)).  The nls-critical exponent sigma = 2/dim is
    flagged for every kind.
    """
    if dim not in (1, 2, 3):
        raise ValueError(f"dim must be 1, 2 or 3, got {dim}")
    sigma = spec.sigma
    critical = bool(np.isclose(sigma, 2.0 / dim, rtol=1e-12, atol=0.0))
    if spec.kind == NLS:
        if sigma < 2.0 / dim:
            label = GLOBAL_GUARANTEED
            note = f"sigma < 2/{dim}: unique global solution"
        elif sigma < _upper(dim, 2.0):
            label = BLOWUP_POSSIBLE
            note = f"sigma >= 2/{dim}: finite-time collapse is possible"
        else:
            label = OUTSIDE_THEORY
            note = "sigma >= 2/(dim-2): beyond the local existence theory"
    else:
        if sigma < 1.0:
            label = OUTSIDE_THEORY
            note = "sigma < 1: below the standing assumption"
        elif sigma < 4.0 / dim:
            label = GLOBAL_GUARANTEED
            note = f"1 <= sigma < 4/{dim}: unique global solution, H1 bounded"
        elif sigma < _upper(dim, 4.0):
            label = LOCAL_ONLY
            note = f"4/{dim} <= sigma < 4/(dim-2): local existence only"
        else:
            label = OUTSIDE_THEORY
            note = "sigma >= 4/(dim-2): beyond the local existence theory"
    if critical:
        note += "; sigma = 2/dim is the nls-critical exponent"
    return RegimeReport(spec.kind, sigma, dim, label, critical, note)
