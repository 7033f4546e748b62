"""Shooting solver for the radial ground-state boundary value problem

    R'' + ((dim-1)/r) R' - R + |R|^{2 sigma} R = 0,
    R'(0) = 0,  R(r) -> 0 as r -> infinity,

whose positive solution for dim = 2, sigma = 1 is the Townes profile; its
squared L^2 norm is the critical power separating dispersal from
collapse for the 2D cubic focusing equation.

The solver brackets the shot amplitude R(0) between an undershoot (the
profile turns back up while still positive) and an overshoot (the
profile crosses zero), bisects, and splices the exact exponential
asymptote onto the integrated core to produce a clean decaying profile.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp
from scipy.interpolate import CubicSpline

from .spectral import Grid

OVERSHOOT = "overshoot"
UNDERSHOOT = "undershoot"
DECAY_PROFILE = "decay-profile"

_ANGULAR = {1: 2.0, 2: 2.0 * np.pi, 3: 4.0 * np.pi}

# Fraction of R0 at which the integrated core is handed over to the
# analytic decay tail; high enough that bisection-limited trajectories
# are still glued to the true profile there.
_TAIL_SWITCH = 1e-3


def _check_params(sigma: float, dim: int) -> None:
    if dim not in (1, 2, 3):
        raise ValueError(f"dim must be 1, 2 or 3, got {dim}")
    if not sigma >= 1:
        raise ValueError(f"sigma must be >= 1, got {sigma}")


def _rhs(sigma: float, dim: int):
    p = 2.0 * sigma

    def rhs(r, y):
        R, Rp, _ = y
        return (Rp,
                R - R * abs(R) ** p - (dim - 1) / r * Rp,
                R * R * r ** (dim - 1))

    return rhs


def _series_coeffs(sigma: float, dim: int, R0: float) -> tuple[float, float]:
    """Coefficients of the even Taylor start R = R0 + a r^2 + b r^4 that
    absorbs the r = 0 coordinate singularity (R'(0) = 0 by construction)."""
    a = (R0 - R0 ** (2 * sigma + 1)) / (2 * dim)
    b = a * (1 - (2 * sigma + 1) * R0 ** (2 * sigma)) / (4 * (dim + 2))
    return a, b


def _series_start(sigma: float, dim: int, R0: float, h: float):
    a, b = _series_coeffs(sigma, dim, R0)
    return (R0 + a * h * h + b * h**4,
            2 * a * h + 4 * b * h**3,
            R0 * R0 * h ** dim / dim)


def _integrate(sigma: float, dim: int, R0: float, r_max: float,
               stop_level: float, h: float = 1e-3):
    """Integrate outward from the series start until R crosses zero, R'
    turns positive, or R descends through stop_level."""

    def ev_zero(r, y):
        return y[0]

    def ev_turn(r, y):
        return y[1]

    def ev_level(r, y):
        return y[0] - stop_level

    ev_zero.terminal, ev_zero.direction = True, -1.0
    ev_turn.terminal, ev_turn.direction = True, 1.0
    ev_level.terminal, ev_level.direction = True, -1.0

    sol = solve_ivp(_rhs(sigma, dim), (h, r_max), _series_start(sigma, dim, R0, h),
                    method="DOP853", rtol=1e-12, atol=1e-14,
                    events=(ev_zero, ev_turn, ev_level), dense_output=True)
    if not sol.success:
        raise RuntimeError(f"ODE integration failed: {sol.message}")
    return sol


def shoot(sigma: float, dim: int, R0: float, *, r_max: float = 25.0,
          decay_floor: float = 1e-10) -> str:
    """Classify the trajectory started at amplitude R0.

    overshoot: R crosses zero.  undershoot: R' turns positive while R is
    still positive (including trajectories that reach r_max without
    decaying).  decay-profile: R descends through decay_floor with a
    slope consistent with the exponential asymptote.
    """
    if not R0 > 0:
        raise ValueError(f"R0 must be > 0, got {R0}")
    _check_params(sigma, dim)
    sol = _integrate(sigma, dim, R0, r_max, decay_floor)
    if sol.t_events[0].size:
        return OVERSHOOT
    if sol.t_events[2].size:
        # transversal crossings of the floor are overshoots in the making
        slope = sol.y_events[2][0][1]
        return DECAY_PROFILE if abs(slope) <= 10 * decay_floor else OVERSHOOT
    return UNDERSHOOT


@dataclass(frozen=True)
class RadialProfile:
    """Ground-state profile R(r) with its shot amplitude and power.

    r_samples is uniform on [0, r_max]; R_values are strictly positive
    up to r_cut (the integrated core) and follow the spliced analytic
    decay beyond it.  Rp_values holds dR/dr on the same samples.  power
    is the integral of R^2 over R^dim, i.e. the radial quadrature times
    the angular factor (2, 2*pi or 4*pi).
    """

    sigma: float
    dim: int
    r_samples: np.ndarray
    R_values: np.ndarray
    Rp_values: np.ndarray
    R0: float
    power: float
    r_cut: float
    tol: float
    r_max: float

    def save(self, csv_path) -> None:
        """Write (r, R) rows plus a JSON sidecar with the metadata."""
        csv_path = str(csv_path)
        with open(csv_path, "w", newline="") as fh:
            fh.write("r,R\n")
            for r, R in zip(self.r_samples, self.R_values):
                fh.write(f"{r:.17g},{R:.17g}\n")
        meta = {"sigma": self.sigma, "dim": self.dim, "R0": self.R0,
                "power": self.power, "tol": self.tol, "r_max": self.r_max}
        sidecar = csv_path[:-4] + ".json" if csv_path.endswith(".csv") \
            else csv_path + ".json"
        with open(sidecar, "w") as fh:
            json.dump(meta, fh, indent=2)
            fh.write("\n")


def solve_ground_state(sigma: float, dim: int, bracket=(1.0, 3.0),
                       tol: float = 1e-12, *, r_max: float = 25.0,
                       n_samples: int = 8192,
                       decay_floor: float = 1e-10) -> RadialProfile:
    """Bisect the shot amplitude to width <= tol and build the profile.

    The bracket endpoints must classify to opposite outcomes.  The final
    trajectory is integrated down to R = _TAIL_SWITCH * R0 and continued
    with the asymptotic decay R(rc) (rc/r)^{(dim-1)/2} e^{-(r-rc)}, whose
    squared radial integral is added to the power in closed form.
    """
    _check_params(sigma, dim)
    if not tol > 0:
        raise ValueError(f"tol must be > 0, got {tol}")
    lo, hi = float(bracket[0]), float(bracket[1])
    if not 0 < lo < hi:
        raise ValueError(f"bracket must satisfy 0 < lo < hi, got {bracket}")
    out_lo = shoot(sigma, dim, lo, r_max=r_max, decay_floor=decay_floor)
    out_hi = shoot(sigma, dim, hi, r_max=r_max, decay_floor=decay_floor)
    R0 = None
    if DECAY_PROFILE in (out_lo, out_hi):
        R0 = lo if out_lo == DECAY_PROFILE else hi
    elif out_lo == out_hi:
        raise ValueError(
            f"invalid bracket: both endpoints classify as {out_lo}")
    else:
        while hi - lo > tol:
            mid = 0.5 * (lo + hi)
            if mid == lo or mid == hi:
                break  # bracket at floating-point resolution
            out = shoot(sigma, dim, mid, r_max=r_max, decay_floor=decay_floor)
            if out == DECAY_PROFILE:
                R0 = mid
                break
            if out == out_lo:
                lo = mid
            else:
                hi = mid
        if R0 is None:
            R0 = 0.5 * (lo + hi)

    h = 1e-3
    sol = _integrate(sigma, dim, R0, r_max, _TAIL_SWITCH * R0, h=h)
    if sol.t_events[2].size:
        r_cut = float(sol.t_events[2][0])
    elif sol.t_events[0].size or sol.t_events[1].size:
        events = np.concatenate([t for t in sol.t_events[:2] if t.size])
        r_cut = float(events.min())
    else:
        r_cut = float(sol.t[-1])
    R_cut, _, quad_core = sol.sol(r_cut)

    r = np.linspace(0.0, r_max, n_samples)
    R = np.empty_like(r)
    Rp = np.empty_like(r)
    inner = r < h
    core = (~inner) & (r <= r_cut)
    tail = r > r_cut
    a, b = _series_coeffs(sigma, dim, R0)
    ri = r[inner]
    R[inner] = R0 + a * ri**2 + b * ri**4
    Rp[inner] = 2 * a * ri + 4 * b * ri**3
    R[core], Rp[core] = sol.sol(r[core])[:2]
    decay = (r_cut / r[tail]) ** ((dim - 1) / 2) * np.exp(-(r[tail] - r_cut))
    R[tail] = R_cut * decay
    Rp[tail] = -R[tail] * (1.0 + (dim - 1) / (2.0 * r[tail]))

    if np.any(R[r < r_cut] <= 0):
        raise RuntimeError("profile is not positive up to r_cut; "
                           "bracket may enclose an excited branch")
    if abs(R[-1]) >= 1e-8 * R0:
        raise RuntimeError(
            f"profile has not decayed at r_max: R(r_max) = {R[-1]:.3e}")

    quad_tail = R_cut**2 * r_cut ** (dim - 1) \
        * (1.0 - np.exp(-2.0 * (r_max - r_cut))) / 2.0
    power = _ANGULAR[dim] * float(quad_core + quad_tail)
    return RadialProfile(sigma=float(sigma), dim=dim, r_samples=r, R_values=R,
                         Rp_values=Rp, R0=float(R0), power=power, r_cut=r_cut,
                         tol=float(tol), r_max=float(r_max))


def deposit(profile: RadialProfile, grid: Grid, amplitude_scale: float = 1.0,
            width_scale: float = 1.0) -> np.ndarray:
    """Place s * R(r / w) at the box center as a complex field.

    The rescaled profile must cover the grid's inscribed radius; corner
    samples beyond r_max * w evaluate to zero (the profile has decayed).
    """
    if not width_scale > 0:
        raise ValueError(f"width_scale must be > 0, got {width_scale}")
    if profile.r_max * width_scale < grid.inscribed_radius:
        raise ValueError(
            f"profile coverage {profile.r_max * width_scale:g} is smaller "
            f"than the grid's inscribed radius {grid.inscribed_radius:g}")
    spline = CubicSpline(profile.r_samples, profile.R_values,
                         bc_type=((1, 0.0), (1, 0.0)))
    rr = grid.radius_from_center() / width_scale
    vals = np.where(rr <= profile.r_max, spline(np.minimum(rr, profile.r_max)),
                    0.0)
    return (amplitude_scale * vals).astype(complex)
