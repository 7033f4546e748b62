"""Built-in property suites: quick self-checks runnable from the CLI.

Each check returns (name, passed, detail); suites are deliberately small
and fast so `shnls validate` can gate an installation in seconds.
"""

from __future__ import annotations

import numpy as np

from . import diagnostics, groundstate, spectral, stepper, system
from .diagnostics import BlowupPolicy
from .spectral import Grid
from .stepper import StepControl
from .system import EquationSpec

Check = tuple[str, bool, str]


def _check(name: str, value: float, bound: float) -> Check:
    return (name, value <= bound, f"{value:.3e} <= {bound:.1e}")


def conservation_suite() -> list[Check]:
    """Mass and Hamiltonian behavior on a short 1D soliton run."""
    grid = Grid(n=(512,), box_length=(40.0,))
    x = grid.axis_coordinates(0)
    v0 = np.sqrt(2.0) / np.cosh(x - grid.center[0]) + 0j
    spec = EquationSpec("nls", sigma=1.0)
    control = StepControl(t_end=0.5, dt_init=1e-3, dt_min=1e-6, dt_max=1e-3,
                          safety=0.5, max_steps=10_000)
    result = stepper.run(spec, grid, v0, control, policy=BlowupPolicy(),
                         diagnostics_every=10)
    masses = [r.mass for r in result.records]
    hams = [r.hamiltonian for r in result.records]
    mass_drift = max(abs(m - masses[0]) for m in masses) / masses[0]
    ham_drift = max(abs(h - hams[0]) for h in hams) / abs(hams[0])
    after = stepper.nonlinear_phase_step(spec, grid, v0, 0.37)
    mod_dev = float(np.abs(np.abs(after) - np.abs(v0)).max())

    sh = EquationSpec("sh", sigma=1.0, alpha=0.2)
    result_sh = stepper.run(sh, grid, v0, control, policy=BlowupPolicy(),
                            diagnostics_every=10)
    m_sh = [r.mass for r in result_sh.records]
    sh_drift = max(abs(m - m_sh[0]) for m in m_sh) / m_sh[0]
    return [
        _check("soliton mass drift", mass_drift, 1e-11),
        _check("soliton hamiltonian drift", ham_drift, 1e-5),
        _check("nonlinear substep modulus deviation", mod_dev, 1e-13),
        _check("sh mass drift", sh_drift, 1e-11),
    ]


def multiplier_suite() -> list[Check]:
    """Elliptic multiplier bounds and multiplier-operator identities."""
    checks: list[Check] = []
    grids = [Grid(n=(256,), box_length=(20.0,)),
             Grid(n=(32, 32), box_length=(10.0, 7.5))]
    worst = 0.0
    for grid in grids:
        for alpha in (0.05, 0.1, 0.5, 1.0):
            ratio = spectral.helmholtz_regularity_ratio(grid, alpha)
            bound = max(1.0, alpha**-2)
            worst = max(worst, float(ratio.max() / bound))
    checks.append(("regularity ratio within max(1, 1/alpha^2)", worst <= 1.0,
                   f"worst ratio/bound = {worst:.15f}"))

    grid = Grid(n=(64,), box_length=(2 * np.pi,))
    x = grid.axis_coordinates(0)
    mode = np.exp(1j * x)
    dev = np.abs(spectral.helmholtz_inverse(grid, mode, 1.0) - 0.5 * mode).max()
    checks.append(_check("helmholtz eigenfunction e^{ix} -> e^{ix}/2", dev, 1e-13))
    dev = np.abs(spectral.poisson_inverse_zero_mean(grid, mode, 1.0) - mode).max()
    checks.append(_check("poisson eigenfunction e^{ix} -> e^{ix}", dev, 1e-13))

    rng = np.random.default_rng(5)
    f = rng.standard_normal(grid.shape) + 1j * rng.standard_normal(grid.shape)
    a = spectral.helmholtz_inverse(grid, spectral.free_propagator(grid, f, 0.3), 0.4)
    b = spectral.free_propagator(grid, spectral.helmholtz_inverse(grid, f, 0.4), 0.3)
    rel = np.abs(a - b).max() / np.abs(a).max()
    checks.append(_check("helmholtz/free-propagator commutation", rel, 1e-12))
    return checks


def exact_suite() -> list[Check]:
    """Closed-form regressions: plane wave, free Gaussian, 1D soliton shape."""
    checks: list[Check] = []
    grid = Grid(n=(128,), box_length=(16.0,))
    x = grid.axis_coordinates(0)
    amp, mode, dt = 1.3, 3, 1e-2
    k = 2 * np.pi * mode / grid.box_length[0]
    for kind, alpha in (("nls", 0.0), ("sh", 0.3)):
        spec = EquationSpec(kind, sigma=1.0, alpha=alpha)
        v0 = amp * np.exp(1j * k * x)
        omega = k**2 - amp**2
        exact = amp * np.exp(1j * (k * x - omega * dt))
        got = stepper.strang_step(spec, grid, v0, dt)
        dev = np.abs(got - exact).max() / amp
        checks.append(_check(f"plane-wave dispersion ({kind})", dev, 1e-12))

    grid = Grid(n=(1024,), box_length=(100.0,))
    x = grid.axis_coordinates(0) - grid.center[0]
    v0 = np.exp(-(x**2) / 4.0) + 0j
    for t in (1.0, 2.0):
        out = spectral.free_propagator(grid, v0, t)
        dev = abs(diagnostics.sup_abs(out) - (1 + t**2) ** -0.25)
        checks.append(_check(f"free Gaussian sup norm at t={t:g}", dev, 1e-6))

    profile = groundstate.solve_ground_state(1.0, 1, bracket=(1.0, 3.0))
    sech = np.sqrt(2.0) / np.cosh(profile.r_samples)
    dev = float(np.abs(profile.R_values - sech).max())
    checks.append(_check("1D ground state matches sqrt(2) sech r", dev, 1e-7))
    checks.append(_check("1D ground state power vs 4", abs(profile.power - 4.0),
                         1e-8))

    grid = Grid(n=(32, 32), box_length=(5.0, 4.0))
    rng = np.random.default_rng(11)
    f = rng.standard_normal(grid.shape) + 1j * rng.standard_normal(grid.shape)
    back = spectral.from_spectral(grid, spectral.to_spectral(grid, f))
    rel = np.abs(back - f).max() / np.abs(f).max()
    checks.append(_check("transform round trip", rel, 1e-12))
    return checks


SUITES = {
    "conservation": conservation_suite,
    "multipliers": multiplier_suite,
    "exact": exact_suite,
}


def run_suites(names) -> list[tuple[str, list[Check]]]:
    out = []
    for name in names:
        if name not in SUITES:
            raise ValueError(f"unknown suite {name!r}; "
                             f"choose from {sorted(SUITES)} or 'all'")
        out.append((name, SUITES[name]()))
    return out
