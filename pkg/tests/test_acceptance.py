"""Acceptance suite: one test per criterion, one printed PASS/FAIL line each.

Run with `pytest tests/test_acceptance.py -v -s` to see the criterion lines
(the 2D runs take a couple of minutes; they are shared session fixtures).

Criterion 2 is expected to fail and is left failing on purpose: the exact
soliton is a relative equilibrium of the split flow, so its Hamiltonian
drift superconverges at dt^4 (measured ratios 1/16 per dt halving, with the
pinned dt = 1e-3 sitting at the roundoff floor).  No dt puts the soliton
run's ratio in the second-order window [0.15, 0.35].  The second-order law
itself is real and is asserted on a non-equilibrium smooth run inside the
same test, which prints both measurements.
"""

import numpy as np
import pytest

from shnls import groundstate
from shnls.diagnostics import BlowupPolicy, apriori_tracker, read_csv
from shnls.harness import OutputSpec, RunConfig, execute, load_snapshot
from shnls.spectral import (Grid, free_propagator, helmholtz_regularity_ratio,
                            l2_norm)
from shnls.stepper import StepControl, run, strang_step
from shnls.system import EquationSpec, nonlinearity


def report(num, ok, detail):
    print(f"\nCRITERION {num:>2}: {'PASS' if ok else 'FAIL'} - {detail}")
    return ok


# ---------------------------------------------------------------- fixtures

SOLITON_GRID = Grid(n=(1024,), box_length=(80.0,))


def soliton_field(grid):
    x = grid.axis_coordinates(0) - grid.center[0]
    return np.sqrt(2.0) / np.cosh(x) + 0j


def soliton_run(dt, t_end=10.0):
    control = StepControl(t_end=t_end, dt_init=dt, dt_min=dt / 1000, dt_max=dt,
                          safety=0.9, max_steps=200_000)
    return run(EquationSpec("nls", 1.0), SOLITON_GRID, soliton_field(SOLITON_GRID),
               control, policy=BlowupPolicy(), diagnostics_every=10)


@pytest.fixture(scope="session")
def soliton_run_dt():
    return soliton_run(1e-3)


@pytest.fixture(scope="session")
def soliton_run_half_dt():
    return soliton_run(5e-4)


def crit3_config(out_dir):
    return RunConfig(
        grid=SOLITON_GRID, equation=EquationSpec("nls", 1.0),
        initial_kind="soliton-1d", initial_params=(("eta", 1.0),),
        control=StepControl(t_end=1.0, dt_init=1e-3, dt_min=1e-6, dt_max=1e-3,
                            safety=0.9, max_steps=10_000),
        policy=BlowupPolicy(),
        output=OutputSpec(directory=str(out_dir), diagnostics_every=10))


GRID_2D = Grid(n=(256, 256), box_length=(20.0, 20.0))


def crit7_config(kind, alpha, power_multiple, out_dir):
    return RunConfig(
        grid=GRID_2D, equation=EquationSpec(kind, 1.0, alpha),
        initial_kind="townes",
        initial_params=(("power_multiple", power_multiple),),
        control=StepControl(t_end=5.0, dt_init=1e-3, dt_min=1e-8, dt_max=2e-3,
                            safety=0.1, max_steps=500_000),
        policy=BlowupPolicy(),
        output=OutputSpec(directory=str(out_dir), diagnostics_every=5))


@pytest.fixture(scope="session")
def crit3_runs(tmp_path_factory):
    root = tmp_path_factory.mktemp("crit3")
    out = []
    for i in (1, 2):
        cfg = crit3_config(root / f"run{i}")
        out.append((execute(cfg), root / f"run{i}"))
    return out


@pytest.fixture(scope="session")
def crit7_runs(tmp_path_factory):
    root = tmp_path_factory.mktemp("crit7")
    results = {}
    for name, kind, alpha in (("nls", "nls", 0.0), ("sh", "sh", 0.1)):
        results[name] = []
        for i in (1, 2):
            out_dir = root / f"{name}{i}"
            cfg = crit7_config(kind, alpha, 1.2, out_dir)
            results[name].append((execute(cfg), out_dir))
    return results


@pytest.fixture(scope="session")
def crit8_run(tmp_path_factory):
    out_dir = tmp_path_factory.mktemp("crit8") / "nls08"
    return execute(crit7_config("nls", 0.0, 0.8, out_dir)), out_dir


# ---------------------------------------------------------------- criteria

def test_criterion_01_mass_conservation(soliton_run_dt):
    masses = [r.mass for r in soliton_run_dt.records]
    drift = max(abs(m - masses[0]) for m in masses) / masses[0]
    ok = drift <= 1e-11 and soliton_run_dt.steps >= 10_000
    assert report(1, ok, f"relative mass drift {drift:.3e} <= 1e-11 over "
                         f"{soliton_run_dt.steps} steps")


def test_criterion_02_hamiltonian_drift_ratio(soliton_run_dt,
                                              soliton_run_half_dt):
    """Expected red; see the module docstring."""
    def drift(result):
        hams = [r.hamiltonian for r in result.records]
        return max(abs(h - hams[0]) for h in hams) / abs(hams[0])

    d_full, d_half = drift(soliton_run_dt), drift(soliton_run_half_dt)
    ratio = d_half / d_full

    # the second-order law on a non-equilibrium smooth run
    grid = Grid(n=(256,), box_length=(40.0,))
    x = grid.axis_coordinates(0) - grid.center[0]
    v0 = 1.2 * np.exp(-(x**2) / 2) + 0j
    spec = EquationSpec("nls", 1.0)

    def generic_drift(dt):
        control = StepControl(t_end=2.0, dt_init=dt, dt_min=dt / 10, dt_max=dt,
                              safety=0.9, max_steps=100_000)
        result = run(spec, grid, v0, control, diagnostics_every=10)
        hams = [r.hamiltonian for r in result.records]
        return max(abs(h - hams[0]) for h in hams) / abs(hams[0])

    generic_ratio = generic_drift(5e-3) / generic_drift(1e-2)
    ok = 0.15 <= ratio <= 0.35
    report(2, ok,
           f"soliton-run drift ratio {ratio:.3f} (drifts {d_full:.2e} -> "
           f"{d_half:.2e}, roundoff floor; dt^4 superconvergence on the "
           f"soliton orbit); generic smooth-run ratio {generic_ratio:.4f}")
    assert 0.15 <= generic_ratio <= 0.35
    assert ok, ("soliton run superconverges (dt^4) so its drift ratio cannot "
                "sit in the second-order window; left red by design")


def test_criterion_03_soliton_regression(crit3_runs):
    summary, out_dir = crit3_runs[0]
    snaps = sorted((out_dir / "snapshots").glob("t_*.bin"),
                   key=lambda p: int(p.stem.split("_")[1]))
    v_final = load_snapshot(snaps[-1], SOLITON_GRID)
    x = SOLITON_GRID.axis_coordinates(0) - SOLITON_GRID.center[0]
    exact = np.sqrt(2.0) / np.cosh(x) * np.exp(1j * summary["t_final"])
    abs_err = l2_norm(SOLITON_GRID, v_final - exact)
    rel_err = abs_err / l2_norm(SOLITON_GRID, exact)
    ok = summary["reason"] == "completed" and rel_err <= 1e-6
    assert report(3, ok, f"relative L2 error {rel_err:.3e} <= 1e-6 at T=1 "
                         f"(absolute {abs_err:.3e})")


def test_criterion_04_plane_wave_dispersion():
    grid = Grid(n=(128,), box_length=(16.0,))
    x = grid.axis_coordinates(0)
    amp, mode, dt = 1.3, 3, 1e-2
    k = 2 * np.pi * mode / grid.box_length[0]
    worst = 0.0
    for kind, alpha in (("nls", 0.0), ("sh", 0.37)):
        spec = EquationSpec(kind, 1.0, alpha)
        got = strang_step(spec, grid, amp * np.exp(1j * k * x), dt)
        exact = amp * np.exp(1j * (k * x - (k**2 - amp**2) * dt))
        worst = max(worst, float(np.abs(got - exact).max() / amp))
    ok = worst <= 1e-12
    assert report(4, ok, f"one-step phase deviation {worst:.3e} <= 1e-12 "
                         "(nls and sh)")


def test_criterion_05_multiplier_bound(all_grids):
    grids = all_grids + [GRID_2D, Grid(n=(512,), box_length=(20.0,))]
    worst = 0.0
    for grid in grids:
        for alpha in (0.05, 0.1, 0.5, 1.0):
            ratio = helmholtz_regularity_ratio(grid, alpha)
            bound = max(1.0, alpha**-2)
            if not np.all(ratio <= bound):
                worst = np.inf
            worst = max(worst, float(ratio.max() / bound))
    ok = worst <= 1.0
    assert report(5, ok, f"(1+|k|^2)/(1+a^2|k|^2) <= max(1, 1/a^2) exactly on "
                         f"{len(grids)} grids x 4 alphas; worst share {worst:.15f}")


def test_criterion_06_townes_ground_state():
    a = groundstate.solve_ground_state(1.0, 2, bracket=(1.0, 3.0),
                                       tol=1e-12, r_max=25.0)
    b = groundstate.solve_ground_state(1.0, 2, bracket=(1.0, 3.0),
                                       tol=1e-10, r_max=20.0)
    p1 = groundstate.solve_ground_state(1.0, 1, bracket=(1.0, 3.0))
    sech_dev = float(np.abs(p1.R_values - np.sqrt(2) / np.cosh(p1.r_samples)).max())
    ok = (abs(a.R0 - 2.2062) < 1e-3 and abs(a.power - 11.70) < 0.01
          and abs(a.R0 - b.R0) < 1e-5 and abs(a.power - b.power) / a.power < 1e-5
          and sech_dev < 1e-7)
    assert report(6, ok, f"R0 = {a.R0:.6f} (2.2062 +- 1e-3), power = "
                         f"{a.power:.6f} (11.70 +- 0.01); cross-tol/rmax "
                         f"deltas {abs(a.R0 - b.R0):.2e}/"
                         f"{abs(a.power - b.power) / a.power:.2e} <= 1e-5; "
                         f"1D sech deviation {sech_dev:.2e} <= 1e-7")


def test_criterion_07_regularization_headline(crit7_runs):
    nls, _ = crit7_runs["nls"][0]
    sh, sh_dir = crit7_runs["sh"][0]
    sh_records = read_csv(sh_dir / "diagnostics.csv")
    sh_report = apriori_tracker(EquationSpec("sh", 1.0, 0.1), 2, sh_records)
    ok = (nls["reason"] == "blowup-detected"
          and nls["blowup_time"] is not None and nls["blowup_time"] < 5.0
          and sh["reason"] == "completed"
          and np.isfinite(sh["peak_grad_sq"])
          and not sh_report.divergence_flagged
          and sh_report.satisfies_bound)
    assert report(
        7, ok,
        f"nls: {nls['reason']} at t = {nls['blowup_time']:.4f} "
        f"({nls['blowup_condition']}); sh(alpha=0.1): {sh['reason']} to "
        f"t = {sh['t_final']:g} with peak grad_sq {sh['peak_grad_sq']:.1f} "
        f"finite, last-quarter ratio {sh_report.last_quarter_ratio:.2f}")


def test_criterion_08_subcritical_dispersal(crit8_run):
    summary, out_dir = crit8_run
    records = read_csv(out_dir / "diagnostics.csv")
    sups = np.array([r.sup_abs for r in records])
    peak = int(np.argmax(sups))
    diffs = np.diff(sups[peak:])
    slack = 1e-3 * sups[peak]  # periodic wrap-around ripple allowance
    monotone = bool(np.all(diffs <= slack))
    ok = (summary["reason"] == "completed" and monotone
          and sups[-1] < 0.5 * sups[peak])
    assert report(8, ok, f"completed; sup decays {sups[peak]:.3f} -> "
                         f"{sups[-1]:.3f}, max uptick "
                         f"{max(diffs.max(), 0):.2e} within slack {slack:.2e}")


def test_criterion_09_alpha_convergence():
    grid = Grid(n=(128, 128), box_length=(32.0, 32.0))
    xx, yy = grid.meshgrid()
    cx, cy = grid.center
    v = 1.3 * np.exp(-((xx - cx) ** 2 + (yy - cy) ** 2) / (2 * 2.5**2)) + 0j
    f0 = nonlinearity(EquationSpec("nls", 1.0), grid, v)
    diffs = {}
    for alpha in (0.2, 0.1, 0.05):
        fa = nonlinearity(EquationSpec("sh", 1.0, alpha), grid, v)
        diffs[alpha] = l2_norm(grid, fa - f0)
    r1 = diffs[0.2] / diffs[0.1]
    r2 = diffs[0.1] / diffs[0.05]
    ok = 3.6 <= r1 <= 4.4 and 3.6 <= r2 <= 4.4
    assert report(9, ok, f"||f_a - f_0|| halving ratios {r1:.3f}, {r2:.3f} "
                         "in 4 +- 10%")


def test_criterion_10_dispersive_decay():
    grid = Grid(n=(1024,), box_length=(100.0,))
    x = grid.axis_coordinates(0) - grid.center[0]
    v0 = np.exp(-(x**2) / 4.0) + 0j  # closed-form sup norm (1 + t^2)^{-1/4}
    worst = 0.0
    for t in (1.0, 2.0, 4.0):
        out = free_propagator(grid, v0, t)
        worst = max(worst, abs(float(np.abs(out).max()) - (1 + t**2) ** -0.25))
    ok = worst <= 1e-6
    assert report(10, ok, f"free Gaussian sup norm matches (1+t^2)^(-1/4) at "
                          f"t in {{1,2,4}}; worst deviation {worst:.3e} <= 1e-6")


def test_criterion_11_reproducibility(crit3_runs, crit7_runs):
    pairs = {"criterion-3": [d for _, d in crit3_runs],
             "criterion-7 nls": [d for _, d in crit7_runs["nls"]],
             "criterion-7 sh": [d for _, d in crit7_runs["sh"]]}
    identical = {}
    for name, (d1, d2) in pairs.items():
        identical[name] = (d1 / "diagnostics.csv").read_bytes() == \
            (d2 / "diagnostics.csv").read_bytes()
    ok = all(identical.values())
    assert report(11, ok, "byte-identical diagnostics.csv across two "
                          f"executions: {identical}")
