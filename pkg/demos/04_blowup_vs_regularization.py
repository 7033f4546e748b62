"""The headline experiment on a desk-scale grid: identical supercritical
initial data collapses under the classical cubic 2D equation but stays
globally bounded under the Helmholtz regularization.

The initial beam carries 1.2x the Townes critical power.  The classical
run ends when the blow-up monitor trips (sustained sup-norm growth or
loss of spectral resolution); the regularized run reaches t_end with a
bounded gradient.

Run:  python demos/04_blowup_vs_regularization.py
"""

import numpy as np

from shnls.diagnostics import BlowupPolicy, mass
from shnls.groundstate import deposit, solve_ground_state
from shnls.spectral import Grid
from shnls.stepper import StepControl, run
from shnls.system import EquationSpec

grid = Grid(n=(128, 128), box_length=(16.0, 16.0))
profile = solve_ground_state(1.0, 2, bracket=(1.0, 3.0))
v = deposit(profile, grid)
v *= np.sqrt(1.2 * profile.power / mass(grid, v))
print(f"initial power: {mass(grid, v):.4f} = 1.2 x {profile.power:.4f}")

control = StepControl(t_end=3.0, dt_init=1e-3, dt_min=1e-8, dt_max=2e-3,
                      safety=0.1, max_steps=200_000)

for label, spec in (("classical (nls)", EquationSpec("nls", 1.0)),
                    ("regularized (sh, alpha=0.1)", EquationSpec("sh", 1.0, 0.1))):
    result = run(spec, grid, v.copy(), control, policy=BlowupPolicy(),
                 diagnostics_every=5)
    sups = [r.sup_abs for r in result.records]
    grads = [r.grad_sq for r in result.records]
    line = (f"{label:30s} reason={result.reason:16s} "
            f"t_final={result.t_final:6.3f} peak sup|v|={max(sups):8.2f} "
            f"peak grad^2={max(grads):10.1f}")
    if result.blowup_time is not None:
        line += f" blowup_time={result.blowup_time:.3f} ({result.blowup_condition})"
    print(line)

print("\nSame data, same solver; only the potential differs. The inverse-"
      "Helmholtz smoothing arrests the collapse.")
