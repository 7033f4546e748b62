"""Alpha-continuation sweep: shrink the regularization length toward zero
with frozen initial data and watch the peaks grow toward the classical
blow-up behavior.

Each alpha > 0 run stays bounded (the regularized system is globally
well-posed at this exponent), but the focusing peaks grow as alpha
decreases; the classical baseline sets the reference.

Run:  python demos/05_alpha_continuation.py
"""

import json
import tempfile
from pathlib import Path

from shnls.harness import (BlowupPolicy, EquationSpec, Grid, OutputSpec,
                           RunConfig, StepControl, SweepConfig, alpha_sweep)

workdir = Path(tempfile.mkdtemp(prefix="alpha_sweep_"))

base = RunConfig(
    grid=Grid(n=(128, 128), box_length=(16.0, 16.0)),
    equation=EquationSpec("sh", sigma=1.0, alpha=0.4),
    initial_kind="townes", initial_params=(("power_multiple", 1.2),),
    control=StepControl(t_end=2.0, dt_init=1e-3, dt_min=1e-8, dt_max=2e-3,
                        safety=0.1, max_steps=200_000),
    policy=BlowupPolicy(),
    output=OutputSpec(directory=str(workdir / "base"), diagnostics_every=5),
)
sweep = SweepConfig(base=base, alphas=(0.4, 0.2, 0.1),
                    include_nls_baseline=True, directory=str(workdir))

report = alpha_sweep(sweep)

print(f"{'run':>14} {'reason':>18} {'peak sup|v|':>12} {'peak grad^2':>12}")
for row in report["runs"]:
    print(f"{row['label']:>14} {row['reason']:>18} "
          f"{row['peak_sup_abs']:12.3f} {row['peak_grad_sq']:12.1f}")

peaks = [r["peak_sup_abs"] for r in report["runs"] if r["label"] != "nls_baseline"]
print(f"\npeaks grow as alpha decreases: {peaks} (non-decreasing: "
      f"{all(a <= b for a, b in zip(peaks, peaks[1:]))})")
print(f"artifacts in {workdir} "
      f"(sweep_report.json, sweep_report.csv, one directory per run)")
print(json.dumps(report["runs"][-1], indent=2))
