"""Empirical Lipschitz stability under data and control perturbations.

Shifting the initial state by delta * (fixed blob) or scaling the control
height by (1 + delta) changes the trajectory by an amount proportional to
delta: the response/delta ratios stay within a small factor across two
decades.  Reduced-scale version of `thermoloop verify stability`.
"""

from dataclasses import replace

from thermoloop import make_experiment, probe_control_stability, probe_data_stability
from thermoloop.experiments import PROBE_DIRECTION

config = make_experiment(2, variant=1)
config = replace(config, scheme=replace(config.scheme, n_div=40, n_steps=100))

for name, report in (
        ("initial data", probe_data_stability(config, PROBE_DIRECTION,
                                              [1e-1, 1e-2, 1e-3])),
        ("control height", probe_control_stability(config, [1e-1, 1e-2, 1e-3]))):
    print(f"perturbing {name}:")
    print("   delta      response      response/delta")
    for d, r, q in zip(report.deltas, report.responses, report.ratios):
        print(f"  {d:8.0e}  {r:.6e}  {q:14.6f}")
    print(f"  ratio spread factor: {report.spread:.4f} "
          f"({'Lipschitz-consistent' if report.spread < 3 else 'inconclusive'})\n")
