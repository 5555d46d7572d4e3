"""Holding an unstable rest state with more and more devices.

With the bistable reaction -y^3 + y the flat state y = 0 is unstable: any
perturbation grows toward the wells at +-1.  Closed-loop device banks of 16,
36 and 64 tightly covering discs try to pin the field at zero anyway.  The
final error collapses by orders of magnitude as the coverage tightens.

Reduced-scale version of the 'exp1-*' presets (full scale takes minutes).
"""

import time

from dataclasses import replace

from thermoloop import make_experiment, run_experiment

print("devices   E_y(T)        E_grad(T)     wall")
for devices in (16, 36, 64):
    config = make_experiment(1, devices=devices)
    config = replace(config, scheme=replace(config.scheme, n_div=60, n_steps=1200))
    t0 = time.perf_counter()
    out = run_experiment(config)
    wall = time.perf_counter() - t0
    s = out.series
    print(f"  {devices:4d}   {s.e_y[-1]:.6e}  {s.e_grad[-1]:.6e}  {wall:4.1f}s")

print("\nwith 16 devices whole regions escape to the +-1 wells; with 64 the"
      "\nfeedback dominates everywhere and the state is held at numerical zero")
