"""Smoke test for the dirac_visc_py extension.

Install first: pip install --no-build-isolation -e crates/dirac-visc-py
"""

import json
import math

import dirac_visc_py as dv

p = dv.ModelParams(disorder_a=20.0)

# Gap equation at the Dirac point: gamma = E_c / sqrt(exp(A) - 1).
sigma = dv.solve_sigma(0.0, p)
gamma = 7.2 / math.sqrt(math.exp(20.0) - 1.0)
assert abs(-sigma.imag / gamma - 1.0) < 1e-8, sigma

# Shear is even, Hall is odd in the Fermi energy.
assert abs(dv.shear_static(0.7, p) - dv.shear_static(-0.7, p)) < 1e-9
clean = dv.ModelParams(disorder_a=500.0)
w = math.sqrt(2.0) * 0.6582 / 8.113
h = dv.hall_static(w / 2.0, clean, 10.0)
assert abs(h / 1.209e-3 - 1.0) < 0.01, h
assert abs(h + dv.hall_static(-w / 2.0, clean, 10.0)) < 1e-9

assert dv.vertex_ratio(1.0, p) < 1e-8
assert dv.vertex_ratio(0.2, clean, 10.0) == 0.0

spec = json.loads(dv.figure_preset("fig4"))
spec.update(e_values=[1.5], a_values=[20.0], omega_start=None, omega_stop=None, omega_count=None, omega_values=[0.1, 0.4])
spec = {k: v for k, v in spec.items() if v is not None}
csv = dv.run_sweep_csv(json.dumps(spec))
lines = csv.strip().splitlines()
assert lines[0].startswith("disorder_a (1),b_field (T),energy (eV),omega (eV)")
assert len(lines) == 3

try:
    dv.figure_preset("fig9")
except ValueError:
    pass
else:
    raise AssertionError("unknown preset accepted")

assert all(c[3] for c in dv.oracle_suite())
print("smoke test passed")
