"""Noiseless error scaling of the small-angle evolution circuit: fourth order
in grid size and second order in evolution time.

Run from the repo root:  python3 demos/infidelity_scaling.py
Writes demos/output/scaling_N.svg and demos/output/scaling_t.svg
"""

from pathlib import Path

import numpy as np

from qwave import pipeline
from qwave.svgplot import Series, line_chart

OUT = Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

# Infidelity vs grid size at fixed t: the frequency mismatch per mode shrinks
# like N^-2, so the infidelity drops like N^-4.
t = 1.0
ns = range(5, 9)
Ns, eps_N = [], []
print(f"{'N':>5} {'epsilon(t=1)':>14} {'second order':>14} {'moment bound':>14}")
for n in ns:
    measured = pipeline.circuit_infidelity(n, t)
    _, second, bound = pipeline.model_epsilon(n, t)
    Ns.append(2**n)
    eps_N.append(measured)
    print(f"{2**n:5d} {measured:14.3e} {second:14.3e} {bound:14.3e}")
slope_N = pipeline.loglog_slope(Ns, eps_N)
print(f"log-log slope vs N: {slope_N:.3f} (expect -4)\n")

line_chart(
    [Series(f"t = {t}", Ns, eps_N)],
    OUT / "scaling_N.svg",
    title=f"noiseless infidelity vs N (slope {slope_N:.2f})",
    xlabel="N",
    ylabel="epsilon",
    logx=True,
    logy=True,
)

# Infidelity vs time at fixed N: the per-mode phase error grows linearly in t,
# so the infidelity grows like t^2 until the overlap starts to wrap.
n = 6
ts = np.arange(0.1, 1.01, 0.1)
eps_t = [pipeline.circuit_infidelity(n, float(t)) for t in ts]
slope_t = pipeline.loglog_slope(ts, eps_t)
print(f"{'t':>6} {'epsilon(N=64)':>14}")
for t, e in zip(ts, eps_t):
    print(f"{t:6.2f} {e:14.3e}")
print(f"log-log slope vs t: {slope_t:.3f} (expect 2)")

line_chart(
    [Series(f"N = {2**n}", ts, eps_t)],
    OUT / "scaling_t.svg",
    title=f"noiseless infidelity vs t (slope {slope_t:.2f})",
    xlabel="t",
    ylabel="epsilon",
    logx=True,
    logy=True,
)
print(f"wrote {OUT / 'scaling_N.svg'} and {OUT / 'scaling_t.svg'}")
