"""Two-qubit depolarizing noise turns grid refinement into a trade-off: finer
grids cut the discretization error but add gates, so the total infidelity has
an interior minimum that moves with the noise strength.

Run from the repo root:  python3 demos/noise_tradeoff.py
Writes demos/output/noise_tradeoff.svg
"""

from pathlib import Path

from qwave import pipeline
from qwave.svgplot import Series, line_chart

OUT = Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

t = 1.0
ns = list(range(2, 10))
ps = (1e-5, 1e-4, 1e-3)

series = []
print(f"noisy infidelity at t = {t} (rows: N, columns: two-qubit error rate p)")
header = f"{'N':>5}" + "".join(f" {p:>12.0e}" for p in ps)
print(header)
table = {p: [] for p in ps}
for n in ns:
    row = [f"{2**n:5d}"]
    for p in ps:
        eps = pipeline.noisy_infidelity(n, t, p)
        table[p].append(eps)
        row.append(f" {eps:12.3e}")
    print("".join(row))

for p in ps:
    best = min(range(len(ns)), key=lambda i: table[p][i])
    print(f"p = {p:.0e}: minimum epsilon = {table[p][best]:.3e} at N = {2**ns[best]}")
    series.append(Series(f"p = {p:.0e}", [2**n for n in ns], table[p]))

line_chart(
    series,
    OUT / "noise_tradeoff.svg",
    title=f"noisy infidelity vs N at t = {t}",
    xlabel="N",
    ylabel="epsilon",
    logx=True,
    logy=True,
)
print(f"wrote {OUT / 'noise_tradeoff.svg'}")
