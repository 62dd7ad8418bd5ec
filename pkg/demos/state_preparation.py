"""Train the brickwall ansatz to load the Ricker pulse, save the angles as a
checkpoint, and rebuild the preparation circuit from the file.

Run from the repo root:  python3 demos/state_preparation.py
Writes demos/output/prep_n{2,4}.json and demos/output/train_history.svg
"""

from pathlib import Path

from qwave import pipeline
from qwave import stateprep as sp
from qwave.sim import state_infidelity
from qwave.svgplot import Series, line_chart

OUT = Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

config = sp.OptimizerConfig(max_iters=5000)
series = []
for n in (2, 4):
    target = sp.ricker_target(sp.GridSpec(n))
    ansatz = sp.build_ansatz(n + 1)
    result = sp.optimize_multistart(ansatz, target, config, seeds=(0, 1, 2))
    print(
        f"n = {n}: depth {ansatz.depth}, {ansatz.num_params} angles, "
        f"seed {result.seed} wins after {result.iterations} iterations, "
        f"infidelity {result.infidelity:.3e}"
    )

    checkpoint = sp.Checkpoint.from_result(n, ansatz, result)
    path = OUT / f"prep_n{n}.json"
    checkpoint.save(path)

    # Round trip: rebuild the circuit from the file and check it still hits the target.
    loaded = sp.Checkpoint.load(path)
    prepared = pipeline.simulate_noiseless(pipeline.prep_circuit(loaded))
    print(f"  reloaded circuit infidelity: {state_infidelity(target, prepared):.3e}")

    iters = list(range(1, len(result.history) + 1))
    series.append(Series(f"n = {n}", iters, [max(c, 1e-16) for c in result.history]))

# n = 2 reaches numerical zero; n = 4 stalls on the fixed-depth expressivity
# floor (~3e-5) — deeper brickwork, not more iterations, is what lowers it.
line_chart(
    series,
    OUT / "train_history.svg",
    title="training cost per accepted iteration",
    xlabel="iteration",
    ylabel="cost",
    logy=True,
)
print(f"wrote {OUT / 'train_history.svg'}")
