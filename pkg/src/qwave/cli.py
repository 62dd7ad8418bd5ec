"""Command-line driver: train preps, run evolutions, sweep scaling axes, count gates.

Subcommands
    train      fit the brickwall prep for the Ricker target, save a JSON checkpoint
    evolve     run one evolution, emit per-gridpoint CSV (and SVG overlay)
    sweep      iterate N, t, p, or shots; emit rows, fitted exponents, charts
    gatecount  lowered gate tallies vs n with a degree-2 fit

Options may come from a flat key=value config file (--config); explicit flags
override file values.  All randomness flows from --seed.  Exit code 0 on
success, 1 with a diagnostic on stderr otherwise.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields
from pathlib import Path

import numpy as np

from . import pipeline
from .compile import quadratic_fit
from .sim import sample_bitstrings, state_infidelity
from .stateprep import (
    Checkpoint,
    OptimizerConfig,
    build_ansatz,
    optimize,
    optimize_multistart,
)
from .svgplot import Series, line_chart


@dataclass(frozen=True)
class RunConfig:
    """One command's resolved options (file config merged with CLI flags)."""

    n: int = 6
    n_range: tuple[int, int] | None = None
    t: float = 1.0
    t_range: tuple[float, float] | None = None
    dt: float = 0.01
    mode: str = "approx"
    p: tuple[float, ...] = ()
    shots: int = 0
    shots_list: tuple[int, ...] = (100, 1000, 10000, 100000)
    seed: int = 0
    prep: str = "exact"
    out: str = "qwave-out"
    axis: str = "N"
    workers: int = 1
    iters: int = 5000
    restarts: int = 3
    depth: int | None = None
    svg: bool = True

    def __post_init__(self):
        if self.dt <= 0:
            raise ValueError("time step must be positive")
        if self.t_range is not None and self.t_range[0] > self.t_range[1]:
            raise ValueError("t range must be increasing")
        if self.n_range is not None and self.n_range[0] > self.n_range[1]:
            raise ValueError("n range must be increasing")
        if self.workers < 1:
            raise ValueError("need at least one worker")
        if self.shots < 0:
            raise ValueError("shots must be non-negative")
        if self.restarts < 1:
            raise ValueError("need at least one restart")


def _parse_int_range(text: str) -> tuple[int, int]:
    lo, _, hi = text.partition(":")
    return (int(lo), int(hi if hi else lo))


def _parse_float_range(text: str) -> tuple[float, float]:
    lo, _, hi = text.partition(":")
    return (float(lo), float(hi if hi else lo))


def _parse_floats(text: str) -> tuple[float, ...]:
    return tuple(float(x) for x in text.split(",") if x.strip())


def _parse_ints(text: str) -> tuple[int, ...]:
    return tuple(int(x) for x in text.split(",") if x.strip())


def _parse_bool(text: str) -> bool:
    lowered = text.strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


_FIELD_PARSERS = {
    "n": int,
    "n_range": _parse_int_range,
    "t": float,
    "t_range": _parse_float_range,
    "dt": float,
    "mode": str,
    "p": _parse_floats,
    "shots": int,
    "shots_list": _parse_ints,
    "seed": int,
    "prep": str,
    "out": str,
    "axis": str,
    "workers": int,
    "iters": int,
    "restarts": int,
    "depth": int,
    "svg": _parse_bool,
}


def load_config_file(path: str | Path) -> dict[str, object]:
    """Flat `key = value` lines; keys mirror the CLI flags (underscored)."""
    values: dict[str, object] = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip().replace("-", "_"), value.strip()
        if not sep or not key:
            raise ValueError(f"{path}:{lineno}: expected key = value, got {raw!r}")
        if key not in _FIELD_PARSERS:
            raise ValueError(f"{path}:{lineno}: unknown option {key!r}")
        values[key] = _FIELD_PARSERS[key](value)
    return values


def resolve_config(args: argparse.Namespace) -> RunConfig:
    """Defaults, then config-file values, then explicitly passed flags."""
    values: dict[str, object] = {}
    if getattr(args, "config", None):
        values.update(load_config_file(args.config))
    for field in fields(RunConfig):
        flag_value = getattr(args, field.name, None)
        if flag_value is not None:
            values[field.name] = flag_value
    return RunConfig(**values)


def _out_dir(config: RunConfig) -> Path:
    out = Path(config.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write_csv(path: Path, header: list[str], rows: list[tuple]) -> None:
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def cmd_train(config: RunConfig) -> int:
    """Train the prep for the Ricker target at n, write prep_n{n}.json."""
    out = _out_dir(config)
    target = pipeline.ricker_state(config.n)
    ansatz = build_ansatz(config.n + 1, config.depth)
    opt = OptimizerConfig(max_iters=config.iters, seed=config.seed)
    if config.restarts > 1:
        seeds = range(config.seed, config.seed + config.restarts)
        result = optimize_multistart(ansatz, target, opt, seeds=list(seeds))
    else:
        result = optimize(ansatz, target, opt)
    checkpoint = Checkpoint.from_result(config.n, ansatz, result)
    path = out / f"prep_n{config.n}.json"
    checkpoint.save(path)
    if config.svg:
        iters = list(range(len(result.history)))
        line_chart(
            [Series("best cost", iters, [max(c, 1e-16) for c in result.history])],
            out / f"train_history_n{config.n}.svg",
            title=f"prep training, n={config.n} (seed {result.seed})",
            xlabel="iteration",
            ylabel="best cost",
            logy=True,
        )
    print(
        f"train n={config.n}: infidelity={result.infidelity:.3e} "
        f"cost={result.cost:.3e} iterations={result.iterations} seed={result.seed} -> {path}"
    )
    return 0


def _load_prep(config: RunConfig):
    """Returns (prep circuit or None, initial state or None) per the prep source."""
    if config.prep == "exact":
        return None, pipeline.ricker_state(config.n)
    checkpoint = Checkpoint.load(config.prep)
    if checkpoint.n != config.n:
        raise ValueError(f"checkpoint is for n={checkpoint.n}, run asked for n={config.n}")
    return pipeline.prep_circuit(checkpoint), None


def cmd_evolve(config: RunConfig) -> int:
    """One evolution run; CSV of (x, exact |psi|^2, simulated |psi|^2, eps_mc)."""
    out = _out_dir(config)
    n, t = config.n, config.t
    N = 2 ** n
    prep, initial = _load_prep(config)
    circuit = pipeline.evolution_circuit(n, t, config.mode, prep)
    p = config.p[0] if config.p else 0.0
    if p > 0.0:
        state = pipeline.simulate_noisy(circuit, p, initial)
    else:
        state = pipeline.simulate_noiseless(circuit, initial)
    exact = pipeline.exact_reference(n, t)
    exact_probs = pipeline.wavefield_probabilities(exact, n)
    sim_probs = pipeline.wavefield_probabilities(state, n)

    if config.shots > 0:
        histogram = sample_bitstrings(state, config.shots, config.seed)
        sampled = np.zeros(N)
        for j in range(N):
            sampled[j] = histogram.get(format(j, f"0{n + 1}b"), 0) / config.shots
        eps_mc = np.sqrt(sampled * (1.0 - sampled) / config.shots)
        reported = sampled
    else:
        eps_mc = np.zeros(N)
        reported = sim_probs

    xs = np.arange(N) / N
    stem = f"evolve_n{n}_t{t:g}" + (f"_p{p:g}" if p > 0 else "")
    rows = [
        (f"{x:.8g}", f"{e:.10g}", f"{s:.10g}", f"{m:.10g}")
        for x, e, s, m in zip(xs, exact_probs, reported, eps_mc)
    ]
    _write_csv(out / f"{stem}.csv", ["x", "exact_prob", "sim_prob", "eps_mc"], rows)
    if config.svg:
        series = [Series("exact", xs, exact_probs)]
        label = f"sampled ({config.shots} shots)" if config.shots else "simulated"
        series.append(Series(label, xs, reported, errs=eps_mc if config.shots else None))
        line_chart(
            series,
            out / f"{stem}.svg",
            title=f"wavefield at t={t:g} (n={n}, mode={config.mode}"
            + (f", p={p:g})" if p > 0 else ")"),
            xlabel="x",
            ylabel="|psi|^2",
        )
    eps = state_infidelity(exact, state)
    print(f"evolve n={n} t={t:g} mode={config.mode} p={p:g}: infidelity={eps:.3e} -> {out / stem}.csv")
    return 0


def _run_points(points: list[tuple[int, float, float]], workers: int) -> list[pipeline.SweepRow]:
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(pipeline.sweep_point, *pt) for pt in points]
            return [f.result() for f in futures]
    return [pipeline.sweep_point(*pt) for pt in points]


def _write_sweep(out: Path, name: str, rows: list[pipeline.SweepRow]) -> Path:
    path = out / name
    _write_csv(
        path,
        list(pipeline.SweepRow.FIELDS),
        [tuple(f"{v:.10g}" if isinstance(v, float) else v for v in r.astuple()) for r in rows],
    )
    return path


def _sweep_grid_axis(config: RunConfig, out: Path) -> int:
    """Axis N (noiseless) or p (one curve per noise level): epsilon vs grid size."""
    if config.axis == "N":
        lo, hi = config.n_range or (5, 8)
        p_list: tuple[float, ...] = config.p or (0.0,)
    else:
        lo, hi = config.n_range or (2, 9)
        p_list = config.p or (1e-5, 1e-4, 1e-3)
    ns = list(range(lo, hi + 1))
    points = [(n, config.t, p) for p in p_list for n in ns]
    rows = _run_points(points, config.workers)
    path = _write_sweep(out, f"sweep_{config.axis}.csv", rows)

    series = []
    messages = []
    per_p = {p: rows[i * len(ns):(i + 1) * len(ns)] for i, p in enumerate(p_list)}
    for p, chunk in per_p.items():
        label = "noiseless" if p == 0 else f"p={p:g}"
        series.append(Series(label, [r.N for r in chunk], [r.epsilon for r in chunk]))
        if p == 0 and len(chunk) >= 2:
            slope = pipeline.loglog_slope([r.N for r in chunk], [r.epsilon for r in chunk])
            messages.append(f"noiseless slope vs N: {slope:.3f}")
        elif p > 0:
            eps = [r.epsilon for r in chunk]
            argmin_n = ns[int(np.argmin(eps))]
            interior = ns[0] < argmin_n < ns[-1]
            messages.append(
                f"p={p:g}: min epsilon={min(eps):.3e} at n={argmin_n}"
                + (" (interior)" if interior else " (at sweep edge)")
            )
    model = per_p[p_list[0]]
    series.append(Series("model", [r.N for r in model], [r.epsilon_model for r in model]))
    if config.svg:
        line_chart(
            series,
            out / f"sweep_{config.axis}.svg",
            title=f"infidelity vs N (t={config.t:g})",
            xlabel="N",
            ylabel="epsilon",
            logx=True,
            logy=True,
        )
    for message in messages:
        print(message)
    print(f"sweep axis={config.axis}: {len(rows)} rows -> {path}")
    return 0


def _sweep_time_axis(config: RunConfig, out: Path) -> int:
    t_lo, t_hi = config.t_range or (0.1, 1.0)
    steps = int(round((t_hi - t_lo) / config.dt))
    ts = [t_lo + i * config.dt for i in range(steps + 1)]
    if not ts:
        raise ValueError("empty time axis")
    p = config.p[0] if config.p else 0.0
    points = [(config.n, t, p) for t in ts]
    rows = _run_points(points, config.workers)
    path = _write_sweep(out, "sweep_t.csv", rows)

    fit_rows = [r for r in rows if r.t >= 0.1 and r.epsilon > 0]
    slope = None
    if len(fit_rows) >= 2:
        slope = pipeline.loglog_slope([r.t for r in fit_rows], [r.epsilon for r in fit_rows])
        print(f"slope vs t (t >= 0.1): {slope:.3f}")
    if config.svg:
        positive = [r for r in rows if r.epsilon > 0 and r.t > 0]
        line_chart(
            [
                Series("measured", [r.t for r in positive], [r.epsilon for r in positive]),
                Series("model", [r.t for r in positive], [r.epsilon_model for r in positive]),
            ],
            out / "sweep_t.svg",
            title=f"infidelity vs t (n={config.n}, p={p:g})",
            xlabel="t",
            ylabel="epsilon",
            logx=True,
            logy=True,
        )
    print(f"sweep axis=t: {len(rows)} rows -> {path}")
    return 0


def _sweep_shots_axis(config: RunConfig, out: Path) -> int:
    if not config.shots_list:
        raise ValueError("empty shots axis")
    n, t = config.n, config.t
    N = 2 ** n
    prep, initial = _load_prep(config)
    circuit = pipeline.evolution_circuit(n, t, config.mode, prep)
    state = pipeline.simulate_noiseless(circuit, initial)
    probs = pipeline.wavefield_probabilities(state, n)
    rows = []
    for i, shots in enumerate(config.shots_list):
        histogram = sample_bitstrings(state, shots, config.seed + i)
        sampled = np.array([histogram.get(format(j, f"0{n + 1}b"), 0) / shots for j in range(N)])
        max_abs = float(np.max(np.abs(sampled - probs)))
        eps_mc_max = float(np.max(np.sqrt(sampled * (1.0 - sampled) / shots)))
        rows.append((n, N, f"{t:g}", shots, f"{max_abs:.10g}", f"{eps_mc_max:.10g}"))
    path = out / "sweep_shots.csv"
    _write_csv(path, ["n", "N", "t", "shots", "max_abs_error", "eps_mc_max"], rows)
    if config.svg:
        line_chart(
            [
                Series("max |p_hat - p|", list(config.shots_list), [float(r[4]) for r in rows]),
                Series("max eps_mc", list(config.shots_list), [float(r[5]) for r in rows]),
            ],
            out / "sweep_shots.svg",
            title=f"sampling error vs shots (n={n}, t={t:g})",
            xlabel="shots",
            ylabel="error",
            logx=True,
            logy=True,
        )
    print(f"sweep axis=shots: {len(rows)} rows -> {path}")
    return 0


def cmd_sweep(config: RunConfig) -> int:
    out = _out_dir(config)
    if config.axis in ("N", "p"):
        return _sweep_grid_axis(config, out)
    if config.axis == "t":
        return _sweep_time_axis(config, out)
    if config.axis == "shots":
        return _sweep_shots_axis(config, out)
    raise ValueError(f"unknown sweep axis {config.axis!r} (expected N, t, p, or shots)")


def cmd_gatecount(config: RunConfig) -> int:
    """Lowered tallies over an n range, plus quadratic fits of the two-qubit counts."""
    out = _out_dir(config)
    lo, hi = config.n_range or (4, 10)
    ns = list(range(lo, hi + 1))
    t = config.t if config.t > 0 else 1.0
    rows = []
    for n in ns:
        ansatz = build_ansatz(n + 1, config.depth)
        prep = pipeline.prep_circuit_like(ansatz)
        rows.append(pipeline.gate_count_row(n, t, prep))
    header = list(rows[0].keys())
    path = out / "gatecounts.csv"
    _write_csv(path, header, [tuple(r[k] for k in header) for r in rows])

    fits = {}
    for series_name in ("two_qubit_evolution", "two_qubit_with_prep"):
        coeffs, r2 = quadratic_fit(ns, [r[series_name] for r in rows])
        fits[series_name] = {"a": coeffs[0], "b": coeffs[1], "c": coeffs[2], "r_squared": r2}
        print(
            f"{series_name}: {coeffs[0]:.4g} n^2 + {coeffs[1]:.4g} n + {coeffs[2]:.4g}"
            f"  (R^2 = {r2:.6f})"
        )
    (out / "gatecount_fit.json").write_text(json.dumps(fits, indent=2) + "\n")
    if config.svg:
        line_chart(
            [
                Series("evolution", ns, [r["two_qubit_evolution"] for r in rows]),
                Series("with prep", ns, [r["two_qubit_with_prep"] for r in rows]),
            ],
            out / "gatecounts.svg",
            title=f"two-qubit gates vs n (t={t:g})",
            xlabel="n",
            ylabel="two-qubit gates",
        )
    print(f"gatecount: {len(rows)} rows -> {path}")
    return 0


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="key=value config file; flags override it")
    parser.add_argument("--n", type=int, help="spatial qubits (N = 2^n grid points)")
    parser.add_argument("--t", type=float, help="evolution time")
    parser.add_argument("--t-range", dest="t_range", type=_parse_float_range, metavar="LO:HI")
    parser.add_argument("--dt", type=float, help="time step for t sweeps")
    parser.add_argument("--n-range", dest="n_range", type=_parse_int_range, metavar="LO:HI")
    parser.add_argument("--mode", choices=["exact", "approx", "small-angle"], help="diagonal flavor")
    parser.add_argument("--p", type=_parse_floats, metavar="P[,P...]", help="depolarizing levels")
    parser.add_argument("--shots", type=int, help="samples to draw (0 = none)")
    parser.add_argument("--shots-list", dest="shots_list", type=_parse_ints, metavar="S[,S...]")
    parser.add_argument("--seed", type=int, help="seed for all randomness")
    parser.add_argument("--prep", help="'exact' or a checkpoint JSON path")
    parser.add_argument("--out", help="output directory")
    parser.add_argument("--workers", type=int, help="parallel sweep workers")
    parser.add_argument("--iters", type=int, help="optimizer iteration budget")
    parser.add_argument("--restarts", type=int, help="optimizer restarts")
    parser.add_argument("--depth", type=int, help="override ansatz depth")
    parser.add_argument("--no-svg", dest="svg", action="store_const", const=False, help="skip SVG output")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qwave", description="wave-equation evolution on a simulated quantum register"
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, func, extra in (
        ("train", cmd_train, "train the state-prep circuit"),
        ("evolve", cmd_evolve, "run one evolution and dump the wavefield"),
        ("sweep", cmd_sweep, "sweep N, t, p, or shots"),
        ("gatecount", cmd_gatecount, "count lowered gates vs n"),
    ):
        p = sub.add_parser(name, help=extra)
        _add_common(p)
        if name == "sweep":
            p.add_argument("--axis", choices=["N", "t", "p", "shots"], help="sweep axis")
        p.set_defaults(func=func)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = resolve_config(args)
        return args.func(config)
    except (ValueError, OSError, KeyError, FloatingPointError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
