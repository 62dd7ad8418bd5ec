"""Lowering to the hardware gateset {RZ, PhasedX, RZZ}, counts, fits, pruning.

Identities used (verified densely in the tests):

    H          = e^{i pi/2} RZ(pi/2) . PhasedX(pi/4, -pi/4)
    CPhase(f)  = e^{i f/4} (RZ(f/4) x RZ(f/4)) . RZZ(-f/4)

so every controlled rotation costs exactly one two-qubit gate after lowering.
The native diagonal injector has no finite decomposition in this gateset and
is rejected.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .sim import (
    CPHASE,
    DIAG,
    HADAMARD,
    PHASEDX,
    RZ,
    RZZ,
    Circuit,
    Gate,
    phased_x,
    rz,
    rzz,
)

_QUARTER = math.pi / 4.0


def lower(circuit: Circuit) -> Circuit:
    """Rewrite into {RZ, PhasedX, RZZ}; unitary preserved exactly (tracked phase)."""
    out = Circuit(circuit.num_qubits, global_phase=circuit.global_phase)
    for gate in circuit.gates:
        if gate.kind in (RZ, PHASEDX, RZZ):
            out.gates.append(gate)
        elif gate.kind == HADAMARD:
            (q,) = gate.targets
            out.gates.append(phased_x(_QUARTER, -_QUARTER, q))
            out.gates.append(rz(math.pi / 2.0, q))
            out.global_phase += math.pi / 2.0
        elif gate.kind == CPHASE:
            a, b = gate.targets
            (phi,) = gate.params
            out.gates.append(rz(phi / 4.0, a))
            out.gates.append(rz(phi / 4.0, b))
            out.gates.append(rzz(-phi / 4.0, a, b))
            out.global_phase += phi / 4.0
        elif gate.kind == DIAG:
            raise ValueError("diagonal injector has no decomposition in the hardware gateset")
        else:
            raise ValueError(f"unknown gate kind {gate.kind!r}")
    if circuit.final_permutation is not None:
        out._set_permutation(list(circuit.final_permutation))
    return out


@dataclass(frozen=True)
class GateCounts:
    """Tally of a circuit: totals, per-kind breakdown, greedy-layered depth."""

    total: int
    two_qubit: int
    per_kind: dict[str, int]
    depth: int

    def __post_init__(self):
        if self.two_qubit > self.total:
            raise ValueError("two-qubit count cannot exceed the total")


def count(circuit: Circuit) -> GateCounts:
    """Tally gates; depth = greedy layering, gates sharing no qubit may share a layer."""
    per_kind: dict[str, int] = {}
    two_qubit = 0
    finished = [0] * circuit.num_qubits
    for gate in circuit.gates:
        per_kind[gate.kind] = per_kind.get(gate.kind, 0) + 1
        if gate.num_targets == 2:
            two_qubit += 1
        layer = 1 + max(finished[t] for t in gate.targets)
        for t in gate.targets:
            finished[t] = layer
    depth = max(finished) if circuit.gates else 0
    return GateCounts(
        total=len(circuit.gates),
        two_qubit=two_qubit,
        per_kind=per_kind,
        depth=depth,
    )


def quadratic_fit(xs, ys) -> tuple[tuple[float, float, float], float]:
    """Least-squares a x^2 + b x + c; returns ((a, b, c), R^2)."""
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if xs.size < 3:
        raise ValueError("quadratic fit needs at least three points")
    coeffs = np.polyfit(xs, ys, 2)
    residuals = ys - np.polyval(coeffs, xs)
    ss_tot = float(np.sum((ys - ys.mean()) ** 2))
    r2 = 1.0 if ss_tot == 0.0 else 1.0 - float(np.sum(residuals ** 2)) / ss_tot
    return (float(coeffs[0]), float(coeffs[1]), float(coeffs[2])), r2


@dataclass(frozen=True)
class PruneSpec:
    """Keep controlled rotations R_kappa with kappa <= b; drop the finer ones."""

    b: int

    def __post_init__(self):
        if self.b < 1:
            raise ValueError("pruning threshold b must be at least 1")


def _rotation_order(angle: float) -> int:
    """kappa with |angle| = 2 pi / 2^kappa, or raise if the gate is not a QFT rotation."""
    if angle == 0.0:
        raise ValueError("zero-angle controlled rotation is not part of a QFT")
    kappa = math.log2(2.0 * math.pi / abs(angle))
    nearest = round(kappa)
    if abs(kappa - nearest) > 1e-9 or nearest < 2:
        raise ValueError(f"controlled-phase angle {angle!r} is not a QFT rotation")
    return int(nearest)


def prune_qft(circuit: Circuit, spec: PruneSpec) -> tuple[Circuit, float | None]:
    """Drop controlled rotations with kappa > b from a QFT/IQFT circuit.

    Returns the pruned circuit and, for registers of at most 6 qubits, the
    spectral-norm deviation ||U_exact - U_pruned||_2 (None for larger ones).
    """
    pruned = Circuit(circuit.num_qubits, global_phase=circuit.global_phase)
    for gate in circuit.gates:
        if gate.kind == HADAMARD:
            pruned.gates.append(gate)
        elif gate.kind == CPHASE:
            if _rotation_order(gate.params[0]) <= spec.b:
                pruned.gates.append(gate)
        else:
            raise ValueError(f"{gate.kind} gate does not belong to a QFT circuit")
    if circuit.final_permutation is not None:
        pruned._set_permutation(list(circuit.final_permutation))
    deviation = None
    if circuit.num_qubits <= 6:
        deviation = float(np.linalg.norm(circuit.unitary() - pruned.unitary(), ord=2))
    return pruned, deviation
