"""Dense statevector and density-matrix engine for small qubit registers.

Gate set: Hadamard, RZ, PhasedX, RZZ, ControlledPhase, plus a native diagonal
injector for exact diagonal operators.  Conventions used throughout the
package:

* qubit 0 (top wire) is the most significant index bit,
* RZ(theta)  = exp(-i theta Z)        (full angle, no half-angle factor),
* RZZ(theta) = exp(-i theta Z x Z),
* PhasedX(theta, phi) = RZ(phi) RX(theta) RZ(-phi) with RX(theta) = exp(-i theta X),
* ControlledPhase(theta) = diag(1, 1, 1, e^{i theta})  (symmetric in its wires).

Noisy runs follow every two-qubit gate with a two-qubit depolarizing channel

    E(rho) = (1 - p) rho + (p / 15) sum_{P != I(x)I} P rho P^dag

over the 15 non-identity two-qubit Paulis; single-qubit gates are noiseless.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

HADAMARD = "H"
RZ = "RZ"
PHASEDX = "PHASEDX"
RZZ = "RZZ"
CPHASE = "CPHASE"
DIAG = "DIAG"

_SQRT1_2 = 1.0 / math.sqrt(2.0)
_H_MATRIX = np.array([[_SQRT1_2, _SQRT1_2], [_SQRT1_2, -_SQRT1_2]], dtype=complex)

_NUM_PARAMS = {HADAMARD: 0, RZ: 1, PHASEDX: 2, RZZ: 1, CPHASE: 1}
_NUM_TARGETS = {HADAMARD: 1, RZ: 1, PHASEDX: 1, RZZ: 2, CPHASE: 2}


@dataclass(frozen=True, eq=False)
class Gate:
    """A primitive operation on one, two, or (for the injector) k qubits."""

    kind: str
    targets: tuple[int, ...]
    params: tuple[float, ...] = ()
    values: np.ndarray | None = None

    def __post_init__(self):
        if len(set(self.targets)) != len(self.targets):
            raise ValueError(f"gate targets must be distinct, got {self.targets}")
        if self.kind == DIAG:
            if self.values is None:
                raise ValueError("diagonal injector needs a value array")
            values = np.asarray(self.values, dtype=complex)
            if values.shape != (2 ** len(self.targets),):
                raise ValueError(
                    f"diagonal injector on {len(self.targets)} qubits needs "
                    f"{2 ** len(self.targets)} values, got {values.shape}"
                )
            if np.max(np.abs(np.abs(values) - 1.0)) > 1e-12:
                raise ValueError("diagonal injector values must have unit modulus")
            object.__setattr__(self, "values", values)
        elif self.kind in _NUM_TARGETS:
            if len(self.targets) != _NUM_TARGETS[self.kind]:
                raise ValueError(f"{self.kind} acts on {_NUM_TARGETS[self.kind]} qubits")
            if len(self.params) != _NUM_PARAMS[self.kind]:
                raise ValueError(f"{self.kind} takes {_NUM_PARAMS[self.kind]} angles")
        else:
            raise ValueError(f"unknown gate kind {self.kind!r}")

    @property
    def num_targets(self) -> int:
        return len(self.targets)

    def matrix(self) -> np.ndarray:
        """Dense 2^k x 2^k matrix; the first target is the more significant bit."""
        if self.kind == HADAMARD:
            return _H_MATRIX.copy()
        if self.kind == RZ:
            (theta,) = self.params
            return np.diag([np.exp(-1j * theta), np.exp(1j * theta)])
        if self.kind == PHASEDX:
            theta, phi = self.params
            c, s = math.cos(theta), math.sin(theta)
            return np.array(
                [[c, -1j * s * np.exp(-2j * phi)], [-1j * s * np.exp(2j * phi), c]]
            )
        if self.kind == RZZ:
            (theta,) = self.params
            lo, hi = np.exp(-1j * theta), np.exp(1j * theta)
            return np.diag([lo, hi, hi, lo])
        if self.kind == CPHASE:
            (theta,) = self.params
            return np.diag([1.0, 1.0, 1.0, np.exp(1j * theta)])
        return np.diag(self.values)

    def dagger(self) -> "Gate":
        if self.kind == HADAMARD:
            return self
        if self.kind == DIAG:
            return Gate(DIAG, self.targets, values=np.conj(self.values))
        if self.kind == PHASEDX:
            theta, phi = self.params
            return Gate(PHASEDX, self.targets, (-theta, phi))
        (theta,) = self.params
        return Gate(self.kind, self.targets, (-theta,))


def hadamard(q: int) -> Gate:
    return Gate(HADAMARD, (q,))


def rz(theta: float, q: int) -> Gate:
    return Gate(RZ, (q,), (float(theta),))


def phased_x(theta: float, phi: float, q: int) -> Gate:
    return Gate(PHASEDX, (q,), (float(theta), float(phi)))


def rzz(theta: float, a: int, b: int) -> Gate:
    return Gate(RZZ, (a, b), (float(theta),))


def cphase(theta: float, a: int, b: int) -> Gate:
    return Gate(CPHASE, (a, b), (float(theta),))


def diagonal_injector(values: Iterable[complex], targets: Sequence[int]) -> Gate:
    return Gate(DIAG, tuple(targets), values=np.asarray(list(values), dtype=complex))


def _invert_permutation(perm: Sequence[int]) -> list[int]:
    inv = [0] * len(perm)
    for q, p in enumerate(perm):
        inv[p] = q
    return inv


@lru_cache(maxsize=128)
def _permutation_index(num_qubits: int, perm: tuple[int, ...]) -> np.ndarray:
    """Destination index for each basis index when wire q's bit moves to wire perm[q]."""
    src = np.arange(2 ** num_qubits)
    dst = np.zeros_like(src)
    for q in range(num_qubits):
        bit = (src >> (num_qubits - 1 - q)) & 1
        dst |= bit << (num_qubits - 1 - perm[q])
    return dst


def _apply_permutation(amps: np.ndarray, perm: Sequence[int], num_qubits: int) -> np.ndarray:
    dst = _permutation_index(num_qubits, tuple(perm))
    out = np.empty_like(amps)
    out[dst] = amps
    return out


def _apply_matrix(amps: np.ndarray, matrix: np.ndarray, targets: Sequence[int], num_qubits: int) -> np.ndarray:
    """Apply a 2^k x 2^k matrix on `targets`; amps is (2^n,) or (2^n, batch)."""
    k = len(targets)
    shape = amps.shape
    vec = amps.reshape([2] * num_qubits + [-1])
    rest = [ax for ax in range(num_qubits) if ax not in targets]
    order = list(targets) + rest + [num_qubits]
    vec = vec.transpose(order).reshape(2 ** k, -1)
    vec = matrix @ vec
    vec = vec.reshape([2] * num_qubits + [-1]).transpose(np.argsort(order))
    return np.ascontiguousarray(vec).reshape(shape)


def _apply_diag_values(amps: np.ndarray, values: np.ndarray, targets: Sequence[int], num_qubits: int) -> np.ndarray:
    """Multiply diagonal injector values into the targeted axes (no dense matrix)."""
    k = len(targets)
    shape = amps.shape
    vec = amps.reshape([2] * num_qubits + [-1])
    sorted_targets = sorted(targets)
    vals = values.reshape([2] * k).transpose([targets.index(q) for q in sorted_targets])
    broadcast = [2 if q in targets else 1 for q in range(num_qubits)] + [1]
    vec = vec * vals.reshape(broadcast)
    return vec.reshape(shape)


def _apply_gate_array(amps: np.ndarray, gate: Gate, num_qubits: int) -> np.ndarray:
    for t in gate.targets:
        if not 0 <= t < num_qubits:
            raise ValueError(f"gate target {t} out of range for {num_qubits} qubits")
    if gate.kind == DIAG:
        return _apply_diag_values(amps, gate.values, gate.targets, num_qubits)
    return _apply_matrix(amps, gate.matrix(), gate.targets, num_qubits)


class Circuit:
    """An ordered gate list on a fixed register, with a tracked global phase
    and an optional final wire relabeling.

    The relabeling (`final_permutation`) moves the content of wire q to wire
    `final_permutation[q]` after all gates have acted.  It costs no gates: on
    an all-to-all machine it is bookkeeping, and the engine applies it as an
    amplitude permutation.  `extend` and `inverse` push relabelings through
    subsequent gates so a composed circuit keeps a single trailing one.
    """

    def __init__(
        self,
        num_qubits: int,
        gates: Iterable[Gate] | None = None,
        global_phase: float = 0.0,
        final_permutation: Sequence[int] | None = None,
    ):
        if num_qubits < 1:
            raise ValueError("circuit needs at least one qubit")
        self.num_qubits = int(num_qubits)
        self.gates: list[Gate] = []
        self.global_phase = float(global_phase)
        self.final_permutation: list[int] | None = None
        if final_permutation is not None:
            self._set_permutation(list(final_permutation))
        for gate in gates or ():
            self.append(gate)

    def _set_permutation(self, perm: list[int]) -> None:
        if sorted(perm) != list(range(self.num_qubits)):
            raise ValueError(f"invalid wire permutation {perm}")
        self.final_permutation = None if perm == list(range(self.num_qubits)) else perm

    def append(self, gate: Gate) -> "Circuit":
        for t in gate.targets:
            if not 0 <= t < self.num_qubits:
                raise ValueError(f"gate target {t} out of range for {self.num_qubits} qubits")
        if self.final_permutation is not None:
            # keep the relabeling trailing: relabel the new gate into pre-permutation wires
            inv = _invert_permutation(self.final_permutation)
            gate = Gate(gate.kind, tuple(inv[t] for t in gate.targets), gate.params, gate.values)
        self.gates.append(gate)
        return self

    def extend(self, other: "Circuit", wires: Sequence[int] | None = None) -> "Circuit":
        """Append `other`, mapping its wire w onto self wire wires[w]."""
        wires = list(range(other.num_qubits)) if wires is None else list(wires)
        if len(wires) != other.num_qubits or len(set(wires)) != len(wires):
            raise ValueError("wire map must be a distinct wire per qubit of the sub-circuit")
        for gate in other.gates:
            mapped = Gate(gate.kind, tuple(wires[t] for t in gate.targets), gate.params, gate.values)
            self.append(mapped)
        self.global_phase += other.global_phase
        if other.final_permutation is not None:
            lifted = list(range(self.num_qubits))
            for w, pw in enumerate(other.final_permutation):
                lifted[wires[w]] = wires[pw]
            base = self.final_permutation or list(range(self.num_qubits))
            self._set_permutation([lifted[base[q]] for q in range(self.num_qubits)])
        return self

    def inverse(self) -> "Circuit":
        inv = Circuit(self.num_qubits, global_phase=-self.global_phase)
        perm = self.final_permutation
        for gate in reversed(self.gates):
            targets = tuple(perm[t] for t in gate.targets) if perm else gate.targets
            g = gate.dagger()
            inv.gates.append(Gate(g.kind, targets, g.params, g.values))
        if perm is not None:
            inv._set_permutation(_invert_permutation(perm))
        return inv

    def unitary(self) -> np.ndarray:
        """Dense matrix of the circuit (including relabeling and global phase)."""
        dim = 2 ** self.num_qubits
        u = np.eye(dim, dtype=complex)
        for gate in self.gates:
            u = _apply_gate_array(u, gate, self.num_qubits)
        if self.final_permutation is not None:
            u = _apply_permutation(u, self.final_permutation, self.num_qubits)
        if self.global_phase != 0.0:
            u = u * np.exp(1j * self.global_phase)
        return u

    def __len__(self) -> int:
        return len(self.gates)

    def __iter__(self):
        return iter(self.gates)

    def __repr__(self) -> str:
        return f"Circuit(num_qubits={self.num_qubits}, gates={len(self.gates)})"


class StateVector:
    """Normalized pure state on `num_qubits` qubits (qubit 0 = most significant bit)."""

    def __init__(self, amplitudes: np.ndarray, check: bool = True):
        amplitudes = np.asarray(amplitudes, dtype=complex)
        n = int(round(math.log2(amplitudes.size)))
        if 2 ** n != amplitudes.size or amplitudes.ndim != 1:
            raise ValueError("amplitude array length must be a power of two")
        if check and abs(np.vdot(amplitudes, amplitudes).real - 1.0) > 1e-6:
            raise ValueError("state vector must be normalized")
        self.num_qubits = n
        self.amplitudes = amplitudes

    @classmethod
    def zero(cls, num_qubits: int) -> "StateVector":
        amps = np.zeros(2 ** num_qubits, dtype=complex)
        amps[0] = 1.0
        return cls(amps, check=False)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2


class DensityMatrix:
    """Hermitian, unit-trace density operator."""

    def __init__(self, entries: np.ndarray, check: bool = True):
        entries = np.asarray(entries, dtype=complex)
        n = int(round(math.log2(entries.shape[0])))
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1] or 2 ** n != entries.shape[0]:
            raise ValueError("density matrix must be square with power-of-two dimension")
        if check:
            if abs(np.trace(entries).real - 1.0) > 1e-8 or abs(np.trace(entries).imag) > 1e-8:
                raise ValueError("density matrix must have unit trace")
            if np.max(np.abs(entries - entries.conj().T)) > 1e-8:
                raise ValueError("density matrix must be Hermitian")
        self.num_qubits = n
        self.entries = entries

    @classmethod
    def from_statevector(cls, state: StateVector) -> "DensityMatrix":
        a = state.amplitudes
        return cls(np.outer(a, a.conj()), check=False)

    def purity(self) -> float:
        return float(np.trace(self.entries @ self.entries).real)

    def probabilities(self) -> np.ndarray:
        return np.clip(np.diag(self.entries).real, 0.0, None)

    def is_positive(self, tol: float = 1e-8) -> bool:
        try:
            np.linalg.cholesky(self.entries + tol * np.eye(self.entries.shape[0]))
            return True
        except np.linalg.LinAlgError:
            return False


@dataclass(frozen=True)
class NoiseModel:
    """Two-qubit depolarizing noise applied after every two-qubit gate."""

    p: float

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"depolarizing probability must lie in [0, 1], got {self.p}")


def apply_gate(state: StateVector, gate: Gate) -> StateVector:
    return StateVector(_apply_gate_array(state.amplitudes, gate, state.num_qubits), check=False)


def apply_circuit(state: StateVector, circuit: Circuit) -> StateVector:
    """Run `circuit` on a pure state (noiseless)."""
    if state.num_qubits != circuit.num_qubits:
        raise ValueError("state and circuit act on different register sizes")
    amps = state.amplitudes
    for gate in circuit.gates:
        amps = _apply_gate_array(amps, gate, circuit.num_qubits)
    if circuit.final_permutation is not None:
        amps = _apply_permutation(amps, circuit.final_permutation, circuit.num_qubits)
    if circuit.global_phase != 0.0:
        amps = amps * np.exp(1j * circuit.global_phase)
    return StateVector(amps, check=False)


def _dm_apply_gate(entries: np.ndarray, gate: Gate, m: int) -> np.ndarray:
    flat = entries.reshape(-1)
    flat = _apply_gate_array(flat, gate, 2 * m)
    right = Gate(gate.kind, tuple(t + m for t in gate.targets), gate.params, gate.values)
    if right.kind == DIAG:
        right = Gate(DIAG, right.targets, values=np.conj(right.values))
        flat = _apply_gate_array(flat, right, 2 * m)
    else:
        flat = _apply_matrix(flat, right.matrix().conj(), right.targets, 2 * m)
    return flat.reshape(entries.shape)


def depolarize_pair(entries: np.ndarray, a: int, b: int, p: float, m: int) -> np.ndarray:
    """Two-qubit depolarizing channel on wires (a, b).

    Uses the twirl identity sum_{all 16 P} P rho P^dag = 16 (Tr_ab rho) (x) I/4,
    so E(rho) = (1 - 16p/15) rho + (16p/15) (Tr_ab rho) (x) I/4.
    """
    t = entries.reshape([2] * (2 * m))
    # trace out the pair: contract (a, m+a) then (b, m+b), tracking axis shifts
    reduced = np.trace(t, axis1=a, axis2=m + a)
    b1 = b if b < a else b - 1
    b2 = (m + b) - 2 if (m + b) > (m + a) else (m + b) - 1
    reduced = np.trace(reduced, axis1=b1, axis2=b2)
    out = np.zeros_like(t)
    idx: list = [slice(None)] * (2 * m)
    for ia in (0, 1):
        for ib in (0, 1):
            idx[a] = ia
            idx[b] = ib
            idx[m + a] = ia
            idx[m + b] = ib
            out[tuple(idx)] = reduced / 4.0
            idx[a] = idx[b] = idx[m + a] = idx[m + b] = slice(None)
    w = 16.0 * p / 15.0
    return ((1.0 - w) * t + w * out).reshape(entries.shape)


def apply_circuit_noisy(rho: DensityMatrix, circuit: Circuit, noise: NoiseModel) -> DensityMatrix:
    """Run `circuit` on a density matrix, depolarizing after every two-qubit gate."""
    if rho.num_qubits != circuit.num_qubits:
        raise ValueError("state and circuit act on different register sizes")
    if not rho.is_positive():
        raise ValueError("input density matrix is not positive semidefinite")
    m = circuit.num_qubits
    entries = rho.entries
    for gate in circuit.gates:
        entries = _dm_apply_gate(entries, gate, m)
        if gate.num_targets == 2 and noise.p > 0.0:
            entries = depolarize_pair(entries, gate.targets[0], gate.targets[1], noise.p, m)
    if circuit.final_permutation is not None:
        dst = _permutation_index(m, tuple(circuit.final_permutation))
        out = np.empty_like(entries)
        out[np.ix_(dst, dst)] = entries
        entries = out
    return DensityMatrix(entries, check=False)


def sample_bitstrings(state: StateVector | DensityMatrix, shots: int, seed: int) -> dict[str, int]:
    """Draw Born-rule samples; returns a histogram keyed by bitstring (qubit 0 first)."""
    if shots < 1:
        raise ValueError("shots must be a positive integer")
    probs = state.probabilities()
    probs = np.clip(probs, 0.0, None)
    total = probs.sum()
    if not 0.999 < total < 1.001:
        raise ValueError("state probabilities do not sum to one")
    probs = probs / total
    rng = np.random.default_rng(seed)
    counts = rng.multinomial(shots, probs)
    n = state.num_qubits
    return {format(i, f"0{n}b"): int(c) for i, c in enumerate(counts) if c > 0}


def state_infidelity(exact: StateVector, state: StateVector | DensityMatrix) -> float:
    """1 - <exact| rho |exact> for mixed states; 1 - |<exact|psi>|^2 for pure ones."""
    if exact.num_qubits != state.num_qubits:
        raise ValueError("states act on different register sizes")
    if isinstance(state, StateVector):
        fidelity = abs(np.vdot(exact.amplitudes, state.amplitudes)) ** 2
    else:
        val = np.vdot(exact.amplitudes, state.entries @ exact.amplitudes)
        if abs(val.imag) > 1e-10:
            raise ValueError("fidelity has a non-negligible imaginary part; invalid density matrix")
        fidelity = val.real
    eps = 1.0 - fidelity
    if not -1e-9 <= eps <= 1.0 + 1e-9:
        raise ValueError(f"infidelity {eps} outside [0, 1]")
    return float(min(max(eps, 0.0), 1.0))
