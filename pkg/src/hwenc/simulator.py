"""Sparse statevector simulation, sampling, and synthetic CNOT noise.

The sparse engine keeps a basis-index -> amplitude map and applies each gate
by its basis-state action, which touches at most two states per input state.
Encoder circuits have supports of size d << 2^n, so this is the default.

A dense engine (plain numpy vectors) backs the noisy sampler and the
equivalence tests on CNOT-level circuits, where mid-circuit superpositions
fill out and per-entry dict work would dominate.

Noise is a single synthetic channel: after every CNOT, with probability p2,
a uniformly random non-identity two-qubit Pauli hits that CNOT's wires.
Each shot is its own trajectory.  Shots sharing an identical insertion
pattern see the same final state, so trajectories are grouped by pattern and
each distinct pattern is simulated once; the per-pattern counts are then
multinomial draws.  Semantics match one-trajectory-per-shot exactly and the
whole run is deterministic given the seed.
"""

import math
from dataclasses import dataclass

import numpy as np

from hwenc.bitstrings import BitString
from hwenc.ir import (
    Circuit,
    Gate,
    MIXING_KINDS,
    _single_qubit_matrix,
    apply_to_basis_state,
    gate_unitary,
)

PRUNE_TOL = 1e-12


@dataclass
class SparseState:
    """Amplitudes over computational basis states, keyed by integer index."""

    n: int
    amps: dict[int, complex]

    @classmethod
    def zero(cls, n: int) -> "SparseState":
        return cls(n, {0: 1.0 + 0j})

    @classmethod
    def basis(cls, b: BitString) -> "SparseState":
        return cls(b.n, {b.to_index(): 1.0 + 0j})

    def norm(self) -> float:
        return math.sqrt(sum(abs(a) ** 2 for a in self.amps.values()))

    def amplitude(self, b) -> complex:
        if isinstance(b, BitString):
            idx = b.to_index()
        elif isinstance(b, str):
            idx = BitString(b).to_index()
        else:
            idx = int(b)
        return self.amps.get(idx, 0j)

    def probabilities(self) -> dict[BitString, float]:
        return {
            BitString.from_index(self.n, i): abs(a) ** 2
            for i, a in sorted(self.amps.items())
        }

    def as_vector(self) -> np.ndarray:
        if self.n > 12:
            raise ValueError("dense view limited to 12 qubits")
        v = np.zeros(2**self.n, dtype=complex)
        for i, a in self.amps.items():
            v[i] = a
        return v


def apply_gate(amps: dict[int, complex], gate: Gate) -> dict[int, complex]:
    """One gate on a sparse map.  Matches the basis-state action exactly."""
    out: dict[int, complex] = {}
    for state, amp in amps.items():
        for target, coeff in apply_to_basis_state(gate, state).items():
            value = out.get(target, 0j) + amp * coeff
            if value == 0j:
                out.pop(target, None)
            else:
                out[target] = value
    return out


def run(circuit: Circuit, initial=None, check_norm: bool = True) -> SparseState:
    """Run a circuit exactly on the sparse engine.

    ``initial`` may be a SparseState, a BitString, a basis index, or None
    for the all-zeros state.  Amplitudes below 1e-12 are pruned at the end
    (mid-circuit cancellation residue), never during the run.
    """
    if isinstance(initial, SparseState):
        amps = dict(initial.amps)
    elif isinstance(initial, BitString):
        amps = {initial.to_index(): 1.0 + 0j}
    elif initial is None:
        amps = {0: 1.0 + 0j}
    else:
        amps = {int(initial): 1.0 + 0j}
    for i, gate in enumerate(circuit.gates):
        amps = apply_gate(amps, gate)
        if check_norm:
            norm = sum(abs(a) ** 2 for a in amps.values())
            if abs(norm - 1.0) > 1e-9:
                raise ArithmeticError(f"norm drifted to {norm} after gate {i}")
    amps = {s: a for s, a in amps.items() if abs(a) > PRUNE_TOL}
    return SparseState(circuit.n, amps)


def sample(state: SparseState, shots: int, seed: int) -> dict[BitString, int]:
    """Multinomial measurement counts, deterministic given the seed."""
    if shots < 1:
        raise ValueError("need at least one shot")
    rng = np.random.default_rng(seed)
    indices = sorted(state.amps)
    p = np.array([abs(state.amps[i]) ** 2 for i in indices])
    p = p / p.sum()
    draw = rng.multinomial(shots, p)
    return {
        BitString.from_index(state.n, indices[j]): int(c)
        for j, c in enumerate(draw)
        if c
    }


# dense engine

def _apply_1q_dense(vec: np.ndarray, n: int, q: int, u: np.ndarray) -> np.ndarray:
    axis = n - q
    t = vec.reshape((2,) * n)
    t = np.tensordot(u, t, axes=([1], [axis]))
    return np.moveaxis(t, 0, axis).reshape(-1)


def _apply_cnot_dense(vec: np.ndarray, n: int, ctrl: int, tgt: int) -> np.ndarray:
    out = vec.copy().reshape((2,) * n)
    view = np.moveaxis(out, (n - ctrl, n - tgt), (0, 1))
    view[1] = view[1, ::-1].copy()
    return out.reshape(-1)


def dense_run(circuit: Circuit, initial: int = 0) -> np.ndarray:
    """Full statevector run; fast for CNOT-level circuits.

    Falls back to dense gate matrices for multi-wire or controlled gates, so
    it accepts logical circuits too (within the 12-qubit dense guard).
    """
    n = circuit.n
    if n > 16:
        raise ValueError("dense run limited to 16 qubits")
    vec = np.zeros(2**n, dtype=complex)
    vec[initial] = 1.0
    for g in circuit.gates:
        vec = _apply_gate_dense(vec, n, g)
    return vec


def _apply_gate_dense(vec: np.ndarray, n: int, g: Gate) -> np.ndarray:
    if g.kind == "CNOT":
        return _apply_cnot_dense(vec, n, g.ctrls[0], g.ins[0])
    if g.kind in MIXING_KINDS or g.ctrls or g.anti_ctrls:
        return gate_unitary(g, n) @ vec
    return _apply_1q_dense(vec, n, g.ins[0], _single_qubit_matrix(g))


# noise

_PAULIS = (
    np.eye(2, dtype=complex),
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


@dataclass(frozen=True)
class NoiseModel:
    """Depolarizing-style two-qubit Pauli noise after every CNOT."""

    p2: float
    seed: int = 0

    def __post_init__(self):
        if not 0.0 <= self.p2 < 1.0:
            raise ValueError(f"p2 must be in [0, 1), got {self.p2}")


def _apply_pauli_1q(vec: np.ndarray, q: int, which: int) -> np.ndarray:
    """X (1), Y (2), or Z (3) on qubit q, by index arithmetic."""
    mask = 1 << (q - 1)
    idx = np.arange(vec.size)
    if which == 1:
        return vec[idx ^ mask]
    bit = (idx & mask).astype(bool)
    if which == 3:
        out = vec.copy()
        out[bit] = -out[bit]
        return out
    out = vec[idx ^ mask].copy()
    out[bit] *= 1j
    out[~bit] *= -1j
    return out


def _apply_pauli_pair(vec: np.ndarray, n: int, wires: tuple[int, int],
                      pauli_index: int) -> np.ndarray:
    """One of the 15 non-identity two-qubit Paulis, indexed 0..14."""
    a, b = divmod(pauli_index + 1, 4)
    if a:
        vec = _apply_pauli_1q(vec, wires[0], a)
    if b:
        vec = _apply_pauli_1q(vec, wires[1], b)
    return vec


class _NoisyEngine:
    """Final-state solver for one Pauli-insertion pattern.

    Matrix mode caches the cumulative circuit unitary after each CNOT, so a
    pattern costs two matrix-vector products per insertion.  When the cache
    would not fit, replay mode stores only the state after each CNOT and
    re-applies the gate tail.
    """

    def __init__(self, circuit: Circuit, sites: list[int],
                 force_matrix: bool | None = None):
        self.n = n = circuit.n
        self.gates = circuit.gates
        self.sites = sites
        self.wires = [
            (self.gates[i].ctrls[0], self.gates[i].ins[0]) for i in sites
        ]
        self.matrix_mode = (len(sites) + 2) * 4**n <= 4_000_000
        if force_matrix is not None:
            self.matrix_mode = force_matrix
        dim = 2**n
        if self.matrix_mode:
            mats = []
            running = np.eye(dim, dtype=complex)
            done = 0
            for site in sites:
                for g in self.gates[done : site + 1]:
                    running = self._gate_on_matrix(running, g)
                done = site + 1
                mats.append(running.copy())
            for g in self.gates[done:]:
                running = self._gate_on_matrix(running, g)
            self.mats = mats
            self.dags = [m.conj().T.copy() for m in mats]
            self.full = running
        else:
            prefixes = []
            vec = np.zeros(dim, dtype=complex)
            vec[0] = 1.0
            done = 0
            for site in sites:
                for g in self.gates[done : site + 1]:
                    vec = _apply_gate_dense(vec, n, g)
                done = site + 1
                prefixes.append(vec.copy())
            for g in self.gates[done:]:
                vec = _apply_gate_dense(vec, n, g)
            self.prefixes = prefixes
            self.full_vec = vec

    def _gate_on_matrix(self, mat: np.ndarray, g: Gate) -> np.ndarray:
        n = self.n
        shaped = mat.reshape((2,) * n + (-1,))
        if g.kind == "CNOT":
            out = shaped.copy()
            view = np.moveaxis(out, (n - g.ctrls[0], n - g.ins[0]), (0, 1))
            view[1] = view[1, ::-1].copy()
            return out.reshape(mat.shape)
        axis = n - g.ins[0]
        t = np.tensordot(_single_qubit_matrix(g), shaped, axes=([1], [axis]))
        return np.moveaxis(t, 0, axis).reshape(mat.shape)

    def final_vector(self, pattern: tuple[tuple[int, int], ...]) -> np.ndarray:
        if self.matrix_mode:
            if not pattern:
                return self.full[:, 0]
            first_site, first_pauli = pattern[0]
            v = self.mats[first_site][:, 0].copy()
            v = _apply_pauli_pair(v, self.n, self.wires[first_site], first_pauli)
            prev = first_site
            for site, pauli in pattern[1:]:
                v = self.mats[site] @ (self.dags[prev] @ v)
                v = _apply_pauli_pair(v, self.n, self.wires[site], pauli)
                prev = site
            return self.full @ (self.dags[prev] @ v)
        if not pattern:
            return self.full_vec
        first_site, first_pauli = pattern[0]
        inserts = dict(pattern)
        v = self.prefixes[first_site].copy()
        v = _apply_pauli_pair(v, self.n, self.wires[first_site], first_pauli)
        site_at = {gate_index: s for s, gate_index in enumerate(self.sites)}
        for gi in range(self.sites[first_site] + 1, len(self.gates)):
            v = _apply_gate_dense(v, self.n, self.gates[gi])
            s = site_at.get(gi)
            if s is not None and s in inserts and s != first_site:
                v = _apply_pauli_pair(v, self.n, self.wires[s], inserts[s])
        return v


def run_noisy(circuit: Circuit, noise: NoiseModel, shots: int,
              seed: int | None = None) -> dict[BitString, int]:
    """Measurement counts under per-CNOT Pauli noise, one trajectory a shot.

    Draw order is fixed: first the fire/which-Pauli tables for all shots and
    sites, then one multinomial per distinct insertion pattern in sorted
    pattern order.  ``seed`` falls back to the noise model's own seed.
    """
    if circuit.level != "cnot":
        raise ValueError("noisy runs need a cnot-level circuit")
    if shots < 1:
        raise ValueError("need at least one shot")
    n = circuit.n
    if n > 16:
        raise ValueError("noisy simulation limited to 16 qubits")
    rng = np.random.default_rng(noise.seed if seed is None else seed)
    sites = [i for i, g in enumerate(circuit.gates) if g.kind == "CNOT"]

    fire = rng.random((shots, len(sites))) < noise.p2
    pauli = rng.integers(0, 15, size=(shots, len(sites)))
    groups: dict[tuple[tuple[int, int], ...], int] = {}
    rows, cols = np.nonzero(fire)
    fired_paulis = pauli[rows, cols]
    i, total = 0, len(rows)
    while i < total:
        j = i
        while j < total and rows[j] == rows[i]:
            j += 1
        key = tuple(
            (int(cols[t]), int(fired_paulis[t])) for t in range(i, j)
        )
        groups[key] = groups.get(key, 0) + 1
        i = j
    clean = shots - len(np.unique(rows))
    if clean:
        groups[()] = clean

    engine = _NoisyEngine(circuit, sites)
    totals = np.zeros(2**n, dtype=np.int64)
    for key in sorted(groups):
        vec = engine.final_vector(key)
        p = np.abs(vec) ** 2
        totals += rng.multinomial(groups[key], p / p.sum())
    return {
        BitString.from_index(n, int(i)): int(c)
        for i, c in enumerate(totals)
        if c
    }
