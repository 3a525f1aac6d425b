"""Error mitigation by regression on near-Clifford proxy circuits.

The flow: swap rotation gates of the compiled circuit for random
single-qubit Cliffords to get proxy circuits that a classical simulator
can evaluate exactly, run each proxy both exactly and under the noise
model, fit one line per tracked basis state through the resulting
(noisy, noiseless) point cloud, and apply that line to the noisy
measurement of the original circuit.  Bootstrap resampling of the raw
counts provides uncertainty bands for reports.
"""

import dataclasses
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from hwenc.bitstrings import BitString
from hwenc.compiler import axis_angle
from hwenc.ir import Circuit, rw
from hwenc.simulator import NoiseModel, dense_run, run_noisy

ROTATION_KINDS = frozenset({"Ry", "Rz", "Rw"})

_H = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)
_S = np.array([[1, 0], [0, 1j]], dtype=complex)


def _phase_canonical(u: np.ndarray) -> np.ndarray:
    flat = u.reshape(-1)
    lead = flat[int(np.flatnonzero(np.abs(flat) > 1e-9)[0])]
    return u * (abs(lead) / lead)


def _group_key(u: np.ndarray) -> tuple:
    # +0.0 folds -0.0 so the key is stable under sign-of-zero noise
    return tuple((np.round(u.reshape(-1), 9) + 0.0).view(float))


@lru_cache(maxsize=1)
def single_qubit_cliffords() -> tuple[np.ndarray, ...]:
    """All 24 single-qubit Cliffords up to phase, in a fixed order.

    Generated by closing {I, H, S} under left multiplication by H and S,
    with each product phase-normalized so the first nonzero entry is real
    positive, then sorted by entries for a deterministic ordering.
    """
    found = {}
    frontier = [_phase_canonical(m) for m in (np.eye(2, dtype=complex), _H, _S)]
    for m in frontier:
        found[_group_key(m)] = m
    while frontier:
        step = []
        for m in frontier:
            for g in (_H, _S):
                v = _phase_canonical(g @ m)
                k = _group_key(v)
                if k not in found:
                    found[k] = v
                    step.append(v)
        frontier = step
    mats = tuple(found[k] for k in sorted(found))
    assert len(mats) == 24
    for m in mats:
        m.setflags(write=False)
    return mats


@dataclass(frozen=True)
class CdrConfig:
    """Ensemble shape for the regression: rates, draws per rate, shots."""

    replacement_rates: tuple[float, ...] = (0.79, 0.83, 0.90, 0.95, 1.00)
    circuits_per_rate: int = 50
    shots: int = 10_000
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(
            self, "replacement_rates", tuple(self.replacement_rates)
        )
        for r in self.replacement_rates:
            if not 0.0 < r <= 1.0:
                raise ValueError(f"replacement rate {r} outside (0, 1]")
        if self.circuits_per_rate < 1:
            raise ValueError("need at least one circuit per rate")
        if self.shots < 1:
            raise ValueError("need at least one shot")


@dataclass(frozen=True)
class RegressionFit:
    """One least-squares line from noisy to noiseless values."""

    slope: float
    intercept: float
    training_pairs: tuple[tuple[float, float], ...]
    degenerate: bool = False

    def apply(self, value: float) -> float:
        return self.slope * value + self.intercept


@dataclass(frozen=True)
class MitigationReport:
    """Per-observable outcome of one mitigated circuit run."""

    observables: tuple
    target: dict
    raw: dict
    mitigated: dict
    fits: dict
    bands: dict | None = None


def _obs_index(obs) -> int:
    if isinstance(obs, BitString):
        return obs.to_index()
    if isinstance(obs, str):
        return BitString(obs).to_index()
    return int(obs)


def rotation_positions(circuit: Circuit) -> list[int]:
    """Gate indices eligible for Clifford replacement."""
    positions = []
    for i, g in enumerate(circuit.gates):
        if g.kind in ROTATION_KINDS:
            if g.ctrls or g.anti_ctrls:
                raise ValueError(
                    f"gate {i} is a controlled rotation; lower the circuit first"
                )
            positions.append(i)
    return positions


def near_clifford_ensemble(circuit: Circuit, config: CdrConfig) -> list[Circuit]:
    """Proxy circuits with rotations swapped for random Cliffords.

    For each rate r the ensemble holds circuits_per_rate draws; each draw
    picks ceil(r * #rotations) rotation positions uniformly without
    replacement and puts an independent uniform Clifford (as a rotation
    about its own axis) on each chosen wire.  Deterministic given the
    config seed.
    """
    positions = rotation_positions(circuit)
    if not positions:
        raise ValueError("circuit has no rotation gates to replace")
    pool = single_qubit_cliffords()
    rng = np.random.default_rng(config.seed)
    ensemble = []
    for rate in config.replacement_rates:
        count = math.ceil(rate * len(positions))
        for _ in range(config.circuits_per_rate):
            chosen = rng.choice(len(positions), size=count, replace=False)
            gates = list(circuit.gates)
            for c in chosen:
                pos = positions[int(c)]
                lam, axis = axis_angle(pool[int(rng.integers(24))])
                gates[pos] = rw(lam, axis, circuit.gates[pos].target)
            ensemble.append(Circuit(circuit.n, gates, level=circuit.level))
    return ensemble


def build_training_set(ensemble, noise: NoiseModel, shots: int,
                       observables) -> dict:
    """(noisy, noiseless) probability pairs per tracked basis state.

    Noiseless values come from exact simulation, noisy ones from sampled
    trajectory runs with per-circuit seeds drawn from the noise model's
    seed.  Returns {observable: array of shape (len(ensemble), 2)} with
    columns (noisy, noiseless).
    """
    keys = list(observables)
    indices = [_obs_index(k) for k in keys]
    rng = np.random.default_rng(noise.seed)
    pairs = {k: np.zeros((len(ensemble), 2)) for k in keys}
    for j, circ in enumerate(ensemble):
        exact = np.abs(dense_run(circ)) ** 2
        counts = run_noisy(circ, noise, shots, seed=int(rng.integers(2**63)))
        freq = {b.to_index(): c / shots for b, c in counts.items()}
        for k, idx in zip(keys, indices):
            pairs[k][j, 0] = freq.get(idx, 0.0)
            pairs[k][j, 1] = exact[idx]
    return pairs


def fit_pairs(pairs) -> RegressionFit:
    """Ordinary least squares through (noisy, noiseless) points.

    Zero variance in the noisy column cannot pin a slope; that case falls
    back to the identity line and is flagged.
    """
    arr = np.asarray(pairs, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2 or arr.shape[0] < 2:
        raise ValueError("need at least two (noisy, noiseless) pairs")
    rows = tuple((float(a), float(b)) for a, b in arr)
    if np.ptp(arr[:, 0]) < 1e-12:
        return RegressionFit(1.0, 0.0, rows, degenerate=True)
    slope, intercept = np.polyfit(arr[:, 0], arr[:, 1], 1)
    return RegressionFit(float(slope), float(intercept), rows)


def fit_and_mitigate(training: dict, raw: dict) -> tuple[dict, dict]:
    """Per-observable lines applied to the raw noisy values.

    Each mitigated value is clamped to [0, 1]; the clamped vector is then
    renormalized to unit total.  Returns (mitigated, fits) dicts keyed
    like ``raw``.
    """
    fits = {k: fit_pairs(p) for k, p in training.items()}
    clamped = {}
    for k, value in raw.items():
        clamped[k] = min(1.0, max(0.0, fits[k].apply(value)))
    total = sum(clamped.values())
    if total <= 0.0:
        raise ArithmeticError("every mitigated probability clamped to zero")
    return {k: v / total for k, v in clamped.items()}, fits


def bootstrap_bands(counts: dict, resamples: int, seed: int,
                    observables=None) -> dict:
    """5th/95th percentile bands from resampled measurement counts.

    Resamples the empirical distribution with replacement ``resamples``
    times at the original shot total.  Mass on outcomes outside the
    tracked observables is kept in a spill bucket so the marginals stay
    faithful.
    """
    if resamples < 2:
        raise ValueError("need at least two bootstrap resamples")
    shots = sum(counts.values())
    if shots < 1:
        raise ValueError("need at least one shot")
    keys = (sorted(counts, key=str) if observables is None
            else list(observables))
    tracked = {_obs_index(k): i for i, k in enumerate(keys)}
    p = np.zeros(len(keys) + 1)
    for b, c in counts.items():
        i = tracked.get(_obs_index(b))
        if i is None:
            p[-1] += c
        else:
            p[i] += c
    rng = np.random.default_rng(seed)
    draws = rng.multinomial(shots, p / shots, size=resamples) / shots
    lo = np.percentile(draws, 5, axis=0)
    hi = np.percentile(draws, 95, axis=0)
    return {k: (float(lo[i]), float(hi[i])) for i, k in enumerate(keys)}


def mitigate_circuit(circuit: Circuit, observables, noise: NoiseModel,
                     config: CdrConfig, bootstrap: int = 0) -> MitigationReport:
    """Full regression-mitigation pass over one compiled circuit.

    Measures the circuit under noise, trains on a fresh proxy ensemble,
    and reports target/raw/mitigated probabilities per observable, with
    optional bootstrap bands on the raw frequencies.  All randomness
    derives from config.seed.
    """
    keys = list(observables)
    indices = [_obs_index(k) for k in keys]
    s_raw, s_ens, s_noise, s_boot = (
        int(s) for s in np.random.SeedSequence(config.seed).generate_state(4)
    )
    exact = np.abs(dense_run(circuit)) ** 2
    target = {k: float(exact[i]) for k, i in zip(keys, indices)}

    counts = run_noisy(circuit, noise, config.shots, seed=s_raw)
    freq = {b.to_index(): c / config.shots for b, c in counts.items()}
    raw = {k: freq.get(i, 0.0) for k, i in zip(keys, indices)}

    ensemble = near_clifford_ensemble(
        circuit, dataclasses.replace(config, seed=s_ens)
    )
    training = build_training_set(
        ensemble, dataclasses.replace(noise, seed=s_noise), config.shots, keys
    )
    mitigated, fits = fit_and_mitigate(training, raw)
    bands = (bootstrap_bands(counts, bootstrap, s_boot, keys)
             if bootstrap else None)
    return MitigationReport(
        observables=tuple(keys), target=target, raw=raw,
        mitigated=mitigated, fits=fits, bands=bands,
    )


def mean_relative_error(values: dict, target: dict) -> float:
    """Mean of |value - target| / target over observables with mass."""
    errs = [
        abs(values[k] - t) / t for k, t in target.items() if t > 0.0
    ]
    if not errs:
        raise ValueError("no observable carries target mass")
    return float(np.mean(errs))
