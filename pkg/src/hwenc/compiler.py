"""Lowering of logical gates to the {X, Ry, Rz, Rw, CNOT} gate set.

Multi-controlled rotations become Gray-code multiplexors costing exactly
2^(number of controls) CNOTs. Two-wire mixing gates choose between an
entangle-rotate-disentangle template ("top") and a parity-ladder plus
one central multi-controlled rotation ("bottom"), keeping whichever
needs fewer CNOTs. Generalized mixing gates always take the ladder
route. Conditional phase gates unroll into a stack of multi-controlled
Rz gates with geometrically shrinking angles.

Everything here preserves the logical unitary up to a global phase;
:func:`phase_distance` measures exactly that and backs the tests.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ir import (
    Circuit,
    Gate,
    cnot,
    rw,
    ry,
    rz,
    x_gate,
)

AXIS_TOL = 1e-12

_H_AXIS = (1.0 / np.sqrt(2.0), 0.0, 1.0 / np.sqrt(2.0))


def phase_distance(u: np.ndarray, v: np.ndarray) -> float:
    """Max entrywise deviation between u and v after aligning global phase.

    The phase is fitted on u's largest entry, so two matrices equal up
    to a unit scalar give (numerically) zero.
    """
    u = np.asarray(u)
    v = np.asarray(v)
    idx = np.unravel_index(int(np.argmax(np.abs(u))), u.shape)
    if abs(v[idx]) < 1e-300:
        return float(np.max(np.abs(u - v)))
    phase = u[idx] / v[idx]
    phase /= abs(phase)
    return float(np.max(np.abs(u - phase * v)))


def axis_angle(u: np.ndarray) -> tuple[float, tuple[float, float, float]]:
    """Write a 2x2 unitary as exp(i*lam * w.sigma), up to global phase.

    Returns (lam, w) with w a unit 3-vector. The identity (or a pure
    phase) comes back as (0, y-axis).
    """
    u = np.asarray(u, dtype=complex)
    det = np.linalg.det(u)
    su = u / np.sqrt(det)
    cos_l = (su[0, 0] + su[1, 1]).real / 2.0
    sx = (su[0, 1].imag + su[1, 0].imag) / 2.0
    sy = (su[0, 1].real - su[1, 0].real) / 2.0
    sz = (su[0, 0].imag - su[1, 1].imag) / 2.0
    sin_l = float(np.sqrt(sx * sx + sy * sy + sz * sz))
    if sin_l < AXIS_TOL:
        return (0.0 if cos_l > 0 else np.pi), (0.0, 1.0, 0.0)
    lam = float(np.arctan2(sin_l, cos_l))
    return lam, (sx / sin_l, sy / sin_l, sz / sin_l)


def _ctz(x: int) -> int:
    return (x & -x).bit_length() - 1


def _multiplexed(emit, tau: float, target: int, ctrls: tuple[int, ...]) -> list[Gate]:
    """Gray-code rotation stack firing angle tau on the all-ones pattern.

    ``emit(angle, target)`` builds one plain rotation. The stack costs
    exactly 2^len(ctrls) CNOTs and is the identity (not merely a phase)
    on every other control pattern.
    """
    ell = len(ctrls)
    size = 1 << ell
    gates: list[Gate] = []
    for j in range(size):
        gray = j ^ (j >> 1)
        sign = -1.0 if bin(gray).count("1") % 2 else 1.0
        gates.append(emit(sign * tau / size, target))
        wire = ell - 1 if j == size - 1 else _ctz(j + 1)
        gates.append(cnot(ctrls[wire], target))
    return gates


def _with_anti_conjugation(gate: Gate, core) -> list[Gate]:
    """Turn anti-controls into controls by sandwiching with X gates."""
    if not gate.anti_ctrls:
        return core(gate, gate.ctrls)
    flips = [x_gate(q) for q in gate.anti_ctrls]
    merged = tuple(sorted(gate.ctrls + gate.anti_ctrls))
    return flips + core(gate, merged) + list(reversed(flips))


def compile_mcry(gate: Gate) -> list[Gate]:
    """Lower a (multi-)controlled Ry, Rz, or Rw to the CNOT-level set."""
    if gate.kind not in ("Ry", "Rz", "Rw"):
        raise ValueError(f"compile_mcry cannot lower {gate.kind}")
    return _with_anti_conjugation(gate, _mcry_core)


def _mcry_core(gate: Gate, ctrls: tuple[int, ...]) -> list[Gate]:
    t = gate.target
    if not ctrls:
        if gate.kind == "Ry":
            return [ry(gate.theta, t)]
        if gate.kind == "Rz":
            return [rz(gate.phi, t)]
        return [rw(gate.theta, gate.axis, t)]

    # normalize to exp(i*lam * w.sigma)
    if gate.kind == "Ry":
        lam, axis = -gate.theta, (0.0, 1.0, 0.0)
    elif gate.kind == "Rz":
        lam, axis = -gate.phi, (0.0, 0.0, 1.0)
    else:
        lam, axis = gate.theta, gate.axis

    sin_l = np.sin(lam)
    if abs(sin_l) < AXIS_TOL:
        if np.cos(lam) > 0:
            return []
        # exp(i*pi*W) = -I regardless of axis; realize it on the y axis
        lam, axis = np.pi, (0.0, 1.0, 0.0)

    ax, ay, az = axis
    if abs(ax) < AXIS_TOL and abs(az) < AXIS_TOL:
        # exp(i*lam*y*Y) = Ry(-lam*y)
        return _multiplexed(lambda a, q: ry(a, q), -lam * np.sign(ay), t, ctrls)
    if abs(ax) < AXIS_TOL and abs(ay) < AXIS_TOL:
        return _multiplexed(lambda a, q: rz(a, q), -lam * np.sign(az), t, ctrls)

    # generic axis: diagonalize w.sigma = Q Z Qdag and rotate about Z
    w = np.array(
        [[az, ax - 1j * ay], [ax + 1j * ay, -az]], dtype=complex
    )
    vals, vecs = np.linalg.eigh(w)
    order = np.argsort(vals)[::-1]
    q_mat = vecs[:, order]
    lam_qd, ax_qd = axis_angle(q_mat.conj().T)
    lam_q, ax_q = axis_angle(q_mat)
    gates = [rw(lam_qd, ax_qd, t)] if lam_qd != 0.0 else []
    gates += _multiplexed(lambda a, q: rz(a, q), -lam, t, ctrls)
    if lam_q != 0.0:
        gates.append(rw(lam_q, ax_q, t))
    return gates


def compile_rbs(gate: Gate) -> list[Gate]:
    """Lower a two-wire mixing gate, taking the cheaper of two templates."""
    if gate.kind not in ("RBS", "ComplexRBS"):
        raise ValueError(f"compile_rbs cannot lower {gate.kind}")
    top = _rbs_top(gate)
    bottom = _mixing_bottom(gate)
    return top if _cnots(top) < _cnots(bottom) else bottom


def compile_grbs(gate: Gate) -> list[Gate]:
    """Lower a generalized mixing gate via the parity-ladder template."""
    if gate.kind != "GRBS":
        raise ValueError(f"compile_grbs cannot lower {gate.kind}")
    return _mixing_bottom(gate)


def _cnots(gates) -> int:
    return sum(1 for g in gates if g.kind == "CNOT")


def _rbs_top(gate: Gate) -> list[Gate]:
    """Entangle, rotate both wires by theta/2, disentangle.

    The two half-angle Ry stacks (and, with phases, a trailing pair of
    quarter-turn Rz stacks) carry all the controls; the H/CNOT frame is
    unconditioned and cancels to the identity when the rotations do not
    fire.
    """
    src = gate.ins[0]
    dst = gate.outs[0]
    half = gate.theta / 2.0

    def mc(g: Gate) -> list[Gate]:
        return compile_mcry(g)

    ctrls, antis = gate.ctrls, gate.anti_ctrls
    gates = [rw(np.pi / 2.0, _H_AXIS, src), cnot(src, dst)]
    gates += mc(ry(half, src, ctrls=ctrls, anti_ctrls=antis))
    gates += mc(ry(half, dst, ctrls=ctrls, anti_ctrls=antis))
    gates += [cnot(src, dst), rw(np.pi / 2.0, _H_AXIS, src)]
    if gate.kind == "ComplexRBS":
        quarter = gate.phi / 2.0
        gates += mc(rz(quarter, src, ctrls=ctrls, anti_ctrls=antis))
        gates += mc(rz(-quarter, dst, ctrls=ctrls, anti_ctrls=antis))
    return gates


def _mixing_bottom(gate: Gate) -> list[Gate]:
    """Parity ladder onto one wire pair, one central rotation, unladder.

    The ladder maps the two mixed basis patterns onto the values of a
    single wire; every spectator wire must read zero there, which the
    central rotation enforces with anti-controls, so the construction is
    exact on the full space.
    """
    ins = gate.ins
    outs = gate.outs
    theta = gate.theta
    phi = gate.phi if gate.phi is not None else 0.0
    c, s = np.cos(theta), np.sin(theta)
    ep, em = np.exp(1j * phi), np.exp(-1j * phi)

    ladder: list[Gate] = []
    if ins:
        src, dst = ins[0], outs[0]
        ladder += [cnot(src, q) for q in ins[1:]]
        ladder += [cnot(dst, q) for q in outs[1:]]
        ladder.append(cnot(src, dst))
        target = src
        extra_ctrl = (dst,)
        spectators = ins[1:] + outs[1:]
        # target reads 1 on the first pattern, 0 on the second
        central = np.array([[em * c, em * s], [-ep * s, ep * c]])
    else:
        target = outs[0]
        ladder += [cnot(target, q) for q in outs[1:]]
        extra_ctrl = ()
        spectators = outs[1:]
        # raising gate: target reads 0 on the first pattern
        central = np.array([[ep * c, -ep * s], [em * s, em * c]])

    lam, axis = axis_angle(central)
    rotation = rw(
        lam,
        axis,
        target,
        ctrls=tuple(sorted(gate.ctrls + extra_ctrl)),
        anti_ctrls=tuple(sorted(gate.anti_ctrls + spectators)),
    )
    return ladder + compile_mcry(rotation) + list(reversed(ladder))


def compile_anti_phase(gate: Gate) -> list[Gate]:
    """Lower a conditional phase to multi-controlled Rz gates.

    The gate multiplies exactly one bit pattern (target zero, controls
    one, anti-controls zero) by exp(i*phi). Splitting off one pattern
    bit at a time yields an Rz whose sign tracks the wanted bit plus the
    same problem at half the angle, down to a plain Rz and a discarded
    global phase: 2^(pattern size) - 2 CNOTs in total.
    """
    if gate.kind != "AntiPhase":
        raise ValueError(f"compile_anti_phase cannot lower {gate.kind}")
    pattern = {gate.target: 0}
    for q in gate.ctrls:
        pattern[q] = 1
    for q in gate.anti_ctrls:
        pattern[q] = 0
    gates: list[Gate] = []
    phi = gate.phi
    while pattern:
        q = min(pattern)
        want = pattern.pop(q)
        rest = sorted(pattern)
        gamma = phi / 2.0 if want else -phi / 2.0
        rot = rz(
            gamma,
            q,
            ctrls=tuple(k for k in rest if pattern[k] == 1),
            anti_ctrls=tuple(k for k in rest if pattern[k] == 0),
        )
        gates += compile_mcry(rot)
        phi /= 2.0
    return gates


@dataclass(frozen=True)
class LoweringResult:
    """A CNOT-level circuit plus per-source-gate CNOT accounting."""

    circuit: Circuit
    gate_cnots: tuple[int, ...]
    cnot_total: int


def lower_gate(gate: Gate) -> list[Gate]:
    """CNOT-level realization of one logical gate."""
    if gate.kind == "X":
        return [gate]
    if gate.kind == "CNOT":
        return [gate]
    if gate.kind in ("Ry", "Rz", "Rw"):
        return compile_mcry(gate)
    if gate.kind == "AntiPhase":
        return compile_anti_phase(gate)
    if gate.kind in ("RBS", "ComplexRBS"):
        return compile_rbs(gate)
    if gate.kind == "GRBS":
        return compile_grbs(gate)
    raise ValueError(f"no lowering for gate kind {gate.kind}")


def lower(circuit: Circuit) -> LoweringResult:
    """Lower every gate of a circuit and tally CNOTs per source gate."""
    lowered: list[Gate] = []
    per_gate: list[int] = []
    for gate in circuit.gates:
        block = lower_gate(gate)
        lowered.extend(block)
        per_gate.append(_cnots(block))
    return LoweringResult(
        circuit=Circuit(n=circuit.n, gates=tuple(lowered), level="cnot"),
        gate_cnots=tuple(per_gate),
        cnot_total=sum(per_gate),
    )
