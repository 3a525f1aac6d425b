"""Fixed-length bitstrings and the constant-weight transposition walk.

Two index spaces coexist throughout the package and are easy to mix up:

* string positions ``p = 1..n`` count characters left to right;
* qubit labels ``q = n - p + 1`` count wires right to left, so the rightmost
  character is qubit 1 and ``int(bits, 2)`` puts qubit ``q`` at integer bit
  ``q - 1``.

The walk over weight-k strings operates on positions (its pivot rules talk
about "left" and "right" of the written word); everything gate-facing is
expressed in qubit labels.
"""

from dataclasses import dataclass
from math import comb
from typing import Iterator, NamedTuple


class SequenceExhausted(Exception):
    """Raised when the transposition walk has no next string."""


@dataclass(frozen=True)
class BitString:
    """A binary word of fixed length, written with qubit n leftmost."""

    bits: str

    def __post_init__(self):
        if not self.bits or any(c not in "01" for c in self.bits):
            raise ValueError(f"not a bitstring: {self.bits!r}")

    def __str__(self) -> str:
        return self.bits

    @property
    def n(self) -> int:
        return len(self.bits)

    @property
    def weight(self) -> int:
        return self.bits.count("1")

    @property
    def ones(self) -> frozenset[int]:
        """Qubit labels carrying a 1."""
        n = self.n
        return frozenset(n - i for i, c in enumerate(self.bits) if c == "1")

    @property
    def zeros(self) -> frozenset[int]:
        """Qubit labels carrying a 0."""
        n = self.n
        return frozenset(n - i for i, c in enumerate(self.bits) if c == "0")

    def qubit(self, q: int) -> int:
        """Bit value on qubit label q (1-based, rightmost character)."""
        if not 1 <= q <= self.n:
            raise ValueError(f"qubit label {q} out of range 1..{self.n}")
        return int(self.bits[self.n - q])

    def to_index(self) -> int:
        return int(self.bits, 2)

    @classmethod
    def from_index(cls, n: int, index: int) -> "BitString":
        if not 0 <= index < 2**n:
            raise ValueError(f"index {index} out of range for {n} qubits")
        return cls(format(index, f"0{n}b"))

    @classmethod
    def initial(cls, n: int, k: int) -> "BitString":
        """The canonical weight-k start: k ones followed by n-k zeros."""
        if not 0 <= k <= n:
            raise ValueError(f"weight {k} out of range for {n} qubits")
        return cls("1" * k + "0" * (n - k))

    def complement(self) -> "BitString":
        return BitString("".join("1" if c == "0" else "0" for c in self.bits))

    def differing_qubits(self, other: "BitString") -> frozenset[int]:
        """Qubit labels where the two strings disagree."""
        if other.n != self.n:
            raise ValueError("length mismatch")
        n = self.n
        return frozenset(
            n - i for i, (a, b) in enumerate(zip(self.bits, other.bits)) if a != b
        )


@dataclass(frozen=True)
class EhrlichState:
    """A bitstring plus the marked positions that drive the walk.

    ``marked`` holds string positions (1-based, left to right), not qubit
    labels.
    """

    string: BitString
    marked: frozenset[int]

    @classmethod
    def start(cls, n: int, k: int) -> "EhrlichState":
        """Weight-k start ``1^k 0^(n-k)`` with the ones marked."""
        return cls(BitString.initial(n, k), frozenset(range(1, k + 1)))

    @classmethod
    def start_reversed(cls, n: int, k: int) -> "EhrlichState":
        """Weight-k start ``0^(n-k) 1^k`` with the zeros marked."""
        if not 0 <= k <= n:
            raise ValueError(f"weight {k} out of range for {n} qubits")
        return cls(BitString("0" * (n - k) + "1" * k), frozenset(range(1, n - k + 1)))


def next_state(state: EhrlichState) -> EhrlichState:
    """One step of the constant-weight walk.

    The pivot is the rightmost marked position m.  If its bit is 0 it swaps
    with the nearest 1 to its right; if 1, with the farthest 0 reachable to
    its right without passing another 1.  The pivot is then unmarked and all
    positions strictly between the pivot and the final run of equal bits are
    marked.  Raises SequenceExhausted when no step is possible.
    """
    if not state.marked:
        raise SequenceExhausted("sequence exhausted: no marked positions left")
    bits = state.string.bits
    n = len(bits)
    m = max(state.marked)
    if bits[m - 1] == "0":
        partner = next((p for p in range(m + 1, n + 1) if bits[p - 1] == "1"), None)
    else:
        partner = None
        for p in range(m + 1, n + 1):
            if bits[p - 1] == "1":
                break
            partner = p
    if partner is None:
        raise SequenceExhausted("sequence exhausted: pivot has no swap partner")

    chars = list(bits)
    chars[m - 1], chars[partner - 1] = chars[partner - 1], chars[m - 1]
    swapped = "".join(chars)

    # start of the final maximal run of equal characters
    j = n
    while j > 1 and swapped[j - 2] == swapped[j - 1]:
        j -= 1

    marked = (state.marked - {m}) | frozenset(range(m + 1, j))
    return EhrlichState(BitString(swapped), marked)


def walk_states(start: EhrlichState, count: int) -> Iterator[EhrlichState]:
    """Yield ``count`` states of the walk, the given start included."""
    state = start
    for step in range(count):
        if step:
            state = next_state(state)
        yield state


def ehrlich_sequence(n: int, k: int, *, reverse: bool = False) -> list[BitString]:
    """All C(n, k) weight-k strings in walk order.

    Consecutive strings differ by exactly one transposition.  The forward
    order starts at ``1^k 0^(n-k)``; ``reverse=True`` starts at
    ``0^(n-k) 1^k`` with the zeros marked instead.
    """
    start = EhrlichState.start_reversed(n, k) if reverse else EhrlichState.start(n, k)
    return [s.string for s in walk_states(start, comb(n, k))]


class GateParams(NamedTuple):
    """Wire assignment for one mixing gate, all in qubit labels."""

    ins: frozenset[int]
    outs: frozenset[int]
    ctrls: frozenset[int]
    untouched: frozenset[int]


def gate_params(
    b: BitString, b_next: BitString, untouched: frozenset[int]
) -> GateParams:
    """Wires of the gate taking weight from ``b`` onto ``b_next``.

    Ones shared by both strings are controls; ones only in ``b`` are inputs,
    ones only in ``b_next`` are outputs.  ``untouched`` tracks qubits still
    guaranteed to sit in their initial state: controls on them are redundant
    and dropped.  The shrink of ``untouched`` happens before the control
    filter, so a qubit first used as a wire here no longer shields anything.
    """
    if b.n != b_next.n:
        raise ValueError("length mismatch")
    ones, ones_next = b.ones, b_next.ones
    ctrls = ones & ones_next
    ins = ones - ctrls
    outs = ones_next - ctrls
    untouched = untouched - (ins | outs)
    ctrls = ctrls - untouched
    return GateParams(ins, outs, ctrls, untouched)
