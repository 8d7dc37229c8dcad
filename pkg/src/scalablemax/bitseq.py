"""Binary-sequence values and the lexicographic relations all protocol decisions build on.

Agent inputs are conceptually infinite binary sequences; here they are realized
as an explicit finite prefix plus a deterministic uniform tail driven by a
64-bit seed.  The tail comes from a counter-based mixer (splitmix64), so any
digit can be produced on demand, in any order, and the same digits can be
materialized in bulk for whole agent populations (see :func:`tail_words`).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

#: Digits examined before two sequences are declared an (almost surely
#: impossible) tie instead of looping forever.
COMPARISON_CAP = 4096

_MASK64 = 0xFFFFFFFFFFFFFFFF
_GOLDEN = 0x9E3779B97F4A7C15
_MIX_A = 0xBF58476D1CE4E5B9
_MIX_B = 0x94D049BB133111EB


class ComparisonCapError(RuntimeError):
    """Two sequences stayed indistinguishable beyond the comparison cap."""


def _mix64(z: int) -> int:
    z &= _MASK64
    z = ((z ^ (z >> 30)) * _MIX_A) & _MASK64
    z = ((z ^ (z >> 27)) * _MIX_B) & _MASK64
    return z ^ (z >> 31)


def tail_word(seed: int, index: int) -> int:
    """64 uniform tail bits (word ``index``) for a given tail seed."""
    return _mix64((seed + (index + 1) * _GOLDEN) & _MASK64)


def tail_words(seeds: np.ndarray, start: int, count: int) -> np.ndarray:
    """Vectorized :func:`tail_word` over an array of seeds.

    Returns a ``(len(seeds), count)`` uint64 array holding words
    ``start .. start+count-1`` of every seed's tail stream.  Bit ``i`` of a
    tail is bit ``63 - (i % 64)`` of word ``i // 64`` (most significant
    first), so a word compares like the 64 digits it carries.
    """
    seeds = np.asarray(seeds, dtype=np.uint64)
    idx = np.arange(start + 1, start + count + 1, dtype=np.uint64)
    z = seeds[:, None] + idx[None, :] * np.uint64(_GOLDEN)
    z = (z ^ (z >> np.uint64(30))) * np.uint64(_MIX_A)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(_MIX_B)
    return z ^ (z >> np.uint64(31))


def words_to_bits(words: np.ndarray) -> np.ndarray:
    """Unpack a ``(n, w)`` uint64 word array into a ``(n, 64*w)`` bit array."""
    n = words.shape[0]
    as_bytes = words.astype(">u8").reshape(n, -1).view(np.uint8)
    return np.unpackbits(as_bytes, axis=1)


@dataclass(frozen=True)
class Estimate:
    """A finite binary sequence, the coordinator's output estimate.

    Immutable; ``append`` and ``drop_last`` return new values.  The empty
    estimate plays the role of the starting point of every run.
    """

    digits: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if any(d not in (0, 1) for d in self.digits):
            raise ValueError(f"estimate digits must be bits, got {self.digits}")

    @classmethod
    def empty(cls) -> "Estimate":
        return cls(())

    @classmethod
    def from_bits(cls, bits: str | Iterable[int]) -> "Estimate":
        if isinstance(bits, str):
            return cls(tuple(int(c) for c in bits))
        return cls(tuple(int(b) for b in bits))

    def append(self, bit: int) -> "Estimate":
        return Estimate(self.digits + (bit,))

    def drop_last(self) -> "Estimate":
        """Remove the last digit; on the empty estimate this is a no-op."""
        return Estimate(self.digits[:-1]) if self.digits else self

    def __len__(self) -> int:
        return len(self.digits)

    def __str__(self) -> str:
        return "".join(str(d) for d in self.digits) if self.digits else "<empty>"

    @property
    def bits(self) -> str:
        return "".join(str(d) for d in self.digits)


@dataclass
class AgentSequence:
    """One agent's input: an explicit bit prefix plus an infinite uniform tail.

    ``digit(k)`` is defined for every k >= 0 and always returns the same
    value; tail digits are materialized lazily in 64-bit blocks.  Instances
    memoize materialized digits, so concurrent simulation workers should each
    own private copies (or rely on materialization being idempotent).
    """

    prefix: tuple[int, ...] = ()
    tail_seed: int = 0
    _bits: list[int] = field(default_factory=list, repr=False, compare=False)

    def __post_init__(self) -> None:
        self.prefix = tuple(int(b) for b in self.prefix)
        if any(b not in (0, 1) for b in self.prefix):
            raise ValueError("prefix digits must be bits")
        self._bits = list(self.prefix)

    def _ensure(self, length: int) -> None:
        while len(self._bits) < length:
            word = tail_word(self.tail_seed, (len(self._bits) - len(self.prefix)) // 64)
            for i in range(63, -1, -1):
                self._bits.append((word >> i) & 1)

    def digit(self, k: int) -> int:
        """Digit at index ``k`` (0-based); deterministic across calls."""
        if k < 0:
            raise IndexError("digit index must be nonnegative")
        self._ensure(k + 1)
        return self._bits[k]

    def digits_upto(self, length: int) -> list[int]:
        """The first ``length`` digits as a list (materializing as needed)."""
        self._ensure(length)
        return self._bits[:length]


def digit(x: AgentSequence, k: int) -> int:
    return x.digit(k)


def relation(x: AgentSequence, s: Estimate) -> int:
    """Trichotomy of ``x`` against a finite estimate.

    Returns +1 if ``x`` is lexicographically greater than ``s``, 0 if the
    first ``len(s)`` digits of ``x`` equal ``s`` (compatibility), and -1 if
    ``x`` falls below ``s``.  For the empty estimate every sequence is
    compatible.
    """
    got = x.digits_upto(len(s))
    for xd, sd in zip(got, s.digits):
        if xd != sd:
            return 1 if xd > sd else -1
    return 0


def is_gt(x: AgentSequence, s: Estimate) -> bool:
    """``x`` strictly lexicographically greater than ``s``."""
    return relation(x, s) > 0


def is_geq(x: AgentSequence, s: Estimate) -> bool:
    """``x`` greater than or compatible with ``s``."""
    return relation(x, s) >= 0


def first_difference(a: AgentSequence, b: AgentSequence, cap: int = COMPARISON_CAP) -> int:
    """Index of the first digit where two sequences differ.

    Raises :class:`ComparisonCapError` if they agree on the first ``cap``
    digits, which signals a pathological tie (distinct uniform tails differ
    almost surely).
    """
    block = 64
    for start in range(0, cap, block):
        stop = min(start + block, cap)
        da = a.digits_upto(stop)
        db = b.digits_upto(stop)
        for k in range(start, stop):
            if da[k] != db[k]:
                return k
    raise ComparisonCapError(
        f"sequences agree on the first {cap} digits; inputs are expected to be pairwise distinct"
    )


def true_max_index(agents: Sequence[AgentSequence], cap: int = COMPARISON_CAP) -> int:
    """Index of the lexicographically greatest agent sequence."""
    if not agents:
        raise ValueError("agents must be nonempty")
    best = 0
    for k in range(1, len(agents)):
        diff = first_difference(agents[best], agents[k], cap=cap)
        if agents[k].digit(diff) > agents[best].digit(diff):
            best = k
    return best
