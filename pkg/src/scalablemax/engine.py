"""Vectorized per-run simulator used by the Monte Carlo harness.

Semantically identical to the object-level state machines in
:mod:`scalablemax.protocol` (the equivalence tests pin this), but organized
around incremental set bookkeeping instead of per-agent objects: for the
current estimate S it tracks the count of agents strictly above S and the
index array of agents still compatible with S, from which all three WMAC
occupancy counts follow.  Appending a digit splits the compatible set;
removing one undoes the split via an explicit stack.

Noise draws follow the exact draw order of the object path (three standard
normal variates per iteration, pre-drawn in blocks), so a run is bit-identical
between the two simulators given the same seeds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .bitseq import ComparisonCapError, tail_words, words_to_bits

_NOISE_BLOCK = 256
_GROW_WORDS = 2  # digit matrix grows in blocks of 128 columns
_MAX_D_WORDS = 64  # matches the 4096-digit comparison cap


@dataclass(frozen=True)
class FastRunResult:
    """Light-weight run outcome mirroring protocol.RunResult.

    ``condition_kind``/``condition_digits`` encode the termination condition;
    both are None on timeout.  ``realized_d`` and ``survivors`` are filled
    only when requested.
    """

    success: bool
    survivor_count: int
    iterations: int
    timeout: bool
    condition_kind: Optional[str]
    condition_digits: Optional[tuple]
    realized_d: Optional[int] = None
    max_agent: Optional[int] = None
    survivors: Optional[np.ndarray] = None


class _BitPool:
    """Lazily materialized (n, L) digit matrix: explicit prefix + seeded tails."""

    def __init__(self, seeds: np.ndarray, prefix_bits: Optional[np.ndarray]):
        self.seeds = np.asarray(seeds, dtype=np.uint64)
        self.n = len(self.seeds)
        if prefix_bits is not None and prefix_bits.size:
            self.bits = np.ascontiguousarray(prefix_bits, dtype=np.uint8)
        else:
            self.bits = np.empty((self.n, 0), dtype=np.uint8)
        self.tail_words_done = 0

    def ensure(self, column: int) -> None:
        while self.bits.shape[1] <= column:
            fresh = words_to_bits(
                tail_words(self.seeds, self.tail_words_done, _GROW_WORDS)
            )
            self.tail_words_done += _GROW_WORDS
            self.bits = np.hstack([self.bits, fresh])


def _clz64(v: np.ndarray) -> np.ndarray:
    """Leading-zero count of nonzero uint64 values, exact (no float log)."""
    lz = np.zeros(v.shape, dtype=np.int64)
    x = v.copy()
    for b in (32, 16, 8, 4, 2, 1):
        low = x < (np.uint64(1) << np.uint64(64 - b))
        lz[low] += b
        x[low] <<= np.uint64(b)
    return lz


def _pack_words(pool: _BitPool, words: int) -> np.ndarray:
    pool.ensure(64 * words - 1)
    packed = np.packbits(pool.bits[:, : 64 * words], axis=1)
    return np.ascontiguousarray(packed).view(">u8").astype(np.uint64)


def description_length_fast(pool: _BitPool) -> tuple[int, int]:
    """Realized d plus the index of the maximal agent.

    Sorts the packed digit words lexicographically; the longest pairwise
    common prefix is attained by an adjacent pair, located exactly via a
    vectorized leading-zero count.
    """
    if pool.n == 1:
        return 0, 0
    words = 2
    while True:
        packed = _pack_words(pool, words)
        order = np.lexsort(tuple(packed[:, w] for w in reversed(range(words))))
        ranked = packed[order]
        xor = ranked[1:] ^ ranked[:-1]
        nonzero = xor != 0
        if nonzero.any(axis=1).all():
            break
        if words >= _MAX_D_WORDS:
            raise ComparisonCapError(
                "two agent sequences agree beyond the comparison cap"
            )
        words = min(words * 2, _MAX_D_WORDS)
    first_word = nonzero.argmax(axis=1)
    rows = np.arange(len(xor))
    offsets = _clz64(xor[rows, first_word])
    d = int((first_word * 64 + offsets).max()) + 1
    return d, int(order[-1])


def _classify(pool: _BitPool, estimate: Sequence[int]) -> tuple[np.ndarray, np.ndarray]:
    """Initial split against a warm-start estimate: (above indices, compatible indices)."""
    k = len(estimate)
    pool.ensure(k - 1)
    sbits = np.asarray(estimate, dtype=np.uint8)
    diff = pool.bits[:, :k] != sbits[None, :]
    has_diff = diff.any(axis=1)
    first = diff.argmax(axis=1)
    rows = np.arange(pool.n)
    above_mask = has_diff & (pool.bits[rows, first] == 1)
    return rows[above_mask], rows[~has_diff]


def simulate_run(
    agent_seeds: np.ndarray,
    m: int,
    noise_variance: float,
    noise_rng: Optional[np.random.Generator],
    max_iterations: int,
    tau: Optional[int] = None,
    prefix_bits: Optional[np.ndarray] = None,
    initial_estimate: Sequence[int] = (),
    compute_d: bool = False,
    collect_survivors: bool = False,
) -> FastRunResult:
    """One full ScalableMax / ScalableMax-EC run over seeded agent inputs."""
    if m <= 0 or m % 2 != 0:
        raise ValueError(f"m must be an even positive integer, got {m}")
    if tau is not None and tau < 1:
        raise ValueError(f"tau must be a positive integer, got {tau}")
    if max_iterations < 1:
        raise ValueError("max_iterations must be at least 1")
    if noise_variance > 0.0 and noise_rng is None:
        raise ValueError("a noise rng is required when noise_variance > 0")
    pool = _BitPool(agent_seeds, prefix_bits)
    n = pool.n
    if n == 0:
        raise ValueError("at least one agent is required")

    realized_d = None
    max_agent = None
    if compute_d:
        realized_d, max_agent = description_length_fast(pool)

    estimate = list(initial_estimate)
    if estimate:
        above_idx, compat = _classify(pool, estimate)
    else:
        above_idx, compat = np.empty(0, dtype=np.int64), np.arange(n, dtype=np.int64)
    above = len(above_idx)
    above_chunks = [above_idx] if collect_survivors else None
    undo: list[tuple[int, np.ndarray]] = []
    counters: dict = {}

    sigma = math.sqrt(noise_variance) if noise_variance > 0.0 else 0.0
    noise_buf = np.empty(0)
    noise_pos = 0

    lo = m / 4.0
    hi = 3.0 * m / 4.0

    col = None  # next-digit bits of the compatible agents, cached while S holds
    ones = 0

    def refresh_column() -> None:
        nonlocal col, ones
        k = len(estimate)
        pool.ensure(k)
        col = pool.bits[compat, k]
        ones = int(col.sum())

    def survivors_for(which: str) -> Optional[np.ndarray]:
        if not collect_survivors:
            return None
        if which == "gt":
            parts = above_chunks
        elif which == "geq":
            parts = above_chunks + [compat]
        else:  # "raise": geq on S with 1 appended
            parts = above_chunks + [compat[col == 1]]
        return np.concatenate(parts) if parts else np.empty(0, dtype=np.int64)

    refresh_column()
    for t in range(max_iterations):
        if sigma > 0.0:
            if noise_pos + 3 > len(noise_buf):
                noise_buf = noise_rng.standard_normal(3 * _NOISE_BLOCK)
                noise_pos = 0
            g1 = above + sigma * float(noise_buf[noise_pos])
            g2 = above + len(compat) + sigma * float(noise_buf[noise_pos + 1])
            g3 = above + ones + sigma * float(noise_buf[noise_pos + 2])
            noise_pos += 3
        else:
            g1 = float(above)
            g2 = float(above + len(compat))
            g3 = float(above + ones)

        action = None
        if tau is None:
            if g1 > lo:
                return FastRunResult(
                    1 <= above <= m, above, t + 1, False, ">", tuple(estimate),
                    realized_d, max_agent, survivors_for("gt"),
                )
            if g2 < hi:
                count = above + len(compat)
                return FastRunResult(
                    1 <= count <= m, count, t + 1, False, ">=", tuple(estimate),
                    realized_d, max_agent, survivors_for("geq"),
                )
            if g3 < lo:
                action = ("append", 0)
            elif g3 < hi:
                count = above + ones
                return FastRunResult(
                    1 <= count <= m, count, t + 1, False, ">=",
                    tuple(estimate) + (1,), realized_d, max_agent,
                    survivors_for("raise"),
                )
            else:
                action = ("append", 1)
        else:
            if g1 > hi:
                action = ("remove",)
            elif g1 > lo:
                action = ("count", ">", ">", tuple(estimate))
            elif g2 < lo:
                action = ("remove",)
            elif g2 < hi:
                action = ("count", ">=", ">=", tuple(estimate))
            elif g3 < lo:
                action = ("append", 0)
            elif g3 < hi:
                action = ("count", "append", ">=", tuple(estimate) + (1,))
            else:
                action = ("append", 1)

        kind = action[0]
        if kind == "count":
            _, tag, cond_kind, cond_digits = action
            key = (tuple(estimate), tag)
            value = counters.get(key, 0) + 1
            counters[key] = value
            if value >= tau:
                if cond_kind == ">":
                    count = above
                    surv = survivors_for("gt")
                elif cond_digits == tuple(estimate):
                    count = above + len(compat)
                    surv = survivors_for("geq")
                else:
                    count = above + ones
                    surv = survivors_for("raise")
                return FastRunResult(
                    1 <= count <= m, count, t + 1, False, cond_kind, cond_digits,
                    realized_d, max_agent, surv,
                )
            # below threshold: estimate unchanged, cached column stays valid
        elif kind == "append":
            bit = action[1]
            if bit == 0:
                movers = compat[col == 1]
                above += len(movers)
                compat = compat[col == 0]
                if collect_survivors:
                    above_chunks.append(movers)
            else:
                movers = compat[col == 0]
                compat = compat[col == 1]
            undo.append((bit, movers))
            estimate.append(bit)
            refresh_column()
        else:  # remove
            if estimate:
                if undo:
                    bit, movers = undo.pop()
                    if bit == 0:
                        above -= len(movers)
                        if collect_survivors:
                            above_chunks.pop()
                    compat = np.concatenate([compat, movers])
                    estimate.pop()
                else:
                    # removal below the warm-start estimate: reclassify
                    estimate.pop()
                    above_idx, compat = (
                        _classify(pool, estimate)
                        if estimate
                        else (np.empty(0, dtype=np.int64), np.arange(n, dtype=np.int64))
                    )
                    above = len(above_idx)
                    if collect_survivors:
                        above_chunks = [above_idx]
                refresh_column()

    return FastRunResult(
        False, 0, max_iterations, True, None, None, realized_d, max_agent, None
    )
