import numpy as np
import pytest

from scalablemax.bitseq import AgentSequence


def make_agents(n, seed, prefix_len=0):
    """Agent population with iid uniform digit sequences, reproducible by seed."""
    ss = np.random.SeedSequence(seed)
    seeds = ss.generate_state(n, dtype=np.uint64)
    if prefix_len:
        rng = np.random.default_rng(ss.spawn(1)[0])
        prefixes = rng.integers(0, 2, size=(n, prefix_len))
    return [
        AgentSequence(
            prefix=tuple(int(b) for b in prefixes[i]) if prefix_len else (),
            tail_seed=int(seeds[i]),
        )
        for i in range(n)
    ]


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
