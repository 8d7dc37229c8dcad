"""Wireless multiple-access channel, error-free multicast, and noise models.

When several agents transmit simultaneously through the WMAC, the receiver
observes the superposition of their unit-power signals plus one additive
noise sample: ``gamma = sum(signals) + N``.  Fading coefficients are fixed
at 1 and inputs/outputs are real.  The digital multicast link from the
coordinator to the agents is modeled as error free, so :func:`multicast` is
the identity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

NOISE_KINDS = ("zero", "gaussian")


def variance_from_db(power_db: float) -> float:
    """Noise power in dB relative to unit transmission power -> linear variance."""
    return 10.0 ** (power_db / 10.0)


def db_from_variance(variance: float) -> float:
    if variance < 0:
        raise ValueError("variance must be nonnegative")
    if variance == 0:
        return -math.inf
    return 10.0 * math.log10(variance)


@dataclass(frozen=True)
class NoiseModel:
    """Symmetric zero-mean additive noise at the WMAC receiver.

    Two kinds ship: ``zero`` (noiseless, draws nothing from the rng) and
    ``gaussian`` (one N(0, variance) sample per channel use).  Any object with
    a compatible ``sample(rng)`` method can stand in for custom symmetric
    distributions.
    """

    kind: str = "gaussian"
    variance: float = 1.0

    def __post_init__(self) -> None:
        if self.kind not in NOISE_KINDS:
            raise ValueError(f"noise kind must be one of {NOISE_KINDS}, got {self.kind!r}")
        if not (self.variance >= 0.0):
            raise ValueError(f"variance must be nonnegative, got {self.variance}")

    @classmethod
    def zero(cls) -> "NoiseModel":
        return cls(kind="zero", variance=0.0)

    @classmethod
    def gaussian(cls, variance: float) -> "NoiseModel":
        return cls(kind="gaussian", variance=variance)

    @classmethod
    def from_db(cls, power_db: float) -> "NoiseModel":
        """Gaussian noise at the given power in dB; ``-inf`` maps to the zero kind."""
        if power_db == -math.inf:
            return cls.zero()
        return cls.gaussian(variance_from_db(power_db))

    @property
    def power_db(self) -> float:
        return db_from_variance(self.variance)

    def sample(self, rng: np.random.Generator) -> float:
        """One noise draw; consumes exactly one variate for the gaussian kind."""
        if self.kind == "zero":
            return 0.0
        return math.sqrt(self.variance) * float(rng.standard_normal())


@dataclass(frozen=True)
class WmacFrame:
    """One realized WMAC use: the per-agent signal bits and the noise sample."""

    signals: tuple[int, ...]
    noise_sample: float

    @property
    def received(self) -> float:
        return float(sum(self.signals)) + self.noise_sample


def wmac(signals: Sequence[int], noise: NoiseModel, rng: np.random.Generator) -> float:
    """One WMAC use: superposition of unit-power signals plus a fresh noise draw.

    The received value depends on the signal list only through the count of
    ones (permutation invariance of superposition).
    """
    if len(signals) == 0:
        raise ValueError("wmac requires at least one transmitter slot")
    return float(sum(signals)) + noise.sample(rng)


def multicast(message):
    """Coordinator broadcast of an estimate delta; error free, so identity."""
    return message
