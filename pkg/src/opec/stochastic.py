"""Finite-support distributions and seeded sampling streams."""

from __future__ import annotations

import math
import zlib
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .errors import InvalidDistributionError

PROB_TOL = 1e-9

ARRIVALS_STREAM = "arrivals"


def link_stream(i: int) -> str:
    """Stream id for the state process of link ``i`` (1-based)."""
    return f"link-{i}"


@dataclass(frozen=True)
class DiscreteDistribution:
    """IID finite-support distribution over non-negative integers."""

    support: tuple[int, ...]
    probs: tuple[float, ...]
    _cdf: np.ndarray = field(init=False, repr=False, compare=False)
    _values: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        support = tuple(self.support)
        probs = tuple(self.probs)
        if not support:
            raise InvalidDistributionError("distribution support is empty")
        if len(support) != len(probs):
            raise InvalidDistributionError(
                f"support has {len(support)} values but {len(probs)} probabilities given"
            )
        clean = []
        for v in support:
            if isinstance(v, bool) or not isinstance(v, (int, float, np.integer)):
                raise InvalidDistributionError(f"support value {v!r} is not a number")
            if not math.isfinite(v) or v < 0 or v != int(v):
                raise InvalidDistributionError(
                    f"support value {v!r} must be a finite non-negative integer"
                )
            clean.append(int(v))
        if len(set(clean)) != len(clean):
            raise InvalidDistributionError(f"support values must be distinct: {clean}")
        for p in probs:
            if isinstance(p, bool) or not isinstance(p, (int, float, np.floating)):
                raise InvalidDistributionError(f"probability {p!r} is not a number")
            if not math.isfinite(p) or p < 0:
                raise InvalidDistributionError(f"probability {p!r} must be >= 0")
        total = math.fsum(probs)
        if abs(total - 1.0) > PROB_TOL:
            raise InvalidDistributionError(
                f"probabilities sum to {total!r}, expected 1 (tolerance {PROB_TOL:g})"
            )
        object.__setattr__(self, "support", tuple(clean))
        object.__setattr__(self, "probs", tuple(float(p) for p in probs))
        cdf = np.cumsum(np.asarray(self.probs, dtype=np.float64))
        cdf[-1] = 1.0
        cdf.setflags(write=False)
        values = np.asarray(clean, dtype=np.int64)
        values.setflags(write=False)
        object.__setattr__(self, "_cdf", cdf)
        object.__setattr__(self, "_values", values)

    @classmethod
    def from_mapping(cls, mapping: Mapping[int, float]) -> "DiscreteDistribution":
        """Build from ``{value: probability}``."""
        return cls(tuple(mapping.keys()), tuple(mapping.values()))

    @classmethod
    def constant(cls, value: int) -> "DiscreteDistribution":
        return cls((value,), (1.0,))

    def as_dict(self) -> dict[int, float]:
        return dict(zip(self.support, self.probs))

    def lookup(self, u):
        """Map uniform draw(s) in [0, 1) to support values by inverse CDF."""
        idx = np.searchsorted(self._cdf, u, side="right")
        return self._values[idx]

    def __str__(self):
        body = ", ".join(f"{v}:{p!r}" for v, p in zip(self.support, self.probs))
        return "{" + body + "}"


def mean(dist: DiscreteDistribution) -> float:
    return math.fsum(v * p for v, p in zip(dist.support, dist.probs))


def _stream_key(stream_id: str) -> int:
    return zlib.crc32(stream_id.encode("utf-8"))


class RandomStream:
    """A named, seeded sub-stream of uniform draws.

    The pair ``(seed, stream_id)`` fully determines the sequence.  Streams
    with different ids under one seed are independent, so the environment
    seen by a simulation does not depend on what else draws randomness.

    Not safe to sample concurrently from two threads.
    """

    def __init__(self, seed: int, stream_id: str):
        if isinstance(seed, bool) or not isinstance(seed, (int, np.integer)):
            raise TypeError(f"seed must be an integer, got {seed!r}")
        if not 0 <= seed < 2**64:
            raise ValueError(f"seed must fit in 64 unsigned bits, got {seed}")
        self.seed = int(seed)
        self.stream_id = str(stream_id)
        ss = np.random.SeedSequence(entropy=self.seed, spawn_key=(_stream_key(self.stream_id),))
        self._gen = np.random.Generator(np.random.PCG64(ss))
        self.draws = 0

    def __repr__(self):
        return f"RandomStream(seed={self.seed}, stream_id={self.stream_id!r}, draws={self.draws})"

    def uniform(self) -> float:
        self.draws += 1
        return float(self._gen.random())

    def uniforms(self, count: int) -> np.ndarray:
        """``count`` draws; identical to ``count`` successive ``uniform()`` calls."""
        self.draws += count
        return self._gen.random(count)


def sample(dist: DiscreteDistribution, rng: RandomStream) -> int:
    """One value from ``dist``; advances ``rng`` by exactly one draw."""
    return int(dist.lookup(rng.uniform()))


def sample_many(dist: DiscreteDistribution, rng: RandomStream, count: int) -> np.ndarray:
    """``count`` values, same sequence as repeated :func:`sample`."""
    return dist.lookup(rng.uniforms(count))


# Scenario from the offloading simulation study: one cellular link, one
# intermittent high-rate WiFi link.
PAPER_ARRIVALS = {0: 0.2, 2: 0.3, 3: 0.5}
PAPER_CELLULAR = {0: 0.1, 1: 0.2, 2: 0.7}
PAPER_WIFI = {0: 0.7, 2: 0.05, 4: 0.05, 10: 0.1, 20: 0.1}
PAPER_P_C = 1.15
PAPER_P_W = 1.1
PAPER_P_AV = 0.8
PAPER_HORIZON = 1_000_000
PAPER_V = 200.0


def paper_scenario():
    """The reference two-link scenario as a :class:`~opec.simulator.SimConfig`."""
    from .model import EnergyParams
    from .simulator import DEFAULT_SEED, SimConfig

    return SimConfig(
        n=2,
        horizon=PAPER_HORIZON,
        seed=DEFAULT_SEED,
        arrivals=DiscreteDistribution.from_mapping(PAPER_ARRIVALS),
        link_dists=(
            DiscreteDistribution.from_mapping(PAPER_CELLULAR),
            DiscreteDistribution.from_mapping(PAPER_WIFI),
        ),
        ep=EnergyParams(PAPER_P_C, PAPER_P_W, PAPER_P_AV),
        V=PAPER_V,
        q0=0,
        z0=0.0,
        trace_every=0,
    )
