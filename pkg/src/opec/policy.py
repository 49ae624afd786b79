"""Scheduling policies: the drift-plus-penalty rule and comparison baselines.

Every policy observes the real backlog ``Q``, the energy virtual queue ``Z``
and the current link states, and returns one decision from
:func:`~opec.model.enumerate_decisions`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

from .errors import InvalidConfigurationError
from .model import Decision, EnergyParams, enumerate_decisions, slot_outcome
from .stochastic import RandomStream

RANDOM_POLICY_STREAM = "policy-random"


@dataclass(frozen=True)
class SchedulerState:
    Q: int = 0
    Z: float = 0.0

    def __post_init__(self):
        if self.Q < 0:
            raise InvalidConfigurationError(f"Q must be >= 0, got {self.Q}")
        if not self.Z >= 0:
            raise InvalidConfigurationError(f"Z must be >= 0, got {self.Z}")


@dataclass(frozen=True)
class OpecParams:
    V: float
    ep: EnergyParams
    n: int

    def __post_init__(self):
        if isinstance(self.V, bool) or not isinstance(self.V, (int, float)):
            raise InvalidConfigurationError(f"V must be a number, got {self.V!r}")
        if not (math.isfinite(self.V) and self.V >= 0):
            raise InvalidConfigurationError(f"V must be >= 0 and finite, got {self.V}")
        object.__setattr__(self, "V", float(self.V))
        enumerate_decisions(self.n)


def opec_score(d: Decision, st: SchedulerState, s: Sequence[int], pp: OpecParams) -> float:
    """Drift-plus-penalty weight ``V*f - Q*b + Z*y`` of taking ``d`` now."""
    out = slot_outcome(d, s, pp.ep)
    return pp.V * out.f - st.Q * out.b + st.Z * out.y


def opec_decide(st: SchedulerState, s: Sequence[int], pp: OpecParams) -> Decision:
    """Pick the decision with the smallest score.

    Starts from delay and only replaces the incumbent on a strictly smaller
    score, so exact ties go to the earliest decision in canonical order.
    """
    decisions = enumerate_decisions(pp.n)
    best = decisions[0]
    value = math.inf
    for d in decisions:
        tmp = opec_score(d, st, s, pp)
        if tmp < value:
            value = tmp
            best = d
    return best


def baseline_cellular_always(st: SchedulerState, s: Sequence[int]) -> Decision:
    decisions = enumerate_decisions(len(s))
    if st.Q > 0 and s[0] > 0:
        return decisions[1]
    return decisions[0]


def baseline_wifi_opportunistic(st: SchedulerState, s: Sequence[int]) -> Decision:
    decisions = enumerate_decisions(len(s))
    if st.Q <= 0:
        return decisions[0]
    best, best_state = 0, 0
    for i in range(2, len(s) + 1):
        if s[i - 1] > best_state:
            best, best_state = i, s[i - 1]
    return decisions[best]


def baseline_delay_always(st: SchedulerState, s: Sequence[int]) -> Decision:
    return enumerate_decisions(len(s))[0]


def baseline_random(st: SchedulerState, s: Sequence[int], rng: RandomStream) -> Decision:
    decisions = enumerate_decisions(len(s))
    k = int(rng.uniform() * len(decisions))
    return decisions[min(k, len(decisions) - 1)]


class Policy:
    """Interface: ``decide(state, link_states) -> Decision``."""

    name = "policy"

    def __init__(self, n: int):
        enumerate_decisions(n)
        self.n = n

    def decide(self, st: SchedulerState, s: Sequence[int]) -> Decision:
        raise NotImplementedError

    def __repr__(self):
        return f"{type(self).__name__}(n={self.n})"


class OpecPolicy(Policy):
    name = "opec"

    def __init__(self, params: OpecParams):
        super().__init__(params.n)
        self.params = params

    @classmethod
    def from_values(cls, V: float, ep: EnergyParams, n: int) -> "OpecPolicy":
        return cls(OpecParams(V=V, ep=ep, n=n))

    def decide(self, st, s):
        return opec_decide(st, s, self.params)

    def __repr__(self):
        return f"OpecPolicy(V={self.params.V}, n={self.n})"


class _FunctionPolicy(Policy):
    rule: Callable[[SchedulerState, Sequence[int]], Decision]

    def decide(self, st, s):
        return type(self).rule(st, s)


class CellularAlwaysPolicy(_FunctionPolicy):
    name = "cellular"
    rule = staticmethod(baseline_cellular_always)


class WifiOpportunisticPolicy(_FunctionPolicy):
    name = "wifi-opportunistic"
    rule = staticmethod(baseline_wifi_opportunistic)


class DelayAlwaysPolicy(_FunctionPolicy):
    name = "delay-always"
    rule = staticmethod(baseline_delay_always)


class RandomPolicy(Policy):
    """Uniform over the decision set, driven by its own seeded stream."""

    name = "random"

    def __init__(self, n: int, seed: int, stream_id: str = RANDOM_POLICY_STREAM):
        super().__init__(n)
        self.rng = RandomStream(seed, stream_id)

    def decide(self, st, s):
        return baseline_random(st, s, self.rng)


POLICY_NAMES = ("opec", "cellular", "wifi-opportunistic", "random", "delay-always")


def make_policy(name: str, cfg) -> Policy:
    """Instantiate a policy by name for a :class:`~opec.simulator.SimConfig`.

    A fresh instance is returned on every call, so random policies restart
    their stream from ``cfg.seed``.
    """
    if name == "opec":
        return OpecPolicy(OpecParams(V=cfg.V, ep=cfg.ep, n=cfg.n))
    if name == "cellular":
        return CellularAlwaysPolicy(cfg.n)
    if name == "wifi-opportunistic":
        return WifiOpportunisticPolicy(cfg.n)
    if name == "delay-always":
        return DelayAlwaysPolicy(cfg.n)
    if name == "random":
        return RandomPolicy(cfg.n, cfg.seed)
    raise InvalidConfigurationError(
        f"unknown policy {name!r}; expected one of {', '.join(POLICY_NAMES)}"
    )
