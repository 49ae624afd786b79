"""Domain types and pure per-slot functions.

A network has ``n`` wireless links.  Link 1 is the cellular link and links
2..n are WiFi links.  Each slot the device picks one of ``n + 1`` decisions:
stay idle (delay), send on cellular, or send on one WiFi link.  Decisions are
zero-or-one-hot vectors over the links.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

from .errors import InvalidArgumentError, InvalidConfigurationError

LinkStateVector = tuple[int, ...]


class Kind(enum.Enum):
    DELAY = "delay"
    CELLULAR = "cellular"
    WIFI = "wifi"


def make_link_states(values: Sequence[int]) -> LinkStateVector:
    """Validate per-link packet capacities and return them as a tuple."""
    states = tuple(values)
    if len(states) < 1:
        raise InvalidArgumentError("link state vector must have at least one link")
    for i, v in enumerate(states, start=1):
        if isinstance(v, bool) or not isinstance(v, int):
            if isinstance(v, float) and math.isfinite(v) and v == int(v):
                continue
            raise InvalidArgumentError(f"link {i} state must be an integer, got {v!r}")
        if v < 0:
            raise InvalidArgumentError(f"link {i} state must be >= 0, got {v}")
    return tuple(int(v) for v in states)


@dataclass(frozen=True)
class Decision:
    """A transmission decision as a zero-or-one-hot vector over the links."""

    choices: tuple[int, ...]
    _index: int = field(init=False, repr=False, compare=False, default=0)

    def __post_init__(self):
        object.__setattr__(self, "choices", tuple(self.choices))
        if len(self.choices) < 1:
            raise InvalidArgumentError("decision must cover at least one link")
        if any(c not in (0, 1) for c in self.choices):
            raise InvalidArgumentError(f"decision entries must be 0/1: {self.choices}")
        if sum(self.choices) > 1:
            raise InvalidArgumentError(f"at most one link may be selected: {self.choices}")
        index = self.choices.index(1) + 1 if 1 in self.choices else 0
        object.__setattr__(self, "_index", index)

    @classmethod
    def from_index(cls, index: int, n: int) -> "Decision":
        """Build the decision selecting link ``index`` (1-based), or delay for 0."""
        if not 0 <= index <= n:
            raise InvalidArgumentError(f"decision index {index} out of range for n={n}")
        return enumerate_decisions(n)[index]

    @property
    def n(self) -> int:
        return len(self.choices)

    @property
    def index(self) -> int:
        """0 for delay, otherwise the 1-based index of the selected link.

        This is also the decision's position in ``enumerate_decisions(n)``.
        """
        return self._index

    @property
    def kind(self) -> Kind:
        i = self.index
        if i == 0:
            return Kind.DELAY
        if i == 1:
            return Kind.CELLULAR
        return Kind.WIFI

    @property
    def label(self) -> str:
        kind = self.kind
        if kind is Kind.WIFI:
            return f"wifi{self.index}"
        return kind.value

    def __repr__(self):
        return f"Decision({self.label}, n={self.n})"


@dataclass(frozen=True)
class EnergyParams:
    """Per-slot transmit energies and the average-energy budget, in joules."""

    p_c: float
    p_w: float
    p_av: float

    def __post_init__(self):
        for name in ("p_c", "p_w", "p_av"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, (int, float)):
                raise InvalidConfigurationError(f"{name} must be a number, got {v!r}")
            if not (math.isfinite(v) and v > 0):
                raise InvalidConfigurationError(f"{name} must be > 0 and finite, got {v}")
            object.__setattr__(self, name, float(v))


@dataclass(frozen=True)
class SlotOutcome:
    b: int
    p: float
    r: int
    f: int
    y: float


@lru_cache(maxsize=None)
def _decisions(n: int) -> tuple[Decision, ...]:
    out = [Decision((0,) * n)]
    for i in range(n):
        choices = [0] * n
        choices[i] = 1
        out.append(Decision(tuple(choices)))
    return tuple(out)


def enumerate_decisions(n: int) -> tuple[Decision, ...]:
    """All ``n + 1`` decisions in canonical order: delay, cellular, WiFi 2..n.

    The order is the tie-breaking order used by the schedulers.
    """
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise InvalidConfigurationError(f"link count must be an integer >= 1, got {n!r}")
    return _decisions(n)


def capacity(d: Decision, s: Sequence[int]) -> int:
    if len(d.choices) != len(s):
        raise InvalidArgumentError(
            f"decision covers {len(d.choices)} links but link state has {len(s)}"
        )
    return sum(si * ai for si, ai in zip(s, d.choices))


def energy(d: Decision, ep: EnergyParams) -> float:
    kind = d.kind
    if kind is Kind.DELAY:
        return 0.0
    if kind is Kind.CELLULAR:
        return ep.p_c
    return ep.p_w


def reward(d: Decision) -> int:
    # Idle slots are rewarded too, whether or not anything is queued.
    return 0 if d.kind is Kind.CELLULAR else 1


def slot_outcome(d: Decision, s: Sequence[int], ep: EnergyParams) -> SlotOutcome:
    b = capacity(d, s)
    p = energy(d, ep)
    r = reward(d)
    return SlotOutcome(b=b, p=p, r=r, f=-r, y=p - ep.p_av)
