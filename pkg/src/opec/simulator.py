"""Time-slotted simulation of a single device queue under a policy.

Each slot: sample link states and arrivals, ask the policy for a decision,
record metrics at the pre-update backlog, then apply

    Q(t+1) = max(Q(t) - b(t), 0) + a(t)
    Z(t+1) = max(Z(t) + y(t), 0)
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Iterator, NamedTuple, Optional

import numpy as np

from . import _kernel
from .errors import InvalidConfigurationError
from .model import EnergyParams, enumerate_decisions, slot_outcome
from .policy import OpecPolicy, Policy, SchedulerState
from .stochastic import (
    ARRIVALS_STREAM,
    DiscreteDistribution,
    RandomStream,
    link_stream,
    sample_many,
)

logger = logging.getLogger(__name__)

DEFAULT_SEED = 20130611
CHUNK_SLOTS = 1 << 16


@dataclass(frozen=True)
class SimConfig:
    n: int
    horizon: int
    seed: int
    arrivals: DiscreteDistribution
    link_dists: tuple[DiscreteDistribution, ...]
    ep: EnergyParams
    V: float = 0.0
    q0: int = 0
    z0: float = 0.0
    trace_every: int = 0

    def __post_init__(self):
        enumerate_decisions(self.n)
        object.__setattr__(self, "link_dists", tuple(self.link_dists))
        if len(self.link_dists) != self.n:
            raise InvalidConfigurationError(
                f"expected {self.n} link distributions, got {len(self.link_dists)}"
            )
        if not _is_int(self.horizon) or self.horizon < 1:
            raise InvalidConfigurationError(f"horizon must be an integer >= 1, got {self.horizon!r}")
        if not _is_int(self.seed) or not 0 <= self.seed < 2**64:
            raise InvalidConfigurationError(f"seed must be a 64-bit unsigned integer, got {self.seed!r}")
        if isinstance(self.V, bool) or not isinstance(self.V, (int, float)):
            raise InvalidConfigurationError(f"V must be a number, got {self.V!r}")
        if not (math.isfinite(self.V) and self.V >= 0):
            raise InvalidConfigurationError(f"V must be >= 0, got {self.V}")
        object.__setattr__(self, "V", float(self.V))
        if not _is_int(self.q0) or self.q0 < 0:
            raise InvalidConfigurationError(f"q0 must be an integer >= 0, got {self.q0!r}")
        if isinstance(self.z0, bool) or not isinstance(self.z0, (int, float)):
            raise InvalidConfigurationError(f"z0 must be a number, got {self.z0!r}")
        if not (math.isfinite(self.z0) and self.z0 >= 0):
            raise InvalidConfigurationError(f"z0 must be >= 0, got {self.z0}")
        object.__setattr__(self, "z0", float(self.z0))
        if not _is_int(self.trace_every) or self.trace_every < 0:
            raise InvalidConfigurationError(
                f"trace_every must be an integer >= 0, got {self.trace_every!r}"
            )

    def replace(self, **changes) -> "SimConfig":
        from dataclasses import replace

        return replace(self, **changes)


def _is_int(v) -> bool:
    return isinstance(v, (int, np.integer)) and not isinstance(v, bool)


@dataclass
class Metrics:
    """Running sums over a run; time averages are derived on demand."""

    t: int = 0
    sum_Q: int = 0
    sum_r: int = 0
    sum_b: int = 0
    sum_a: int = 0
    served: int = 0
    n_cellular: int = 0
    n_wifi: int = 0
    final_Q: int = 0
    final_Z: float = 0.0
    q0: int = 0
    ep: Optional[EnergyParams] = field(default=None, repr=False)

    @property
    def sum_p(self) -> float:
        # energy depends only on the decision kind, so counts give an exact sum
        return self.n_cellular * self.ep.p_c + self.n_wifi * self.ep.p_w

    @property
    def avg_Q(self) -> float:
        return self.sum_Q / self.t

    @property
    def avg_r(self) -> float:
        return self.sum_r / self.t

    @property
    def avg_p(self) -> float:
        return self.sum_p / self.t

    @property
    def avg_b(self) -> float:
        return self.sum_b / self.t

    @property
    def avg_a(self) -> float:
        return self.sum_a / self.t

    def as_dict(self) -> dict:
        return {
            "t": self.t,
            "sum_Q": self.sum_Q,
            "sum_r": self.sum_r,
            "sum_p": self.sum_p,
            "sum_b": self.sum_b,
            "sum_a": self.sum_a,
            "served": self.served,
            "final_Q": self.final_Q,
            "final_Z": self.final_Z,
            "avg_Q": self.avg_Q,
            "avg_r": self.avg_r,
            "avg_p": self.avg_p,
        }


@dataclass(frozen=True)
class StabilityReport:
    Q_over_T: float
    Z_over_T: float
    energy_ok: bool


class TraceRow(NamedTuple):
    t: int
    Q: int
    Z: float
    decision: str
    b: int
    p: float
    r: int


TRACE_COLUMNS = TraceRow._fields


def queue_update(Q: int, b: int, a: int) -> int:
    rest = Q - b
    if rest < 0:
        rest = 0
    return rest + a


def virtual_queue_update(Z: float, y: float) -> float:
    z = Z + y
    return z if z > 0.0 else 0.0


def environment(cfg: SimConfig, chunk: int = CHUNK_SLOTS) -> Iterator[tuple[np.ndarray, np.ndarray]]:
    """Yield ``(arrivals, link_states)`` blocks covering ``cfg.horizon`` slots.

    ``link_states`` has shape ``(k, n)``.  Every process draws from its own
    stream, so the sequence is the same for any policy run on ``cfg.seed``.
    """
    arr_rng = RandomStream(cfg.seed, ARRIVALS_STREAM)
    link_rngs = [RandomStream(cfg.seed, link_stream(i)) for i in range(1, cfg.n + 1)]
    remaining = cfg.horizon
    while remaining > 0:
        k = min(chunk, remaining)
        a = sample_many(cfg.arrivals, arr_rng, k)
        S = np.empty((k, cfg.n), dtype=np.int64)
        for i, (dist, rng) in enumerate(zip(cfg.link_dists, link_rngs)):
            S[:, i] = sample_many(dist, rng, k)
        yield a, S
        remaining -= k


def run(
    cfg: SimConfig,
    policy: Policy,
    trace: Optional[Callable[[TraceRow], None]] = None,
    engine: str = "auto",
) -> Metrics:
    """Simulate ``cfg.horizon`` slots of ``policy`` and return the metrics.

    ``trace`` receives a :class:`TraceRow` every ``cfg.trace_every`` slots
    (starting at slot 0) when ``trace_every > 0``.  ``engine`` is ``"auto"``,
    ``"python"`` or ``"compiled"``; the compiled loop only covers the
    drift-plus-penalty policy without tracing and gives identical results.
    """
    if policy.n != cfg.n:
        raise InvalidConfigurationError(f"policy is built for n={policy.n} but config has n={cfg.n}")
    if engine not in ("auto", "python", "compiled"):
        raise ValueError(f"unknown engine {engine!r}")
    tracing = trace is not None and cfg.trace_every > 0
    compiled_ok = type(policy) is OpecPolicy and not tracing and _kernel.available()
    if engine == "compiled" and not compiled_ok:
        raise ValueError("compiled engine needs an OpecPolicy, no trace, and numba installed")
    if compiled_ok and engine != "python":
        return _run_compiled(cfg, policy)
    return _run_python(cfg, policy, trace if tracing else None)


def _run_python(cfg, policy, trace) -> Metrics:
    decisions = enumerate_decisions(cfg.n)
    zeros = (0,) * cfg.n
    outcomes = [slot_outcome(d, zeros, cfg.ep) for d in decisions]
    p_of = [o.p for o in outcomes]
    r_of = [o.r for o in outcomes]
    y_of = [o.y for o in outcomes]
    every = cfg.trace_every

    m = Metrics(q0=cfg.q0, ep=cfg.ep)
    Q, Z = cfg.q0, cfg.z0
    t = 0
    for a_blk, S_blk in environment(cfg):
        for a, s in zip(a_blk.tolist(), S_blk.tolist()):
            s = tuple(s)
            d = policy.decide(SchedulerState(Q, Z), s)
            k = d.index
            b = s[k - 1] if k else 0
            r = r_of[k]
            if k == 1:
                m.n_cellular += 1
            elif k > 1:
                m.n_wifi += 1
            m.sum_Q += Q
            m.sum_r += r
            m.sum_b += b
            m.sum_a += a
            m.served += Q if Q < b else b
            if trace is not None and t % every == 0:
                trace(TraceRow(t, Q, Z, d.label, b, p_of[k], r))
            Q = queue_update(Q, b, a)
            Z = virtual_queue_update(Z, y_of[k])
            assert Q >= 0 and Z >= 0.0, (t, Q, Z)
            t += 1
    m.t = t
    m.final_Q, m.final_Z = Q, Z
    return m


def _run_compiled(cfg, policy) -> Metrics:
    params = policy.params
    acc = _kernel.new_accumulators()
    Q, Z = cfg.q0, cfg.z0
    t = 0
    for a_blk, S_blk in environment(cfg):
        Q, Z = _kernel.opec_chunk(
            a_blk, S_blk, params.V, params.ep.p_c, params.ep.p_w, params.ep.p_av, Q, Z, acc
        )
        t += len(a_blk)
    K = _kernel
    return Metrics(
        t=t,
        sum_Q=int(acc[K.SUM_Q]),
        sum_r=int(acc[K.SUM_R]),
        sum_b=int(acc[K.SUM_B]),
        sum_a=int(acc[K.SUM_A]),
        served=int(acc[K.SERVED]),
        n_cellular=int(acc[K.N_CELL]),
        n_wifi=int(acc[K.N_WIFI]),
        final_Q=int(Q),
        final_Z=float(Z),
        q0=cfg.q0,
        ep=cfg.ep,
    )


def stability_report(m: Metrics) -> StabilityReport:
    """Finite-horizon proxies for queue stability and the energy budget.

    ``Z_over_T`` vanishing certifies the average-energy constraint in the
    long run; ``energy_ok`` checks the empirical average directly.
    """
    if m.t <= 0:
        raise InvalidConfigurationError("metrics cover no slots")
    return StabilityReport(
        Q_over_T=m.final_Q / m.t,
        Z_over_T=m.final_Z / m.t,
        energy_ok=m.avg_p <= m.ep.p_av,
    )
