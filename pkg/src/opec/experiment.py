"""V sweeps over a scenario and their CSV output."""

from __future__ import annotations

import csv
import io
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from .config import SweepSpec
from .errors import OpecError
from .policy import make_policy
from .simulator import Metrics, SimConfig, run, stability_report

logger = logging.getLogger(__name__)

CSV_COLUMNS = ("policy", "V", "avg_Q", "avg_r", "avg_p", "Q_over_T", "Z_over_T", "energy_ok")

# policies whose decisions do not depend on V are simulated once per sweep
_V_FREE = {"cellular", "wifi-opportunistic", "random", "delay-always"}


class SweepError(OpecError):
    def __init__(self, policy, V, cause):
        self.policy = policy
        self.V = V
        self.cause = cause
        super().__init__(f"run failed for policy={policy} V={V:g}: {cause}")


@dataclass(frozen=True)
class SweepRow:
    policy: str
    V: float
    avg_Q: float
    avg_r: float
    avg_p: float
    Q_over_T: float
    Z_over_T: float
    energy_ok: bool

    @classmethod
    def from_metrics(cls, policy: str, V: float, m: Metrics) -> "SweepRow":
        rep = stability_report(m)
        return cls(policy, V, m.avg_Q, m.avg_r, m.avg_p, rep.Q_over_T, rep.Z_over_T, rep.energy_ok)


def _simulate(cfg: SimConfig, policy_name: str) -> Metrics:
    return run(cfg, make_policy(policy_name, cfg))


def sweep(spec: SweepSpec, workers: int = 1) -> list[SweepRow]:
    """One run per (policy, V), all on the base seed so environments are paired.

    Rows come back ordered by policy (as listed) then V, whatever order the
    runs finish in.  ``workers > 1`` runs points in separate processes.
    """
    unique: list[tuple[str, float, SimConfig]] = []
    slot_of: dict = {}
    row_slot: dict = {}
    for name in spec.policies:
        for V in spec.v_values:
            key = (name, None if name in _V_FREE else V)
            if key not in slot_of:
                slot_of[key] = len(unique)
                unique.append((name, V, spec.base.replace(V=V)))
            row_slot[(name, V)] = slot_of[key]

    results: list = [None] * len(unique)
    if workers > 1 and len(unique) > 1:
        with ProcessPoolExecutor(max_workers=min(workers, len(unique))) as pool:
            futures = [pool.submit(_simulate, cfg, name) for name, _, cfg in unique]
            for i, fut in enumerate(futures):
                name, V, _ = unique[i]
                try:
                    results[i] = fut.result()
                except Exception as exc:
                    raise SweepError(name, V, exc) from exc
    else:
        for i, (name, V, cfg) in enumerate(unique):
            logger.info("running %s at V=%g for %d slots", name, V, cfg.horizon)
            try:
                results[i] = _simulate(cfg, name)
            except Exception as exc:
                raise SweepError(name, V, exc) from exc

    rows = []
    for name in spec.policies:
        for V in spec.v_values:
            m = results[row_slot[(name, V)]]
            rows.append(SweepRow.from_metrics(name, V, m))
    return rows


def _fmt(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return format(x, ".12g")
    return str(x)


def rows_to_csv(rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in rows:
        writer.writerow([_fmt(getattr(row, col)) for col in CSV_COLUMNS])
    return buf.getvalue()


def emit_csv(rows, path) -> Path:
    """Write rows under the fixed header; output bytes depend only on ``rows``."""
    rows = list(rows)
    if not rows:
        raise ValueError("no rows to write")
    path = Path(path)
    data = rows_to_csv(rows)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(data)
    return path


def read_csv(path) -> list[SweepRow]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != CSV_COLUMNS:
            raise ValueError(f"unexpected CSV header {reader.fieldnames}")
        out = []
        for rec in reader:
            out.append(
                SweepRow(
                    policy=rec["policy"],
                    V=float(rec["V"]),
                    avg_Q=float(rec["avg_Q"]),
                    avg_r=float(rec["avg_r"]),
                    avg_p=float(rec["avg_p"]),
                    Q_over_T=float(rec["Q_over_T"]),
                    Z_over_T=float(rec["Z_over_T"]),
                    energy_ok=rec["energy_ok"] == "true",
                )
            )
    return out


def default_workers() -> int:
    return max(1, min(8, os.cpu_count() or 1))


def is_weakly_increasing(values, rel_tol: float = 0.0) -> bool:
    """True if each value is at least the previous one, less ``rel_tol`` of it."""
    return all(b >= a - rel_tol * abs(a) for a, b in zip(values, values[1:]))

