"""Reading scenario files.

The format is flat ``key = value`` text; ``#`` starts a comment.  Values
are numbers, distributions written as ``{value: prob, ...}``, or
comma-separated lists.  Example::

    arrivals = {0: 0.2, 2: 0.3, 3: 0.5}
    link1 = {0: 0.1, 1: 0.2, 2: 0.7}     # cellular
    link2 = {0: 0.7, 2: 0.05, 4: 0.05, 10: 0.1, 20: 0.1}
    p_c = 1.15
    p_w = 1.1
    p_av = 0.8
    V = 200

A file that also sets ``v_values`` or ``policies`` describes a sweep.
"""

from __future__ import annotations

import ast
import math
import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Union

from .errors import ConfigFileError, OpecError
from .model import EnergyParams
from .policy import POLICY_NAMES
from .simulator import DEFAULT_SEED, SimConfig
from .stochastic import DiscreteDistribution, PAPER_HORIZON

DEFAULT_V_GRID = (1.0, 5.0, 10.0, 20.0, 50.0, 100.0, 150.0, 200.0)

_SCALAR_KEYS = {"n", "horizon", "seed", "p_c", "p_w", "p_av", "V", "q0", "z0", "trace_every"}
_LIST_KEYS = {"v_values", "policies"}
_LINK_KEY = re.compile(r"link(\d+)$")
_KEY = re.compile(r"[A-Za-z_][A-Za-z0-9_]*$")


@dataclass(frozen=True)
class SweepSpec:
    base: SimConfig
    v_values: tuple[float, ...] = DEFAULT_V_GRID
    policies: tuple[str, ...] = ("opec",)

    def __post_init__(self):
        object.__setattr__(self, "v_values", tuple(float(v) for v in self.v_values))
        object.__setattr__(self, "policies", tuple(self.policies))
        check_v_values(self.v_values)
        check_policies(self.policies)


def check_v_values(values) -> None:
    if not values:
        raise ValueError("v_values must not be empty")
    for v in values:
        if not math.isfinite(v) or v < 0:
            raise ValueError(f"V must be >= 0 and finite, got {v}")
    for lo, hi in zip(values, values[1:]):
        if not hi > lo:
            raise ValueError(f"v_values must be strictly increasing ({lo} then {hi})")


def check_policies(names) -> None:
    if not names:
        raise ValueError("policies must not be empty")
    for name in names:
        if name not in POLICY_NAMES:
            raise ValueError(f"unknown policy {name!r}; expected one of {', '.join(POLICY_NAMES)}")
    if len(set(names)) != len(names):
        raise ValueError(f"policies listed more than once: {', '.join(names)}")


def bundled_config(name: str = "paper.cfg") -> Path:
    """Path to a config file shipped with the package."""
    return Path(str(resources.files("opec") / "data" / name))


def _parse_number(text, key, path, lineno, integer=False):
    try:
        value = ast.literal_eval(text)
    except (ValueError, SyntaxError):
        raise ConfigFileError(f"{key}: cannot parse number {text!r}", path, lineno) from None
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigFileError(f"{key}: expected a number, got {text!r}", path, lineno)
    if integer:
        if isinstance(value, float):
            if not value.is_integer():
                raise ConfigFileError(f"{key}: expected an integer, got {text!r}", path, lineno)
            value = int(value)
    return value


def _parse_distribution(text, key, path, lineno):
    try:
        value = ast.literal_eval(text)
    except (ValueError, SyntaxError):
        raise ConfigFileError(
            f"{key}: cannot parse distribution {text!r}; expected {{value: prob, ...}}",
            path,
            lineno,
        ) from None
    if not isinstance(value, dict):
        raise ConfigFileError(f"{key}: expected {{value: prob, ...}}, got {text!r}", path, lineno)
    try:
        return DiscreteDistribution.from_mapping(value)
    except OpecError as exc:
        raise ConfigFileError(f"distribution {key!r}: {exc}", path, lineno) from None


def _parse_list(text, key, path, lineno):
    items = [item.strip() for item in text.strip("[]() ").split(",")]
    items = [item for item in items if item]
    if key == "policies":
        return tuple(items)
    return tuple(_parse_number(item, key, path, lineno) for item in items)


def parse_config(text: str, path=None) -> Union[SimConfig, SweepSpec]:
    """Parse config text; ``path`` only labels error messages."""
    values: dict = {}
    lines: dict = {}
    links: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigFileError(f"expected 'key = value', got {raw.strip()!r}", path, lineno)
        key, _, val = (part.strip() for part in line.partition("="))
        if not _KEY.match(key):
            raise ConfigFileError(f"invalid key {key!r}", path, lineno)
        if not val:
            raise ConfigFileError(f"{key}: missing value", path, lineno)
        if key in lines:
            raise ConfigFileError(f"{key}: set twice (first on line {lines[key]})", path, lineno)
        lines[key] = lineno

        link = _LINK_KEY.match(key)
        if key == "arrivals":
            values[key] = _parse_distribution(val, key, path, lineno)
        elif link:
            i = int(link.group(1))
            if i < 1:
                raise ConfigFileError(f"{key}: links are numbered from 1", path, lineno)
            links[i] = _parse_distribution(val, key, path, lineno)
        elif key in _LIST_KEYS:
            values[key] = _parse_list(val, key, path, lineno)
        elif key in _SCALAR_KEYS:
            integer = key in ("n", "horizon", "seed", "q0", "trace_every")
            values[key] = _parse_number(val, key, path, lineno, integer=integer)
        else:
            known = sorted(_SCALAR_KEYS | _LIST_KEYS | {"arrivals", "link<i>"})
            raise ConfigFileError(f"unknown key {key!r} (known: {', '.join(known)})", path, lineno)

    def need(key):
        if key not in values:
            raise ConfigFileError(f"missing required key {key!r}", path)
        return values[key]

    def at(key):
        return lines.get(key)

    arrivals = need("arrivals")
    if not links:
        raise ConfigFileError("no link distributions given (link1 = {...}, ...)", path)
    n = values.get("n", max(links))
    missing = [i for i in range(1, n + 1) if i not in links]
    extra = [i for i in links if i > n]
    if missing or extra:
        raise ConfigFileError(
            f"n = {n} needs keys link1..link{n}"
            + (f"; missing {', '.join(f'link{i}' for i in missing)}" if missing else "")
            + (f"; unexpected {', '.join(f'link{i}' for i in extra)}" if extra else ""),
            path,
            at("n"),
        )

    energies = {}
    for key in ("p_c", "p_w", "p_av"):
        v = need(key)
        if not (math.isfinite(v) and v > 0):
            raise ConfigFileError(f"{key} must be > 0 and finite, got {v}", path, at(key))
        energies[key] = v
    V = values.get("V", 0.0)
    if not (math.isfinite(V) and V >= 0):
        raise ConfigFileError(f"V must be >= 0, got {V}", path, at("V"))

    fields = {
        "horizon": values.get("horizon", PAPER_HORIZON),
        "seed": values.get("seed", DEFAULT_SEED),
        "q0": values.get("q0", 0),
        "z0": values.get("z0", 0.0),
        "trace_every": values.get("trace_every", 0),
    }
    try:
        cfg = SimConfig(
            n=n,
            arrivals=arrivals,
            link_dists=tuple(links[i] for i in range(1, n + 1)),
            ep=EnergyParams(**energies),
            V=V,
            **fields,
        )
    except OpecError as exc:
        msg = str(exc)
        key = next((k for k in fields if msg.startswith(k)), "n")
        raise ConfigFileError(msg, path, at(key)) from None

    if not (_LIST_KEYS & values.keys()):
        return cfg
    sweep_args = {}
    if "v_values" in values:
        sweep_args["v_values"] = values["v_values"]
    if "policies" in values:
        sweep_args["policies"] = values["policies"]
    try:
        return SweepSpec(base=cfg, **sweep_args)
    except ValueError as exc:
        msg = str(exc)
        key = "policies" if "polic" in msg else "v_values"
        raise ConfigFileError(msg, path, at(key)) from None


def load_config(path) -> Union[SimConfig, SweepSpec]:
    """Read and validate a config file.

    Returns a :class:`SweepSpec` when the file sets ``v_values`` or
    ``policies``, otherwise a :class:`SimConfig`.  Raises
    :class:`ConfigFileError` for a missing file, bad syntax or any invalid
    value, naming the line where possible.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise ConfigFileError("config file not found", path) from None
    except OSError as exc:
        raise ConfigFileError(f"cannot read config file: {exc.strerror}", path) from None
    return parse_config(text, path)
