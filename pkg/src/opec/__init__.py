"""Drift-plus-penalty scheduling for energy-constrained WiFi offloading."""

from .config import SweepSpec, bundled_config, load_config, parse_config
from .errors import (
    ConfigFileError,
    InvalidArgumentError,
    InvalidConfigurationError,
    InvalidDistributionError,
    OpecError,
)
from .experiment import SweepRow, emit_csv, read_csv, sweep
from .model import (
    Decision,
    EnergyParams,
    Kind,
    SlotOutcome,
    capacity,
    energy,
    enumerate_decisions,
    reward,
    slot_outcome,
)
from .policy import (
    OpecParams,
    OpecPolicy,
    Policy,
    SchedulerState,
    make_policy,
    opec_decide,
    opec_score,
)
from .simulator import (
    Metrics,
    SimConfig,
    queue_update,
    run,
    stability_report,
    virtual_queue_update,
)
from .stochastic import DiscreteDistribution, RandomStream, mean, paper_scenario, sample

__version__ = "0.1.0"
