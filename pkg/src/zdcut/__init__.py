"""Cut-set bounds and capacity regions for multicast networks with zero-delay edges."""

from .errors import (
    ConvergenceError,
    GuardError,
    InfeasibleProfileError,
    NetworkError,
    SandboxViolation,
)
from .network import (
    ChannelModel,
    EdgePartition,
    MulticastDemand,
    Network,
    PowerConstraints,
    build_network,
    dumps,
    load_network,
    loads,
    save_network,
    serialize,
    validate_partition,
)
from .schedule import (
    DelayProfile,
    available_inputs,
    channel_position,
    feasible_sequences,
    is_feasible,
    load_profile,
    parse_profile,
    positive_profile,
)

__version__ = "0.1.0"
