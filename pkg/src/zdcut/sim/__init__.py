"""Monte-Carlo simulation of codes on networks with zero-delay edges."""

from .codes import (
    AntipodalRepetitionCode,
    CancellationCode,
    CodePlugin,
    RepetitionCode,
    SameSlotProbe,
    SilentCode,
)
from .engine import ReceiveView, SimReport, run, trial_generator
from .estimate import MIEstimate, estimate_empirical_mi, mi_from_counts
from .laws import CorrelatedLaw, TableLaw
from .scenarios import (
    SCENARIOS,
    Scenario,
    bsc_cf,
    bsc_if,
    builtin_scenario,
    scenario_positive,
    trn_cn,
    trn_in,
)

__all__ = [
    "SCENARIOS",
    "AntipodalRepetitionCode",
    "CancellationCode",
    "CodePlugin",
    "CorrelatedLaw",
    "MIEstimate",
    "ReceiveView",
    "RepetitionCode",
    "SameSlotProbe",
    "Scenario",
    "SilentCode",
    "SimReport",
    "TableLaw",
    "bsc_cf",
    "bsc_if",
    "builtin_scenario",
    "estimate_empirical_mi",
    "mi_from_counts",
    "run",
    "scenario_positive",
    "trial_generator",
    "trn_cn",
    "trn_in",
]
