"""Information measures, channel capacities and cut-set regions."""

from .awgn import (
    awgn_capacity,
    awgn_max_min_slack,
    awgn_region_membership,
    cut_values,
    network_awgn_membership,
)
from .blahut import BlahutArimotoResult, blahut_arimoto, channel_capacity
from .measures import binary_entropy, conditional_mi, entropy, mutual_information
from .regions import (
    MEMBERSHIP_TOL,
    CutBound,
    Membership,
    brute_force_joint_mi,
    crossing_edges,
    dmc_cut_value,
    dmc_region,
    dmc_region_membership,
    edge_capacities,
    enumerate_cuts,
    product_cutset_membership,
    product_cutset_mi,
    product_cutset_region,
    product_joint,
    uniform_inputs,
)

__all__ = [
    "MEMBERSHIP_TOL",
    "BlahutArimotoResult",
    "CutBound",
    "Membership",
    "awgn_capacity",
    "awgn_max_min_slack",
    "awgn_region_membership",
    "binary_entropy",
    "blahut_arimoto",
    "brute_force_joint_mi",
    "channel_capacity",
    "conditional_mi",
    "crossing_edges",
    "cut_values",
    "dmc_cut_value",
    "dmc_region",
    "dmc_region_membership",
    "edge_capacities",
    "entropy",
    "enumerate_cuts",
    "mutual_information",
    "network_awgn_membership",
    "product_cutset_membership",
    "product_cutset_mi",
    "product_cutset_region",
    "product_joint",
    "uniform_inputs",
]
