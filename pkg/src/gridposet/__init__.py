"""Exact counting, chain decompositions and container bounds for antichains
in the grid poset {0,...,n-1}^D."""

__version__ = "0.1.0"

from .box import (CapExceeded, GridBox, Point, enumerate_level, leq, level_size,
                  middle_layer_size, rank)
from .counting import (GridPartition, antichain_to_downset, central_binomial,
                       count_antichains, count_downsets, downset_to_antichain,
                       downset_to_partition, macmahon_product, max_antichain_size,
                       monotone_path_ramsey, partition_count, partition_to_downset)
from .levelgraph import (LevelGraph, build_level_graph, check_degree_identity,
                         weighted_degree_lower, weighted_degree_upper)
from .matching import (BipartiteGraph, FractionalMatching, InfeasibleMatching,
                       MatchingDistribution, decompose_fractional_matching,
                       sample_matching, validate_fractional_matching)
from .chains import (ChainDecomposition, LevelPlan, build_level_fraction,
                     chain_count_bound, check_chain_count_bound,
                     check_marginal_sum_bound, estimate_pair_probability,
                     sample_chain_decomposition)
from .supersat import (SupersaturationReport, check_supersaturation,
                       count_comparable_pairs_with_gap)
from .containers import (BoundReport, ContainerFamily, ContainerParams,
                         binomial_sum_bound, build_containers,
                         certified_upper_bound, container_for, standard_params)
from .asymptotics import clt_middle_layer, relative_error

__all__ = [name for name in dir() if not name.startswith("_")]
