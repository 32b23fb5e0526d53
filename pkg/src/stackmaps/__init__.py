"""Stack-triangulations and stack-quadrangulations via tree bijections."""

from .trees import (
    OrderedTree,
    IncreasingTree,
    enumerate_trees,
    sample_uniform_tree,
    sample_increasing_tree,
    sample_gw_tree,
    rng_from_seed,
)
from .passage import (
    tau_decomposition,
    gamma,
    gamma_pair,
    tri_type,
    tri_root_distance,
    quad_type,
    quad_root_distance,
    gamma_prime_literal,
    gamma_prime_pair,
)
from .maps import (
    StackMap,
    NotStackMapError,
    theta,
    grow,
    map_from_tree,
    map_from_history,
    tree_from_map,
    bfs_distance,
    distance_matrix,
    degree_via_tree,
    canonical_drawing,
    to_svg,
)
from .counting import (
    count_trees,
    count_forests,
    count_histories,
    histories_total,
    q_walk,
    q_walk_exact,
)

__version__ = "0.1.0"
