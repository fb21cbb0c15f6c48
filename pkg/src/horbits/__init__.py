"""Exact orbits, indices and nested polytopes of the Coxeter groups H2, H3, H4."""

from .errors import (
    DomainError,
    GroupMismatchError,
    MalformedMultisetError,
    NonDominantError,
    SizeLimitError,
)
from .golden import GoldenNumber, ONE, TAU, TAU_PRIME, ZERO, golden, parse_golden
from .groups import A1, A2, GROUPS, H2, H3, H4, Group, Weight, get_group
from .orbits import (
    Decomposition,
    Orbit,
    WeightMultiset,
    decompose,
    decompose_product,
    generate_orbit,
    orbit_product,
    orbit_sum,
)
from .indices import (
    BranchLayer,
    BranchingRule,
    IndexValue,
    anomaly_number,
    anomaly_number_normalized,
    axis_directions,
    branch_decompose,
    branch_layers,
    branching_rule,
    default_direction,
    direct_product_index,
    embedding_index,
    embedding_index_by_rank,
    even_index,
    multiset_even_index,
    subgroup_rank,
)
from .weightsys import (
    SubtractionEdge,
    SubtractionNode,
    SubtractionTree,
    build_tree,
    closed_form_lower_orbits,
    subtraction_children,
    tree_to_dot,
    tree_to_json,
    weight_system_dominants,
)
from .geometry import (
    CartesianEmbedding,
    NestedPolyhedra,
    Shell,
    embed,
    export_json,
    export_obj,
    nested_polyhedra,
)

__version__ = "0.1.0"
