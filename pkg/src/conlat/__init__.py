"""Finite lattice congruence computations.

Lattices are dense immutable tables; every construction either certifies its
own postconditions or raises.
"""

from .budget import Budget, DEFAULT_BUDGET
from .core import (
    FiniteLattice,
    LatticeMap,
    boolean_lattice,
    build_lattice,
    chain,
    check_properties,
    from_covers,
    glue,
    identity_map,
    is_isomorphic,
    isomorphisms,
    m3,
    n5,
    product,
    product_many,
    structure_queries,
)
from .congruence import (
    Congruence,
    CongruenceLattice,
    ConMap,
    all_congruences,
    con_map,
    is_congruence_preserving_extension,
    kernel,
    meet_irreducible_congruences,
    principal_congruence,
    quotient,
    separates_zero,
)
from .birkhoff import (
    BooleanExtension,
    Poset,
    birkhoff_iso,
    boolean_extension,
    downset_lattice,
    joinirr_poset,
)
from .catalog import search_lattices, small_lattices
from .constructions import (
    Amalgam,
    ChoppedLattice,
    Representation,
    amalgamate,
    chopped_from_order,
    chopped_from_pieces,
    embeddings,
    find_embedding,
    forcing_gadget,
    ideal_lattice_of_chopped,
    merge_chopped,
    partition_lattice,
    represent_sc,
    simple_sc_extension,
    sublattice,
)
from .pipeline import (
    AmalgamationProblem,
    AmalgamationSolution,
    CheckResult,
    Report,
    solve_boolean,
    solve_general,
    solve_two,
    verify_solution,
)
from .extensions import (
    Tower,
    TowerStep,
    cp_sc_extension,
    rc_tower,
    rectangular_extension,
    tower_step,
)
from .ladders import (
    DirectSystem,
    build_2_ladder,
    is_k_ladder,
    run_ladder_system,
    verify_direct_system,
)
from . import errors

__all__ = [
    "BooleanExtension",
    "Poset",
    "birkhoff_iso",
    "boolean_extension",
    "downset_lattice",
    "joinirr_poset",
    "search_lattices",
    "small_lattices",
    "Amalgam",
    "ChoppedLattice",
    "Representation",
    "amalgamate",
    "chopped_from_order",
    "chopped_from_pieces",
    "embeddings",
    "find_embedding",
    "forcing_gadget",
    "ideal_lattice_of_chopped",
    "merge_chopped",
    "partition_lattice",
    "represent_sc",
    "simple_sc_extension",
    "sublattice",
    "AmalgamationProblem",
    "AmalgamationSolution",
    "CheckResult",
    "Report",
    "solve_boolean",
    "solve_general",
    "solve_two",
    "verify_solution",
    "Tower",
    "TowerStep",
    "cp_sc_extension",
    "rc_tower",
    "rectangular_extension",
    "tower_step",
    "DirectSystem",
    "build_2_ladder",
    "is_k_ladder",
    "run_ladder_system",
    "verify_direct_system",
    "Budget",
    "DEFAULT_BUDGET",
    "FiniteLattice",
    "LatticeMap",
    "boolean_lattice",
    "build_lattice",
    "chain",
    "check_properties",
    "from_covers",
    "glue",
    "identity_map",
    "is_isomorphic",
    "isomorphisms",
    "m3",
    "n5",
    "product",
    "product_many",
    "structure_queries",
    "Congruence",
    "CongruenceLattice",
    "ConMap",
    "all_congruences",
    "con_map",
    "is_congruence_preserving_extension",
    "kernel",
    "meet_irreducible_congruences",
    "principal_congruence",
    "quotient",
    "separates_zero",
    "errors",
]
