"""branchlab: exact computation with groups acting on regular rooted trees."""

from .perms import Permutation
from .tree import (
    DEFAULT_BUDGET,
    Automorphism,
    BudgetExceededError,
    GroupDef,
    Node,
    Portrait,
    Vertex,
    Word,
    compose,
    format_vertex,
    inverse,
    iter_ball,
    level_vertices,
    parse_vertex,
    portrait_of,
)
from .automaton import Machine, equal, is_trivial, machine_of, minimize, section_closure
from .measure import (
    char_value,
    fix_interior,
    fix_measure,
    fix_measure_level,
    gram_matrix,
    gram_psd_check,
    interior_measure,
    is_psd,
    level_bounds,
    supp_measure,
)
from .catalog import CatalogEntry, UnknownGroupError, catalog_names, check_level_transitive, load, rist_witness

__version__ = "0.1.0"
