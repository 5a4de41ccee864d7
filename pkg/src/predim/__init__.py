"""Predimension, selfsufficient closure and combinatorial closure for
alternating bilinear maps over prime fields, in pair form (M, N(β))."""

from .closure import (
    ClosureReport,
    closure_chain,
    closure_set,
    css,
    d_k,
    delta_rel,
    in_closure,
    is_selfsufficient,
    minimal_extensions,
)
from .errors import FormulaMismatch, GuardrailExceeded, NotSelfsufficient
from .exterior import (
    Bivector,
    bivector_rank,
    build_w,
    lambda2_embed,
    min_support_dim_oracle,
    wedge,
)
from .free import free_structure, g_sequence, orbit_separation_witnesses, verify_lemma_4_1
from .linalg import (
    Subspace,
    contains_subspace,
    enumerate_subspaces,
    enumerate_superspaces,
    enumerate_vectors,
    intersect,
    span,
    subspace_sum,
)
from .propcheck import CatalogConfig, generate_catalog, run_suite
from .structure import (
    BilinearStructure,
    ScaledDelta,
    beta_map,
    check_few_relations,
    delta,
    load_structure,
    n_of,
    parse_structure,
    serialize_structure,
)

__version__ = "0.1.0"
