"""Ribbon hypermaps, partial duality and the partial-dual genus polynomial."""

from .core import (
    ArrowPresentation,
    CountSummary,
    FlagStructure,
    HmapError,
    Occurrence,
    arrows_from_flags,
    canonical_form,
    classify,
    count_summary,
    flags_from_arrows,
    is_isomorphic,
    parse_arrow_presentation,
    parse_hmap,
    restrict,
    serialize_arrow_presentation,
)
from .duality import full_dual, partial_dual, predicted_chi, predicted_epsilon, retrace_partial_dual
from .polynomial import (
    GenusPolynomial,
    constant_term,
    disjoint_union,
    one_vertex_join,
    poly_degree,
    poly_direct,
    poly_eval,
    poly_subset_formula,
)

__version__ = "0.1.0"
