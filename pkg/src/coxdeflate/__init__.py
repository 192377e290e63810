"""Deflating simply-laced Coxeter groups and identifying the finite quotients."""

from .cosets import Presentation, coxeter_presentation, deflated_presentation, gon_relator, todd_coxeter
from .diagrams import (
    Diagram,
    build_incidence_graph,
    build_named,
    build_y_diagram,
    free_ngons,
    is_isomorphic,
)
from .embedding import reconstruct_embedding, shape_census
from .forms import F2QuadSpace, ambient_from_gram, classify, quotient_by_relations, transvection
from .gf2 import F2Matrix
from .permgrp import schreier_sims
from .pipeline import identify
from .rootlat import GramForm, RootVec, closure, extend_chain, gram_from_diagram, sign_fix_chain

__version__ = "0.1.0"

__all__ = [
    "Diagram",
    "F2Matrix",
    "F2QuadSpace",
    "GramForm",
    "Presentation",
    "RootVec",
    "ambient_from_gram",
    "build_incidence_graph",
    "build_named",
    "build_y_diagram",
    "classify",
    "closure",
    "coxeter_presentation",
    "deflated_presentation",
    "extend_chain",
    "free_ngons",
    "gon_relator",
    "gram_from_diagram",
    "identify",
    "is_isomorphic",
    "quotient_by_relations",
    "reconstruct_embedding",
    "schreier_sims",
    "shape_census",
    "sign_fix_chain",
    "todd_coxeter",
    "transvection",
]
