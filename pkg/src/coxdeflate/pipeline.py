"""End-to-end identification: closure, mod-2 quotient, type, group order."""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field

from .diagrams import Diagram
from .forms import (
    DegenerateFormError,
    FormType,
    QuotientSpace,
    ambient_from_gram,
    classify,
    project_root,
    quotient_by_relations,
    transvection,
)
from .gf2 import F2Matrix
from .permgrp import BSGS, Perm, action_on_vectors, orbits, schreier_sims
import numpy as np

from .rootlat import ClosureState, NodeClass, closure, fundamental, gram_from_diagram

__all__ = ["Identification", "identify", "identify_state", "node_transvections", "plain_state", "DegenerateFormError"]


@dataclass
class Identification:
    state: ClosureState
    quotient: QuotientSpace
    form_type: FormType
    node_images: list[int]
    matrices: list[F2Matrix]
    perms: list[Perm]
    chain: BSGS
    orbit_sizes: list[int]
    node_orbit: list[int]
    q_constant: bool
    timings: dict = field(default_factory=dict)

    def report(self) -> dict:
        q = self.quotient
        return {
            "nodes": len(self.state.nodes),
            "ambient_dim": q.ambient.dim,
            "radical_dim": len(q.ambient.radical()),
            "relation_rank": q.relation_rank,
            "dim": q.quotient.dim,
            "witt_defect": self.form_type.witt_defect,
            "nonsingular": self.form_type.nonsingular,
            "singular_nonzero": self.form_type.singular_nonzero,
            "type_method": self.form_type.method,
            "node_images": self.node_images,
            "order": self.chain.order(),
            "base": list(self.chain.base),
            "transversal_sizes": [len(t) for t in self.chain.transversals],
            "orbit": len(self.node_orbit),
            "orbit_partition": sorted(self.orbit_sizes, reverse=True),
            "q_constant_on_orbit": self.q_constant,
        }

    def certificate(self) -> dict:
        cert = self.chain.certificate()
        cert["generators"] = [m.to_array() for m in self.matrices]
        cert["orbit_partition"] = sorted(self.orbit_sizes, reverse=True)
        return cert

    def to_json(self) -> str:
        return json.dumps(self.report(), sort_keys=True)


def node_transvections(qs: QuotientSpace, state: ClosureState) -> tuple[list[int], list[F2Matrix]]:
    images = [project_root(qs, c.representative) for c in state.nodes]
    return images, [transvection(qs.quotient, r) for r in images]


def identify_state(state: ClosureState, use_relations: bool = True) -> Identification:
    """Quotient by the closure's relations, classify, and certify the group order.

    Raises DegenerateFormError when the quotient still has a radical (for
    instance when the relations are left out).
    """
    timings = {}
    t = time.perf_counter()
    ambient = ambient_from_gram(state.form)
    qs = quotient_by_relations(ambient, state.relations if use_relations else [])
    ftype = classify(qs.quotient)
    timings["forms"] = time.perf_counter() - t

    t = time.perf_counter()
    images, mats = node_transvections(qs, state)
    perms = action_on_vectors(mats)
    chain = schreier_sims(perms)
    timings["order"] = time.perf_counter() - t

    parts = orbits(perms, (1 << qs.quotient.dim) - 1)
    start = images[0] - 1
    node_orbit = next(o for o in parts if start in o)
    q_constant = len({qs.quotient.Q(p + 1) for p in node_orbit}) == 1
    return Identification(
        state, qs, ftype, images, mats, perms, chain,
        [len(o) for o in parts], sorted(node_orbit), q_constant, timings,
    )


def plain_state(d: Diagram) -> ClosureState:
    """The diagram itself as a finished state: no added nodes, no relations."""
    form = gram_from_diagram(d)
    nodes = [NodeClass(i, lab, fundamental(form, i)) for i, lab in enumerate(d.labels)]
    joins = np.array([[d.joined(i, j) for j in range(d.n)] for i in range(d.n)], dtype=bool)
    joins.setflags(write=False)
    return ClosureState(form, nodes, joins, [], 0, d.n, 0)


def identify(d: Diagram, n: int | None, cap: int, use_relations: bool = True) -> Identification:
    """Run closure (skipped when ``n`` is None) and then :func:`identify_state`."""
    t = time.perf_counter()
    state = plain_state(d) if n is None else closure(d, n, cap)
    closure_time = time.perf_counter() - t
    ident = identify_state(state, use_relations)
    ident.timings["closure"] = closure_time
    return ident


