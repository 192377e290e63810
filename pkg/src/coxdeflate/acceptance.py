"""Numbered end-to-end checks with one PASS/FAIL line each.

Shared by ``coxdeflate verify-all`` and the acceptance test module.  Every
check is exact; each also has a wall-clock budget.
"""

from __future__ import annotations

import functools
import time
from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np

from . import gf2
from .cosets import coset_permutations, coxeter_presentation, deflated_presentation, todd_coxeter
from .diagrams import build_incidence_graph, build_named, build_y_diagram, free_ngons, is_isomorphic
from .embedding import (
    A3_ARRAY,
    Z3_ARRAY,
    EmbeddingError,
    a3_combination,
    reconstruct_embedding,
    shape_census,
    z3_combination,
)
from .forms import F2QuadSpace
from .permgrp import brute_force_closure, schreier_sims, verify_relations
from .pipeline import identify_state
from .rootlat import ClosureError, GramForm, closure, fundamental, gram_from_diagram, ip

__all__ = ["CriterionResult", "CRITERIA", "run_one", "run_criteria", "format_result"]

PASS, FAIL, WARN, SKIP = "PASS", "FAIL", "WARN", "SKIP"


@dataclass
class CriterionResult:
    number: int
    title: str
    status: str
    detail: str
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return self.status != FAIL


class _Fail(Exception):
    pass


class _Warn(Exception):
    pass


def _check(cond: bool, msg: str) -> None:
    if not cond:
        raise _Fail(msg)


@functools.lru_cache(maxsize=None)
def _flagship():
    state = closure(build_y_diagram((3, 3, 3)), 8, 14)
    return state, identify_state(state)


def crit_closure(form: GramForm | None = None) -> str:
    d = build_y_diagram((3, 3, 3))
    try:
        state = closure(d, 8, 14, form=form)
    except ClosureError as exc:
        raise _Fail(f"closure failed: {type(exc).__name__}: {exc}")
    _check(len(state.nodes) == 14, f"{len(state.nodes)} classes, expected 14")
    got = state.diagram()
    target = build_incidence_graph(2)
    iso = is_isomorphic(got, target)
    _check(iso is not None, "join graph is not isomorphic to the incidence graph of PG(2,2)")
    for i in range(got.n):
        for j in range(got.n):
            _check(got.joined(i, j) == target.joined(iso[i], iso[j]), "bijection fails edge check")
    diffs = [gf2.vec_from_bits([int(x) % 2 for x in (a.array - b.array)]) for a, b in state.relations]
    r = gf2.rank(diffs)
    _check(r == 2, f"relation rank {r}, expected 2")
    return f"14 classes, isomorphic to incidence(2) via verified bijection, relation rank 2 ({len(state.relations)} logged)"


def crit_extension_roots() -> str:
    d = build_y_diagram((3, 3, 3))
    form = gram_from_diagram(d)
    out = []
    for name, root, expect in (
        ("a3", a3_combination(), {"d1", "d2", "b3"}),
        ("z3", z3_combination(), {"c1", "c2", "c3"}),
    ):
        joined = {lab for i, lab in enumerate(d.labels) if abs(ip(root, fundamental(form, i))) == 1}
        others = [ip(root, fundamental(form, i)) for i, lab in enumerate(d.labels) if lab not in joined]
        _check(joined == expect and all(v == 0 for v in others), f"{name} joined to {sorted(joined)}")
        out.append(f"{name} ~ {{{', '.join(sorted(joined))}}}")
    return "; ".join(out)


def crit_quotient() -> str:
    state, ident = _flagship()
    rep = ident.report()
    _check(rep["dim"] == 8, f"quotient dim {rep['dim']}")
    _check(rep["radical_dim"] == 2 and ident.quotient.quotient.is_nondegenerate(), "quotient is degenerate")
    _check(rep["witt_defect"] == 1, f"Witt defect {rep['witt_defect']}")
    _check(rep["nonsingular"] == 136, f"{rep['nonsingular']} nonsingular vectors")
    census = shape_census(reconstruct_embedding(state), ident.quotient, state.form)
    images = census["images"]
    _check(sum(census["counts"]) == census["total"] == rep["nonsingular"], f"census {census['counts']} vs {rep['nonsingular']}")
    _check(all(ident.quotient.quotient.Q(v) == 1 for v in images), "a census image is singular")
    return "dim 8, nondegenerate, Witt defect 1, 136 nonsingular = 18+64+54 disjoint shape images"


def crit_order() -> str:
    _, ident = _flagship()
    order = ident.chain.order()
    _check(order == 394_813_440, f"order {order}")
    points = {img - 1 for img in ident.node_images}
    _check(points <= set(ident.node_orbit), "node images lie in different orbits")
    _check(len(ident.node_orbit) == 136, f"orbit size {len(ident.node_orbit)}")
    _check(ident.q_constant, "Q is not constant on the orbit")
    return f"order 394813440, node orbit 136 with Q = 1, partition {sorted(ident.orbit_sizes, reverse=True)}"


def crit_surjection() -> str:
    state, ident = _flagship()
    d = state.diagram()
    gons = free_ngons(d, 8)
    _check(verify_relations(ident.perms, coxeter_presentation(d)), "a Coxeter relator fails")
    _check(verify_relations(ident.perms, deflated_presentation(d, 8)), "a deflation relator fails")
    return f"all Coxeter relators and {len(gons)} free 8-gon relators hold"


def _enum(d, n, k, expect, max_cosets=2_000_000, budget=120.0) -> str:
    pres = deflated_presentation(d, n, k)
    ct = todd_coxeter(pres, max_cosets=max_cosets)
    _check(ct.closed, f"enumeration capped at {max_cosets}")
    _check(ct.count == expect, f"{ct.count} cosets, expected {expect}")
    _check(ct.verify(pres), "closed table fails relator re-verification")
    _check(ct.seconds < budget, f"enumeration took {ct.seconds:.1f} s")
    return f"{expect} ({ct.seconds:.2f} s)"


def crit_table_rows() -> str:
    p = _enum(build_named("petersen"), 6, 1, 51840)
    c = _enum(build_named("cube"), 6, 1, 51840)
    return f"petersen {p}, cube {c}, tables re-verified"


def crit_affine() -> str:
    a = _enum(build_named("cycle", 8), 8, 1, 40320)
    b = _enum(build_named("cycle", 4), 4, 1, 24)
    c = _enum(build_named("cycle", 4), 4, 2, 192)
    return f"C8 {a}, C4 {b}, C4 k=2 {c}"


def crit_embedding() -> str:
    state, ident = _flagship()
    try:
        emb = reconstruct_embedding(state)
    except EmbeddingError as exc:
        raise _Warn(f"no embedding in the searched box: {exc}")
    _check(tuple(emb.image(a3_combination())) == A3_ARRAY, "a3 array differs")
    _check(tuple(emb.image(z3_combination(state))) == Z3_ARRAY, "z3 array differs")
    census = shape_census(emb, ident.quotient, state.form)
    _check(census["counts"] == (18, 64, 54), f"census {census['counts']}")
    return f"a3 and z3 arrays reproduced, census {census['counts']} total {census['total']}"


def crit_stretch() -> str:
    try:
        state = closure(build_y_diagram((5, 5, 5)), 12, 26)
    except ClosureError as exc:
        raise _Fail(f"closure failed: {type(exc).__name__}: {exc}")
    _check(len(state.nodes) == 26, f"{len(state.nodes)} classes")
    _check(is_isomorphic(state.diagram(), build_incidence_graph(3)) is not None, "not isomorphic to incidence(3)")
    return "26 classes, isomorphic to incidence(3)"


def _form_identity_exhaustive(space: F2QuadSpace) -> bool:
    n = 1 << space.dim
    q = space.all_Q().astype(np.uint8)
    xs = np.arange(n, dtype=np.uint64)
    pol = np.array([space.polar_image(y) for y in range(n)], dtype=np.uint64)
    lhs = q[xs[:, None] ^ xs[None, :]] ^ q[:, None] ^ q[None, :]
    rhs = (np.bitwise_count(xs[:, None] & pol[None, :]) & 1).astype(np.uint8)
    return bool(np.array_equal(lhs, rhs))


def _test_forms() -> list[F2QuadSpace]:
    rng = np.random.default_rng(20240611)
    out = []
    for d in range(1, 13):
        for _ in range(2):
            upper = tuple(int(rng.integers(0, 1 << (d - i))) << i for i in range(d))
            out.append(F2QuadSpace(d, upper))
    return out


def _corpus_groups():
    """Permutation groups from closed coset tables of small presentations."""
    cases = [
        coxeter_presentation(build_y_diagram((1, 1))),
        coxeter_presentation(build_y_diagram((2, 2))),
        coxeter_presentation(build_y_diagram((2, 1, 1))),
        deflated_presentation(build_named("cycle", 3), 3, 1),
        deflated_presentation(build_named("cycle", 4), 4, 1),
        deflated_presentation(build_named("cycle", 4), 4, 2),
        deflated_presentation(build_named("cycle", 5), 5, 1),
        deflated_presentation(build_named("cycle", 6), 6, 1),
    ]
    for pres in cases:
        ct = todd_coxeter(pres)
        yield pres, ct


def crit_properties() -> str:
    forms = _test_forms()
    _check(all(_form_identity_exhaustive(s) for s in forms), "Q(x+y)+Q(x)+Q(y) != B(x,y) somewhere")
    _, ident = _flagship()
    quot = ident.quotient.quotient
    qs = quot.all_Q()
    for m in ident.matrices:
        _check(m @ m == type(m).identity(quot.dim), "transvection is not an involution")
        _check(all(qs[m.apply(x)] == qs[x] for x in range(1 << quot.dim)), "transvection changes Q")
    groups = 0
    for pres, ct in _corpus_groups():
        _check(ct.closed and ct.verify(pres), "corpus table fails relator tracing")
        if ct.count > 10_000:
            continue
        gens = coset_permutations(ct)
        _check(schreier_sims(gens).order() == len(brute_force_closure(gens, 10_000)), "BSGS order differs from closure")
        _check(verify_relations(gens, pres), "coset permutations fail a relator")
        groups += 1
    return f"form identity on {len(forms)} forms up to dim 12, {len(ident.matrices)} transvections, {groups} corpus groups"


CRITERIA: list[tuple[int, str, Callable[[], str], float, bool]] = [
    (1, "closure replay Y333 -> incidence(2)", crit_closure, 5.0, False),
    (2, "extension-root joins", crit_extension_roots, 1.0, False),
    (3, "quotient identification", crit_quotient, 5.0, False),
    (4, "order certificate", crit_order, 30.0, False),
    (5, "surjection relators", crit_surjection, 10.0, False),
    (6, "petersen and cube deflations", crit_table_rows, 240.0, False),
    (7, "affine sanity", crit_affine, 30.0, False),
    (8, "embedding cross-check", crit_embedding, 60.0, False),
    (9, "stretch Y555 -> incidence(3)", crit_stretch, 600.0, True),
    (10, "property suites", crit_properties, 120.0, False),
]


def run_one(number: int, **kwargs) -> CriterionResult:
    num, title, fn, budget, _ = next(c for c in CRITERIA if c[0] == number)
    t = time.perf_counter()
    try:
        detail = fn(**kwargs)
        status = PASS
    except _Fail as exc:
        detail, status = str(exc), FAIL
    except _Warn as exc:
        detail, status = str(exc), WARN
    except Exception as exc:  # any crash is a failure of that criterion
        detail, status = f"{type(exc).__name__}: {exc}", FAIL
    secs = time.perf_counter() - t
    if status == PASS and secs > budget:
        status, detail = FAIL, f"{detail}; took {secs:.1f} s, budget {budget:.0f} s"
    return CriterionResult(num, title, status, detail, secs)


def run_criteria(skip_stretch: bool = False, only: Iterable[int] | None = None) -> list[CriterionResult]:
    wanted = set(only) if only is not None else None
    out = []
    for num, title, _, _, stretch in CRITERIA:
        if wanted is not None and num not in wanted:
            continue
        if stretch and skip_stretch:
            out.append(CriterionResult(num, title, SKIP, "stretch criterion skipped"))
            continue
        out.append(run_one(num))
    return out


def format_result(r: CriterionResult) -> str:
    return f"[{r.status}] criterion {r.number}: {r.title} ({r.seconds:.2f} s) - {r.detail}"
