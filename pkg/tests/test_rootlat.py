import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from coxdeflate import gf2
from coxdeflate.diagrams import build_incidence_graph, build_named, build_y_diagram, is_isomorphic
from coxdeflate.rootlat import (
    CapExceededError,
    ChainError,
    GramForm,
    NoFixpointError,
    RootVec,
    closure,
    extend_chain,
    fundamental,
    gram_from_diagram,
    ip,
    negate,
    norm,
    reflect,
    sign_fix_chain,
)

Y333 = build_y_diagram((3, 3, 3))
FORM = gram_from_diagram(Y333)
F = {lab: fundamental(FORM, Y333.index(lab)) for lab in Y333.labels}


def test_gram_form_validation():
    assert FORM.rank == 10
    m = FORM.matrix
    assert np.all(np.diag(m) == 2) and np.array_equal(m, m.T)
    assert m[Y333.index("a"), Y333.index("b1")] == -1
    with pytest.raises(ValueError):
        FORM.matrix[0, 0] = 3
    with pytest.raises(ValueError):
        GramForm([[2, -1], [0, 2]])
    with pytest.raises(ValueError):
        GramForm([[2, -2], [-2, 2]])
    with pytest.raises(ValueError):
        GramForm([[1]])


def test_root_arithmetic():
    a, b = F["a"], F["b1"]
    assert norm(a) == 2 and ip(a, b) == -1
    assert reflect(b, a) == a + b
    assert norm(reflect(b, a)) == 2
    assert reflect(reflect(b, a), a) == b
    assert negate(a).canonical() == a.coeffs
    assert (2 * a).coeffs[Y333.index("a")] == 2
    with pytest.raises(ValueError):
        reflect(a, a + a)
    with pytest.raises(ValueError):
        RootVec((1, 0), FORM)


@given(st.lists(st.sampled_from(Y333.labels), min_size=1, max_size=12))
def test_reflections_preserve_norm(word):
    r = F["a"]
    for lab in word:
        r = reflect(r, F[lab])
    assert norm(r) == 2


def chain(labels):
    return [F[x] for x in labels]


A3_CHAIN = ("d1", "c1", "b1", "a", "b2", "c2", "d2")


def test_sign_fix_keeps_fundamental_chain():
    signed = sign_fix_chain(chain(A3_CHAIN))
    assert signed == chain(A3_CHAIN)


def test_sign_fix_flips_negated_root():
    raw = chain(A3_CHAIN)
    raw[1] = negate(raw[1])
    signed = sign_fix_chain(raw)
    assert signed[1] == F["c1"]
    assert all(ip(signed[i], signed[i + 1]) == -1 for i in range(6))


def test_sign_fix_rejects_non_free():
    with pytest.raises(ChainError):
        sign_fix_chain(chain(("b1", "b2")))  # orthogonal neighbours
    with pytest.raises(ChainError):
        sign_fix_chain(chain(("b1", "a", "b2", "b3")))  # b3 touches a
    with pytest.raises(ChainError):
        sign_fix_chain([2 * F["a"], F["b1"]])  # norm 8


def test_a3_extension():
    ext = extend_chain(sign_fix_chain(chain(A3_CHAIN)))
    coeffs = dict(zip(Y333.labels, ext.coeffs))
    assert all(coeffs[x] == -1 for x in A3_CHAIN)
    assert coeffs["b3"] == coeffs["c3"] == coeffs["d3"] == 0
    joined = {lab for lab in Y333.labels if ip(ext, F[lab]) != 0}
    assert joined == {"d1", "d2", "b3"}
    assert norm(ext) == 2


def test_extend_requires_signed_chain():
    raw = chain(A3_CHAIN)
    raw[2] = negate(raw[2])
    with pytest.raises(ChainError):
        extend_chain(raw)


@pytest.fixture(scope="module")
def y333():
    return closure(Y333, 8, 14)


def test_y333_closure(y333):
    assert len(y333.nodes) == 14
    iso = is_isomorphic(y333.diagram(), build_incidence_graph(2))
    assert iso is not None
    # every representative is a root and the joins are the inner products
    reps = [c.representative for c in y333.nodes]
    for i, r in enumerate(reps):
        assert norm(r) == 2
        for j, s in enumerate(reps):
            if i != j:
                assert abs(ip(r, s)) == int(y333.joins[i, j]) or not y333.joins[i, j]
    assert not y333.joins.flags.writeable


def test_y333_relations_rank_two(y333):
    diffs = [gf2.vec_from_bits([int(x) % 2 for x in (a.array - b.array)]) for a, b in y333.relations]
    assert gf2.rank(diffs) == 2
    # the three z roots: members of one class, pairwise related
    multi = [c for c in y333.nodes if c.merged]
    assert multi
    for c in y333.nodes:
        for m in c.merged:
            assert norm(m) == 2


def test_y333_report_json(y333):
    rep = json.loads(y333.to_json())
    assert rep["node_count"] == 14 and len(rep["joins"]) == 14
    assert rep["rounds"] == y333.rounds == len(rep["round_log"])


def test_cap_exceeded():
    with pytest.raises(CapExceededError):
        closure(Y333, 8, 13)


def test_cap_below_start():
    with pytest.raises(ValueError):
        closure(Y333, 8, 5)


def test_no_fixpoint():
    with pytest.raises(NoFixpointError):
        closure(Y333, 8, 14, max_rounds=1)


def test_cycle8_closure():
    c8 = build_named("cycle", 8)
    st = closure(c8, 8, 8)
    assert len(st.nodes) == 8
    form = st.form
    pairs = {(a.canonical(), b.canonical()) for a, b in st.relations}
    for i in range(8):
        omitted = fundamental(form, i).canonical()
        ext = RootVec.of([0 if j == i else -1 for j in range(8)], form).canonical()
        assert (omitted, ext) in pairs
    # the extension root is joined exactly to the two cycle neighbours of the omitted node
    ext = RootVec.of([0] + [-1] * 7, form)
    ips = [ip(ext, fundamental(form, j)) for j in range(8)]
    assert {j for j in range(8) if abs(ips[j]) == 1} == {1, 7}
    assert ips[0] == 2  # ext = e0 - (sum of all eight), and that sum is radical


def test_y222_closes_to_petersen():
    st = closure(build_y_diagram((2, 2, 2)), 6, 10)
    assert is_isomorphic(st.diagram(), build_named("petersen")) is not None


def test_merge_policy_none_grows():
    with pytest.raises(CapExceededError):
        closure(Y333, 8, 30, merge_policy="none")
    with pytest.raises(ValueError):
        closure(Y333, 8, 14, merge_policy="eager")


def test_corrupted_gram_breaks_replay():
    m = np.array(FORM.matrix)
    m[0, 1] = m[1, 0] = 0
    st = closure(Y333, 8, 14, form=GramForm(m))
    assert len(st.nodes) != 14


def test_y555_closure():
    st = closure(build_y_diagram((5, 5, 5)), 12, 26)
    assert len(st.nodes) == 26
    assert is_isomorphic(st.diagram(), build_incidence_graph(3)) is not None
