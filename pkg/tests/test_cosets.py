import math
import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coxdeflate.cosets import (
    CosetError,
    CosetTable,
    Presentation,
    coset_permutations,
    coxeter_presentation,
    deflated_presentation,
    gon_relator,
    invert_word,
    reduce_word,
    rotate_gon,
    todd_coxeter,
)
from coxdeflate.diagrams import Diagram, build_incidence_graph, build_named, build_y_diagram, free_ngons
from coxdeflate.permgrp import schreier_sims, verify_relations


def orthogonal_minus_6_2():
    # full orthogonal group order 2 q^6 (q^3 + 1)(q^2 - 1)(q^4 - 1) at q = 2
    q = 2
    return q**6 * (q**3 + 1) * (q**2 - 1) * (q**4 - 1) * 2


def orthogonal_5_3_times_2():
    # 2 x |O_5(3)| with |O_5(3)| = q^4 (q^2 - 1)(q^4 - 1) / 2 at q = 3
    q = 3
    return 2 * (q**4 * (q**2 - 1) * (q**4 - 1) // 2)


S3 = Presentation(2, ((0, 0), (1, 1), (0, 1, 0, 1, 0, 1)), ("x", "y"))


def test_word_helpers():
    assert invert_word((0, ~1, 2)) == (~2, 1, ~0)
    assert reduce_word((0, 1, ~1, 2, ~2, ~0, 3)) == (3,)


def test_coxeter_presentations():
    two = Diagram.from_edges(["x", "y"], [])
    assert coxeter_presentation(two).relators == ((0, 0), (1, 1), (0, 1, 0, 1))
    assert todd_coxeter(coxeter_presentation(two)).count == 4
    edge = Diagram.from_edges(["x", "y"], [(0, 1)])
    assert todd_coxeter(coxeter_presentation(edge)).count == 6
    pres = coxeter_presentation(build_y_diagram((3, 3, 3)))
    assert pres.ngens == 10 and len(pres.relators) == 10 + math.comb(10, 2)


@pytest.mark.parametrize("arms,order", [((1, 1), 24), ((2, 2), 720), ((1, 1, 1), 192), ((2, 1, 1), 1920)])
def test_finite_coxeter_orders(arms, order):
    # A_3, A_5, D_4, D_5
    assert todd_coxeter(coxeter_presentation(build_y_diagram(arms))).count == order


def test_gon_relator_shape():
    w = gon_relator(tuple(range(8)))
    assert len(w) == 14
    assert w == (0, 7, 6, 5, 4, 3, 2, 1, 2, 3, 4, 5, 6, 7)
    assert gon_relator((0, 1, 2), 3) == (0, 2, 1, 2) * 3
    with pytest.raises(CosetError):
        gon_relator((0, 1, 2), 0)
    with pytest.raises(CosetError):
        gon_relator((0, 1))


def test_small_enumerations():
    assert todd_coxeter(S3).count == 6
    ct = todd_coxeter(S3, [(0,)])
    assert ct.count == 3 and ct.verify(S3, [(0,)])


@pytest.mark.parametrize("n,k,order", [(3, 1, 6), (4, 1, 24), (4, 2, 192), (5, 1, 120), (6, 1, 720), (8, 1, 40320)])
def test_affine_deflations(n, k, order):
    pres = deflated_presentation(build_named("cycle", n), n, k)
    ct = todd_coxeter(pres)
    assert ct.closed and ct.count == order and ct.verify(pres)


def test_biflation_structure_factor():
    assert todd_coxeter(deflated_presentation(build_named("cycle", 4), 4, 2)).count == 2**3 * math.factorial(4)


@pytest.mark.parametrize("name,oracle", [("petersen", orthogonal_minus_6_2), ("cube", orthogonal_5_3_times_2)])
def test_table_rows(name, oracle):
    assert oracle() == 51840
    pres = deflated_presentation(build_named(name), 6, 1)
    ct = todd_coxeter(pres)
    assert ct.closed and ct.count == oracle()
    assert ct.verify(pres)


def test_theorem_presentation_shape():
    d = build_incidence_graph(2)
    pres = deflated_presentation(d, 8)
    assert pres.ngens == 14
    assert len(pres.relators) == 14 + math.comb(14, 2) + len(free_ngons(d, 8))


@pytest.mark.parametrize("r", range(6))
@pytest.mark.parametrize("flip", [False, True])
def test_gon_relator_rotation_invariance(r, flip):
    d = build_named("cycle", 6)
    gon = rotate_gon(tuple(range(6)), r)
    if flip:
        gon = gon[::-1]
    pres = coxeter_presentation(d).with_relators([gon_relator(gon)])
    assert todd_coxeter(pres).count == 720


def test_capped_run():
    pres = deflated_presentation(build_named("cycle", 6), 6, 3)
    ct = todd_coxeter(pres, max_cosets=500)
    assert ct.status == "capped" and not ct.closed
    assert not ct.verify(pres)
    with pytest.raises(CosetError):
        coset_permutations(ct)
    with pytest.raises(CosetError):
        todd_coxeter(pres, max_cosets=0)


def test_infinite_group_caps():
    pres = coxeter_presentation(build_named("cycle", 4))  # affine, infinite
    assert todd_coxeter(pres, max_cosets=2000).status == "capped"


def test_verify_catches_tampering():
    pres = deflated_presentation(build_named("cycle", 4), 4)
    ct = todd_coxeter(pres)
    assert ct.verify(pres)
    bad = ct.table.copy()
    col = 0
    i, j = 0, int(bad[0, col])
    k = next(x for x in range(ct.count) if x not in (i, j))
    bad[[i, k], col] = bad[[k, i], col]
    tampered = CosetTable("closed", ct.count, ct.ngens, ct.columns, bad)
    assert not tampered.verify(pres)


def test_coset_permutations_satisfy_relators():
    pres = deflated_presentation(build_named("cycle", 5), 5)
    ct = todd_coxeter(pres)
    gens = coset_permutations(ct)
    assert verify_relations(gens, pres)
    # the trivial subgroup gives the regular action
    assert schreier_sims(gens).order() == ct.count == 120


def test_trace_handles_inverse_letters():
    ct = todd_coxeter(S3)
    for c in range(ct.count):
        assert ct.trace(c, (0, ~0)) == c
        assert ct.act(ct.act(c, 1), ~1) == c


def test_dump_load_round_trip(tmp_path):
    ct = todd_coxeter(deflated_presentation(build_named("cycle", 4), 4, 2))
    path = tmp_path / "table.bin"
    ct.dump(path)
    again = CosetTable.load(path)
    assert np.array_equal(again.table, ct.table) and again.checksum() == ct.checksum()
    raw = bytearray(path.read_bytes())
    raw[-1] ^= 1
    path.write_bytes(bytes(raw))
    with pytest.raises(CosetError):
        CosetTable.load(path)


def test_enumeration_is_deterministic():
    pres = deflated_presentation(build_named("petersen"), 6)
    a, b = todd_coxeter(pres), todd_coxeter(pres)
    assert a.checksum() == b.checksum()


def test_presentation_text_and_json():
    pres = deflated_presentation(build_named("cycle", 4), 4, 2)
    assert Presentation.from_text(pres.to_text()) == pres
    assert Presentation.from_json(pres.to_json()) == pres
    inv = Presentation.from_text("# generators: x y\nx^2\ny^-3\n")
    assert inv.relators == ((0, 0), (~1, ~1, ~1))
    with pytest.raises(CosetError):
        Presentation.from_text("# generators: x\nz\n")
    with pytest.raises(CosetError):
        Presentation(1, ((1,),))


def test_non_involutory_generators():
    # <a | a^5> has two columns (a and a^-1)
    pres = Presentation(1, ((0, 0, 0, 0, 0),), ("a",))
    ct = todd_coxeter(pres)
    assert ct.count == 5 and len(ct.columns) == 2 and ct.verify(pres)
    # dihedral of order 10 with a rotation generator
    dih = Presentation(2, ((0,) * 5, (1, 1), (1, 0, 1, 0)), ("r", "s"))
    assert todd_coxeter(dih).count == 10


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 40))
def test_cyclic_groups_property(n):
    pres = Presentation(1, ((0,) * n,))
    ct = todd_coxeter(pres)
    assert ct.count == n and ct.verify(pres)


PURE_PYTHON = """
from coxdeflate.cosets import todd_coxeter, deflated_presentation, Presentation
from coxdeflate.diagrams import build_named
from coxdeflate import _tc_kernel
assert not hasattr(_tc_kernel._enumerate, "py_func")
print(todd_coxeter(deflated_presentation(build_named("cycle", 4), 4, 2)).count)
print(todd_coxeter(deflated_presentation(build_named("cycle", 5), 5)).count)
ct = todd_coxeter(deflated_presentation(build_named("cycle", 6), 6, 3), max_cosets=300)
print(ct.status)
"""


def test_pure_python_kernel():
    env = dict(os.environ, NUMBA_DISABLE_JIT="1")
    out = subprocess.run([sys.executable, "-c", PURE_PYTHON], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.split() == ["192", "120", "capped"]
