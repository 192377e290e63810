import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coxdeflate import gf2
from coxdeflate.gf2 import F2Matrix


def span_set(rows):
    out = {0}
    for r in rows:
        out |= {x ^ r for x in out}
    return out


def brute_rank(rows):
    return len(span_set(rows)).bit_length() - 1


vectors = st.lists(st.integers(0, (1 << 8) - 1), max_size=10)


@given(vectors)
def test_rank_matches_span_size(rows):
    assert gf2.rank(rows) == brute_rank(rows)


@given(vectors)
def test_rref_spans_same_space(rows):
    basis, pivots = gf2.rref(rows)
    assert span_set(basis) == span_set(rows)
    assert pivots == sorted(pivots)
    for b, p in zip(basis, pivots):
        assert (b & -b).bit_length() - 1 == p
        assert sum(other >> p & 1 for other in basis) == 1


@given(vectors, st.integers(0, 255))
def test_in_span(rows, v):
    assert gf2.in_span(v, rows) == (v in span_set(rows))


@given(vectors)
def test_nullspace(rows):
    ns = gf2.nullspace(rows, 8)
    assert len(ns) == 8 - gf2.rank(rows)
    for x in ns:
        assert all(gf2.parity(r & x) == 0 for r in rows)
    expect = {x for x in range(256) if all(gf2.parity(r & x) == 0 for r in rows)}
    assert span_set(ns) == expect


def test_bits_round_trip():
    assert gf2.vec_from_bits([1, 0, 1, 1]) == 0b1101
    assert gf2.vec_to_bits(0b1101, 4) == [1, 0, 1, 1]
    with pytest.raises(ValueError):
        gf2.vec_to_bits(0b10000, 4)
    assert gf2.weight(0b1011) == 3 and gf2.parity(0b1011) == 1


square = st.integers(1, 6).flatmap(lambda n: st.lists(st.integers(0, (1 << n) - 1), min_size=n, max_size=n).map(lambda r: F2Matrix(tuple(r), n)))


def to_np(m: F2Matrix) -> np.ndarray:
    return np.array(m.to_array(), dtype=np.int64)


@given(square, st.data())
def test_matmul_matches_numpy(a, data):
    rows = data.draw(st.lists(st.integers(0, (1 << a.ncols) - 1), min_size=a.ncols, max_size=a.ncols))
    b = F2Matrix(tuple(rows), a.ncols)
    assert np.array_equal(to_np(a @ b), (to_np(a) @ to_np(b)) % 2)
    x = data.draw(st.integers(0, (1 << a.ncols) - 1))
    xv = np.array(gf2.vec_to_bits(x, a.ncols))
    assert gf2.vec_to_bits(a @ x, a.nrows) == list((to_np(a) @ xv) % 2)


@given(square)
def test_inverse(a):
    if a.is_invertible():
        assert a @ a.inverse() == F2Matrix.identity(a.ncols)
        assert a.inverse() @ a == F2Matrix.identity(a.ncols)
    else:
        with pytest.raises(ValueError):
            a.inverse()


@given(square)
def test_transpose_and_json(a):
    assert np.array_equal(to_np(a.transpose()), to_np(a).T)
    assert a.transpose().transpose() == a
    assert F2Matrix.from_json(a.to_json()) == a


def test_invertible_count_gl3():
    # |GL(3,2)| = 168
    count = sum(F2Matrix(rows, 3).is_invertible() for rows in itertools.product(range(8), repeat=3))
    assert count == 168


def test_shape_errors():
    with pytest.raises(ValueError):
        F2Matrix((0b100,), 2)
    with pytest.raises(ValueError):
        F2Matrix.identity(2) @ F2Matrix.identity(3)
    with pytest.raises(ValueError):
        F2Matrix.identity(2) + F2Matrix.zeros(2, 3)
    with pytest.raises(ValueError):
        F2Matrix.identity(2).apply(0b100)
    with pytest.raises(ValueError):
        F2Matrix.from_array([[1, 0], [1]])
