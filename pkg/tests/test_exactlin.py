import numpy as np
import pytest
import sympy
from hypothesis import given, settings, strategies as st

from helpers import cofactor_det, gf_rank
from perforated import exactlin as el
from perforated.exactlin import FieldSpec

GF2, GF5, QQ = FieldSpec.gf(2), FieldSpec.gf(5), FieldSpec.rational()


def test_field_spec_validation():
    with pytest.raises(ValueError):
        FieldSpec.gf(4)
    assert FieldSpec.from_json(GF5.to_json()) == GF5
    assert GF5.scalar("1/2") == 3
    assert QQ.scalar("-6/4") == QQ.scalar("-3/2")


def test_rref_identity_and_zero():
    r = el.rref(QQ, QQ.eye(3))
    assert r.rank == 3 and np.array_equal(r.reduced, QQ.eye(3))
    assert el.rref(GF2, GF2.zeros((2, 3))).rank == 0


def test_rref_gf2_all_ones():
    assert el.rref(GF2, GF2.asarray([[1, 1], [1, 1]])).rank == 1


def test_kernel_examples():
    assert el.kernel(QQ, QQ.eye(3)).shape == (3, 0)
    assert el.kernel(GF5, GF5.zeros((3, 3))).shape == (3, 3)
    k = el.kernel(GF2, GF2.asarray([[1, 1]]))
    assert k.shape == (2, 1) and list(k[:, 0]) == [1, 1]


def test_solve_right_examples():
    b = QQ.asarray([[1, "2/3"], [0, 5]])
    assert np.array_equal(el.solve_right(QQ, QQ.eye(2), b), b)
    assert el.solve_right(GF5, GF5.zeros((2, 2)), GF5.asarray([[1], [0]])) is None
    x = el.solve_right(QQ, QQ.asarray([[1, 1], [0, 0]]), QQ.asarray([[1], [0]]))
    assert [int(v) for v in x[:, 0]] == [1, 0]
    with pytest.raises(ValueError):
        el.solve_right(QQ, QQ.eye(2), QQ.zeros((3, 1)))


def test_int_det_examples():
    assert el.int_det([[1, 0], [0, 1]]) == 1
    assert el.int_det([[0, 1], [1, 0]]) == -1
    assert el.int_det([[2, 1], [1, 2]]) == 3 == cofactor_det([[2, 1], [1, 2]])
    with pytest.raises(ValueError):
        el.int_det([[1, 2, 3], [4, 5, 6]])


def _matrix(p):
    return st.integers(1, 5).flatmap(lambda r: st.integers(1, 5).flatmap(
        lambda c: st.lists(st.lists(st.integers(0, p - 1), min_size=c, max_size=c), min_size=r, max_size=r)))


@settings(max_examples=60, deadline=None)
@given(_matrix(5))
def test_rank_nullity_and_oracle_gf5(rows):
    m = GF5.asarray(rows)
    k = el.kernel(GF5, m)
    assert el.rank(GF5, m) + k.shape[1] == m.shape[1]
    assert el.rank(GF5, m) == gf_rank(rows, 5)
    assert not np.any(GF5.matmul(m, k))


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 4).flatmap(lambda r: st.lists(
    st.lists(st.integers(-4, 4), min_size=4, max_size=4), min_size=r, max_size=r)))
def test_rref_transform_rational(rows):
    m = QQ.asarray(rows)
    r = el.rref(QQ, m)
    assert np.array_equal(QQ.matmul(r.transform, m), r.reduced)
    assert el.rank(QQ, r.transform) == m.shape[0]
    assert r.rank == sympy.Matrix(rows).rank() == len(r.pivots)


@settings(max_examples=40, deadline=None)
@given(_matrix(2), st.data())
def test_solve_right_consistency_gf2(rows, data):
    a = GF2.asarray(rows)
    x0 = GF2.asarray(data.draw(st.lists(st.integers(0, 1), min_size=a.shape[1], max_size=a.shape[1])))
    b = GF2.matmul(a, x0.reshape(-1, 1))
    x = el.solve_right(GF2, a, b)
    assert x is not None and np.array_equal(GF2.matmul(a, x), b)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 5).flatmap(lambda n: st.lists(
    st.lists(st.integers(-6, 6), min_size=n, max_size=n), min_size=n, max_size=n)))
def test_int_det_matches_cofactor(rows):
    assert el.int_det(rows) == cofactor_det(rows) == int(sympy.Matrix(rows).det())
