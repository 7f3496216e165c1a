import random

import pytest
from hypothesis import given, settings, strategies as st

from glgray.gf import make_field
from glgray.matgroup import (RankDeficient, RowOp, add_row, all_invertible, apply, apply_all, format_matrix,
                             format_op, group_order, identity, inverse_op, is_invertible, kernel_vector, mat_inv,
                             mat_mul, mul_row, op_between, op_matrix, ops_set, parse_matrix, parse_op, rank, zero)
from glgray.transitions import TransitionGraph, complete_graph, path_graph

from conftest import random_invertible


def test_apply_examples():
    f = make_field(3)
    I = identity(2)
    assert apply(f, add_row(1, 2, "+"), I) == ((1, 0), (1, 1))
    assert apply(f, mul_row(1, "*"), I) == ((2, 0), (0, 1))


def test_apply_is_left_multiplication(rng):
    for q in (2, 3, 4, 5):
        f = make_field(q)
        for op in ops_set(complete_graph(3), f):
            X = random_invertible(q, 3, rng)
            assert apply(f, op, X) == mat_mul(f, op_matrix(f, op, 3), X)


def test_inverse_op_undoes(rng):
    for q in (2, 3, 4, 7):
        f = make_field(q)
        X = random_invertible(q, 3, rng)
        for op in ops_set(complete_graph(3), f):
            assert apply(f, inverse_op(op, q), apply(f, op, X)) == X


def test_ops_set_small_cases():
    f2, f3, f5 = make_field(2), make_field(3), make_field(5)
    ops = ops_set(complete_graph(2), f2)
    assert len(ops) == 2
    assert {(o.i, o.j) for o in ops} == {(1, 2), (2, 1)}
    assert ops_set(TransitionGraph(1, frozenset()), f5) == [mul_row(1, "*"), mul_row(1, "/")]
    ops = ops_set(complete_graph(2), f3)
    assert len(ops) == 8
    # over F_3, alpha = alpha^-1 so M i * and M i / act identically
    assert apply(f3, mul_row(1, "*"), identity(2)) == apply(f3, mul_row(1, "/"), identity(2))
    assert ops[-1] == RowOp("M", 2, 0, "/")


@pytest.mark.parametrize("n,q,order", [(1, 2, 1), (2, 2, 6), (2, 3, 48), (3, 2, 168), (3, 3, 11232),
                                        (4, 2, 20160), (2, 9, 5760), (5, 2, 9999360)])
def test_group_order(n, q, order):
    assert group_order(n, q) == order


@pytest.mark.parametrize("n,q", [(1, 5), (2, 2), (2, 3), (3, 2)])
def test_group_order_by_count(n, q):
    assert len(all_invertible(make_field(q), n)) == group_order(n, q)


def test_invertibility():
    f2 = make_field(2)
    assert is_invertible(f2, identity(3))
    assert not is_invertible(f2, zero(3))
    assert not is_invertible(f2, ((1, 1), (1, 1)))
    assert rank(f2, ((1, 1), (1, 1))) == 1


def test_kernel_vector_examples():
    f2, f3 = make_field(2), make_field(3)
    assert kernel_vector(f2, [(1, 0, 0), (0, 1, 0)]) == (0, 0, 1)
    assert kernel_vector(f3, [(1, 1)]) == (1, 2)
    assert kernel_vector(f2, [(1, 1, 0), (0, 0, 1)]) == (1, 1, 0)
    with pytest.raises(RankDeficient):
        kernel_vector(f2, [(1, 1, 0), (1, 1, 0)])


def test_kernel_vector_normalised(rng):
    for q in (3, 4, 5, 7):
        f = make_field(q)
        for _ in range(30):
            X = random_invertible(q, 4, rng)
            u = kernel_vector(f, X[:-1])
            assert u[next(k for k, x in enumerate(u) if x)] == 1
            for r in X[:-1]:
                s = 0
                for a, b in zip(r, u):
                    s = f.add(s, f.mul(a, b))
                assert s == 0


def test_mat_inv(rng):
    for q in (2, 3, 4, 8, 9):
        f = make_field(q)
        X = random_invertible(q, 3, rng)
        assert mat_mul(f, X, mat_inv(f, X)) == identity(3)


def test_op_between():
    f = make_field(5)
    ops = ops_set(path_graph(3), f)
    X = identity(3)
    for op in ops:
        Y = apply(f, op, X)
        found = op_between(f, X, Y, ops)
        assert found is not None and apply(f, found, X) == Y
    two = apply_all(f, [add_row(1, 2), add_row(2, 3)], X)
    assert op_between(f, X, two, ops) is None


def test_text_formats():
    assert format_matrix(((1, 0), (2, 1))) == "1,0;2,1"
    assert parse_matrix("1,0;2,1") == ((1, 0), (2, 1))
    with pytest.raises(ValueError):
        parse_matrix("1,0;2", 3)
    with pytest.raises(ValueError):
        parse_matrix("1,0;3,1", 3)
    for text in ("A 1 2 +", "A 3 1 -", "M 2 *", "M 1 /"):
        assert format_op(parse_op(text)) == text
    for bad in ("A 1 2", "M 1 x", "B 1 2 +", ""):
        with pytest.raises(ValueError):
            parse_op(bad)


@settings(max_examples=100, deadline=None)
@given(st.sampled_from([2, 3, 4, 5, 7, 8, 9]), st.integers(1, 4), st.integers(0, 2**32))
def test_matrix_text_roundtrip(q, n, seed):
    X = random_invertible(q, n, random.Random(seed))
    assert parse_matrix(format_matrix(X), q) == X
