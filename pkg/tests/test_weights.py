from __future__ import annotations

import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chowlab.linalg import rank
from chowlab.weights import (NEG_INF, Dual, DirectSum, NotSurjectiveError, Quotient, Restriction, Sym,
                             Tensor, Wedge, WeightFunction, determinant_line_weight, dual_weight,
                             induced_weight, integer_approximation, quotient_weight, tensor_matrix_weight,
                             weight_of_vector)

from conftest import vectors, weight_functions

F = Fraction


def W(r, basis=None):
    w = WeightFunction.diagonal(r)
    return w if basis is None else WeightFunction(basis, w.weights)


# -- oracle: quotient weight as the least alpha with x in F^alpha + F ---------


def quotient_oracle(w, subspace, x):
    sub = [list(v) for v in subspace if any(v)]
    for alpha in sorted(set(w.weights)):
        span = sub + w.filtration(alpha)
        if span and rank(span + [list(x)]) == rank(span):
            return alpha
    raise AssertionError("x not in the whole space")


# -- worked examples -----------------------------------------------------------


def test_weight_of_vector_examples():
    assert weight_of_vector(W((2, 1, 0)), [0, 0, 0]) == NEG_INF
    assert weight_of_vector(W((2, 1, 0)), [0, 5, 3]) == 1
    w = WeightFunction(((1, 1), (0, 1)), (2, 1))
    assert weight_of_vector(w, [1, 1]) == 1


def test_quotient_examples():
    w = W((2, 1))
    assert quotient_weight(w, [[1, 1]], [0, 1]) == 1
    assert quotient_weight(W((3, 2, 0)), [], [0, 1, 0]) == weight_of_vector(W((3, 2, 0)), [0, 1, 0])
    assert quotient_weight(W((3, 2, 0)), [[1, 0, -1]], [1, 0, 0]) == 0
    with pytest.raises(ValueError):
        quotient_weight(w, [[1, 1]], [2, 2])


def test_dual_examples():
    assert dual_weight(W((2, 1)), [1, 0]) == -2
    assert dual_weight(W((3, 1, 0)), [0, 0, 1]) == 0
    assert dual_weight(W((5, 2, 1)), [0, 0, 1]) == -1
    assert dual_weight(W((3, 1, 0)), [1, 1, 1]) == 0
    with pytest.raises(ValueError):
        dual_weight(W((1, 0)), [0, 0])


def test_induced_examples():
    w = W((3, 1, 0))
    assert induced_weight(Sym(w, 3), (2, 1, 0)) == 7
    w5, w2 = W((5, 0)), W((2, 0))
    assert induced_weight(DirectSum(w5, w2), ([1, 0], [1, 0])) == 5
    assert induced_weight(Wedge(W((2, 1, 0)), 2), [[0, 1, 0], [0, 0, 1]]) == 1
    assert induced_weight(Tensor(w5, w2), ([1, 0], [1, 1])) == 7
    assert induced_weight(Restriction(W((2, 1, 0)), ((0, 1, 0), (0, 0, 1))), (1, 1)) == 1
    assert induced_weight(Quotient(W((2, 1)), ((1, 1),)), (0, 1)) == 1
    assert induced_weight(Dual(W((2, 1))), (1, 0)) == -2


def test_determinant_line_examples():
    # Sym^2 of a plane with r = (1, 0): monomials x0^2, x0x1, x1^2 of weights 2, 1, 0
    images = [{0: 1}, {1: 1}, {2: 1}]
    assert determinant_line_weight([2, 1, 0], images, 3) == 3
    with pytest.raises(NotSurjectiveError):
        determinant_line_weight([0, 0], [{0: 1}, {0: 2}], 2)


def test_integer_approximation_examples():
    m, wt = integer_approximation(W((F(1, 2), F(1, 3), 0)), F(1, 10))
    assert m == 6 and wt.weights == (3, 2, 0)
    m, wt = integer_approximation(W((4, 2, 1)), F(1, 3))
    assert m == 1 and wt.weights == (4, 2, 1)
    m, wt = integer_approximation(W((1, F(1, 7), 0)), F(1, 100))
    assert m == 7 and wt.weights == (7, 1, 0)
    with pytest.raises(ValueError):
        integer_approximation(W((1, 0)), 0)


def test_normalization_sorts_and_permutes():
    w, perm = WeightFunction.normalized([0, 2, 1])
    assert w.weights == (2, 1, 0) and perm == (1, 2, 0)
    assert w.column(0) == [0, 1, 0]
    with pytest.raises(ValueError):
        WeightFunction.diagonal((0, 1))


# -- properties ----------------------------------------------------------------


@settings(max_examples=200, deadline=None)
@given(weight_functions(), st.data())
def test_axioms(w, data):
    n = w.dim
    x = data.draw(vectors(n))
    y = data.draw(vectors(n))
    t = data.draw(st.builds(Fraction, st.integers(1, 9), st.integers(1, 5)) | st.builds(
        Fraction, st.integers(-9, -1), st.integers(1, 5)))
    wx = weight_of_vector(w, x)
    assert (wx == NEG_INF) == (not any(x))
    assert weight_of_vector(w, [t * v for v in x]) == wx
    s = [a + b for a, b in zip(x, y)]
    assert weight_of_vector(w, s) <= max(wx, weight_of_vector(w, y))


@settings(max_examples=150, deadline=None)
@given(weight_functions(n_min=2), st.data())
def test_filtration_nested_subspaces(w, data):
    a = data.draw(st.sampled_from(w.weights))
    b = data.draw(st.sampled_from(w.weights))
    a, b = min(a, b), max(a, b)
    Fa, Fb = w.filtration(a), w.filtration(b)
    assert Fa and rank(Fb + Fa) == rank(Fb)
    # every vector of F^a has weight <= a
    for v in Fa:
        assert weight_of_vector(w, v) <= a


@settings(max_examples=200, deadline=None)
@given(weight_functions(n_min=2), st.data())
def test_quotient_matches_filtration_oracle(w, data):
    n = w.dim
    k = data.draw(st.integers(0, n - 1))
    sub = [data.draw(vectors(n)) for _ in range(k)]
    x = data.draw(vectors(n))
    if rank(sub + [x]) == rank(sub):
        return  # zero class
    assert quotient_weight(w, sub, x) == quotient_oracle(w, sub, x)


@settings(max_examples=200, deadline=None)
@given(weight_functions(), st.data())
def test_dual_matches_oracle(w, data):
    h = data.draw(vectors(w.dim).filter(any))
    k = next(i for i, v in enumerate(h) if v)
    x = [F(int(i == k)) / h[k] for i in range(w.dim)]
    kernel = [[F(int(i == j)) - (h[j] / h[k] if i == k else 0) for i in range(w.dim)]
              for j in range(w.dim) if j != k]
    assert dual_weight(w, h) == -quotient_oracle(w, kernel, x)


@settings(max_examples=200, deadline=None)
@given(weight_functions(), weight_functions(), st.data())
def test_sum_max_and_tensor_additivity(w1, w2, data):
    e1 = data.draw(vectors(w1.dim).filter(any))
    e2 = data.draw(vectors(w2.dim).filter(any))
    a, b = weight_of_vector(w1, e1), weight_of_vector(w2, e2)
    assert induced_weight(DirectSum(w1, w2), (e1, e2)) == max(a, b)
    assert induced_weight(Tensor(w1, w2), (e1, e2)) == a + b
    outer = [[u * v for v in e2] for u in e1]
    assert tensor_matrix_weight(Tensor(w1, w2), outer) == a + b


@settings(max_examples=200, deadline=None)
@given(weight_functions(), st.builds(Fraction, st.integers(1, 20), st.integers(1, 20)), st.data())
def test_integer_approximation_sandwich(w, eps, data):
    m, wt = integer_approximation(w, eps)
    assert all(v.denominator == 1 for v in wt.weights)
    assert wt.basis == w.basis
    for j in range(w.dim):
        col = w.column(j)
        assert m * w(col) <= wt(col) <= m * (1 + eps) * w(col)
    x = data.draw(vectors(w.dim).filter(any))
    assert m * w(x) <= wt(x) <= m * (1 + eps) * w(x)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**6))
def test_determinant_line_tie_independence(seed):
    rng = random.Random(seed)
    n = rng.randint(2, 6)
    q = rng.randint(1, 3)
    weights = [rng.randint(0, 2) for _ in range(n)]
    images = [{i: F(rng.randint(-2, 2)) for i in range(q)} for _ in range(n)]
    images = [{k: v for k, v in im.items() if v} for im in images]
    if rank([[im.get(i, 0) for i in range(q)] for im in images]) < q:
        return
    base = determinant_line_weight(weights, images, q)
    order = list(range(n))
    rng.shuffle(order)
    assert determinant_line_weight([weights[k] for k in order], [images[k] for k in order], q) == base
    # brute-force minimum-weight basis
    best = min(sum(weights[k] for k in S) for S in itertools.combinations(range(n), q)
               if rank([[images[k].get(i, 0) for i in range(q)] for k in S]) == q)
    assert base == best


def test_wedge_of_general_vectors():
    w = W((2, 1, 0))
    # (e0 + e2) ^ e1 has a nonzero minor on {0, 1}
    assert induced_weight(Wedge(w, 2), [[1, 0, 1], [0, 1, 0]]) == 3
    with pytest.raises(ValueError):
        induced_weight(Wedge(w, 2), [[1, 0, 0], [2, 0, 0]])
