from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chowlab.bounds import (JSequence, SurfaceProjectionData, e_linear_independence, k3_contact_bound,
                            last_coordinates_avoid, s_j_bound)
from chowlab.chow import chow_form, degree_of_contact

F = Fraction

descending = st.integers(2, 6).flatmap(lambda n: st.lists(
    st.builds(F, st.integers(0, 30), st.integers(1, 5)), min_size=n, max_size=n)).map(
    lambda r: sorted(r, reverse=True))


def test_contlinind_examples():
    assert e_linear_independence(2, 1, (5, 3, 0)) == 6
    assert e_linear_independence(4, 2, (0, 0, 0, 0)) == 0
    with pytest.raises(ValueError):
        e_linear_independence(1, 3, (1, 0, 0))


def test_s_j_examples():
    data = SurfaceProjectionData(2, (0, 1, 2), {(0, 1): 1, (1, 2): 2})
    assert s_j_bound((3, 1, 0), (0, 1, 2), data) == 9
    assert s_j_bound((4, 4, 4), (0, 1, 2), data) == 0
    C2 = 5
    data = SurfaceProjectionData(3, (C2, 1, 1, C2), {(0, 3): C2})
    assert s_j_bound((7, 2, 1, 0), JSequence((0, 3)), data) == 7 * 3 * C2
    with pytest.raises(ValueError):
        s_j_bound((3, 1, 0), (0, 2), SurfaceProjectionData(2, (0, 1, 2)))


def test_j_sequence_validation():
    for bad in [(1, 2), (0,), (0, 2, 2)]:
        with pytest.raises(ValueError):
            JSequence(bad)


def test_k3_examples():
    assert k3_contact_bound(3, (1, 1, 1, 0)) == 4
    assert k3_contact_bound(3, (1, 0, 0, 0)) == 2
    assert k3_contact_bound(5, (0,) * 6) == 0
    with pytest.raises(ValueError):
        k3_contact_bound(3, (1, 1, 1, 1))
    with pytest.raises(ValueError):
        k3_contact_bound(1, (1, 0))


@settings(max_examples=300, deadline=None)
@given(descending.filter(lambda r: len(r) >= 3).map(lambda r: r[:-1] + [F(0)]), st.builds(F, st.integers(1, 20), st.integers(1, 7)))
def test_k3_definitional_and_homogeneous(r, t):
    N = len(r) - 1
    b = k3_contact_bound(N, r)
    assert b <= -4 * r[0] + 6 * sum(r) and b <= 2 * (N - 1) * r[0]
    assert k3_contact_bound(N, [t * v for v in r]) == t * b


@settings(max_examples=300, deadline=None)
@given(descending, st.builds(F, st.integers(1, 20), st.integers(1, 7)), st.data())
def test_homogeneity(r, t, data):
    n = len(r)
    D = data.draw(st.integers(1, 5))
    d = data.draw(st.integers(0, n - 1))
    assert e_linear_independence(D, d, [t * v for v in r]) == t * e_linear_independence(D, d, r)
    cuts = sorted(data.draw(st.sets(st.integers(1, n - 2), max_size=n - 2)) if n > 2 else [])
    J = [0] + cuts + [n - 1]
    e = data.draw(st.lists(st.integers(0, 9), min_size=n, max_size=n))
    pairs = {(a, b): data.draw(st.integers(0, 9)) for a, b in zip(J, J[1:])}
    sd = SurfaceProjectionData(n - 1, e, pairs)
    got = s_j_bound(r, J, sd)
    assert s_j_bound([t * v for v in r], J, sd) == t * got
    # direct evaluation of the displayed sum
    assert got == sum((r[a] - r[b]) * (e[a] + pairs[(a, b)] + e[b]) for a, b in zip(J, J[1:]))
    assert got >= 0


def test_non_meeting_hypothesis(corpus):
    assert last_coordinates_avoid(corpus("conic2"), 2)
    assert last_coordinates_avoid(corpus("line"), 2)
    assert not last_coordinates_avoid(corpus("conic"), 2)
    assert not last_coordinates_avoid(corpus("twisted_cubic"), 2)


@pytest.mark.parametrize("name", ["conic2", "line"])
def test_contlinind_matches_chow_route(corpus, name):
    X = corpus(name)
    F_ = chow_form(X)
    for r in [(2, 1, 0), (9, 4, 1), (3, 3, 3), (10, 0, 0)]:
        assert e_linear_independence(F_.D, F_.d, r) == degree_of_contact(F_, r)


def test_contlinind_needs_hypothesis(corpus):
    # [1:0:0] lies on x0x2 = x1^2; polytope points (1,2,1), (2,0,2) give 4, not 2*(1+0)
    F_ = chow_form(corpus("conic"))
    assert degree_of_contact(F_, (2, 1, 0)) == 4
    assert e_linear_independence(2, 1, (2, 1, 0)) == 2
