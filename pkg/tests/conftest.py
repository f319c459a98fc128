from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import strategies as st

from chowlab import load_corpus
from chowlab.poly import Poly, Ring

small_fractions = st.builds(Fraction, st.integers(-6, 6), st.integers(1, 4))


def polys(ring: Ring, max_terms: int = 5, max_exp: int = 3):
    mono = st.tuples(*[st.integers(0, max_exp) for _ in range(ring.ngens)])
    return st.dictionaries(mono, small_fractions, max_size=max_terms).map(
        lambda d: Poly(ring, d))


@pytest.fixture(scope="session")
def corpus():
    cache: dict = {}

    def get(name):
        if name not in cache:
            cache[name] = load_corpus(name)
        return cache[name]
    return get


def _invertible(n: int, entries):
    from chowlab.linalg import determinant
    return st.lists(st.lists(entries, min_size=n, max_size=n), min_size=n, max_size=n).filter(
        lambda M: determinant(M) != 0)


def weight_functions(n_min: int = 1, n_max: int = 4, diagonal: bool = False):
    """Random WeightFunction: invertible small-integer basis, descending rational weights."""
    from chowlab.weights import WeightFunction

    def build(n):
        weights = st.lists(st.builds(Fraction, st.integers(0, 12), st.integers(1, 3)),
                           min_size=n, max_size=n).map(lambda r: tuple(sorted(r, reverse=True)))
        if diagonal:
            return weights.map(WeightFunction.diagonal)
        return st.builds(WeightFunction, _invertible(n, st.integers(-2, 2)), weights)
    return st.integers(n_min, n_max).flatmap(build)


def vectors(n: int):
    return st.lists(small_fractions, min_size=n, max_size=n)


acceptance_key = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[acceptance_key] = []


@pytest.fixture
def record_criterion(request):
    def record(line: str) -> None:
        request.config.stash[acceptance_key].append(line)
    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(acceptance_key, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda l: int(l.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
