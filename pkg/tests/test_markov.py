from fractions import Fraction as F
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from automeasure import (
    MarkovMeasure,
    NonUniqueStationaryError,
    ParseError,
    PreconditionError,
    StochasticMatrix,
    bernoulli,
    cylinder_measure,
    format_chain,
    is_non_atomic,
    parse_chain,
    parse_rational,
    reversed_chain,
    stationary_vector,
)
from automeasure.markov import is_forbidden, max_cylinder_mass, solve_exact

from conftest import FIXTURES, chains, markov

CYCLIC = StochasticMatrix(["1", "2", "3"], [[F(1, 2), F(1, 2), 0], [0, F(1, 2), F(1, 2)], [F(1, 2), 0, F(1, 2)]])


def test_parse_rational():
    assert parse_rational("3/8") == F(3, 8)
    assert parse_rational("-2") == -2
    assert parse_rational(F(1, 3)) == F(1, 3)
    with pytest.raises(ValueError):
        parse_rational("0.5")
    with pytest.raises(ValueError):
        parse_rational("1/0")


def test_stationary_two_state():
    mu = markov(F(1, 3), F(1, 5))
    assert stationary_vector(mu.matrix) == (F(3, 8), F(5, 8))
    assert stationary_vector(StochasticMatrix(["x"], [[1]])) == (F(1),)


def test_stationary_nonunique_lists_classes():
    M = StochasticMatrix(["0", "1", "2"], [[1, 0, 0], [0, 1, 0], [F(1, 2), F(1, 2), 0]])
    with pytest.raises(NonUniqueStationaryError) as info:
        stationary_vector(M)
    assert info.value.classes == [[0], [1]]


def test_stationary_reducible_single_class():
    M = StochasticMatrix(["0", "1", "2"], [[F(1, 2), F(1, 2), 0], [1, 0, 0], [F(1, 3), F(1, 3), F(1, 3)]])
    assert stationary_vector(M) == (F(2, 3), F(1, 3), 0)


def test_matrix_validation():
    with pytest.raises(ValueError):
        StochasticMatrix(["0", "1"], [[F(1, 2), F(1, 3)], [0, 1]])
    with pytest.raises(ValueError):
        StochasticMatrix(["0", "1"], [[F(3, 2), F(-1, 2)], [0, 1]])
    with pytest.raises(PreconditionError):
        MarkovMeasure(markov(F(1, 3), F(1, 5)).matrix, (F(1, 2), F(1, 2)))


def test_irreducibility():
    assert CYCLIC.is_irreducible()
    assert not StochasticMatrix(["0", "1"], [[1, 0], [0, 1]]).is_irreducible()
    assert StochasticMatrix(["0", "1"], [[F(1, 4), F(3, 4)], [F(1, 2), F(1, 2)]]).is_irreducible()


def test_cylinder_examples():
    mu = markov(F(1, 3), F(1, 5))
    assert mu.cylinder((0, 0)) == F(1, 4)
    assert mu.cylinder(()) == 1
    cyc = MarkovMeasure.from_matrix(CYCLIC)
    assert cyc.cylinder((0, 2)) == 0
    assert is_forbidden(CYCLIC, (0, 2, 1))
    assert not is_forbidden(CYCLIC, (2,))
    assert bernoulli(["1", "2", "3"], ["1/2", "1/4", "1/4"]).cylinder((1, 1)) == F(1, 16)
    uni = bernoulli(["0", "1"], ["1/2", "1/2"])
    assert all(uni.cylinder(w) == F(1, 8) for w in product(range(2), repeat=3))


def test_atoms():
    assert is_non_atomic(MarkovMeasure.from_matrix(CYCLIC))
    assert not is_non_atomic(bernoulli(["0", "1"], [1, 0]))
    # a deterministic 2-cycle carries two atoms
    flip = MarkovMeasure(StochasticMatrix(["0", "1"], [[0, 1], [1, 0]]), (F(1, 2), F(1, 2)))
    assert not is_non_atomic(flip)
    assert is_non_atomic(markov(F(1, 3), F(1, 5)))


def test_reversed_chain_examples():
    mu = markov(F(1, 3), F(1, 5))
    assert reversed_chain(mu.matrix, mu.l).rows == mu.matrix.rows
    cyc = MarkovMeasure.from_matrix(CYCLIC)
    R = reversed_chain(CYCLIC, cyc.l)
    assert [list(r) for r in R.rows] == [list(c) for c in zip(*CYCLIC.rows)]
    with pytest.raises(PreconditionError):
        reversed_chain(CYCLIC, (F(1, 2), F(1, 2), 0))


def test_solve_exact_inconsistent():
    with pytest.raises(ValueError):
        solve_exact([[F(1), F(1)], [F(1), F(1)]], [F(1), F(2)])


def test_parse_chain_fixture_and_errors():
    mu = parse_chain((FIXTURES / "cyclic3.chain").read_text())
    assert mu.l == (F(1, 3),) * 3
    with pytest.raises(ParseError, match="line 3"):
        parse_chain("alphabet 0 1\nrow 0 1/2 1/2\nrow 1 1/2 1/3\n")
    with pytest.raises(ParseError, match="not stationary"):
        parse_chain("alphabet 0 1\nrow 0 1/2 1/2\nrow 1 1/2 1/2\ninit 1/3 2/3\n")
    with pytest.raises(ParseError, match="0.5"):
        parse_chain("alphabet 0 1\nrow 0 0.5 0.5\nrow 1 1/2 1/2\n")
    with pytest.raises(ParseError, match="missing row"):
        parse_chain("alphabet 0 1\nrow 0 1/2 1/2\n")
    with pytest.raises(NonUniqueStationaryError):
        parse_chain("alphabet 0 1\nrow 0 1 0\nrow 1 0 1\n")


def test_parse_chain_reorders_to_alphabet():
    mu = parse_chain("alphabet 1 0\nrow 1 4/5 1/5\nrow 0 1/3 2/3\n", ["0", "1"])
    assert mu.L == markov(F(1, 3), F(1, 5)).L
    with pytest.raises(ParseError):
        parse_chain("alphabet 1 0\nrow 1 4/5 1/5\nrow 0 1/3 2/3\n", ["0", "2"])


# ---- properties

@given(st.integers(2, 3).flatmap(lambda m: chains(m)))
def test_stationary_exact(mu):
    assert mu.matrix.is_stationary(mu.l)
    assert sum(mu.l) == 1


@settings(max_examples=40)
@given(st.integers(2, 3).flatmap(lambda m: chains(m)))
def test_additivity_and_shift_invariance(mu):
    m = len(mu.l)
    for n in range(5):
        for w in product(range(m), repeat=n):
            c = cylinder_measure(mu, w)
            assert sum(cylinder_measure(mu, w + (x,)) for x in range(m)) == c
            assert sum(cylinder_measure(mu, (x,) + w) for x in range(m)) == c


@given(st.integers(2, 3).flatmap(lambda m: chains(m, allow_zero=False)))
def test_reversed_chain_involution(mu):
    R = reversed_chain(mu.matrix, mu.l)
    assert R.is_stationary(mu.l)
    assert reversed_chain(R, mu.l).rows == mu.matrix.rows


@given(st.integers(2, 3).flatmap(lambda m: chains(m)))
def test_format_parse_round_trip(mu):
    back = parse_chain(format_chain(mu))
    assert back == mu


@settings(max_examples=60)
@given(st.integers(2, 3).flatmap(lambda m: chains(m, irreducible=False)))
def test_atoms_against_cylinder_decay(mu):
    # an atom keeps some cylinder mass bounded below; otherwise at most m - 1
    # probability-one steps separate factors that are at most 5/6 here
    m = len(mu.l)
    n = 3 * m + 24
    big = max_cylinder_mass(mu, n)
    if is_non_atomic(mu):
        assert big <= F(5, 6) ** ((n - 1) // m)
    else:
        # the atom sits on a probability-one cycle reached in fewer than m steps
        smallest = min(v for row in mu.L for v in row if v)
        assert big >= min(v for v in mu.l if v) * smallest ** m
