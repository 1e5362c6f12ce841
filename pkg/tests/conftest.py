from fractions import Fraction
from itertools import product
from pathlib import Path

import pytest
from hypothesis import strategies as st

from automeasure import MealyAutomaton, MarkovMeasure, StochasticMatrix, parse_automaton, parse_chain
from automeasure.markov import two_state_chain

FIXTURES = Path(__file__).parent / "fixtures"

AUTOMATA = {
    "odometer": "odometer.aut",
    "aleshin": "aleshin.aut",
    "bellaterra": "bellaterra.aut",
    "lamplighter": "lamplighter.aut",
    "nonreversible": "nonreversible.aut",
    "ternary": "ternary.aut",
    "ternary_modified": "ternary_modified.aut",
    "two_state_ternary": "two_state_ternary.aut",
    "prepend": "prepend.aut",
    "ternary_swap": "ternary_swap.aut",
    "identity": "identity.aut",
}

# a chain on the right alphabet for each automaton
DEFAULT_CHAIN = {
    "odometer": "markov_p1_3_q1_5.chain",
    "aleshin": "markov_p1_3_q1_5.chain",
    "bellaterra": "markov_p1_3_q1_5.chain",
    "lamplighter": "markov_p1_3_q1_5.chain",
    "nonreversible": "markov_p1_3_q1_5.chain",
    "ternary": "cyclic3.chain",
    "ternary_modified": "cyclic3.chain",
    "two_state_ternary": "bernoulli_half_quarter.chain",
    "prepend": "bernoulli_half_quarter.chain",
    "ternary_swap": "bernoulli_half_quarter.chain",
    "identity": "markov_p1_3_q1_5.chain",
}

REVERSIBLE = ["aleshin", "bellaterra", "lamplighter", "ternary_swap", "identity"]

PQ_GRID = [(Fraction(1, 3), Fraction(1, 5)), (Fraction(1, 2), Fraction(1, 2)),
           (Fraction(1, 7), Fraction(3, 4)), (Fraction(2, 3), Fraction(1, 9)),
           (Fraction(1), Fraction(1, 4)), (Fraction(5, 6), Fraction(1))]


def load(name: str) -> MealyAutomaton:
    return parse_automaton((FIXTURES / AUTOMATA[name]).read_text())


def load_chain(filename: str, A: MealyAutomaton = None) -> MarkovMeasure:
    return parse_chain((FIXTURES / filename).read_text(), A.alphabet if A else None)


def fixture_pair(name: str):
    A = load(name)
    return A, load_chain(DEFAULT_CHAIN[name], A)


def markov(p, q) -> MarkovMeasure:
    return two_state_chain(Fraction(p), Fraction(q))


def all_words(m: int, n: int):
    return product(range(m), repeat=n)


def brute_pushforward(A, g, mu, w):
    """Sum of mu over every input word of the same length whose image is ``w``."""
    total = Fraction(0)
    for u in all_words(A.m, len(w)):
        if A.act(g, u) == tuple(w):
            total += mu.cylinder(u)
    return total


# ---- hypothesis strategies

@st.composite
def automata(draw, max_states=4, max_symbols=3, min_symbols=2, invertible=None):
    m = draw(st.integers(min_symbols, max_symbols))
    n = draw(st.integers(1, max_states))
    if invertible is None:
        invertible = draw(st.booleans())
    trans = [[draw(st.integers(0, n - 1)) for _ in range(m)] for _ in range(n)]
    if invertible:
        out = [list(draw(st.permutations(range(m)))) for _ in range(n)]
    else:
        out = [[draw(st.integers(0, m - 1)) for _ in range(m)] for _ in range(n)]
    alphabet = [str(i) for i in range(m)]
    states = [f"s{i}" for i in range(n)]
    return MealyAutomaton(alphabet, states, trans, out)


def _weights(draw, m, allow_zero):
    lo = 0 if allow_zero else 1
    w = [draw(st.integers(lo, 4)) for _ in range(m)]
    w[draw(st.integers(0, m - 1))] += 1
    return [Fraction(v, sum(w)) for v in w]


@st.composite
def chains(draw, m, allow_zero=True, irreducible=True):
    """Random chain on ``m`` symbols, made irreducible by mixing in the uniform row if needed.

    With ``irreducible=False`` the chain may be reducible but keeps a single
    recurrent class so that its stationary vector is unique.
    """
    rows = [_weights(draw, m, allow_zero) for _ in range(m)]
    M = StochasticMatrix([str(i) for i in range(m)], rows)
    needs_fix = not M.is_irreducible() if irreducible else len(M.recurrent_classes()) != 1
    if needs_fix:
        rows = [[(v + Fraction(1, m)) / 2 for v in row] for row in rows]
        M = StochasticMatrix(M.labels, rows)
    return MarkovMeasure.from_matrix(M)


@st.composite
def automaton_and_chain(draw, max_states=4, max_symbols=3, invertible=None, allow_zero=True):
    A = draw(automata(max_states=max_states, max_symbols=max_symbols, invertible=invertible))
    mu = draw(chains(A.m, allow_zero=allow_zero))
    return A, mu


@pytest.fixture
def fixtures_dir():
    return FIXTURES
