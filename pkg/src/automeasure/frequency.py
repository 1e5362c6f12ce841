"""Asymptotic frequencies of words in the image of a generic sequence.

All functions analyse the sub-automaton reachable from the chosen state ``g``:
that part alone generates the transformation, and the frequency formulas hold
whenever it is L-strongly connected.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .automaton import MealyAutomaton, StateRef
from .errors import NotReversibleError, PreconditionError
from .markov import MarkovMeasure, reversed_chain
from .skew import SkewChain, extend_paths


@lru_cache(maxsize=256)
def _chain_for(A: MealyAutomaton, g: int, mu: MarkovMeasure) -> tuple:
    sub, gi = A.generated_by(g)
    return SkewChain(sub, mu), gi


def generated_chain(A: MealyAutomaton, g: StateRef, mu: MarkovMeasure) -> tuple:
    """``(SkewChain, g index)`` for the sub-automaton generated by ``g``."""
    return _chain_for(A, A.state_index(g), mu)


def require_L_strongly_connected(A: MealyAutomaton, g: StateRef, mu: MarkovMeasure) -> SkewChain:
    chain, _ = generated_chain(A, g, mu)
    if not chain.L_strongly_connected:
        raise PreconditionError(
            f"automaton generated by state {A.states[A.state_index(g)]} is not "
            "L-strongly connected; output frequencies are not determined by the chain"
        )
    return chain


def path_sum(chain: SkewChain, u) -> Fraction:
    """Sum over diagram paths emitting ``u`` of ``t[(s0,x0)] L[x0][x1] ... L[x_{k-2}][x_{k-1}]``."""
    A = chain.automaton
    t = chain.require_t()
    L = chain.measure.L
    m = A.m
    alpha = {}
    for s in range(A.n_states):
        for x in range(m):
            if A.output[s][x] == u[0] and t[s * m + x]:
                alpha[(s, x)] = t[s * m + x]
    for y in u[1:]:
        alpha = extend_paths(A, L, alpha, y)
        if not alpha:
            return Fraction(0)
    return Fraction(sum(alpha.values()))


def _word(A, u):
    u = A.encode(u)
    if len(u) < 1:
        raise ValueError("frequency queries need a nonempty word")
    return u


def output_word_frequency(A: MealyAutomaton, g: StateRef, mu: MarkovMeasure, u) -> Fraction:
    u = _word(A, u)
    return path_sum(require_L_strongly_connected(A, g, mu), u)


def output_letter_frequency(A: MealyAutomaton, g: StateRef, mu: MarkovMeasure, x) -> Fraction:
    return output_word_frequency(A, g, mu, (A.symbol_index(x),))


def frequency_vector(A: MealyAutomaton, g: StateRef, mu: MarkovMeasure) -> tuple:
    return tuple(output_letter_frequency(A, g, mu, x) for x in range(A.m))


def left_word_frequency(A: MealyAutomaton, g: StateRef, mu: MarkovMeasure, u) -> Fraction:
    """Frequency of ``u`` in the left half of the image of a two-sided generic sequence.

    Computed through the reverse automaton, the time-reversed chain and the
    reversed word, independently of :func:`output_word_frequency`.
    """
    u = _word(A, u)
    require_L_strongly_connected(A, g, mu)
    chain, gi = generated_chain(A, g, mu)
    sub = chain.automaton
    if not sub.is_reversible():
        raise NotReversibleError(
            f"automaton generated by state {A.states[A.state_index(g)]} is not reversible"
        )
    back = sub.reverse()
    back_mu = MarkovMeasure(reversed_chain(mu.matrix, mu.l), mu.l)
    return output_word_frequency(back, gi, back_mu, tuple(reversed(u)))


@dataclass
class FrequencyReport:
    automaton: str
    state: str
    measure: str
    frequencies: dict = field(default_factory=dict)  # decoded word -> Fraction
    L_strongly_connected: bool = True
    reversible_path_used: bool = False


def frequency_report(A: MealyAutomaton, g: StateRef, mu: MarkovMeasure, words,
                     left: bool = False, automaton_id: str = "", measure_id: str = "") -> FrequencyReport:
    chain, _ = generated_chain(A, g, mu)
    report = FrequencyReport(automaton_id, A.states[A.state_index(g)], measure_id,
                             L_strongly_connected=chain.L_strongly_connected,
                             reversible_path_used=left)
    fn = left_word_frequency if left else output_word_frequency
    for w in words:
        w = _word(A, w)
        report.frequencies[A.decode(w)] = fn(A, g, mu, w)
    return report
