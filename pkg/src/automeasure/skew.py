"""Skew-product chain on (state, symbol) pairs and the induced chain on states."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Optional, Sequence

from .automaton import MealyAutomaton
from .errors import NonUniqueStationaryError
from .markov import MarkovMeasure, StochasticMatrix, kron, stationary_vector


def pair_index(A: MealyAutomaton, s: int, x: int) -> int:
    return s * A.m + x


def check_alphabet(L: StochasticMatrix, A: MealyAutomaton):
    if tuple(L.labels) != tuple(A.alphabet):
        raise ValueError(f"alphabet mismatch: chain {L.labels} vs automaton {A.alphabet}")


def build_T(L: StochasticMatrix, A: MealyAutomaton) -> StochasticMatrix:
    """``T[(s,x),(s',x')] = L[x][x']`` when ``s' = pi(s, x)``, else 0."""
    check_alphabet(L, A)
    m = A.m
    size = A.n_states * m
    rows = []
    for s in range(A.n_states):
        for x in range(m):
            row = [Fraction(0)] * size
            t = A.transition[s][x]
            for y in range(m):
                row[t * m + y] = L.rows[x][y]
            rows.append(row)
    labels = [(s, x) for s in A.states for x in A.alphabet]
    return StochasticMatrix(labels, rows)


def build_K(l: Sequence[Fraction], A: MealyAutomaton) -> StochasticMatrix:
    """``K[s][s'] = sum of l[x] over inputs x with pi(s, x) = s'``."""
    if len(l) != A.m:
        raise ValueError("probability vector does not match the alphabet")
    rows = []
    for s in range(A.n_states):
        row = [Fraction(0)] * A.n_states
        for x in range(A.m):
            row[A.transition[s][x]] += l[x]
        rows.append(row)
    return StochasticMatrix(A.states, rows)


def is_L_strongly_connected(A: MealyAutomaton, L: StochasticMatrix) -> bool:
    return build_T(L, A).is_irreducible()


def tensor_decomposes(t: Sequence[Fraction], k: Sequence[Fraction], l: Sequence[Fraction]) -> bool:
    if len(t) != len(k) * len(l):
        raise ValueError("index sets are not compatible")
    return tuple(t) == kron(k, l)


def skew_cylinder_measure(T: StochasticMatrix, t: Sequence[Fraction], path) -> Fraction:
    """Mass of the cylinder of ``(state, symbol)`` pairs under the chain ``(T, t)``.

    Path items are labels of ``T`` (name pairs) or integer row indices.
    """
    index = {lab: i for i, lab in enumerate(T.labels)}
    idx = [p if isinstance(p, int) else index[tuple(p)] for p in path]
    if not idx:
        return Fraction(1)
    value = Fraction(t[idx[0]])
    for a, b in zip(idx, idx[1:]):
        value *= T.rows[a][b]
    return value


@dataclass(frozen=True)
class SkewChain:
    automaton: MealyAutomaton
    measure: MarkovMeasure

    def __post_init__(self):
        check_alphabet(self.measure.matrix, self.automaton)

    @cached_property
    def T(self) -> StochasticMatrix:
        return build_T(self.measure.matrix, self.automaton)

    @cached_property
    def K(self) -> StochasticMatrix:
        return build_K(self.measure.l, self.automaton)

    @cached_property
    def T_classes(self) -> list:
        return self.T.recurrent_classes()

    @cached_property
    def K_classes(self) -> list:
        return self.K.recurrent_classes()

    @cached_property
    def t(self) -> Optional[tuple]:
        """Stationary vector of ``T``, or None when it is not unique."""
        if len(self.T_classes) != 1:
            return None
        return stationary_vector(self.T)

    @cached_property
    def k(self) -> Optional[tuple]:
        if len(self.K_classes) != 1:
            return None
        return stationary_vector(self.K)

    def require_t(self) -> tuple:
        if self.t is None:
            raise NonUniqueStationaryError(self.T_classes, self.T.labels)
        return self.t

    def require_k(self) -> tuple:
        if self.k is None:
            raise NonUniqueStationaryError(self.K_classes, self.K.labels)
        return self.k

    @cached_property
    def L_strongly_connected(self) -> bool:
        return self.T.is_irreducible()

    @property
    def tensor(self) -> Optional[bool]:
        if self.t is None or self.k is None:
            return None
        return tensor_decomposes(self.t, self.k, self.measure.l)

    def t_at(self, s, x) -> Fraction:
        A = self.automaton
        return self.require_t()[pair_index(A, A.state_index(s), A.symbol_index(x))]


def extend_paths(A: MealyAutomaton, L: Sequence, alpha: dict, y: int) -> dict:
    """One step of the path-sum recursion.

    ``alpha`` maps ``(state, last input)`` to accumulated weight; the result
    keeps only continuations whose edge emits ``y``, weighted by ``L``.
    """
    nxt: dict = {}
    for (s, x), w in alpha.items():
        r = A.transition[s][x]
        row_out = A.output[r]
        Lx = L[x]
        for x2 in range(A.m):
            if row_out[x2] == y and Lx[x2]:
                key = (r, x2)
                nxt[key] = nxt.get(key, 0) + w * Lx[x2]
    return nxt
