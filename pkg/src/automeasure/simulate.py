"""Seeded Monte Carlo: sample a chain, push it through an automaton, count words."""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

import numpy as np

from .automaton import MealyAutomaton, StateRef, Word
from .frequency import output_word_frequency
from .markov import MarkovMeasure

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15
MIX1 = 0xBF58476D1CE4E5B9
MIX2 = 0x94D049BB133111EB


def mix64(z: int) -> int:
    z = ((z ^ (z >> 30)) * MIX1) & MASK64
    z = ((z ^ (z >> 27)) * MIX2) & MASK64
    return z ^ (z >> 31)


def splitmix64(x: int) -> int:
    """First output of a SplitMix64 generator seeded with ``x``."""
    return mix64((x + GOLDEN_GAMMA) & MASK64)


@dataclass
class Prng:
    """SplitMix64 generator; ``state`` is the 64-bit counter."""

    state: int

    def __post_init__(self):
        self.state &= MASK64

    def next(self) -> int:
        self.state = (self.state + GOLDEN_GAMMA) & MASK64
        return mix64(self.state)

    def draws(self, n: int) -> list:
        """The next ``n`` outputs, computed in bulk; same values as calling ``next`` n times."""
        if n <= 0:
            return []
        with np.errstate(over="ignore"):
            steps = np.arange(1, n + 1, dtype=np.uint64) * np.uint64(GOLDEN_GAMMA)
            z = steps + np.uint64(self.state)
            z = (z ^ (z >> np.uint64(30))) * np.uint64(MIX1)
            z = (z ^ (z >> np.uint64(27))) * np.uint64(MIX2)
            z = z ^ (z >> np.uint64(31))
        self.state = (self.state + n * GOLDEN_GAMMA) & MASK64
        return z.tolist()


def _thresholds(probs: Sequence[Fraction]) -> list:
    # symbol k is chosen iff draw < ceil(C_k * 2^64), where C_k is the cumulative
    # probability through k; this is the exact test u < C_k for u = draw / 2^64
    out = []
    acc = Fraction(0)
    for p in probs[:-1]:
        acc += p
        out.append(math.ceil(acc * (1 << 64)))
    return out


def sample_sequence(mu: MarkovMeasure, n: int, seed: int) -> Word:
    if n < 1:
        raise ValueError("n must be at least 1")
    draws = Prng(seed).draws(n)
    first = _thresholds(mu.l)
    rows = [_thresholds(row) for row in mu.L]
    out = [0] * n
    x = bisect.bisect_right(first, draws[0])
    out[0] = x
    for i in range(1, n):
        x = bisect.bisect_right(rows[x], draws[i])
        out[i] = x
    return tuple(out)


def run_automaton_stream(A: MealyAutomaton, g: StateRef, w: Iterable[int]) -> Iterator[int]:
    """Yield output letters one at a time, keeping only the current state."""
    s = A.state_index(g)
    trans, out = A.transition, A.output
    for x in w:
        yield out[s][x]
        s = trans[s][x]


def _occurrences(arr: np.ndarray, u: Sequence[int]) -> int:
    k = len(u)
    hits = arr[: len(arr) - k + 1] == u[0]
    for i in range(1, k):
        hits &= arr[i: len(arr) - k + 1 + i] == u[i]
    return int(hits.sum())


def empirical_frequency(w: Sequence[int], u: Sequence[int]) -> Fraction:
    if not 1 <= len(u) <= len(w):
        raise ValueError("need 1 <= |u| <= |w|")
    arr = np.asarray(w, dtype=np.int64)
    return Fraction(_occurrences(arr, u), len(w) - len(u) + 1)


@dataclass
class QueryResult:
    word: str
    empirical: Fraction
    predicted: Fraction
    deviation: Fraction
    input_empirical: Fraction


@dataclass
class SimulationReport:
    steps: int
    seed: int
    trials: int
    results: list = field(default_factory=list)

    def by_word(self) -> dict:
        return {r.word: r for r in self.results}

    def max_deviation(self) -> Fraction:
        return max((r.deviation for r in self.results), default=Fraction(0))


def monte_carlo_report(A: MealyAutomaton, g: StateRef, mu: MarkovMeasure, n: int, seed: int,
                       queries: Iterable, trials: int = 1) -> SimulationReport:
    """Compare empirical output frequencies with the exact predictions.

    Trial ``i`` uses the seed ``splitmix64(seed ^ i)``; counts are pooled over
    trials, so the empirical value has denominator ``trials * (n - |u| + 1)``.
    """
    queries = [A.encode(u) for u in queries]
    if any(not 1 <= len(u) <= n for u in queries):
        raise ValueError("query words must be nonempty and no longer than the sample")
    predicted = [output_word_frequency(A, g, mu, u) for u in queries]
    out_counts = [0] * len(queries)
    in_counts = [0] * len(queries)
    for i in range(trials):
        word = sample_sequence(mu, n, splitmix64(seed ^ i))
        image = np.fromiter(run_automaton_stream(A, g, word), dtype=np.int64, count=n)
        source = np.asarray(word, dtype=np.int64)
        for j, u in enumerate(queries):
            out_counts[j] += _occurrences(image, u)
            in_counts[j] += _occurrences(source, u)
    report = SimulationReport(n, seed, trials)
    for u, pred, c_out, c_in in zip(queries, predicted, out_counts, in_counts):
        windows = trials * (n - len(u) + 1)
        emp = Fraction(c_out, windows)
        report.results.append(
            QueryResult(A.decode(u), emp, pred, abs(emp - pred), Fraction(c_in, windows))
        )
    return report
