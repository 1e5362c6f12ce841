"""Exact stochastic matrices and shift-invariant Markov measures.

Every probability is a :class:`fractions.Fraction`; nothing in this module
touches floating point.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from . import graph
from .errors import NonUniqueStationaryError, ParseError, PreconditionError

_RATIONAL = re.compile(r"^[+-]?\d+(/\d+)?$")


def parse_rational(token) -> Fraction:
    """Parse ``a/b`` or an integer. Decimal notation is rejected on purpose."""
    if isinstance(token, Fraction):
        return token
    if isinstance(token, int):
        return Fraction(token)
    token = str(token).strip()
    if not _RATIONAL.match(token):
        raise ValueError(f"not an exact rational: {token!r} (use a/b or an integer)")
    try:
        return Fraction(token)
    except ZeroDivisionError:
        raise ValueError(f"zero denominator in {token!r}") from None


def format_rational(q: Fraction) -> str:
    return str(Fraction(q))


def check_probability_vector(v: Sequence[Fraction], what: str = "vector") -> tuple:
    v = tuple(Fraction(x) for x in v)
    if any(x < 0 for x in v):
        raise ValueError(f"{what} has a negative entry")
    if sum(v) != 1:
        raise ValueError(f"{what} sums to {sum(v)}, not 1")
    return v


@dataclass(frozen=True)
class StochasticMatrix:
    labels: tuple
    rows: tuple

    def __post_init__(self):
        rows = tuple(tuple(Fraction(x) for x in r) for r in self.rows)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "labels", tuple(self.labels))
        n = len(rows)
        if len(self.labels) != n:
            raise ValueError("need one label per row")
        for i, r in enumerate(rows):
            if len(r) != n:
                raise ValueError(f"row {self.labels[i]} has {len(r)} entries, expected {n}")
            if any(x < 0 for x in r):
                raise ValueError(f"row {self.labels[i]} has a negative entry")
            if sum(r) != 1:
                raise ValueError(f"row {self.labels[i]} sums to {sum(r)}, not 1")

    @property
    def size(self) -> int:
        return len(self.rows)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def support(self) -> list:
        """Adjacency lists of the positive-entry digraph."""
        return [[j for j, x in enumerate(r) if x > 0] for r in self.rows]

    def is_irreducible(self) -> bool:
        return graph.is_strongly_connected(self.support())

    def recurrent_classes(self) -> list:
        return graph.closed_components(self.support())

    def stationary_vector(self) -> tuple:
        return stationary_vector(self)

    def is_stationary(self, v: Sequence[Fraction]) -> bool:
        n = self.size
        return all(sum(v[i] * self.rows[i][j] for i in range(n)) == v[j] for j in range(n))


def solve_exact(a: list, b: list) -> list:
    """Solve ``a x = b`` over the rationals by Gauss-Jordan elimination.

    ``a`` may have more rows than columns as long as the system is consistent
    and of full column rank; anything else raises ``ValueError``.
    """
    rows = len(a)
    cols = len(a[0]) if rows else 0
    aug = [[Fraction(x) for x in a[i]] + [Fraction(b[i])] for i in range(rows)]
    pivot_row = 0
    pivots = []
    for c in range(cols):
        p = next((r for r in range(pivot_row, rows) if aug[r][c] != 0), None)
        if p is None:
            continue
        aug[pivot_row], aug[p] = aug[p], aug[pivot_row]
        inv = 1 / aug[pivot_row][c]
        aug[pivot_row] = [x * inv for x in aug[pivot_row]]
        for r in range(rows):
            if r != pivot_row and aug[r][c] != 0:
                f = aug[r][c]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[pivot_row])]
        pivots.append(c)
        pivot_row += 1
    if len(pivots) < cols:
        raise ValueError("system is singular")
    if any(aug[r][cols] != 0 for r in range(pivot_row, rows)):
        raise ValueError("system is inconsistent")
    x = [Fraction(0)] * cols
    for r, c in enumerate(pivots):
        x[c] = aug[r][cols]
    return x


def stationary_vector(M: StochasticMatrix) -> tuple:
    """Unique probability vector ``v`` with ``v M = v``.

    Requires exactly one recurrent class; transient coordinates come out zero.
    """
    classes = M.recurrent_classes()
    if len(classes) != 1:
        raise NonUniqueStationaryError(classes, M.labels)
    n = M.size
    # (M^T - I) v = 0 together with sum(v) = 1
    a = [[M.rows[i][j] - (1 if i == j else 0) for i in range(n)] for j in range(n)]
    a.append([Fraction(1)] * n)
    b = [Fraction(0)] * n + [Fraction(1)]
    v = tuple(solve_exact(a, b))
    assert M.is_stationary(v) and sum(v) == 1
    return v


def is_irreducible(M: StochasticMatrix) -> bool:
    return M.is_irreducible()


@dataclass(frozen=True)
class MarkovMeasure:
    """Shift-invariant Markov measure given by ``L`` and a stationary ``l``."""

    matrix: StochasticMatrix
    initial: tuple

    def __post_init__(self):
        l = check_probability_vector(self.initial, "initial vector")
        object.__setattr__(self, "initial", l)
        if len(l) != self.matrix.size:
            raise ValueError("initial vector length does not match the matrix")
        if not self.matrix.is_stationary(l):
            raise PreconditionError("initial vector is not stationary for the matrix")

    @classmethod
    def from_matrix(cls, M: StochasticMatrix) -> "MarkovMeasure":
        return cls(M, stationary_vector(M))

    @property
    def alphabet(self) -> tuple:
        return self.matrix.labels

    @property
    def L(self) -> tuple:
        return self.matrix.rows

    @property
    def l(self) -> tuple:
        return self.initial

    def cylinder(self, w: Sequence[int]) -> Fraction:
        return cylinder_measure(self, w)

    def is_bernoulli(self) -> bool:
        return all(row == self.initial for row in self.matrix.rows)

    def is_ergodic(self) -> bool:
        return self.matrix.is_irreducible()

    def reindexed(self, alphabet: Sequence[str]) -> "MarkovMeasure":
        """Same measure with symbols listed in a different order."""
        perm = [self.alphabet.index(a) for a in alphabet]
        rows = [[self.L[i][j] for j in perm] for i in perm]
        return MarkovMeasure(StochasticMatrix(alphabet, rows), [self.l[i] for i in perm])


def cylinder_measure(mu: MarkovMeasure, w: Sequence[int]) -> Fraction:
    if len(w) == 0:
        return Fraction(1)
    value = mu.l[w[0]]
    for a, b in zip(w, w[1:]):
        if not value:
            break
        value *= mu.L[a][b]
    return value


def bernoulli(alphabet: Sequence[str], l: Sequence) -> MarkovMeasure:
    l = check_probability_vector([parse_rational(x) for x in l], "probability vector")
    return MarkovMeasure(StochasticMatrix(alphabet, [l] * len(l)), l)


def two_state_chain(p, q, alphabet=("0", "1")) -> MarkovMeasure:
    """Chain with ``P(0->1) = p`` and ``P(1->0) = q``; stationary ``(q, p)/(p+q)``."""
    p, q = parse_rational(p), parse_rational(q)
    M = StochasticMatrix(alphabet, [[1 - p, p], [q, 1 - q]])
    return MarkovMeasure(M, (q / (p + q), p / (p + q)))


def is_forbidden(L: StochasticMatrix, w: Sequence[int]) -> bool:
    return any(L.rows[a][b] == 0 for a, b in zip(w, w[1:]))


def is_non_atomic(mu: MarkovMeasure) -> bool:
    """False iff some positive-mass path runs into a cycle of probability-one steps.

    Such a cycle carries a periodic point of positive measure; without one,
    cylinder masses decay geometrically along every sequence.
    """
    n = mu.matrix.size
    ones = [[j for j in range(n) if mu.L[i][j] == 1] for i in range(n)]
    on_cycle = set()
    for comp in graph.strongly_connected_components(ones):
        v = comp[0]
        if len(comp) > 1 or v in ones[v]:
            on_cycle.update(comp)
    live = graph.reachable(mu.matrix.support(), [x for x in range(n) if mu.l[x] > 0])
    return not (on_cycle & live)


def reversed_chain(L: StochasticMatrix, l: Sequence[Fraction]) -> StochasticMatrix:
    """Time reversal: ``R[x][x'] = l[x'] L[x'][x] / l[x]``."""
    if any(v == 0 for v in l):
        raise PreconditionError("reversed chain needs a positive stationary vector")
    if not L.is_stationary(l):
        raise PreconditionError("vector is not stationary for the matrix")
    n = L.size
    rows = [[l[y] * L.rows[y][x] / l[x] for y in range(n)] for x in range(n)]
    return StochasticMatrix(L.labels, rows)


def max_cylinder_mass(mu: MarkovMeasure, n: int) -> Fraction:
    """Largest ``mu(wX^N)`` over words of length ``n`` (dynamic programming)."""
    best = list(mu.l)
    for _ in range(n - 1):
        best = [max(best[x] * mu.L[x][y] for x in range(len(best))) for y in range(len(best))]
    return max(best)


# ---- text format


def parse_chain(text: str, alphabet: Sequence[str] = None) -> MarkovMeasure:
    """Read a chain file; reorder to ``alphabet`` when given (same symbol set)."""
    labels = None
    rows: dict = {}
    init = None
    last = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        last = lineno
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, *rest = line.split()
        if labels is None:
            if key != "alphabet":
                raise ParseError("expected 'alphabet <sym>...' first", lineno)
            if len(rest) < 2 or len(set(rest)) != len(rest):
                raise ParseError("alphabet needs at least two distinct symbols", lineno)
            labels = tuple(rest)
            continue
        try:
            if key == "row":
                if len(rest) != len(labels) + 1:
                    raise ParseError(f"row needs a symbol and {len(labels)} entries", lineno)
                sym = rest[0]
                if sym not in labels:
                    raise ParseError(f"unknown symbol {sym!r}", lineno)
                if sym in rows:
                    raise ParseError(f"duplicate row for {sym!r}", lineno)
                vals = [parse_rational(t) for t in rest[1:]]
                if any(v < 0 for v in vals) or sum(vals) != 1:
                    raise ParseError(f"row {sym} is not a probability vector", lineno)
                rows[sym] = vals
            elif key == "init":
                if init is not None:
                    raise ParseError("duplicate init line", lineno)
                if len(rest) != len(labels):
                    raise ParseError(f"init needs {len(labels)} entries", lineno)
                init = ([parse_rational(t) for t in rest], lineno)
            else:
                raise ParseError(f"unexpected keyword {key!r}", lineno)
        except ValueError as exc:
            if isinstance(exc, ParseError):
                raise
            raise ParseError(str(exc), lineno) from None
    if labels is None:
        raise ParseError("missing alphabet line", last or 1)
    missing = [s for s in labels if s not in rows]
    if missing:
        raise ParseError(f"missing row for {missing[0]!r}", last)
    M = StochasticMatrix(labels, [rows[s] for s in labels])
    if init is None:
        mu = MarkovMeasure.from_matrix(M)
    else:
        vals, lineno = init
        try:
            check_probability_vector(vals, "init")
        except ValueError as exc:
            raise ParseError(str(exc), lineno) from None
        if not M.is_stationary(vals):
            raise ParseError("init vector is not stationary for the matrix", lineno)
        mu = MarkovMeasure(M, vals)
    if alphabet is not None and tuple(alphabet) != labels:
        if set(alphabet) != set(labels):
            raise ParseError(f"chain alphabet {labels} does not match {tuple(alphabet)}", 1)
        mu = mu.reindexed(alphabet)
    return mu


def format_chain(mu: MarkovMeasure) -> str:
    lines = ["alphabet " + " ".join(mu.alphabet)]
    for s, row in zip(mu.alphabet, mu.L):
        lines.append(f"row {s} " + " ".join(format_rational(x) for x in row))
    lines.append("init " + " ".join(format_rational(x) for x in mu.l))
    return "\n".join(lines) + "\n"


def kron(u: Iterable[Fraction], v: Iterable[Fraction]) -> tuple:
    v = list(v)
    return tuple(a * b for a in u for b in v)
