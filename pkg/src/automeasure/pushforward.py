"""Image measures of cylinders, the trivial-section word set, and densities.

For a state ``g`` and a Markov measure ``mu`` the image measure of a cylinder
``wX^N`` is the mass of all input paths from ``g`` that emit ``w``. For states
of polynomial activity the image measure has a density with respect to ``mu``
that is constant on the cylinders ``wxX^N`` where ``w`` is a minimal output word
beyond which every preimage path has reached a trivial state.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .activity import ActivityClass, classify_activity, trivial_states
from .automaton import MealyAutomaton, StateRef, Word
from .errors import PreconditionError
from .markov import MarkovMeasure, is_non_atomic
from .skew import check_alphabet, extend_paths


class AbsoluteContinuityError(PreconditionError):
    """A null cylinder ``wx`` beyond the trivial frontier receives positive image mass."""

    def __init__(self, message: str, witness: tuple):
        super().__init__(message)
        self.witness = witness


def _initial_paths(A: MealyAutomaton, g: int, mu: MarkovMeasure, y: int) -> dict:
    # keyed like extend_paths: (state the edge leaves, input letter)
    return {(g, x): mu.l[x] for x in range(A.m) if A.output[g][x] == y and mu.l[x]}


def pushforward_cylinder(A: MealyAutomaton, g: StateRef, mu: MarkovMeasure, w) -> Fraction:
    """``mu`` of the preimage of the cylinder ``wX^N`` under the map of state ``g``."""
    check_alphabet(mu.matrix, A)
    g = A.state_index(g)
    w = A.encode(w)
    if not w:
        return Fraction(1)
    alpha = _initial_paths(A, g, mu, w[0])
    for y in w[1:]:
        if not alpha:
            break
        alpha = extend_paths(A, mu.L, alpha, y)
    return Fraction(sum(alpha.values()))


def pushforward_distribution(A: MealyAutomaton, g: StateRef, mu: MarkovMeasure, n: int) -> dict:
    """Image masses of all length-``n`` cylinders with positive mass, keyed by word."""
    check_alphabet(mu.matrix, A)
    g = A.state_index(g)
    if n == 0:
        return {(): Fraction(1)}
    level = {}
    for y in range(A.m):
        alpha = _initial_paths(A, g, mu, y)
        if alpha:
            level[(y,)] = alpha
    for _ in range(n - 1):
        nxt = {}
        for w, alpha in level.items():
            for y in range(A.m):
                beta = extend_paths(A, mu.L, alpha, y)
                if beta:
                    nxt[w + (y,)] = beta
        level = nxt
    return {w: Fraction(sum(a.values())) for w, a in level.items()}


@dataclass
class VMaxEnumeration:
    """Minimal output words past which every preimage path sits in a trivial state.

    ``frontier`` maps each unresolved word of length ``depth`` to the set of
    states reached by its preimage paths.
    """

    members: list
    frontier: dict
    depth: int
    covered_mass: Optional[Fraction] = None

    @property
    def exact(self) -> bool:
        return not self.frontier


def enumerate_vmax(A: MealyAutomaton, g: StateRef, depth: int,
                   measure: Optional[MarkovMeasure] = None) -> VMaxEnumeration:
    if depth < 1:
        raise ValueError("depth must be at least 1")
    g = A.state_index(g)
    trivial = trivial_states(A)
    members: list = []
    level: dict = {(): frozenset([g])}
    if g in trivial:
        members.append(())
        level = {}
    for _ in range(depth):
        if not level:
            break
        nxt = {}
        for w, reached in level.items():
            for y in range(A.m):
                after = frozenset(
                    A.transition[s][x]
                    for s in reached for x in range(A.m) if A.output[s][x] == y
                )
                if after <= trivial:
                    members.append(w + (y,))
                else:
                    nxt[w + (y,)] = after
        level = nxt
    covered = None
    if measure is not None:
        covered = sum((measure.cylinder(w) for w in members), Fraction(0))
    return VMaxEnumeration(members, level, depth, covered)


@dataclass
class RadonNikodymTable:
    """Density of the image measure on the cylinders ``wxX^N``.

    ``entries`` holds the density for every non-null ``wx``; ``null_cylinders``
    lists the ``wx`` of zero mass (both measures vanish there). The uncovered
    part of the space has ``mu``-mass ``residual_mass`` and image mass
    ``residual_pushforward_mass``.
    """

    entries: dict
    residual_mass: Fraction
    residual_pushforward_mass: Fraction
    depth: int
    members: list = field(default_factory=list)
    null_cylinders: list = field(default_factory=list)
    exact_coverage: bool = False

    def density(self, prefix: Word) -> Optional[Fraction]:
        """Density at any sequence starting with ``prefix``, if the prefix is covered."""
        prefix = tuple(prefix)
        for k in range(len(prefix) + 1):
            if prefix[:k] in self.entries:
                return self.entries[prefix[:k]]
        return None

    def is_identically_one(self) -> bool:
        return all(v == 1 for v in self.entries.values())


def radon_nikodym(A: MealyAutomaton, g: StateRef, mu: MarkovMeasure, depth: int) -> RadonNikodymTable:
    check_alphabet(mu.matrix, A)
    g = A.state_index(g)
    if classify_activity(A, g) is not ActivityClass.POLYNOMIAL:
        raise PreconditionError(f"state {A.states[g]} has exponential activity; no density table")
    if not is_non_atomic(mu):
        raise PreconditionError("measure has an atom; no density table")
    vm = enumerate_vmax(A, g, depth, mu)
    entries = {}
    null = []
    for w in vm.members:
        for x in range(A.m):
            wx = w + (x,)
            mass = mu.cylinder(wx)
            image = pushforward_cylinder(A, g, mu, wx)
            if mass == 0:
                if image != 0:
                    raise AbsoluteContinuityError(
                        f"cylinder {A.decode(wx)} is null for the measure but has image "
                        f"mass {image}; the image measure is not absolutely continuous",
                        (w, x),
                    )
                null.append(wx)
            else:
                entries[wx] = image / mass
    residual = 1 - vm.covered_mass
    residual_image = sum((pushforward_cylinder(A, g, mu, w) for w in vm.frontier), Fraction(0))
    return RadonNikodymTable(entries, residual, residual_image, depth,
                             list(vm.members), null, vm.exact)


def check_abs_continuity_sufficient(A: MealyAutomaton, g: StateRef, mu: MarkovMeasure) -> bool:
    """Either of two sufficient conditions for the density table to exist for all depths.

    (a) every entry of ``l`` and of ``L`` is positive;
    (b) ``l[x] = 0`` whenever ``l[out(g, x)] = 0``, and ``L[x][y] = 0`` whenever
        ``L[out(s, x)][out(next(s, x), y)] = 0``, over the states reachable from ``g``.
    """
    check_alphabet(mu.matrix, A)
    L, l = mu.L, mu.l
    if all(v > 0 for v in l) and all(v > 0 for row in L for v in row):
        return True
    g = A.state_index(g)
    for x in range(A.m):
        if l[A.output[g][x]] == 0 and l[x] != 0:
            return False
    for s in A.reachable_states(g):
        for x in range(A.m):
            r = A.transition[s][x]
            a = A.output[s][x]
            for y in range(A.m):
                if L[x][y] != 0 and L[a][A.output[r][y]] == 0:
                    return False
    return True
