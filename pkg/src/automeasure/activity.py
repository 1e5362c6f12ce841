"""Activity growth of automaton states: exact counts and the two-cycle criterion."""

from __future__ import annotations

import enum

from . import graph
from .automaton import MealyAutomaton, StateRef


class ActivityClass(enum.Enum):
    POLYNOMIAL = "Polynomial"
    EXPONENTIAL = "Exponential"

    def __str__(self):
        return self.value


def trivial_states(A: MealyAutomaton) -> frozenset:
    """Greatest set of states that copy every letter and only move inside the set."""
    keep = set(range(A.n_states))
    changed = True
    while changed:
        changed = False
        for s in sorted(keep):
            if any(A.output[s][x] != x or A.transition[s][x] not in keep for x in range(A.m)):
                keep.discard(s)
                changed = True
    return frozenset(keep)


def activity_counts(A: MealyAutomaton, g: StateRef, n_max: int) -> list:
    """``[R(0), ..., R(n_max)]`` where ``R(n)`` counts length-n words with nontrivial section."""
    g = A.state_index(g)
    trivial = trivial_states(A)
    counts = [0] * A.n_states
    counts[g] = 1
    out = []
    for n in range(n_max + 1):
        out.append(sum(c for s, c in enumerate(counts) if s not in trivial))
        if n == n_max:
            break
        nxt = [0] * A.n_states
        for s, c in enumerate(counts):
            if c:
                for t in A.transition[s]:
                    nxt[t] += c
        counts = nxt
    return out


def activity_count(A: MealyAutomaton, g: StateRef, n: int) -> int:
    if n < 0:
        raise ValueError("n must be nonnegative")
    return activity_counts(A, g, n)[-1]


def bicyclic_states(A: MealyAutomaton, g: StateRef) -> list:
    """Nontrivial states reachable from ``g`` lying in a component that is not a single cycle.

    A strongly connected piece of the diagram with more edges than vertices
    always has a vertex on two distinct simple cycles, and a piece with exactly
    as many edges as vertices is one cycle. Parallel edges count separately.
    """
    trivial = trivial_states(A)
    live = [s for s in A.reachable_states(g) if s not in trivial]
    pos = {s: i for i, s in enumerate(live)}
    adj = [[pos[t] for t in A.transition[s] if t in pos] for s in live]
    found = []
    for comp in graph.strongly_connected_components(adj):
        members = set(comp)
        edges = sum(1 for v in comp for w in adj[v] if w in members)
        if edges > len(comp):
            found.extend(live[v] for v in comp)
    return sorted(found)


def classify_activity(A: MealyAutomaton, g: StateRef) -> ActivityClass:
    if bicyclic_states(A, g):
        return ActivityClass.EXPONENTIAL
    return ActivityClass.POLYNOMIAL
