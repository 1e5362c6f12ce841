"""Decide how the image measure of a state relates to the input measure.

Every check works on the sub-automaton reachable from the chosen state, which
is all the map depends on. Rules are tried in a fixed order and the first one
whose hypotheses hold gives the answer; when none applies the verdict is
``Unknown`` together with the reasons each rule was skipped.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .activity import ActivityClass, classify_activity
from .automaton import MealyAutomaton, StateRef, Word
from .errors import PreconditionError
from .frequency import generated_chain, output_word_frequency, require_L_strongly_connected
from .markov import MarkovMeasure, check_probability_vector, is_non_atomic, parse_rational
from .pushforward import (
    AbsoluteContinuityError,
    check_abs_continuity_sufficient,
    pushforward_distribution,
    radon_nikodym,
)
from .skew import extend_paths

BOUNDED_CHECK_LENGTH = 6


class VerdictKind(enum.Enum):
    EQUAL = "Equal"
    ABSOLUTELY_CONTINUOUS = "AbsolutelyContinuous"
    SINGULAR = "Singular"
    UNKNOWN = "Unknown"

    def __str__(self):
        return self.value


@dataclass
class Verdict:
    kind: VerdictKind
    rule: str
    evidence: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.evidence:
            raise ValueError("a verdict always carries evidence")


def _generated(A: MealyAutomaton, g: StateRef) -> tuple:
    return A.generated_by(A.state_index(g))


def equality_check_bernoulli(A: MealyAutomaton, g: StateRef, l: Sequence) -> bool:
    """True iff every edge maps an input letter to one of the same probability."""
    sub, _ = _generated(A, g)
    l = check_probability_vector([parse_rational(v) for v in l], "probability vector")
    if len(l) != sub.m:
        raise ValueError("probability vector does not match the alphabet")
    if not sub.is_invertible():
        raise PreconditionError("automaton is not invertible")
    if not sub.is_strongly_connected():
        raise PreconditionError("automaton is not strongly connected")
    if any(v <= 0 for v in l):
        raise PreconditionError("probability vector has a zero entry")
    return all(l[sub.output[s][x]] == l[x] for s in range(sub.n_states) for x in range(sub.m))


def _markov_condition(sub: MealyAutomaton, gi: int, mu: MarkovMeasure) -> Optional[str]:
    """None when the exact equality condition holds, else a description of the first failure."""
    L, l = mu.L, mu.l
    for x in range(sub.m):
        y = sub.output[gi][x]
        if l[y] != l[x]:
            return f"initial weight of {sub.alphabet[x]} differs from that of its image {sub.alphabet[y]}"
    for s in range(sub.n_states):
        for x in range(sub.m):
            r = sub.transition[s][x]
            a = sub.output[s][x]
            for y in range(sub.m):
                b = sub.output[r][y]
                if L[a][b] != L[x][y]:
                    return (
                        f"state {sub.states[s]} maps {sub.alphabet[x]}{sub.alphabet[y]} to "
                        f"{sub.alphabet[a]}{sub.alphabet[b]} with different transition weight"
                    )
    return None


def equality_check_markov(A: MealyAutomaton, g: StateRef, mu: MarkovMeasure) -> bool:
    """True iff the initial weights and all two-letter transition weights are preserved."""
    chain, gi = generated_chain(A, g, mu)
    sub = chain.automaton
    if not sub.is_invertible():
        raise PreconditionError("automaton is not invertible")
    if not chain.L_strongly_connected:
        raise PreconditionError("automaton is not L-strongly connected")
    return _markov_condition(sub, gi, mu) is None


def singularity_witness(A: MealyAutomaton, g: StateRef, mu: MarkovMeasure, max_len: int) -> Optional[Word]:
    """Shortest (then lexicographically least) word whose output frequency differs from its mass.

    Words are expanded level by level; a branch is dropped only when both the
    predicted frequency and the measure vanish, since every extension then
    vanishes for both as well.
    """
    chain = require_L_strongly_connected(A, g, mu)
    sub = chain.automaton
    t = chain.require_t()
    m = sub.m
    level = [((), None)]
    for n in range(1, max_len + 1):
        nxt = []
        for w, alpha in level:
            for y in range(m):
                if alpha is None:
                    beta = {(s, x): t[s * m + x] for s in range(sub.n_states) for x in range(m)
                            if sub.output[s][x] == y and t[s * m + x]}
                else:
                    beta = extend_paths(sub, mu.L, alpha, y)
                u = w + (y,)
                if Fraction(sum(beta.values())) != mu.cylinder(u):
                    return u
                if beta:
                    nxt.append((u, beta))
        level = nxt
        if not level:
            break
    return None


def _bounded_equality(sub: MealyAutomaton, gi: int, mu: MarkovMeasure, n: int) -> bool:
    for k in range(1, n + 1):
        image = pushforward_distribution(sub, gi, mu, k)
        if any(v != mu.cylinder(w) for w, v in image.items()):
            return False
        # words missing from the image have image mass 0, so mu must vanish there too
        if sum((mu.cylinder(w) for w in image), Fraction(0)) != 1:
            return False
    return True


def verdict(A: MealyAutomaton, g: StateRef, mu: MarkovMeasure,
            witness_max_len: int = 4, rn_depth: int = 12) -> Verdict:
    if not mu.matrix.is_irreducible():
        raise PreconditionError("transition matrix of the measure is not irreducible")
    chain, gi = generated_chain(A, g, mu)
    sub = chain.automaton
    skipped = []

    # polynomial activity: the image measure has an explicit density
    if classify_activity(sub, gi) is ActivityClass.POLYNOMIAL:
        if not is_non_atomic(mu):
            skipped.append("polynomial_density: measure has an atom")
        else:
            try:
                table = radon_nikodym(sub, gi, mu, rn_depth)
            except AbsoluteContinuityError as exc:
                skipped.append(f"polynomial_density: {exc}")
            else:
                sufficient = check_abs_continuity_sufficient(sub, gi, mu)
                if table.exact_coverage or sufficient:
                    evidence = {
                        "table": table,
                        "coverage": "exact" if table.exact_coverage else f"depth {rn_depth}",
                        "condition": "checked on every cylinder" if table.exact_coverage
                        else "sufficient positivity or support condition",
                    }
                    if table.exact_coverage and table.is_identically_one():
                        return Verdict(VerdictKind.EQUAL, "polynomial_density", evidence)
                    return Verdict(VerdictKind.ABSOLUTELY_CONTINUOUS, "polynomial_density", evidence)
                skipped.append(
                    "polynomial_density: density condition verified only up to depth "
                    f"{rn_depth} and no sufficient condition holds"
                )
    else:
        skipped.append("polynomial_density: activity is exponential")

    invertible = sub.is_invertible()
    Lsc = chain.L_strongly_connected

    # Bernoulli measures and invertible strongly connected automata
    if not invertible:
        skipped.append("bernoulli_dichotomy: automaton is not invertible")
    elif not sub.is_strongly_connected():
        skipped.append("bernoulli_dichotomy: automaton is not strongly connected")
    elif not mu.is_bernoulli():
        skipped.append("bernoulli_dichotomy: measure is not Bernoulli")
    elif any(v == 0 for v in mu.l):
        skipped.append("bernoulli_dichotomy: probability vector has a zero entry")
    else:
        same = equality_check_bernoulli(sub, gi, mu.l)
        evidence = {"condition": "every edge preserves letter probabilities",
                    "condition_holds": same}
        return Verdict(VerdictKind.EQUAL if same else VerdictKind.SINGULAR,
                       "bernoulli_dichotomy", evidence)

    # reversible automata with Markov measures
    if not invertible:
        skipped.append("reversible_markov_dichotomy: automaton is not invertible")
    elif not sub.is_reversible():
        skipped.append("reversible_markov_dichotomy: automaton is not reversible")
    elif not Lsc:
        skipped.append("reversible_markov_dichotomy: automaton is not L-strongly connected")
    else:
        failure = _markov_condition(sub, gi, mu)
        evidence = {"condition": "initial and transition weights preserved along edges",
                    "condition_holds": failure is None}
        if failure:
            evidence["failure"] = failure
        return Verdict(VerdictKind.EQUAL if failure is None else VerdictKind.SINGULAR,
                       "reversible_markov_dichotomy", evidence)

    # stationary vector of product form
    tensor = chain.tensor if Lsc else None
    if not invertible:
        skipped.append("tensor_dichotomy: automaton is not invertible")
    elif not Lsc:
        skipped.append("tensor_dichotomy: automaton is not L-strongly connected")
    elif not tensor:
        skipped.append("tensor_dichotomy: stationary vector is not a product")
    else:
        failure = _markov_condition(sub, gi, mu)
        bounded = _bounded_equality(sub, gi, mu, BOUNDED_CHECK_LENGTH)
        evidence = {
            "condition": "initial and transition weights preserved along edges",
            "condition_holds": failure is None,
            "equality_criterion": "exact for invertible L-strongly connected automata "
                                  "with an irreducible chain",
            f"cylinders_agree_up_to_{BOUNDED_CHECK_LENGTH}": bounded,
        }
        if failure:
            evidence["failure"] = failure
        if failure is None and not bounded:
            raise AssertionError("equality condition holds but cylinder masses differ")
        return Verdict(VerdictKind.EQUAL if failure is None else VerdictKind.SINGULAR,
                       "tensor_dichotomy", evidence)

    # differing asymptotic frequencies
    if not Lsc:
        skipped.append("frequency_witness: automaton is not L-strongly connected")
    else:
        u = singularity_witness(sub, gi, mu, witness_max_len)
        if u is not None:
            evidence = {
                "witness": sub.decode(u),
                "output_frequency": output_word_frequency(sub, gi, mu, u),
                "measure": mu.cylinder(u),
            }
            return Verdict(VerdictKind.SINGULAR, "frequency_witness", evidence)
        skipped.append(
            f"frequency_witness: no word up to length {witness_max_len} has a differing frequency"
        )

    return Verdict(VerdictKind.UNKNOWN, "none", {"failed_hypotheses": skipped})
