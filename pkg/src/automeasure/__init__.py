"""Exact measure theory for Mealy automata acting on Markov measures."""

from .activity import (
    ActivityClass,
    activity_count,
    activity_counts,
    bicyclic_states,
    classify_activity,
    trivial_states,
)
from .automaton import (
    MealyAutomaton,
    Trace,
    compose,
    decode_word,
    encode_word,
    format_automaton,
    identity_automaton,
    parse_automaton,
    permutation_automaton,
)
from .classify import (
    Verdict,
    VerdictKind,
    equality_check_bernoulli,
    equality_check_markov,
    singularity_witness,
    verdict,
)
from .errors import (
    AnalysisError,
    NonUniqueStationaryError,
    NotInvertibleError,
    NotReversibleError,
    ParseError,
    PreconditionError,
)
from .frequency import (
    FrequencyReport,
    frequency_report,
    frequency_vector,
    left_word_frequency,
    output_letter_frequency,
    output_word_frequency,
)
from .markov import (
    MarkovMeasure,
    StochasticMatrix,
    bernoulli,
    cylinder_measure,
    format_chain,
    is_non_atomic,
    parse_chain,
    parse_rational,
    reversed_chain,
    stationary_vector,
    two_state_chain,
)
from .pushforward import (
    AbsoluteContinuityError,
    RadonNikodymTable,
    VMaxEnumeration,
    check_abs_continuity_sufficient,
    enumerate_vmax,
    pushforward_cylinder,
    pushforward_distribution,
    radon_nikodym,
)
from .simulate import (
    Prng,
    SimulationReport,
    empirical_frequency,
    monte_carlo_report,
    run_automaton_stream,
    sample_sequence,
    splitmix64,
)
from .skew import SkewChain, build_K, build_T, is_L_strongly_connected, tensor_decomposes

__version__ = "0.1.0"
