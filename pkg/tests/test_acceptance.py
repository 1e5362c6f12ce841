"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Run on its own with ``pytest tests/test_acceptance.py -v`` (the lines are printed
even under output capture) or ``python3 tests/test_acceptance.py``.
"""

import contextlib
import io
import sys
import time
from fractions import Fraction as F
from itertools import product
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from automeasure import (  # noqa: E402
    ActivityClass,
    MarkovMeasure,
    SkewChain,
    StochasticMatrix,
    VerdictKind,
    activity_counts,
    bernoulli,
    classify_activity,
    frequency_vector,
    monte_carlo_report,
    output_word_frequency,
    pushforward_cylinder,
    pushforward_distribution,
    radon_nikodym,
    singularity_witness,
    verdict,
)
from automeasure.cli import main as cli_main  # noqa: E402
from automeasure.markov import kron  # noqa: E402

from conftest import AUTOMATA, FIXTURES, PQ_GRID, REVERSIBLE, fixture_pair, load, load_chain, markov  # noqa: E402

_capsys = None


def report(number, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {detail}"
    if _capsys is not None:
        with _capsys.disabled():
            print("\n" + line)
    else:
        print(line)
    assert ok, line


@pytest.fixture(autouse=True)
def _show_lines(capsys):
    global _capsys
    _capsys = capsys
    yield
    _capsys = None


def cli_lines(*argv):
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        code = cli_main([str(a) for a in argv])
    return code, dict(line.split(" = ", 1) for line in buf.getvalue().splitlines() if " = " in line)


def test_criterion_1_golden_vector():
    start = time.perf_counter()
    code, out = cli_lines("matrices", "--automaton", FIXTURES / "ternary.aut", "--chain", FIXTURES / "cyclic3.chain")
    elapsed = time.perf_counter() - start
    expected = "(2/15, 2/15, 1/5, 1/15, 2/15, 1/15, 2/15, 1/15, 1/15)"
    ok = code == 0 and out.get("result.t") == expected and elapsed < 1
    report(1, ok, f"t = {out.get('result.t')} in {elapsed:.3f}s")


def test_criterion_2_modified_automaton():
    A, mu = fixture_pair("ternary_modified")
    chain = SkewChain(A, mu)
    expected = (F(2, 9), F(2, 9), F(1, 3), F(1, 9), F(1, 9), 0, 0, 0, 0)
    ok = chain.L_strongly_connected is False and chain.t == expected
    report(2, ok, f"L-strongly connected = {chain.L_strongly_connected}, t = "
                  f"({', '.join(str(v) for v in chain.t)})")


def test_criterion_3_aleshin_bellaterra():
    mu = markov(F(1, 3), F(1, 5))
    p, q = F(1, 3), F(1, 5)
    closed = ((2 * p + q) / (3 * (p + q)), (p + 2 * q) / (3 * (p + q)))
    fa = frequency_vector(load("aleshin"), "a", mu)
    fb = frequency_vector(load("bellaterra"), "a", mu)
    tensors = []
    for name in ("aleshin", "bellaterra"):
        chain = SkewChain(load(name), mu)
        tensors.append(chain.tensor and chain.t == kron(chain.k, mu.l))
    ok = closed == (F(13, 24), F(11, 24)) and fa == closed and fb == closed[::-1] and all(tensors)
    report(3, ok, f"Aleshin f = {fa[0]}, {fa[1]}; Bellaterra f = {fb[0]}, {fb[1]}; t = k (x) l: {tensors}")


def test_criterion_4_lamplighter():
    A = load("lamplighter")
    pairs = [(p, q) for p, q in PQ_GRID if not (p == 1 and q == 1)]
    assert len(set(pairs)) >= 5
    ok = True
    for p, q in pairs:
        mu = markov(p, q)
        ok &= frequency_vector(A, "a", mu) == (F(1, 2), F(1, 2))
        for w, e in zip(["00", "01", "10", "11"], [q, p, p, q]):
            ok &= output_word_frequency(A, "a", mu, w) == e / (2 * (p + q))
    report(4, ok, f"f = (1/2, 1/2) and length-2 table (q,p,p,q)/(2(p+q)) at {len(pairs)} (p,q) pairs")


def test_criterion_5_reversibility_laws():
    cyclic = MarkovMeasure.from_matrix(StochasticMatrix(
        ["1", "2", "3"], [[F(1, 2), F(1, 2), 0], [0, F(1, 2), F(1, 2)], [F(1, 2), 0, F(1, 2)]]))
    checked = 0
    ok = True
    for name in REVERSIBLE:
        A = load(name)
        assert A.is_reversible()
        if A.m == 2:
            measures = [markov(p, q) for p, q in PQ_GRID]
        else:
            measures = [fixture_pair(name)[1], cyclic]
        n = A.n_states
        uniform = (F(1, n),) * n
        for mu in measures:
            if not mu.matrix.is_irreducible():
                continue
            chain = SkewChain(A, mu)
            ok &= chain.K.is_stationary(uniform) and chain.T.is_stationary(kron(uniform, mu.l))
            checked += 1
    nonrev = SkewChain(load("nonreversible"), markov(F(1, 3), F(1, 5)))
    ok &= nonrev.tensor is False
    report(5, ok, f"uniform k and k (x) l stationary in {checked} cases; non-reversible tensor = {nonrev.tensor}")


def exhaustive_image_masses(A, g, mu, n_max):
    """Image mass of every word of length <= n_max, over every input word."""
    tables = [dict() for _ in range(n_max + 1)]

    def walk(s, last, image, mass):
        k = len(image)
        tables[k][image] = tables[k].get(image, 0) + mass
        if k == n_max:
            return
        for x in range(A.m):
            step = mu.l[x] if last is None else mu.L[last][x]
            walk(A.transition[s][x], x, image + (A.output[s][x],), mass * step)

    walk(A.state_index(g), None, (), F(1))
    return tables


def test_criterion_6_pushforward_oracle():
    ok = True
    words_checked = 0
    for name in sorted(AUTOMATA):
        A, mu = fixture_pair(name)
        for i, g in enumerate(A.states):
            tables = exhaustive_image_masses(A, g, mu, 10)
            for n, table in enumerate(tables):
                ok &= sum(table.values()) == 1
                dist = pushforward_distribution(A, g, mu, n)
                ok &= dist == {w: v for w, v in table.items() if v}
                if i == 0:
                    for w in product(range(A.m), repeat=n):
                        ok &= pushforward_cylinder(A, g, mu, w) == table.get(w, 0)
                        words_checked += 1
    report(6, ok, f"{len(AUTOMATA)} fixtures, lengths 0..10, {words_checked} cylinders compared exactly")


def test_criterion_7_radon_nikodym():
    A = load("odometer")
    mu = markov(F(1, 3), F(1, 5))
    table = radon_nikodym(A, "q", mu, 12)
    ok = table.residual_mass < F(1, 100)
    for wx, d in table.entries.items():
        for n in range(5):
            for ext in product(range(2), repeat=n):
                c = wx + ext
                ok &= pushforward_cylinder(A, "q", mu, c) == d * mu.cylinder(c)
    uniform = radon_nikodym(A, "q", bernoulli(["0", "1"], ["1/2", "1/2"]), 12)
    ok &= uniform.is_identically_one()
    report(7, ok, f"residual mass {table.residual_mass} < 1/100, {len(table.entries)} densities verified, "
                  f"uniform density identically 1: {uniform.is_identically_one()}")


def test_criterion_8_verdicts():
    aleshin = load("aleshin")
    half_quarter = load_chain("bernoulli_half_quarter.chain", load("ternary_swap"))
    two = load("two_state_ternary")
    prepend = load("prepend")
    results = {
        "a": verdict(aleshin, "a", load_chain("bernoulli_1_3.chain", aleshin)).kind is VerdictKind.SINGULAR,
        "b": verdict(aleshin, "a", load_chain("uniform2.chain", aleshin)).kind is VerdictKind.EQUAL,
        "c": verdict(load("ternary_swap"), "g", half_quarter).kind is VerdictKind.EQUAL,
    }
    w2 = singularity_witness(two, "s0", half_quarter, 2)
    w1 = singularity_witness(two, "s0", half_quarter, 1)
    v2 = verdict(two, "s0", half_quarter, witness_max_len=2)
    results["d"] = (w2 is not None and two.decode(w2) == "22" and w1 is None
                    and v2.kind is VerdictKind.SINGULAR)
    results["e"] = all(verdict(prepend, g, half_quarter, witness_max_len=n).kind is VerdictKind.UNKNOWN
                       for g in prepend.states for n in range(1, 7))
    report(8, all(results.values()), ", ".join(f"({k}) {'ok' if v else 'wrong'}" for k, v in results.items()))


def brute_activity(A, g, n):
    from automeasure import trivial_states
    triv = trivial_states(A)
    return sum(A.restriction(g, u) not in triv for u in product(range(A.m), repeat=n))


def test_criterion_9_activity():
    odo, ale = load("odometer"), load("aleshin")
    r_odo = activity_counts(odo, "q", 40)
    r_ale = activity_counts(ale, "a", 20)
    ok = classify_activity(odo, "q") is ActivityClass.POLYNOMIAL and r_odo == [1] * 41
    ok &= classify_activity(ale, "a") is ActivityClass.EXPONENTIAL and r_ale == [2 ** n for n in range(21)]
    ok &= all(brute_activity(odo, "q", n) == r_odo[n] for n in range(13))
    ok &= all(brute_activity(ale, "a", n) == r_ale[n] for n in range(13))
    report(9, ok, f"odometer Polynomial with R(n) = 1 for n <= 40; Aleshin Exponential with R(n) = 2^n for n <= 20")


@pytest.mark.parametrize("name", ["aleshin", "lamplighter", "ternary"])
def test_criterion_10_monte_carlo(name):
    A, mu = fixture_pair(name)
    letters = [(x,) for x in range(A.m)]
    start = time.perf_counter()
    first = monte_carlo_report(A, A.states[0], mu, 10**6, 42, letters)
    elapsed = time.perf_counter() - start
    second = monte_carlo_report(A, A.states[0], mu, 10**6, 42, letters)
    dev = first.max_deviation()
    ok = dev < F(5, 1000) and first == second and elapsed < 10
    report(10, ok, f"{name}: max deviation {float(dev):.6f}, reproducible {first == second}, {elapsed:.2f}s")


if __name__ == "__main__":
    import subprocess
    sys.exit(subprocess.call([sys.executable, "-m", "pytest", __file__, "-q"]))
