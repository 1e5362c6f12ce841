"""Command-line front end.

Every command prints a report with the top-level sections ``inputs``, ``flags``
and ``result``. The default rendering is one ``dotted.key = value`` line per
leaf; ``--json`` prints the same tree as JSON. Rationals appear as ``a/b``.

Exit codes: 0 success (including an Unknown verdict), 1 usage, 2 parse error,
3 violated mathematical precondition.
"""

from __future__ import annotations

import argparse
import enum
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import activity, classify, frequency, pushforward, simulate
from .automaton import MealyAutomaton, parse_automaton
from .errors import ParseError, PreconditionError
from .markov import MarkovMeasure, format_rational, is_non_atomic, parse_chain
from .pushforward import RadonNikodymTable
from .skew import SkewChain

EXIT_OK, EXIT_USAGE, EXIT_PARSE, EXIT_PRECONDITION = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# ---- rendering

def _label(x) -> str:
    if isinstance(x, tuple):
        return "(" + ",".join(str(v) for v in x) + ")"
    return str(x)


def to_plain(value):
    """Convert a report value into JSON-compatible data with rationals as strings."""
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, Fraction):
        return format_rational(value)
    if isinstance(value, int):
        return value
    if isinstance(value, enum.Enum):
        return str(value)
    if isinstance(value, dict):
        return {_label(k): to_plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_plain(v) for v in value]
    return str(value)


def _scalar(v) -> str:
    if v is None:
        return "none"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, list):
        return "(" + ", ".join(_scalar(x) for x in v) + ")"
    return str(v)


def flatten(tree, prefix="") -> list:
    lines = []
    for k, v in tree.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict) and v:
            lines.extend(flatten(v, key + "."))
        elif isinstance(v, dict):
            lines.append(f"{key} = ()")
        else:
            lines.append(f"{key} = {_scalar(v)}")
    return lines


def render(report: dict, as_json: bool) -> str:
    plain = to_plain(report)
    if as_json:
        return json.dumps(plain, indent=2)
    return "\n".join(flatten(plain))


# ---- loading

def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def load_automaton(path: str) -> MealyAutomaton:
    text = _read(path)
    try:
        return parse_automaton(text)
    except ParseError as exc:
        raise ParseError(f"{path}: {exc}") from None


def load_chain(path: str, A: MealyAutomaton) -> MarkovMeasure:
    text = _read(path)
    try:
        return parse_chain(text, A.alphabet)
    except ParseError as exc:
        raise ParseError(f"{path}: {exc}") from None


class Request:
    """Loaded files plus the chosen state (defaults to the first declared state)."""

    def __init__(self, args, need_chain=True):
        self.args = args
        self.automaton = load_automaton(args.automaton)
        self.chain = None
        if args.chain:
            self.chain = load_chain(args.chain, self.automaton)
        elif need_chain:
            raise UsageError("this command needs --chain")
        A = self.automaton
        if args.state is None:
            self.state = A.states[0]
        elif args.state in A.states:
            self.state = args.state
        else:
            raise UsageError(f"unknown state {args.state!r}; states are {', '.join(A.states)}")

    def inputs(self) -> dict:
        return {"automaton": self.args.automaton, "chain": self.args.chain, "state": self.state}

    def words(self, default=None) -> list:
        raw = self.args.word or []
        if not raw and default is not None:
            return default
        out = []
        for text in raw:
            try:
                w = self.automaton.encode(text)
            except KeyError as exc:
                raise UsageError(f"word {text!r}: {exc.args[0]}") from None
            if not w:
                raise UsageError("words must be nonempty")
            out.append(w)
        return out


# ---- commands

def cmd_validate(args) -> dict:
    req = Request(args, need_chain=False)
    A = req.automaton
    result = {
        "invertible": A.is_invertible(),
        "reversible": A.is_reversible(),
        "strongly_connected": A.is_strongly_connected(),
    }
    if req.chain is not None:
        mu = req.chain
        result["L_strongly_connected"] = SkewChain(A, mu).L_strongly_connected
        result["irreducible"] = mu.matrix.is_irreducible()
        result["non_atomic"] = is_non_atomic(mu)
    return {"inputs": req.inputs(), "flags": {}, "result": result}


def cmd_info(args) -> dict:
    req = Request(args, need_chain=False)
    A = req.automaton
    trivial = activity.trivial_states(A)
    result = {
        "alphabet": list(A.alphabet),
        "states": list(A.states),
        "trivial_states": [A.states[s] for s in sorted(trivial)],
        "activity": {s: activity.classify_activity(A, s) for s in A.states},
        "activity_counts": activity.activity_counts(A, req.state, args.depth),
        "reachable": [A.states[s] for s in A.reachable_states(req.state)],
        "invertible": A.is_invertible(),
        "reversible": A.is_reversible(),
        "bireversible": A.is_invertible() and A.is_reversible() and A.inverse().is_reversible(),
    }
    return {"inputs": req.inputs(), "flags": {"depth": args.depth}, "result": result}


def _matrix(M) -> dict:
    return {lab: list(row) for lab, row in zip(M.labels, M.rows)}


def cmd_matrices(args) -> dict:
    req = Request(args)
    chain = SkewChain(req.automaton, req.chain)
    result = {
        "T": _matrix(chain.T),
        "K": _matrix(chain.K),
        "t": list(chain.require_t()),
        "k": list(chain.require_k()),
        "L_strongly_connected": chain.L_strongly_connected,
        "tensor_decomposes": chain.tensor,
    }
    return {"inputs": req.inputs(), "flags": {}, "result": result}


def cmd_freq(args) -> dict:
    req = Request(args)
    A = req.automaton
    words = req.words(default=[(x,) for x in range(A.m)])
    rep = frequency.frequency_report(A, req.state, req.chain, words, left=args.left)
    result = {
        "frequencies": rep.frequencies,
        "L_strongly_connected": rep.L_strongly_connected,
    }
    return {"inputs": req.inputs(), "flags": {"left": args.left}, "result": result}


def cmd_push(args) -> dict:
    req = Request(args)
    A = req.automaton
    result = {}
    if args.length is not None:
        dist = pushforward.pushforward_distribution(A, req.state, req.chain, args.length)
        result["distribution"] = {A.decode(w): v for w, v in sorted(dist.items())}
    for w in req.words(default=[]):
        result.setdefault("cylinders", {})[A.decode(w)] = {
            "image": pushforward.pushforward_cylinder(A, req.state, req.chain, w),
            "measure": req.chain.cylinder(w),
        }
    if not result:
        raise UsageError("push needs --word or --length")
    return {"inputs": req.inputs(), "flags": {"length": args.length}, "result": result}


def _table(A: MealyAutomaton, table: RadonNikodymTable) -> dict:
    return {
        "depth": table.depth,
        "exact_coverage": table.exact_coverage,
        "members": len(table.members),
        "density": {A.decode(w): v for w, v in table.entries.items()},
        "null_cylinders": [A.decode(w) for w in table.null_cylinders],
        "residual_mass": table.residual_mass,
        "residual_pushforward_mass": table.residual_pushforward_mass,
    }


def cmd_rn(args) -> dict:
    req = Request(args)
    A = req.automaton
    table = pushforward.radon_nikodym(A, req.state, req.chain, args.depth)
    result = _table(A, table)
    result["sufficient_condition"] = pushforward.check_abs_continuity_sufficient(A, req.state, req.chain)
    return {"inputs": req.inputs(), "flags": {"depth": args.depth}, "result": result}


def cmd_verdict(args) -> dict:
    req = Request(args)
    v = classify.verdict(req.automaton, req.state, req.chain,
                         witness_max_len=args.max_len, rn_depth=args.depth)
    evidence = dict(v.evidence)
    if isinstance(evidence.get("table"), RadonNikodymTable):
        evidence["table"] = _table(req.automaton, evidence["table"])
    result = {"kind": v.kind, "rule": v.rule, "evidence": evidence}
    flags = {"max_len": args.max_len, "depth": args.depth}
    return {"inputs": req.inputs(), "flags": flags, "result": result}


def cmd_simulate(args) -> dict:
    req = Request(args)
    A = req.automaton
    if args.steps < 1 or args.trials < 1:
        raise UsageError("--steps and --trials must be positive")
    words = req.words(default=[(x,) for x in range(A.m)])
    rep = simulate.monte_carlo_report(A, req.state, req.chain, args.steps, args.seed,
                                      words, trials=args.trials)
    result = {
        "steps": rep.steps,
        "seed": rep.seed,
        "trials": rep.trials,
        "words": {
            r.word: {
                "empirical": r.empirical,
                "predicted": r.predicted,
                "deviation": r.deviation,
                "deviation_float": f"{float(r.deviation):.6f}",
                "input_empirical": r.input_empirical,
            }
            for r in rep.results
        },
    }
    flags = {"steps": args.steps, "seed": args.seed, "trials": args.trials}
    return {"inputs": req.inputs(), "flags": flags, "result": result}


COMMANDS = {
    "validate": (cmd_validate, "check structural properties of the automaton and chain"),
    "info": (cmd_info, "summarise states, trivial states and activity"),
    "matrices": (cmd_matrices, "print the skew matrix, the state matrix and their stationary vectors"),
    "freq": (cmd_freq, "exact asymptotic frequencies of output words"),
    "push": (cmd_push, "image measure of cylinders"),
    "rn": (cmd_rn, "density table of the image measure for polynomial activity"),
    "verdict": (cmd_verdict, "relation between the measure and its image"),
    "simulate": (cmd_simulate, "seeded Monte Carlo check of output frequencies"),
}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--automaton", required=True, help="automaton file")
    common.add_argument("--chain", help="Markov chain file")
    common.add_argument("--state", help="initial state name (default: first state)")
    common.add_argument("--json", action="store_true", help="print JSON instead of key = value lines")

    parser = _Parser(prog="automeasure", description="Measures transformed by Mealy automata.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, parents=[common], help=help_text)
        if name in ("freq", "push", "simulate"):
            p.add_argument("--word", action="append", help="word to query (repeatable)")
        if name == "freq":
            p.add_argument("--left", action="store_true",
                           help="frequencies in the left half of a two-sided sequence")
        if name == "push":
            p.add_argument("--length", type=int, help="print all image cylinders of this length")
        if name in ("rn", "verdict", "info"):
            p.add_argument("--depth", type=int, default=12 if name != "info" else 8)
        if name == "verdict":
            p.add_argument("--max-len", type=int, default=4, dest="max_len")
        if name == "simulate":
            p.add_argument("--steps", type=int, default=100_000)
            p.add_argument("--seed", type=int, default=0)
            p.add_argument("--trials", type=int, default=1)
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        handler = COMMANDS[args.command][0]
        report = handler(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except PreconditionError as exc:
        print(f"precondition failed: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except (ValueError, KeyError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(render(report, args.json))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
