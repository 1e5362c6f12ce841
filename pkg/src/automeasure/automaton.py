"""Mealy automata over a common input/output alphabet.

States and symbols are stored as indices into the declared ``states`` and
``alphabet`` tuples; that declaration order is the order used by every matrix
and vector built downstream.  Public methods accept either a state name or an
index wherever a state is expected.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence, Union

from . import graph
from .errors import NotInvertibleError, NotReversibleError, ParseError

Word = tuple  # tuple[int, ...] of symbol indices
StateRef = Union[int, str]


@dataclass(frozen=True)
class Trace:
    """Run of an automaton on a finite word: (state, input, output) per step."""

    steps: tuple
    end_state: int

    @property
    def input(self) -> Word:
        return tuple(x for _, x, _ in self.steps)

    @property
    def output(self) -> Word:
        return tuple(y for _, _, y in self.steps)

    def __len__(self):
        return len(self.steps)


@dataclass(frozen=True)
class MealyAutomaton:
    alphabet: tuple
    states: tuple
    transition: tuple  # transition[s][x] -> next state index
    output: tuple  # output[s][x] -> output symbol index

    def __post_init__(self):
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "transition", tuple(tuple(r) for r in self.transition))
        object.__setattr__(self, "output", tuple(tuple(r) for r in self.output))
        m, n = len(self.alphabet), len(self.states)
        if m < 2:
            raise ValueError("alphabet needs at least two symbols")
        if len(set(self.alphabet)) != m:
            raise ValueError(f"duplicate symbol in alphabet {self.alphabet}")
        if n < 1:
            raise ValueError("automaton needs at least one state")
        if len(set(self.states)) != n:
            raise ValueError(f"duplicate state name in {self.states}")
        for tok in self.alphabet + self.states:
            if not isinstance(tok, str) or not tok or any(c.isspace() for c in tok):
                raise ValueError(f"invalid token {tok!r}")
        if len(self.transition) != n or len(self.output) != n:
            raise ValueError("transition/output tables must have one row per state")
        for s in range(n):
            if len(self.transition[s]) != m or len(self.output[s]) != m:
                raise ValueError(f"row for state {self.states[s]} must cover the alphabet")
            for x in range(m):
                if not 0 <= self.transition[s][x] < n:
                    raise ValueError(f"transition out of range at ({self.states[s]}, {self.alphabet[x]})")
                if not 0 <= self.output[s][x] < m:
                    raise ValueError(f"output out of range at ({self.states[s]}, {self.alphabet[x]})")

    @classmethod
    def from_edges(cls, alphabet, states, edges) -> "MealyAutomaton":
        """Build from named edges ``(state, input, next_state, output)``."""
        alphabet, states = tuple(alphabet), tuple(states)
        sym = {a: i for i, a in enumerate(alphabet)}
        st = {s: i for i, s in enumerate(states)}
        trans = [[None] * len(alphabet) for _ in states]
        out = [[None] * len(alphabet) for _ in states]
        for s, x, t, y in edges:
            if trans[st[s]][sym[x]] is not None:
                raise ValueError(f"duplicate edge ({s}, {x})")
            trans[st[s]][sym[x]] = st[t]
            out[st[s]][sym[x]] = sym[y]
        for i, row in enumerate(trans):
            for j, v in enumerate(row):
                if v is None:
                    raise ValueError(f"missing edge ({states[i]}, {alphabet[j]})")
        return cls(alphabet, states, trans, out)

    # ---- indexing helpers

    @property
    def m(self) -> int:
        return len(self.alphabet)

    @property
    def n_states(self) -> int:
        return len(self.states)

    def state_index(self, s: StateRef) -> int:
        if isinstance(s, int):
            if not 0 <= s < self.n_states:
                raise KeyError(f"state index {s} out of range")
            return s
        try:
            return self.states.index(s)
        except ValueError:
            raise KeyError(f"unknown state {s!r}") from None

    def symbol_index(self, x: Union[int, str]) -> int:
        if isinstance(x, int):
            if not 0 <= x < self.m:
                raise KeyError(f"symbol index {x} out of range")
            return x
        try:
            return self.alphabet.index(x)
        except ValueError:
            raise KeyError(f"unknown symbol {x!r}") from None

    def encode(self, text: Union[str, Sequence]) -> Word:
        return encode_word(self.alphabet, text)

    def decode(self, word: Iterable[int]) -> str:
        return decode_word(self.alphabet, word)

    def edges(self) -> Iterator[tuple]:
        """Yield Moore diagram edges ``(s, x, s', y)`` in lexicographic (s, x) order."""
        for s in range(self.n_states):
            for x in range(self.m):
                yield s, x, self.transition[s][x], self.output[s][x]

    def successors(self) -> list:
        """Adjacency lists with one entry per edge (parallel edges repeated)."""
        return [list(row) for row in self.transition]

    # ---- the action on words

    def apply(self, s: StateRef, w: Iterable[int]) -> Trace:
        s = self.state_index(s)
        steps = []
        for x in w:
            steps.append((s, x, self.output[s][x]))
            s = self.transition[s][x]
        return Trace(tuple(steps), s)

    def act(self, s: StateRef, w: Iterable[int]) -> Word:
        """Output word produced from state ``s`` on input ``w``."""
        return self.apply(s, w).output

    def restriction(self, s: StateRef, u: Iterable[int]) -> int:
        """Index of the state acting below the vertex ``u`` (the section by ``u``)."""
        s = self.state_index(s)
        for x in u:
            s = self.transition[s][x]
        return s

    # ---- structural properties

    def is_invertible(self) -> bool:
        return all(len(set(row)) == self.m for row in self.output)

    def inverse(self) -> "MealyAutomaton":
        """Swap the two fields of every edge label."""
        for s, row in enumerate(self.output):
            if len(set(row)) != self.m:
                raise NotInvertibleError(
                    f"state {self.states[s]} does not permute the alphabet"
                )
        trans = [[0] * self.m for _ in self.states]
        out = [[0] * self.m for _ in self.states]
        for s, x, t, y in self.edges():
            trans[s][y] = t
            out[s][y] = x
        return MealyAutomaton(self.alphabet, self.states, trans, out)

    def _incoming(self) -> list:
        # incoming[s][x] = states r with transition[r][x] == s
        inc = [[[] for _ in range(self.m)] for _ in self.states]
        for r, x, s, _ in self.edges():
            inc[s][x].append(r)
        return inc

    def is_reversible(self) -> bool:
        return all(len(c) == 1 for row in self._incoming() for c in row)

    def reverse(self) -> "MealyAutomaton":
        """Reverse every edge ``s -x|y-> s'`` into ``s' -x|y-> s``."""
        inc = self._incoming()
        trans = [[0] * self.m for _ in self.states]
        out = [[0] * self.m for _ in self.states]
        for s in range(self.n_states):
            for x in range(self.m):
                if len(inc[s][x]) != 1:
                    raise NotReversibleError(
                        f"state {self.states[s]} has {len(inc[s][x])} incoming "
                        f"transitions on input {self.alphabet[x]}"
                    )
                r = inc[s][x][0]
                trans[s][x] = r
                out[s][x] = self.output[r][x]
        return MealyAutomaton(self.alphabet, self.states, trans, out)

    def is_strongly_connected(self) -> bool:
        return graph.is_strongly_connected(self.successors())

    def reachable_states(self, s: StateRef) -> list:
        return sorted(graph.reachable(self.successors(), [self.state_index(s)]))

    def subautomaton(self, keep: Iterable[int]) -> "MealyAutomaton":
        """Restrict to a transition-closed set of states, keeping declaration order."""
        keep = sorted(set(keep))
        new = {old: i for i, old in enumerate(keep)}
        try:
            trans = [[new[self.transition[s][x]] for x in range(self.m)] for s in keep]
        except KeyError:
            raise ValueError("state set is not closed under transitions") from None
        out = [list(self.output[s]) for s in keep]
        return MealyAutomaton(self.alphabet, [self.states[s] for s in keep], trans, out)

    def generated_by(self, g: StateRef) -> tuple:
        """Sub-automaton of states reachable from ``g`` and the new index of ``g``."""
        g = self.state_index(g)
        keep = self.reachable_states(g)
        return self.subautomaton(keep), keep.index(g)

    def rename_states(self, names: Sequence[str]) -> "MealyAutomaton":
        return MealyAutomaton(self.alphabet, names, self.transition, self.output)

    def __str__(self):
        return format_automaton(self)


def encode_word(alphabet: Sequence[str], text) -> Word:
    """Turn a string or token sequence into a tuple of symbol indices.

    A string is split on whitespace/commas when it contains them, otherwise
    read character by character (which requires one-character symbols).
    """
    pos = {a: i for i, a in enumerate(alphabet)}
    if isinstance(text, str):
        if any(c.isspace() or c == "," for c in text):
            tokens = text.replace(",", " ").split()
        else:
            tokens = list(text)
    else:
        tokens = list(text)
    word = []
    for tok in tokens:
        if isinstance(tok, int):
            if not 0 <= tok < len(alphabet):
                raise KeyError(f"symbol index {tok} out of range")
            word.append(tok)
        elif tok in pos:
            word.append(pos[tok])
        else:
            raise KeyError(f"unknown symbol {tok!r}")
    return tuple(word)


def decode_word(alphabet: Sequence[str], word: Iterable[int]) -> str:
    sep = "" if all(len(a) == 1 for a in alphabet) else " "
    return sep.join(alphabet[x] for x in word)


def compose(A: MealyAutomaton, B: MealyAutomaton, initial=None) -> MealyAutomaton:
    """Automaton whose state ``(a, b)`` acts as ``b`` applied after ``a``.

    With ``initial`` given as a pair of states, only pairs reachable from it are
    kept; otherwise every pair is kept.  When one factor has a single state the
    other factor's state names are reused.
    """
    if A.alphabet != B.alphabet:
        raise ValueError(f"alphabet mismatch: {A.alphabet} vs {B.alphabet}")
    nb = B.n_states
    pairs = [(a, b) for a in range(A.n_states) for b in range(nb)]

    def step(a, b, x):
        y = A.output[a][x]
        return (A.transition[a][x], B.transition[b][y]), B.output[b][y]

    if initial is not None:
        start = (A.state_index(initial[0]), B.state_index(initial[1]))
        seen = {start}
        todo = [start]
        while todo:
            a, b = todo.pop()
            for x in range(A.m):
                nxt, _ = step(a, b, x)
                if nxt not in seen:
                    seen.add(nxt)
                    todo.append(nxt)
        pairs = [p for p in pairs if p in seen]
    idx = {p: i for i, p in enumerate(pairs)}
    trans, out = [], []
    for a, b in pairs:
        trow, orow = [], []
        for x in range(A.m):
            nxt, z = step(a, b, x)
            trow.append(idx[nxt])
            orow.append(z)
        trans.append(trow)
        out.append(orow)
    if nb == 1:
        names = [A.states[a] for a, _ in pairs]
    elif A.n_states == 1:
        names = [B.states[b] for _, b in pairs]
    else:
        names = [f"{A.states[a]}.{B.states[b]}" for a, b in pairs]
    return MealyAutomaton(A.alphabet, names, trans, out)


def identity_automaton(alphabet: Sequence[str], name: str = "id") -> MealyAutomaton:
    m = len(alphabet)
    return MealyAutomaton(alphabet, [name], [[0] * m], [list(range(m))])


def permutation_automaton(alphabet: Sequence[str], mapping: dict, name: str = "g") -> MealyAutomaton:
    """One-state automaton applying ``mapping`` (symbol -> symbol) letterwise."""
    alphabet = tuple(alphabet)
    out = [alphabet.index(mapping.get(a, a)) for a in alphabet]
    return MealyAutomaton(alphabet, [name], [[0] * len(alphabet)], [out])


# ---- text format


def _strip(line: str) -> str:
    return line.split("#", 1)[0].strip()


def parse_automaton(text: str) -> MealyAutomaton:
    alphabet = states = None
    table: dict = {}
    last_line = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        last_line = lineno
        line = _strip(raw)
        if not line:
            continue
        key, *rest = line.split()
        if alphabet is None:
            if key != "alphabet":
                raise ParseError("expected 'alphabet <sym>...' first", lineno)
            if len(rest) < 2:
                raise ParseError("alphabet needs at least two symbols", lineno)
            if len(set(rest)) != len(rest):
                raise ParseError("duplicate symbol in alphabet", lineno)
            alphabet = tuple(rest)
            continue
        if states is None:
            if key != "states":
                raise ParseError("expected 'states <name>...' after alphabet", lineno)
            if not rest:
                raise ParseError("at least one state required", lineno)
            if len(set(rest)) != len(rest):
                raise ParseError("duplicate state name", lineno)
            states = tuple(rest)
            continue
        if key != "edge":
            raise ParseError(f"unexpected keyword {key!r}", lineno)
        if len(rest) != 4:
            raise ParseError("edge line must be 'edge <state> <in> <next-state> <out>'", lineno)
        s, x, t, y = rest
        for tok, pool, what in ((s, states, "state"), (x, alphabet, "symbol"),
                                (t, states, "state"), (y, alphabet, "symbol")):
            if tok not in pool:
                raise ParseError(f"unknown {what} {tok!r}", lineno)
        if (s, x) in table:
            raise ParseError(f"duplicate edge ({s}, {x})", lineno)
        table[(s, x)] = (t, y)
    if alphabet is None or states is None:
        raise ParseError("missing alphabet/states header", last_line or 1)
    for s in states:
        for x in alphabet:
            if (s, x) not in table:
                raise ParseError(f"missing edge ({s}, {x})", last_line)
    edges = [(s, x, *table[(s, x)]) for s in states for x in alphabet]
    return MealyAutomaton.from_edges(alphabet, states, edges)


def format_automaton(A: MealyAutomaton) -> str:
    lines = ["alphabet " + " ".join(A.alphabet), "states " + " ".join(A.states)]
    for s, x, t, y in A.edges():
        lines.append(f"edge {A.states[s]} {A.alphabet[x]} {A.states[t]} {A.alphabet[y]}")
    return "\n".join(lines) + "\n"
