"""Self-similar group automata and their replacement systems.

An automaton here is an invertible letter transducer: finite state set,
finite alphabet, and for every (state, letter) an (output letter, next state)
pair such that each state's input-to-output letter map is a permutation of
the alphabet.  States act on words by reading them left to right
(:func:`act`), and the level-n Schreier graph records this action on all
words of length n.

The associated replacement system has a single type with one letter per
alphabet symbol and one color per state; the replacement graph for state ``g``
contains, for every state ``h`` and letter ``x`` whose transition is
``(y, g)``, an ``h``-colored edge from ``x.i`` to ``y.t``.  Expanding the base
bouquet of state loops then reproduces the Schreier graphs level by level
(with words displayed newest letter first), which the test suite checks
against :func:`schreier_graph` directly.
"""

from __future__ import annotations

from dataclasses import dataclass

from .engine import ReplacementEdge, ReplacementGraph, Vers
from .graphs import Edge, TypedGraph, ValidationReport

START_TYPE = "s"


class AutomatonError(ValueError):
    """Raised for malformed transducers."""


@dataclass(frozen=True)
class Automaton:
    """An invertible letter transducer."""

    alphabet: tuple[str, ...]
    states: tuple[str, ...]
    transitions: dict[tuple[str, str], tuple[str, str]]


def validate_automaton(aut: Automaton) -> ValidationReport:
    """Check totality, closure, and per-state invertibility."""
    report = ValidationReport()
    letters = set(aut.alphabet)
    states = set(aut.states)
    if len(letters) != len(aut.alphabet):
        report.fail("duplicate alphabet letters")
    if len(states) != len(aut.states):
        report.fail("duplicate state names")
    for key, (out, nxt) in aut.transitions.items():
        state, letter = key
        if state not in states or letter not in letters:
            report.fail(f"transition {key!r} names unknown state or letter")
        if out not in letters:
            report.fail(f"transition {key!r} outputs unknown letter {out!r}")
        if nxt not in states:
            report.fail(f"transition {key!r} moves to unknown state {nxt!r}")
    for g in aut.states:
        outputs = []
        for x in aut.alphabet:
            if (g, x) not in aut.transitions:
                report.fail(f"state {g!r} has no transition on {x!r}")
            else:
                outputs.append(aut.transitions[(g, x)][0])
        if sorted(outputs) != sorted(aut.alphabet):
            report.fail(f"state {g!r} is not invertible: outputs {outputs!r}")
    return report


def act(aut: Automaton, state: str, word: str) -> str:
    """Apply a state to a word, reading letters left to right."""
    out: list[str] = []
    g = state
    for x in word:
        try:
            y, g = aut.transitions[(g, x)]
        except KeyError:
            raise AutomatonError(f"no transition from state {g!r} on letter {x!r}") from None
        out.append(y)
    return "".join(out)


def schreier_graph(aut: Automaton, n: int, vertex_type: str = START_TYPE) -> TypedGraph:
    """The action graph on all length-n words: one edge per (word, state).

    Computed directly from the transducer, independently of any replacement
    machinery, so it can serve as an oracle for expansion graphs.
    """
    words = [""]
    for _ in range(n):
        words = [w + x for w in words for x in aut.alphabet]
    vertices = [(w, vertex_type) for w in words]
    edges = [
        Edge(f"{g}:{w}", w, act(aut, g, w), g)
        for w in words
        for g in aut.states
    ]
    return TypedGraph.build(vertices, edges)


def vers_from_automaton(aut: Automaton) -> Vers:
    """The replacement system whose expansion graphs are the Schreier graphs."""
    report = validate_automaton(aut)
    if not report.ok:
        raise AutomatonError("; ".join(report.issues))
    sigma = TypedGraph.build(
        [(START_TYPE, START_TYPE)],
        [Edge(x, START_TYPE, START_TYPE, "") for x in aut.alphabet],
    )
    repl_edges: dict[str, list[ReplacementEdge]] = {g: [] for g in aut.states}
    for h in aut.states:
        for x in aut.alphabet:
            y, g = aut.transitions[(h, x)]
            repl_edges[g].append(ReplacementEdge(x, "i", y, "t", h))
    return Vers(
        sigma=sigma,
        start=START_TYPE,
        colors=tuple(aut.states),
        kappa={g: (START_TYPE, START_TYPE) for g in aut.states},
        replacements={g: ReplacementGraph(g, tuple(repl_edges[g])) for g in aut.states},
        base_colors=tuple(aut.states),
    )
