"""Shared fixtures: small hand-built replacement systems with known expansions."""

from __future__ import annotations

import pytest
from hypothesis import settings

from vers.engine import ReplacementEdge, ReplacementGraph, Vers
from vers.graphs import Edge, TypedGraph

settings.register_profile("default", deadline=None)
settings.load_profile("default")


def _shift(vertices: list[str], edges: list[tuple[str, str, str]]) -> TypedGraph:
    return TypedGraph.build(
        [(t, t) for t in vertices],
        [Edge(x, src, dst, "") for x, src, dst in edges],
    )


def _repl(color: str, edges: list[tuple[str, str, str, str, str]]) -> ReplacementGraph:
    return ReplacementGraph(color, tuple(ReplacementEdge(*e) for e in edges))


@pytest.fixture
def odometer_vers() -> Vers:
    """Binary odometer system: one type, letters 0/1, colors 1 (identity) and a."""
    return Vers(
        sigma=_shift(["s"], [("0", "s", "s"), ("1", "s", "s")]),
        start="s",
        colors=("1", "a"),
        kappa={"1": ("s", "s"), "a": ("s", "s")},
        replacements={
            "1": _repl(
                "1",
                [
                    ("0", "i", "1", "t", "a"),
                    ("0", "i", "0", "t", "1"),
                    ("1", "i", "1", "t", "1"),
                ],
            ),
            "a": _repl("a", [("1", "i", "0", "t", "a")]),
        },
        base_colors=("1", "a"),
    )


@pytest.fixture
def two_type_vers() -> Vers:
    """A two-type system exercising markers, mixed kappa and isolated vertices."""
    return Vers(
        sigma=_shift(["s", "v"], [("a1", "s", "s"), ("a2", "s", "v"), ("b1", "v", "v")]),
        start="s",
        colors=("c_ss", "c_sv", "c_vv"),
        kappa={"c_ss": ("s", "s"), "c_sv": ("s", "v"), "c_vv": ("v", "v")},
        replacements={
            "c_ss": _repl(
                "c_ss",
                [
                    ("a1", "i", "a1", "t", "c_ss"),
                    ("a1", "i", "a2", "t", "c_sv"),
                ],
            ),
            "c_sv": _repl("c_sv", [("a2", "i", "b1", "t", "c_vv")]),
            "c_vv": _repl("c_vv", [("b1", "i", "b1", "t", "c_vv")]),
        },
        base_colors=("c_ss",),
    )
