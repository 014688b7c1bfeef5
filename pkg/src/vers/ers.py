"""Edge replacement systems: expansions, the subdivision VERS, and gluing.

An ERS carries a base graph and, per color, a replacement graph with
distinguished initial and terminal vertices.  Expanding an edge replaces it by
its color's graph, gluing the initial/terminal vertices onto the edge's
endpoints; the full expansion sequence expands every edge at once, naming
edges by words (base edge first) and keeping all previously created vertices.

The associated replacement system works on barycentric subdivisions: each
ERS color c splits into half-edge colors c_i and c_t; the replacement of the
base color is the subdivision of the base graph, and the subdivision of each
X_c is partitioned deterministically between R_{c_i} and R_{c_t} (edges
touching the terminal vertex go to the t side, everything else to the i
side).  Level n of the resulting system is the barycentric subdivision of the
n-th full ERS expansion, which the tests check vertex-by-vertex through an
explicit renaming.

The gluing relation compares two infinite words prefix by prefix: they are
related when every pair of equal-length prefixes is equal or adjacent as
edges of the corresponding expansion.  Its finite-depth diagnostic here is
the independent oracle side for the distance properties of the history graph.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Hashable, Sequence

from .engine import ReplacementEdge, ReplacementGraph, Vers
from .graphs import (
    VTYPE,
    Edge,
    TypedGraph,
    ValidationReport,
    barycentric_subdivision,
    subdivision_colors,
    subdivision_kappa,
)

ERS_START = "s"
ERS_BASE_COLOR = "c0"
VTYPE_LOOP = "V"


class ErsError(ValueError):
    """Raised for malformed systems or out-of-language words."""


@dataclass(frozen=True)
class ErsReplacement:
    """A replacement graph with its initial and terminal vertices."""

    graph: TypedGraph
    iota: Hashable
    tau: Hashable


@dataclass(frozen=True)
class Ers:
    """An edge replacement system."""

    colors: tuple[str, ...]
    base: TypedGraph
    replacements: dict[str, ErsReplacement]


def validate_ers(e: Ers) -> ValidationReport:
    """Structural well-formedness (not the expanding property)."""
    report = ValidationReport()
    if len(set(e.colors)) != len(e.colors):
        report.fail("duplicate colors")
    reserved = {ERS_START, VTYPE, ERS_BASE_COLOR}
    for c in e.colors:
        if c in reserved:
            report.fail(f"color {c!r} collides with a reserved type or color name")
    if set(e.replacements) != set(e.colors):
        report.fail("replacement graphs must be indexed exactly by the colors")
        return report
    derived = [ERS_BASE_COLOR]
    for c in e.colors:
        derived.extend(subdivision_colors(c))
    if len(set(derived)) != len(derived):
        report.fail("subdivision color names collide")
    for c, repl in e.replacements.items():
        ids = {v for v, _t in repl.graph.vertices}
        if repl.iota not in ids or repl.tau not in ids:
            report.fail(f"initial/terminal vertices of {c!r} are not vertices of its graph")
        if repl.iota == repl.tau:
            report.fail(f"initial and terminal vertices of {c!r} coincide")
        for h in repl.graph.edges:
            if h.color not in e.colors:
                report.fail(f"edge {h.id!r} of {c!r} has unknown color {h.color!r}")
    for h in e.base.edges:
        if h.color not in e.colors:
            report.fail(f"base edge {h.id!r} has unknown color {h.color!r}")
    return report


def is_expanding_ers(e: Ers) -> ValidationReport:
    """The three-bullet expanding test gating the expansivity theorems."""
    report = ValidationReport()
    graphs = [("base", e.base, None)] + [
        (f"replacement {c!r}", r.graph, r) for c, r in sorted(e.replacements.items())
    ]
    for name, g, repl in graphs:
        incident = {v for h in g.edges for v in (h.src, h.dst)}
        for v, _t in g.vertices:
            if v not in incident:
                report.fail(f"{name} has an isolated vertex {v!r}")
        if repl is not None:
            if not any(v not in (repl.iota, repl.tau) for v, _t in g.vertices):
                report.fail(f"{name} has no vertex besides its initial and terminal ones")
            for h in g.edges:
                if {h.src, h.dst} == {repl.iota, repl.tau}:
                    report.fail(f"{name} edge {h.id!r} joins the initial and terminal vertices")
    return report


# ----- expansion sequence ------------------------------------------------------------


def ers_expansion_step(e: Ers, g: TypedGraph) -> TypedGraph:
    """One full ERS expansion of an arbitrary colored graph.

    New edges are named (edge, replacement edge) and inner vertices
    (edge, vertex); the input's vertices persist.
    """
    vertices = [(v, VTYPE) for v, _t in g.vertices]
    edges = []
    for h in g.edges:
        repl = e.replacements[h.color]
        vmap: dict[Hashable, Hashable] = {repl.iota: h.src, repl.tau: h.dst}
        for v, _t in repl.graph.vertices:
            if v != repl.iota and v != repl.tau:
                vmap[v] = (h.id, v)
                vertices.append((vmap[v], VTYPE))
        for sub in repl.graph.edges:
            edges.append(Edge((h.id, sub.id), vmap[sub.src], vmap[sub.dst], sub.color))
    return TypedGraph.build(vertices, edges)


def _expansion_tables(e: Ers, n: int):
    """Per-level edge tables word -> (src, dst, color) plus the vertex list."""
    vertices: list[tuple[Hashable, str]] = [(v, VTYPE) for v, _t in e.base.vertices]
    table: dict[tuple, tuple[Hashable, Hashable, str]] = {
        (h.id,): (h.src, h.dst, h.color) for h in e.base.edges
    }
    tables = [table]
    for _k in range(n - 1):
        nxt: dict[tuple, tuple[Hashable, Hashable, str]] = {}
        for word, (src, dst, color) in table.items():
            repl = e.replacements[color]
            vmap: dict[Hashable, Hashable] = {repl.iota: src, repl.tau: dst}
            for v, _t in repl.graph.vertices:
                if v != repl.iota and v != repl.tau:
                    vmap[v] = (word, v)
                    vertices.append((vmap[v], VTYPE))
            for sub in repl.graph.edges:
                nxt[word + (sub.id,)] = (vmap[sub.src], vmap[sub.dst], sub.color)
        table = nxt
        tables.append(table)
    return vertices, tables


def full_expansion(e: Ers, n: int) -> TypedGraph:
    """The n-th graph of the full expansion sequence (n = 1 is the base)."""
    if n < 1:
        raise ErsError("expansion depth must be >= 1")
    report = validate_ers(e)
    if not report.ok:
        raise ErsError("; ".join(report.issues))
    vertices, tables = _expansion_tables(e, n)
    edges = [Edge(w, src, dst, color) for w, (src, dst, color) in tables[-1].items()]
    return TypedGraph.build(vertices, edges)


def _parse_ers_word(e: Ers, w) -> tuple:
    if isinstance(w, str):
        ids = {h.id for h in e.base.edges}
        for repl in e.replacements.values():
            ids |= {h.id for h in repl.graph.edges}
        if any(not isinstance(x, str) or len(x) != 1 for x in ids):
            raise ErsError("pass words as sequences when edge ids are not single characters")
        return tuple(w)
    return tuple(w)


def gluing_related_at_depth(e: Ers, u, v) -> bool:
    """Whether all equal-length prefixes are equal or adjacent edges.

    Words are read base edge first; both must be in the depth-n language
    (every prefix an edge of the corresponding expansion).
    """
    u, v = _parse_ers_word(e, u), _parse_ers_word(e, v)
    if len(u) != len(v):
        raise ErsError("words must have the same length")
    if not u:
        raise ErsError("words must be nonempty")
    report = validate_ers(e)
    if not report.ok:
        raise ErsError("; ".join(report.issues))
    _vertices, tables = _expansion_tables(e, len(u))
    for k in range(1, len(u) + 1):
        pu, pv = u[:k], v[:k]
        for w in (pu, pv):
            if w not in tables[k - 1]:
                raise ErsError(f"{w!r} is not an edge of expansion {k}")
        if pu == pv:
            continue
        su, du, _cu = tables[k - 1][pu]
        sv, dv, _cv = tables[k - 1][pv]
        if not {su, du} & {sv, dv}:
            return False
    return True


# ----- the replacement system ----------------------------------------------------------


def _sigma_names(e: Ers) -> dict[tuple, str]:
    """Deterministic shift-letter names; collisions are kind-qualified.

    Keys are ("bv", v) for base vertices, ("be", id) for base edges, and
    ("r", c, id) for replacement-graph edges and inner vertices.  Plain names
    are kept when globally unique; otherwise base vertices get "#v", base
    edges "#e", and replacement items "@color".  The vtype loop name V is
    reserved.
    """
    entries: list[tuple[tuple, str, str]] = []
    for v, _t in e.base.vertices:
        entries.append((("bv", v), str(v), f"{v}#v"))
    for h in e.base.edges:
        entries.append((("be", h.id), str(h.id), f"{h.id}#e"))
    for c in e.colors:
        repl = e.replacements[c]
        for h in repl.graph.edges:
            entries.append((("r", c, h.id), str(h.id), f"{h.id}@{c}"))
        for v, _t in repl.graph.vertices:
            if v != repl.iota and v != repl.tau:
                entries.append((("r", c, v), str(v), f"{v}@{c}"))
    counts = Counter(plain for _key, plain, _q in entries)
    counts[VTYPE_LOOP] += 1
    return {key: (plain if counts[plain] == 1 else qualified) for key, plain, qualified in entries}


def partition_bary(e: Ers, c: str) -> tuple[ReplacementGraph, ReplacementGraph]:
    """Split bary(X_c) into the i/t replacement pair by the terminal rule.

    Every subdivision edge incident on the terminal vertex goes to the t
    side, the rest to the i side; the initial/terminal vertices become the
    V-letter endpoints and all other vertices ride on the far marker.
    """
    if c not in e.replacements:
        raise ErsError(f"unknown color {c!r}")
    names = _sigma_names(e)
    repl = e.replacements[c]
    b = barycentric_subdivision(repl.graph)
    ci, ct = subdivision_colors(c)
    iota_edges: list[ReplacementEdge] = []
    tau_edges: list[ReplacementEdge] = []
    for edge in b.edges:
        touches_tau = edge.src == repl.tau or edge.dst == repl.tau
        marker = "i" if touches_tau else "t"

        def as_member(u):
            if u == repl.iota:
                return VTYPE_LOOP, "i"
            if u == repl.tau:
                return VTYPE_LOOP, "t"
            return names[("r", c, u)], marker

        src, sm = as_member(edge.src)
        dst, dm = as_member(edge.dst)
        target = tau_edges if touches_tau else iota_edges
        target.append(ReplacementEdge(src, sm, dst, dm, edge.color))
    return ReplacementGraph(ci, tuple(iota_edges)), ReplacementGraph(ct, tuple(tau_edges))


def vers_from_ers(e: Ers) -> Vers:
    """The replacement system whose level n is bary of the n-th expansion."""
    report = validate_ers(e)
    if not report.ok:
        raise ErsError("; ".join(report.issues))
    names = _sigma_names(e)
    sigma_vertices = [(ERS_START, ERS_START), (VTYPE, VTYPE)] + [(c, c) for c in e.colors]
    sigma_edges = [Edge(VTYPE_LOOP, VTYPE, VTYPE, "")]
    for h in e.base.edges:
        sigma_edges.append(Edge(names[("be", h.id)], ERS_START, h.color, ""))
    for v, _t in e.base.vertices:
        sigma_edges.append(Edge(names[("bv", v)], ERS_START, VTYPE, ""))
    for c in e.colors:
        repl = e.replacements[c]
        for h in repl.graph.edges:
            sigma_edges.append(Edge(names[("r", c, h.id)], c, h.color, ""))
        for v, _t in repl.graph.vertices:
            if v != repl.iota and v != repl.tau:
                sigma_edges.append(Edge(names[("r", c, v)], c, VTYPE, ""))
    colors = [ERS_BASE_COLOR]
    kappa = {ERS_BASE_COLOR: (ERS_START, ERS_START)}
    kappa.update(subdivision_kappa(e.colors))
    replacements: dict[str, ReplacementGraph] = {}
    base_bary = barycentric_subdivision(e.base)

    def base_member(u) -> str:
        key = ("bv", u) if ("bv", u) in names else ("be", u)
        return names[key]

    replacements[ERS_BASE_COLOR] = ReplacementGraph(
        ERS_BASE_COLOR,
        tuple(
            ReplacementEdge(base_member(h.src), "i", base_member(h.dst), "i", h.color)
            for h in base_bary.edges
        ),
    )
    for c in e.colors:
        r_i, r_t = partition_bary(e, c)
        colors.extend((r_i.color, r_t.color))
        replacements[r_i.color] = r_i
        replacements[r_t.color] = r_t
    return Vers(
        sigma=TypedGraph.build(sigma_vertices, sigma_edges),
        start=ERS_START,
        colors=tuple(colors),
        kappa=kappa,
        replacements=replacements,
        base_colors=(ERS_BASE_COLOR,),
        word_order="base_first",
    )
