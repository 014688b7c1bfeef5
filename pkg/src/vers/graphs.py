"""Typed colored multigraphs.

The graphs used throughout this package are directed multigraphs whose
vertices carry a *type* and whose edges carry a *color*.  Parallel edges are
meaningful and are therefore never merged; each edge has its own id.  Distances
ignore edge orientation (walks may traverse edges either way).

A *kappa map* assigns to every color a pair of vertex types; a graph is
kappa-compatible when every c-colored edge runs from a vertex of type
``kappa[c][0]`` to a vertex of type ``kappa[c][1]``.  Kappa-compatibility is
what makes a graph expandable by a replacement system (see :mod:`vers.engine`).

Vertex and edge ids are strings in exported graphs; internally-produced
expansion graphs use tuples of letters as vertex ids until they are rendered.
Equality of graphs (:func:`graph_equal`) is labeled equality — same vertex
set with the same types and the same multiset of (from, to, color) triples —
not isomorphism: all comparisons in this package are between graphs that share
a canonical naming scheme.
"""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Mapping, Sequence

VertexId = Hashable
INFINITY = float("inf")


class GraphError(ValueError):
    """Raised for structurally invalid graph constructions."""


@dataclass(frozen=True)
class Edge:
    """A directed colored edge.  ``id`` is unique within its graph."""

    id: str
    src: VertexId
    dst: VertexId
    color: str


@dataclass(frozen=True)
class TypedGraph:
    """An immutable directed multigraph with vertex types and edge colors."""

    vertices: tuple[tuple[VertexId, str], ...]
    edges: tuple[Edge, ...]

    @staticmethod
    def build(vertices: Iterable[tuple[VertexId, str]], edges: Iterable[Edge]) -> "TypedGraph":
        vseq = tuple(vertices)
        eseq = tuple(edges)
        seen: set[VertexId] = set()
        for v, _t in vseq:
            if v in seen:
                raise GraphError(f"duplicate vertex id {v!r}")
            seen.add(v)
        eids: set[str] = set()
        for e in eseq:
            if e.id in eids:
                raise GraphError(f"duplicate edge id {e.id!r}")
            eids.add(e.id)
            if e.src not in seen or e.dst not in seen:
                raise GraphError(f"edge {e.id!r} references unknown vertex")
        return TypedGraph(vseq, eseq)

    def vertex_types(self) -> dict[VertexId, str]:
        return dict(self.vertices)

    def vertex_ids(self) -> list[VertexId]:
        return [v for v, _t in self.vertices]

    def colors(self) -> set[str]:
        return {e.color for e in self.edges}

    def undirected_adjacency(self) -> dict[VertexId, list[VertexId]]:
        adj: dict[VertexId, list[VertexId]] = {v: [] for v, _t in self.vertices}
        for e in self.edges:
            adj[e.src].append(e.dst)
            if e.dst != e.src:
                adj[e.dst].append(e.src)
        return adj


@dataclass
class ValidationReport:
    """Outcome of a structural validation: ``ok`` plus human-readable issues."""

    ok: bool = True
    issues: list[str] = field(default_factory=list)

    def fail(self, message: str) -> None:
        self.ok = False
        self.issues.append(message)


def validate_kappa_compatible(g: TypedGraph, kappa: Mapping[str, tuple[str, str]]) -> ValidationReport:
    """Check that every edge's endpoint types match kappa for its color.

    Colors absent from ``kappa`` are reported as unknown.
    """
    report = ValidationReport()
    types = g.vertex_types()
    for e in g.edges:
        pair = kappa.get(e.color)
        if pair is None:
            report.fail(f"edge {e.id!r}: unknown color {e.color!r}")
            continue
        want_src, want_dst = pair
        if types[e.src] != want_src:
            report.fail(
                f"edge {e.id!r}: source {e.src!r} has type {types[e.src]!r}, "
                f"color {e.color!r} requires {want_src!r}"
            )
        if types[e.dst] != want_dst:
            report.fail(
                f"edge {e.id!r}: target {e.dst!r} has type {types[e.dst]!r}, "
                f"color {e.color!r} requires {want_dst!r}"
            )
    return report


def bfs_distance(g: TypedGraph, u: VertexId, v: VertexId) -> int | float:
    """Length of a shortest undirected walk from u to v (inf if none)."""
    types = g.vertex_types()
    if u not in types or v not in types:
        raise GraphError(f"unknown vertex in distance query: {u!r} or {v!r}")
    if u == v:
        return 0
    adj = g.undirected_adjacency()
    dist: dict[VertexId, int] = {u: 0}
    queue: deque[VertexId] = deque([u])
    while queue:
        w = queue.popleft()
        d = dist[w] + 1
        for x in adj[w]:
            if x not in dist:
                if x == v:
                    return d
                dist[x] = d
                queue.append(x)
    return INFINITY


def graph_equal(g1: TypedGraph, g2: TypedGraph) -> bool:
    """Labeled equality: vertex sets with types, and edge (from,to,color) multisets."""
    if g1.vertex_types() != g2.vertex_types():
        return False
    triples1 = Counter((e.src, e.dst, e.color) for e in g1.edges)
    triples2 = Counter((e.src, e.dst, e.color) for e in g2.edges)
    return triples1 == triples2


def subdivision_colors(color: str) -> tuple[str, str]:
    """The two half-edge colors a base color splits into."""
    return f"{color}_i", f"{color}_t"


VTYPE = "vtype"


def barycentric_subdivision(g: TypedGraph) -> TypedGraph:
    """Split every edge at a midpoint vertex.

    A c-colored edge u -> w becomes u -> e (colored ``c_i``) and e -> w
    (colored ``c_t``), where the midpoint vertex is named by the edge id and
    typed by the edge's color.  Original vertices keep their ids and are
    retyped ``vtype``; their input types are ignored.  The result is
    kappa-compatible for kappa(c_i) = (vtype, c), kappa(c_t) = (c, vtype).
    """
    vertex_ids = set(v for v, _t in g.vertices)
    for e in g.edges:
        if e.id in vertex_ids:
            raise GraphError(f"edge id {e.id!r} collides with a vertex id; cannot subdivide")
    vertices: list[tuple[VertexId, str]] = [(v, VTYPE) for v, _t in g.vertices]
    vertices.extend((e.id, e.color) for e in g.edges)
    edges: list[Edge] = []
    for e in g.edges:
        ci, ct = subdivision_colors(e.color)
        edges.append(Edge(f"{e.id}_i", e.src, e.id, ci))
        edges.append(Edge(f"{e.id}_t", e.id, e.dst, ct))
    return TypedGraph.build(vertices, edges)


def subdivision_kappa(colors: Iterable[str]) -> dict[str, tuple[str, str]]:
    """The kappa map under which barycentric subdivisions are compatible."""
    kappa: dict[str, tuple[str, str]] = {}
    for c in colors:
        ci, ct = subdivision_colors(c)
        kappa[ci] = (VTYPE, c)
        kappa[ct] = (c, VTYPE)
    return kappa


def relabel(g: TypedGraph, vertex_map: Mapping[VertexId, VertexId]) -> TypedGraph:
    """Rename vertices through a bijective map (ids not mapped are kept)."""
    new_ids = [vertex_map.get(v, v) for v in g.vertex_ids()]
    if len(set(new_ids)) != len(new_ids):
        raise GraphError("vertex relabeling is not injective")
    vertices = [(vertex_map.get(v, v), t) for v, t in g.vertices]
    edges = [
        Edge(e.id, vertex_map.get(e.src, e.src), vertex_map.get(e.dst, e.dst), e.color)
        for e in g.edges
    ]
    return TypedGraph.build(vertices, edges)


def erase_colors(g: TypedGraph, keep: Sequence[str] = ()) -> TypedGraph:
    """Replace every color outside ``keep`` with a single blank color."""
    kept = set(keep)
    edges = [
        e if e.color in kept else Edge(e.id, e.src, e.dst, "") for e in g.edges
    ]
    return TypedGraph.build(g.vertices, edges)
