"""Vertex-and-edge replacement systems and their expansion sequence.

A replacement system consists of

- an *edge shift*: a finite directed graph ``sigma`` whose vertices are the
  vertex **types** and whose edges are the **letters**, with a distinguished
  start type ``s``;
- a finite color set and a map ``kappa`` assigning to every color a pair of
  types;
- for every color ``c`` a **replacement graph** over the marker universe
  ``{x.i : iota(x) = kappa(c)[0]} ∪ {y.t : iota(y) = kappa(c)[1]}`` (``x``
  ranging over letters; the markers ``i``/``t`` refer to the initial/terminal
  endpoint of the edge being replaced; the vertex ``x.m`` has type ``tau(x)``);
- a **base bouquet**: a list of colors ``c`` with ``kappa(c) = (s, s)``,
  realized as loops at the empty word.

Words are directed letter paths in ``sigma`` starting at ``s``; they are
stored base-level-first (index 0 = first expansion letter, new letters are
appended).  Rendering is context dependent: most systems display words newest
letter first, edge-replacement systems display them base letter first; the
``word_order`` field records the choice.

Expanding a kappa-compatible graph replaces every ``c``-colored edge
``u -> w`` by a copy of the replacement graph for ``c``, where the marker
vertex ``x.i`` lands on the one-letter extension ``u + x`` and ``x.t`` on
``w + x``; the vertex set of the expansion consists of *all* one-letter
extensions of the input vertices, isolated ones included.  Iterating from the
base bouquet yields the graph sequence ``gamma(0), gamma(1), ...`` whose
vertex sets are exactly the words of each length.

The **history truncation** stacks the first ``depth + 1`` of these graphs:
vertical edges join each word to its one-letter extensions (a rooted tree),
horizontal edges are the edges of the individual ``gamma(n)``.  Every
horizontal edge records which parent edge spawned it, which yields *spanning
lifts*; distances computed inside a truncation are exact for the infinite
object because lifting never increases distances.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence

from .graphs import (
    Edge,
    GraphError,
    TypedGraph,
    ValidationReport,
    validate_kappa_compatible,
)

Word = tuple[str, ...]
EPSILON_DISPLAY = "ε"
MARKERS = ("i", "t")


class VersError(ValueError):
    """Base class for replacement-system errors."""


class IncompatibleGraphError(VersError):
    """Raised when asked to expand a graph that is not kappa-compatible."""


class UnknownWordError(VersError):
    """Raised when a word is not a letter path from the start type."""


class LiftError(VersError):
    """Raised when a level-0 horizontal edge is asked for its spanning lift."""


@dataclass(frozen=True)
class ReplacementEdge:
    """One edge of a replacement graph, endpoints given as (letter, marker)."""

    src_letter: str
    src_marker: str
    dst_letter: str
    dst_marker: str
    color: str


@dataclass(frozen=True)
class ReplacementGraph:
    """The replacement graph for one color: an edge list over the marker universe."""

    color: str
    edges: tuple[ReplacementEdge, ...]


@dataclass
class Vers:
    """A vertex-and-edge replacement system.

    ``sigma`` is the shift graph: vertex ids are the types (each vertex's type
    field is its own id), edge ids are the letters (edge colors unused).
    """

    sigma: TypedGraph
    start: str
    colors: tuple[str, ...]
    kappa: dict[str, tuple[str, str]]
    replacements: dict[str, ReplacementGraph]
    base_colors: tuple[str, ...]
    word_order: str = "newest_first"

    def __post_init__(self) -> None:
        self.letters: list[str] = [e.id for e in self.sigma.edges]
        self.letter_src: dict[str, str] = {e.id: e.src for e in self.sigma.edges}
        self.letter_dst: dict[str, str] = {e.id: e.dst for e in self.sigma.edges}
        self.types: list[str] = [v for v, _t in self.sigma.vertices]
        self.letters_from: dict[str, list[str]] = {t: [] for t in self.types}
        for e in self.sigma.edges:
            self.letters_from[e.src].append(e.id)
        self._single_char = all(len(x) == 1 for x in self.letters)

    # ----- word bookkeeping -------------------------------------------------

    def word_type(self, word: Word) -> str:
        """The type of a word: where its letter path ends (start for ε)."""
        t = self.start
        for x in word:
            if x not in self.letter_src or self.letter_src[x] != t:
                raise UnknownWordError(f"{word!r} is not a letter path from {self.start!r}")
            t = self.letter_dst[x]
        return t

    def render_word(self, word: Word) -> str:
        """Display form of a stored word (see module docstring)."""
        if not word:
            return EPSILON_DISPLAY
        seq = tuple(reversed(word)) if self.word_order == "newest_first" else word
        return "".join(seq) if self._single_char else "·".join(seq)

    def parse_word(self, text: str) -> Word:
        """Inverse of :meth:`render_word`."""
        if text in ("", EPSILON_DISPLAY):
            return ()
        parts = tuple(text.split("·")) if "·" in text or not self._single_char else tuple(text)
        if self.word_order == "newest_first":
            parts = tuple(reversed(parts))
        self.word_type(parts)  # raises if invalid
        return parts

    def replacement_universe(self, color: str) -> list[tuple[str, str]]:
        """All marker vertices (letter, marker) available to R_color."""
        t_i, t_t = self.kappa[color]
        universe = [(x, "i") for x in self.letters if self.letter_src[x] == t_i]
        universe += [(y, "t") for y in self.letters if self.letter_src[y] == t_t]
        return universe

    def replacement_as_graph(self, color: str) -> TypedGraph:
        """The replacement graph as a typed graph over its full marker universe."""
        universe = self.replacement_universe(color)
        vertices = [((x, m), self.letter_dst[x]) for x, m in universe]
        edges = [
            Edge(f"{color}.{k}", (e.src_letter, e.src_marker), (e.dst_letter, e.dst_marker), e.color)
            for k, e in enumerate(self.replacements[color].edges)
        ]
        return TypedGraph.build(vertices, edges)


def validate_vers(v: Vers) -> ValidationReport:
    """Structural validation: kappa totality, marker universes, compatibility."""
    report = ValidationReport()
    type_set = set(v.types)
    if v.start not in type_set:
        report.fail(f"start type {v.start!r} is not a sigma vertex")
    for vertex, t in v.sigma.vertices:
        if t != vertex:
            report.fail(f"sigma vertex {vertex!r} must be its own type (got {t!r})")
    for c in v.colors:
        if c not in v.kappa:
            report.fail(f"kappa is missing color {c!r}")
    for c, pair in v.kappa.items():
        if c not in v.colors:
            report.fail(f"kappa names unknown color {c!r}")
        else:
            for t in pair:
                if t not in type_set:
                    report.fail(f"kappa[{c!r}] uses unknown type {t!r}")
    for c in v.base_colors:
        if c not in v.colors:
            report.fail(f"base color {c!r} is not a color")
        elif v.kappa.get(c) != (v.start, v.start):
            report.fail(
                f"base color {c!r} must have kappa ({v.start!r}, {v.start!r}); "
                f"got {v.kappa.get(c)!r}"
            )
    for c in v.colors:
        if c not in v.replacements:
            report.fail(f"no replacement graph for color {c!r}")
            continue
        if v.kappa.get(c) is None or any(t not in type_set for t in v.kappa[c]):
            continue  # already reported
        universe = set(v.replacement_universe(c))
        for k, e in enumerate(v.replacements[c].edges):
            for letter, marker, role in (
                (e.src_letter, e.src_marker, "source"),
                (e.dst_letter, e.dst_marker, "target"),
            ):
                if marker not in MARKERS:
                    report.fail(f"R[{c!r}] edge {k}: bad marker {marker!r}")
                elif (letter, marker) not in universe:
                    report.fail(
                        f"R[{c!r}] edge {k}: {role} ({letter!r},{marker!r}) is outside "
                        f"the marker universe for kappa {v.kappa[c]!r}"
                    )
            if e.color not in v.colors:
                report.fail(f"R[{c!r}] edge {k}: unknown color {e.color!r}")
            elif all((l, m) in universe for l, m in ((e.src_letter, e.src_marker), (e.dst_letter, e.dst_marker))):
                want_src, want_dst = v.kappa[e.color]
                if v.letter_dst[e.src_letter] != want_src or v.letter_dst[e.dst_letter] != want_dst:
                    report.fail(
                        f"R[{c!r}] edge {k}: endpoint types "
                        f"({v.letter_dst[e.src_letter]!r},{v.letter_dst[e.dst_letter]!r}) "
                        f"do not match kappa[{e.color!r}] = {v.kappa[e.color]!r}"
                    )
    return report


# ----- expansion of explicit graphs ------------------------------------------


def _child_id(parent, letter: str):
    return (*parent, letter) if isinstance(parent, tuple) else (parent, letter)


def base_bouquet(v: Vers) -> TypedGraph:
    """gamma(0): the empty word carrying one loop per base color."""
    vertices = [((), v.start)]
    edges = [Edge(f"{c}.{i}", (), (), c) for i, c in enumerate(v.base_colors)]
    return TypedGraph.build(vertices, edges)


def expand(v: Vers, g: TypedGraph) -> TypedGraph:
    """One simultaneous expansion step of a kappa-compatible graph.

    Vertices of the result are *all* one-letter extensions ``u + x`` with
    ``iota(x) = type(u)``; each ``c``-colored edge spawns one edge per edge of
    the replacement graph for ``c``, endpoints resolved through the markers.
    Edge ids extend the parent edge id, so ids are full provenance chains.
    """
    report = validate_kappa_compatible(g, v.kappa)
    for u, t in g.vertices:
        if t not in v.letters_from:
            report.fail(f"vertex {u!r} has unknown type {t!r}")
    if not report.ok:
        raise IncompatibleGraphError("; ".join(report.issues))
    vertices: list[tuple[object, str]] = []
    for u, t in g.vertices:
        for x in v.letters_from.get(t, ()):
            vertices.append((_child_id(u, x), v.letter_dst[x]))
    edges: list[Edge] = []
    for e in g.edges:
        repl = v.replacements[e.color]
        for k, r in enumerate(repl.edges):
            src_parent = e.src if r.src_marker == "i" else e.dst
            dst_parent = e.src if r.dst_marker == "i" else e.dst
            edges.append(
                Edge(
                    f"{e.id}/{e.color}.{k}",
                    _child_id(src_parent, r.src_letter),
                    _child_id(dst_parent, r.dst_letter),
                    r.color,
                )
            )
    return TypedGraph.build(vertices, edges)


# ----- indexed history truncation ---------------------------------------------


@dataclass
class _Level:
    """Vertices of one level plus the horizontal edges of its graph.

    Vertices are parallel lists indexed by position; children of one parent
    are contiguous in the next level, so the descendants of a vertex form a
    contiguous index interval at every deeper level.
    """

    letters: list[int] = field(default_factory=list)
    parent: list[int] = field(default_factory=list)
    typ: list[int] = field(default_factory=list)
    child_start: list[int] = field(default_factory=list)
    esrc: list[int] = field(default_factory=list)
    edst: list[int] = field(default_factory=list)
    ecolor: list[int] = field(default_factory=list)
    eparent: list[int] = field(default_factory=list)
    erepl: list[int] = field(default_factory=list)


@dataclass(frozen=True)
class HorizontalEdge:
    """Public handle for a horizontal edge of a history truncation."""

    level: int
    index: int
    src: Word
    dst: Word
    color: str
    id: str


class HistoryTruncation:
    """The first ``depth + 1`` levels of the history graph of a system."""

    def __init__(self, vers: Vers, depth: int):
        if depth < 0:
            raise VersError("depth must be >= 0")
        self.vers = vers
        self.depth = depth
        self._letter_index = {x: i for i, x in enumerate(vers.letters)}
        self._type_index = {t: i for i, t in enumerate(vers.types)}
        self._color_index = {c: i for i, c in enumerate(vers.colors)}
        # rank of a letter among the letters leaving its source type
        self._letter_rank = [0] * len(vers.letters)
        self._fanout = [len(vers.letters_from[t]) for t in vers.types]
        self._letters_from_idx: list[list[int]] = [
            [self._letter_index[x] for x in vers.letters_from[t]] for t in vers.types
        ]
        for t in vers.types:
            for rank, x in enumerate(vers.letters_from[t]):
                self._letter_rank[self._letter_index[x]] = rank
        self._compiled: dict[int, list[tuple[int, bool, int, bool, int]]] = {}
        for c in vers.colors:
            self._compiled[self._color_index[c]] = [
                (
                    self._letter_index[r.src_letter],
                    r.src_marker == "t",
                    self._letter_index[r.dst_letter],
                    r.dst_marker == "t",
                    self._color_index[r.color],
                )
                for r in vers.replacements[c].edges
            ]
        self.levels: list[_Level] = []
        self._hadj: dict[int, list[list[int]]] = {}
        self._build()

    def _build(self) -> None:
        v = self.vers
        root = _Level()
        root.letters.append(-1)
        root.parent.append(-1)
        root.typ.append(self._type_index[v.start])
        for i, c in enumerate(v.base_colors):
            root.esrc.append(0)
            root.edst.append(0)
            root.ecolor.append(self._color_index[c])
            root.eparent.append(-1)
            root.erepl.append(i)
        self.levels.append(root)
        for _n in range(self.depth):
            prev = self.levels[-1]
            cur = _Level()
            # vertices: all one-letter extensions, in parent-major order
            prev.child_start = [0] * (len(prev.typ) + 1)
            pos = 0
            for p, t in enumerate(prev.typ):
                prev.child_start[p] = pos
                for x in self._letters_from_idx[t]:
                    cur.letters.append(x)
                    cur.parent.append(p)
                    cur.typ.append(self._type_index[v.letter_dst[v.letters[x]]])
                    pos += 1
            prev.child_start[len(prev.typ)] = pos
            # horizontal edges: expand every edge of the previous level
            child_start = prev.child_start
            rank = self._letter_rank
            for j in range(len(prev.esrc)):
                s, d, c = prev.esrc[j], prev.edst[j], prev.ecolor[j]
                for k, (xl, x_is_t, yl, y_is_t, outc) in enumerate(self._compiled[c]):
                    sp = d if x_is_t else s
                    dp = d if y_is_t else s
                    cur.esrc.append(child_start[sp] + rank[xl])
                    cur.edst.append(child_start[dp] + rank[yl])
                    cur.ecolor.append(outc)
                    cur.eparent.append(j)
                    cur.erepl.append(k)
            self.levels.append(cur)

    # ----- vertex accessors ---------------------------------------------------

    def level_size(self, level: int) -> int:
        return len(self.levels[level].typ)

    def word_at(self, level: int, index: int) -> Word:
        v = self.vers
        letters: list[str] = []
        lvl, i = level, index
        while lvl > 0:
            letters.append(v.letters[self.levels[lvl].letters[i]])
            i = self.levels[lvl].parent[i]
            lvl -= 1
        return tuple(reversed(letters))

    def type_at(self, level: int, index: int) -> str:
        return self.vers.types[self.levels[level].typ[index]]

    def index_of(self, word: Word) -> tuple[int, int]:
        """Locate a stored word; raises UnknownWordError if absent."""
        if len(word) > self.depth:
            raise UnknownWordError(f"word {word!r} is deeper than the truncation")
        idx = 0
        for lvl, x in enumerate(word):
            xi = self._letter_index.get(x)
            t = self.levels[lvl].typ[idx]
            if xi is None or xi not in self._letters_from_idx[t]:
                raise UnknownWordError(f"{word!r} is not a letter path from the start type")
            idx = self.levels[lvl].child_start[idx] + self._letter_rank[xi]
        return len(word), idx

    def pred(self, level: int, index: int) -> int:
        return self.levels[level].parent[index]

    def descendant_range(self, level: int, index: int, down: int) -> tuple[int, int]:
        """Index interval of the depth-``down`` descendants (contiguous)."""
        lo, hi = index, index + 1
        for lvl in range(level, level + down):
            cs = self.levels[lvl].child_start
            lo, hi = cs[lo], cs[hi]
        return lo, hi

    # ----- horizontal edges -----------------------------------------------------

    def horizontal_count(self, level: int) -> int:
        return len(self.levels[level].esrc)

    def provenance_id(self, level: int, index: int) -> str:
        """The provenance chain of a horizontal edge, rendered as an id."""
        entries: list[str] = []
        lvl, j = level, index
        while lvl > 0:
            parent = self.levels[lvl].eparent[j]
            parent_color = self.vers.colors[self.levels[lvl - 1].ecolor[parent]]
            entries.append(f"{parent_color}.{self.levels[lvl].erepl[j]}")
            j = parent
            lvl -= 1
        root = self.levels[0]
        entries.append(f"{self.vers.colors[root.ecolor[j]]}.{root.erepl[j]}")
        return "/".join(reversed(entries))

    def horizontal_edge(self, level: int, index: int) -> HorizontalEdge:
        lv = self.levels[level]
        return HorizontalEdge(
            level,
            index,
            self.word_at(level, lv.esrc[index]),
            self.word_at(level, lv.edst[index]),
            self.vers.colors[lv.ecolor[index]],
            self.provenance_id(level, index),
        )

    def horizontal_edges(self, level: int) -> Iterator[HorizontalEdge]:
        for j in range(self.horizontal_count(level)):
            yield self.horizontal_edge(level, j)

    def horizontal_adjacency(self, level: int) -> list[list[int]]:
        """Undirected horizontal neighbor lists (self-loops dropped), cached."""
        cached = self._hadj.get(level)
        if cached is not None:
            return cached
        lv = self.levels[level]
        adj: list[list[int]] = [[] for _ in range(len(lv.typ))]
        for s, d in zip(lv.esrc, lv.edst):
            if s != d:
                adj[s].append(d)
                adj[d].append(s)
        self._hadj[level] = adj
        return adj

    # ----- graph materialization ------------------------------------------------

    def graph_at(self, level: int) -> TypedGraph:
        """The level's graph with rendered word ids and provenance edge ids."""
        v = self.vers
        # provenance ids computed level by level to avoid repeated chain walks
        ids: list[str] = [
            f"{v.colors[self.levels[0].ecolor[j]]}.{self.levels[0].erepl[j]}"
            for j in range(self.horizontal_count(0))
        ]
        for lvl in range(1, level + 1):
            prev_ids = ids
            prev_colors = self.levels[lvl - 1].ecolor
            lv = self.levels[lvl]
            ids = [
                f"{prev_ids[lv.eparent[j]]}/{v.colors[prev_colors[lv.eparent[j]]]}.{lv.erepl[j]}"
                for j in range(len(lv.esrc))
            ]
        words = [self.render_at(level, i) for i in range(self.level_size(level))]
        vertices = [(words[i], self.type_at(level, i)) for i in range(self.level_size(level))]
        lv = self.levels[level]
        edges = [
            Edge(ids[j], words[lv.esrc[j]], words[lv.edst[j]], v.colors[lv.ecolor[j]])
            for j in range(len(lv.esrc))
        ]
        return TypedGraph.build(vertices, edges)

    def render_at(self, level: int, index: int) -> str:
        return self.vers.render_word(self.word_at(level, index))

    # ----- distances ------------------------------------------------------------

    def _locate(self, w: Word | str) -> tuple[int, int]:
        word = self.vers.parse_word(w) if isinstance(w, str) else w
        return self.index_of(word)

    def at_distance(self, u: Word | str, v: Word | str, full: bool = False) -> int | float:
        """Distance between two words in the truncation.

        By default the breadth-first search is restricted to levels up to
        ``max(level(u), level(v))``; by the lifting argument this equals the
        distance in the full (infinite) history graph.  ``full=True`` lets the
        search use every level of the truncation instead, which is useful for
        testing exactly that claim.
        """
        (lu, iu), (lv, iv) = self._locate(u), self._locate(v)
        if (lu, iu) == (lv, iv):
            return 0
        cap = self.depth if full else max(lu, lv)
        start, goal = (lu, iu), (lv, iv)
        dist: dict[tuple[int, int], int] = {start: 0}
        queue: deque[tuple[int, int]] = deque([start])
        while queue:
            lvl, i = queue.popleft()
            d = dist[(lvl, i)] + 1
            neighbors: list[tuple[int, int]] = []
            if lvl > 0:
                neighbors.append((lvl - 1, self.levels[lvl].parent[i]))
            if lvl < cap:
                cs = self.levels[lvl].child_start
                neighbors.extend((lvl + 1, j) for j in range(cs[i], cs[i + 1]))
            neighbors.extend((lvl, j) for j in self.horizontal_adjacency(lvl)[i])
            for key in neighbors:
                if key not in dist:
                    if key == goal:
                        return d
                    dist[key] = d
                    queue.append(key)
        return float("inf")


def history(v: Vers, depth: int) -> HistoryTruncation:
    """Build the history truncation of the system to the given depth."""
    return HistoryTruncation(v, depth)


def gamma(v: Vers, n: int) -> TypedGraph:
    """The n-th expansion graph, with rendered word ids.

    Definitionally ``gamma(n) = expand(v, gamma(n - 1))`` starting from the
    base bouquet; computed through the indexed engine (the two routes are
    checked against each other in the test suite).
    """
    if n < 0:
        raise VersError("level must be >= 0")
    return HistoryTruncation(v, n).graph_at(n)


def spanning_lift(h: HistoryTruncation, e: HorizontalEdge) -> HorizontalEdge:
    """The unique parent edge whose expansion produced ``e``."""
    if e.level == 0:
        raise LiftError("level-0 horizontal edges have no spanning lift")
    parent = h.levels[e.level].eparent[e.index]
    return h.horizontal_edge(e.level - 1, parent)


def at_distance(h: HistoryTruncation, u: Word | str, v: Word | str, full: bool = False) -> int | float:
    """Module-level convenience wrapper for :meth:`HistoryTruncation.at_distance`."""
    return h.at_distance(u, v, full=full)


def expected_word_count(v: Vers, n: int) -> int:
    """Number of length-n letter paths from the start, by matrix powering.

    Independent of the expansion machinery; used to cross-check level sizes.
    """
    idx = {t: i for i, t in enumerate(v.types)}
    m = len(v.types)
    counts = [0] * m
    counts[idx[v.start]] = 1
    for _ in range(n):
        nxt = [0] * m
        for x in v.letters:
            nxt[idx[v.letter_dst[x]]] += counts[idx[v.letter_src[x]]]
        counts = nxt
    return sum(counts)
