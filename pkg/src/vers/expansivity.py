"""Expansivity tests and geodesic-square detection.

A system is **n-expanding** when no abstract kappa-compatible path of length n
has, in its n-th expansion, a pair of depth-n descendants of the two path
endpoints at graph distance exactly n.  This is decidable: there are finitely
many abstract paths (choices of edge colors and orientations whose types
chain), each expansion is a finite graph, and distances are breadth-first
searches.  Expansivity of the system forces hyperbolicity of its history
graph, which is witnessed at finite depth by the absence of large **geodesic
squares**: quadruples made of two horizontal geodesics of length n, exactly n
levels apart, whose corresponding corners are joined by vertical chains.

Distances between same-level words are computed with the lifting formula

    d(u, v) = min over j >= 0 of (2j + dh(Pred^j u, Pred^j v))

where ``dh`` is the horizontal distance at the ancestors' level: predecessors
of adjacent words are adjacent or equal, so projecting any path upward never
increases its length, and an optimal path may be normalized to climb, travel
horizontally, and descend.  The formula is cross-checked against plain
breadth-first search in the test suite.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterator, Sequence

from .engine import HistoryTruncation, Vers, VersError, expand
from .graphs import Edge, TypedGraph

FORWARD = "forward"
BACKWARD = "backward"
_ORIENTATIONS = (FORWARD, BACKWARD)


@dataclass(frozen=True)
class AbstractPath:
    """A simple open path with colored, oriented edges and chained types.

    Vertices are implicitly ``p0 .. pn``; edge j joins ``p(j-1)`` and ``pj``
    with color ``colors[j-1]``, directed forward (toward ``pj``) or backward.
    ``types[j]`` is the type of ``pj``, determined by kappa and orientations.
    """

    colors: tuple[str, ...]
    orientations: tuple[str, ...]
    types: tuple[str, ...]

    @property
    def length(self) -> int:
        return len(self.colors)

    def as_graph(self) -> TypedGraph:
        vertices = [(f"p{j}", t) for j, t in enumerate(self.types)]
        edges = []
        for j, (c, o) in enumerate(zip(self.colors, self.orientations)):
            a, b = f"p{j}", f"p{j + 1}"
            src, dst = (a, b) if o == FORWARD else (b, a)
            edges.append(Edge(f"e{j}", src, dst, c))
        return TypedGraph.build(vertices, edges)


def _reachable_types(v: Vers) -> set[str]:
    seen = {v.start}
    frontier = [v.start]
    while frontier:
        t = frontier.pop()
        for x in v.letters_from[t]:
            dst = v.letter_dst[x]
            if dst not in seen:
                seen.add(dst)
                frontier.append(dst)
    return seen


def enumerate_abstract_paths(
    v: Vers,
    n: int,
    colors: Sequence[str] | None = None,
    reachable_only: bool = False,
) -> Iterator[AbstractPath]:
    """All length-n abstract paths, in lexicographic (colors, orientations) order.

    ``colors`` restricts the palette (default: every color of the system);
    ``reachable_only`` keeps only paths all of whose vertex types are
    reachable from the start type in the shift graph.
    """
    if n < 1:
        raise VersError("path length must be >= 1")
    palette = [c for c in v.colors if colors is None or c in set(colors)]
    allowed = _reachable_types(v) if reachable_only else None
    found: list[AbstractPath] = []

    def extend(cols: list[str], orients: list[str], types: list[str]) -> None:
        if len(cols) == n:
            found.append(AbstractPath(tuple(cols), tuple(orients), tuple(types)))
            return
        for c in palette:
            t_iota, t_tau = v.kappa[c]
            for o in _ORIENTATIONS:
                prev_t, next_t = (t_iota, t_tau) if o == FORWARD else (t_tau, t_iota)
                if types and types[-1] != prev_t:
                    continue
                if allowed is not None and (prev_t not in allowed or next_t not in allowed):
                    continue
                start = [prev_t] if not types else types
                extend(cols + [c], orients + [o], start + [next_t])

    extend([], [], [])
    color_pos = {c: i for i, c in enumerate(v.colors)}
    found.sort(
        key=lambda p: (
            tuple(color_pos[c] for c in p.colors),
            tuple(_ORIENTATIONS.index(o) for o in p.orientations),
        )
    )
    yield from found


@dataclass(frozen=True)
class ExpansivityWitness:
    """A failing path with a descendant pair at the critical distance."""

    path: AbstractPath
    pair: tuple[tuple, tuple]
    geodesic: tuple[tuple, ...]
    distance: int


@dataclass(frozen=True)
class ExpansivityResult:
    expanding: bool
    n: int
    witness: ExpansivityWitness | None = None

    def __bool__(self) -> bool:
        return self.expanding


def _undirected_adjacency(g: TypedGraph) -> dict:
    adj: dict = {u: [] for u, _t in g.vertices}
    for e in g.edges:
        if e.src != e.dst:
            adj[e.src].append(e.dst)
            adj[e.dst].append(e.src)
    return adj


def _endpoint_bfs(g: TypedGraph, last: str, cap: int) -> tuple[tuple, int, dict] | None:
    """Multi-source BFS from the descendants of p0 toward those of ``last``.

    Returns the first descendant of ``last`` reached within ``cap`` steps,
    with its distance and the parent map (for geodesic recovery), or None when
    every such descendant is farther than ``cap``.  The input being an
    expansion of a simple open path, the two descendant sets are disjoint and
    the multi-source distance is the minimum over all pairs.
    """
    adj = _undirected_adjacency(g)
    prev: dict = {}
    queue: deque[tuple[tuple, int]] = deque()
    for u, _t in g.vertices:
        if u[0] == "p0":
            prev[u] = None
            queue.append((u, 0))
    while queue:
        u, d = queue.popleft()
        if u[0] == last:
            return u, d, prev
        if d == cap:
            continue
        for w in adj[u]:
            if w not in prev:
                prev[w] = u
                queue.append((w, d + 1))
    return None


def _path_witness(v: Vers, path: AbstractPath, fail_below: bool) -> ExpansivityWitness | None:
    """Search the n-th expansion of one abstract path for a critical pair.

    The distance between the descendant sets of the two endpoints never
    decreases from one expansion to the next and never drops below the path
    length n (projecting a path onto predecessors cannot lengthen it), so the
    n-fold expansion stops early as soon as some intermediate expansion
    already separates the descendants by more than n.
    """
    n = path.length
    last = f"p{n}"
    g = path.as_graph()
    for step in range(1, n + 1):
        g = expand(v, g)
        hit = _endpoint_bfs(g, last, n)
        if hit is None:
            return None  # separated beyond n: further expansion only widens the gap
        if step == n:
            b, d, prev = hit
            if d == n or (fail_below and d < n):
                geodesic = [b]
                while prev[geodesic[-1]] is not None:
                    geodesic.append(prev[geodesic[-1]])
                geodesic.reverse()
                return ExpansivityWitness(path, (geodesic[0], b), tuple(geodesic), d)
    return None


def is_n_expanding(
    v: Vers,
    n: int,
    colors: Sequence[str] | None = None,
    reachable_only: bool = False,
    fail_below: bool = False,
) -> ExpansivityResult:
    """Decide whether every length-n abstract path expands properly.

    Returns a failure witness for the first path (in enumeration order) whose
    n-th expansion joins a depth-n descendant of ``p0`` to one of ``pn`` at
    distance exactly n (at most n with ``fail_below``).
    """
    if n < 1:
        raise VersError("n must be >= 1")
    for path in enumerate_abstract_paths(v, n, colors=colors, reachable_only=reachable_only):
        witness = _path_witness(v, path, fail_below)
        if witness is not None:
            return ExpansivityResult(False, n, witness)
    return ExpansivityResult(True, n)


def find_expanding_constant(
    v: Vers,
    n_max: int,
    reachable_only: bool = False,
    fail_below: bool = False,
) -> int | None:
    """Smallest n <= n_max for which the system is n-expanding, if any.

    A result of None is inconclusive: the system might be expanding with a
    larger constant.
    """
    if n_max < 1:
        raise VersError("n_max must be >= 1")
    for n in range(1, n_max + 1):
        if is_n_expanding(v, n, reachable_only=reachable_only, fail_below=fail_below):
            return n
    return None


# ----- geodesic squares -------------------------------------------------------


@dataclass(frozen=True)
class GeodesicSquare:
    """Two horizontal geodesics of length ``size``, ``size`` levels apart.

    Paths are rendered words; vertical sides are the predecessor chains of the
    bottom corners (vertical chains are automatically geodesic, because every
    edge changes the level by at most one).
    """

    size: int
    top_level: int
    bottom_level: int
    top_path: tuple[str, ...]
    bottom_path: tuple[str, ...]
    left_path: tuple[str, ...]
    right_path: tuple[str, ...]

    @property
    def corners(self) -> tuple[str, str, str, str]:
        return (self.top_path[0], self.top_path[-1], self.bottom_path[0], self.bottom_path[-1])


def _horizontal_sphere(
    h: HistoryTruncation, level: int, source: int, radius: int | None
) -> tuple[dict[int, int], dict[int, int]]:
    """Horizontal BFS from one vertex up to ``radius`` (None: unbounded)."""
    adj = h.horizontal_adjacency(level)
    dist = {source: 0}
    parent = {source: -1}
    queue = deque([source])
    while queue:
        i = queue.popleft()
        d = dist[i]
        if radius is not None and d >= radius:
            continue
        for j in adj[i]:
            if j not in dist:
                dist[j] = d + 1
                parent[j] = i
                queue.append(j)
    return dist, parent


def _hdist_at_least(h: HistoryTruncation, level: int, a: int, b: int, bound: int) -> bool:
    """True when the horizontal distance at ``level`` is >= ``bound``."""
    if bound <= 0:
        return True
    if a == b:
        return False
    adj = h.horizontal_adjacency(level)
    dist = {a: 0}
    queue = deque([a])
    while queue:
        i = queue.popleft()
        d = dist[i]
        if d >= bound - 1:
            continue
        for j in adj[i]:
            if j == b:
                return False
            if j not in dist:
                dist[j] = d + 1
                queue.append(j)
    return True


def _same_level_at_distance_is(
    h: HistoryTruncation, level: int, a: int, b: int, n: int
) -> bool:
    """Given horizontal distance exactly n, check the full distance is also n.

    By the lifting formula the distance can only drop below n if some
    ancestor pair comes closer than the lifting bound allows; it suffices that
    the j-th predecessors stay at horizontal distance >= n - 2j.
    """
    for j in range(1, min(level, (n - 1) // 2) + 1):
        a, b = h.pred(level - j + 1, a), h.pred(level - j + 1, b)
        if not _hdist_at_least(h, level - j, a, b, n - 2 * j):
            return False
    return True


def same_level_distance(h: HistoryTruncation, level: int, a: int, b: int) -> int | float:
    """Distance between two same-level words via the lifting formula."""
    best: int | float = float("inf")
    for j in range(0, level + 1):
        if 2 * j >= best:
            break
        if a == b:
            best = min(best, 2 * j)
            break
        radius = None if best == float("inf") else int(best) - 2 * j - 1
        dist, _parents = _horizontal_sphere(h, level - j, a, radius)
        dh = dist.get(b)
        if dh is not None and 2 * j + dh < best:
            best = 2 * j + dh
        if level - j == 0:
            break
        a, b = h.pred(level - j, a), h.pred(level - j, b)
    return best


def _top_pairs(
    h: HistoryTruncation, level: int, n: int
) -> dict[tuple[int, int], tuple[int, ...]]:
    """Unordered same-level pairs with horizontal and full distance both n.

    Maps each pair (a < b) to one horizontal geodesic from a to b.
    """
    result: dict[tuple[int, int], tuple[int, ...]] = {}
    for a in range(h.level_size(level)):
        dist, parent = _horizontal_sphere(h, level, a, n)
        for b, d in dist.items():
            if d != n or b <= a:
                continue
            if not _same_level_at_distance_is(h, level, a, b, n):
                continue
            path = [b]
            while path[-1] != a:
                path.append(parent[path[-1]])
            result[(a, b)] = tuple(reversed(path))
    return result


def _pred_chain(h: HistoryTruncation, level: int, i: int, steps: int) -> list[tuple[int, int]]:
    chain = [(level, i)]
    for lvl in range(level, level - steps, -1):
        i = h.pred(lvl, i)
        chain.append((lvl - 1, i))
    return chain


def find_geodesic_squares(h: HistoryTruncation, n: int) -> list[GeodesicSquare]:
    """All size-n geodesic squares of the truncation, one per corner quadruple.

    Searches downward: for every level pair (k, k+n) it computes the top
    pairs at level k (both distances equal to n) and scans only descendants
    of those pairs at level k+n, which keeps the search linear in practice.
    """
    if n < 1:
        raise VersError("square size must be >= 1")
    if h.depth < n:
        raise VersError(f"truncation depth {h.depth} is smaller than the square size {n}")
    tops: dict[int, dict[tuple[int, int], tuple[int, ...]]] = {}
    squares: list[GeodesicSquare] = []
    for bottom in range(n, h.depth + 1):
        k = bottom - n
        if k not in tops:
            tops[k] = _top_pairs(h, k, n)
        for (ta, tb), top_path in sorted(tops[k].items()):
            lo_a, hi_a = h.descendant_range(k, ta, n)
            lo_b, hi_b = h.descendant_range(k, tb, n)
            for a in range(lo_a, hi_a):
                dist, parent = _horizontal_sphere(h, bottom, a, n)
                for b in range(lo_b, hi_b):
                    if dist.get(b) != n:
                        continue
                    if not _same_level_at_distance_is(h, bottom, a, b, n):
                        continue
                    path = [b]
                    while path[-1] != a:
                        path.append(parent[path[-1]])
                    squares.append(
                        GeodesicSquare(
                            size=n,
                            top_level=k,
                            bottom_level=bottom,
                            top_path=tuple(h.render_at(k, i) for i in top_path),
                            bottom_path=tuple(h.render_at(bottom, i) for i in reversed(path)),
                            left_path=tuple(
                                h.render_at(lvl, i) for lvl, i in _pred_chain(h, bottom, a, n)
                            ),
                            right_path=tuple(
                                h.render_at(lvl, i) for lvl, i in _pred_chain(h, bottom, b, n)
                            ),
                        )
                    )
    return squares
