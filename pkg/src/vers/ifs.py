"""Injective post-critically finite iterated function systems.

An IFS is a finite family of injective contracting affine maps acting on the
right of row vectors, with exact coordinates in a fixed quadratic field.
Words index cells of the attractor via ``K_xw = (K_x) phi_w``: the leftmost
(newest) letter selects the top-level cell and the remaining letters push it
forward.  Addresses are left-infinite eventually periodic words ``u^-w v``
(periodic part u, then tail v); each address denotes the single point obtained
by solving the fixed point of the periodic composition exactly and applying
the tail.

The system is post-critically finite when the listed critical identifications
(pairs of addresses denoting the same point) generate, under the shift that
removes the rightmost letter, a finite set of post-critical addresses.  All
cell membership questions for critical and post-critical points reduce to
exact database lookups of address endings, which makes the cell-intersection
oracle and the replacement-system builder below fully decidable.

The associated replacement system is a full shift with one letter per map.
Its base color carries loops at every letter plus one edge per critical point
and cell pair; the replacement of a color carrying point data (p, x | q, y)
peels one letter off each side (exact inverse images) and reemits edges for
every cell pair of the peeled points.  Expansion graphs then record exactly
which same-level cells intersect, which the test suite checks against the
oracle.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import product
from math import lcm
from typing import Iterable, Sequence

from .engine import HistoryTruncation, ReplacementEdge, ReplacementGraph, Vers, VersError
from .graphs import Edge, TypedGraph, ValidationReport
from .numberfield import FieldError, FieldScalar, invert_matrix, solve_linear

Point = tuple[FieldScalar, ...]
IFS_TYPE = "s"
BASE_COLOR = "c0"


class IfsError(ValueError):
    """Raised for malformed systems or invalid queries."""


class MembershipError(IfsError):
    """Raised when a point is outside the critical/post-critical database."""


class AmbiguousCellError(IfsError):
    """Raised when both peeled points of a color land in the same cell."""


# ----- affine maps ------------------------------------------------------------


@dataclass(frozen=True)
class AffineMap:
    """An invertible affine map p -> p A + b on row vectors."""

    matrix: tuple[tuple[FieldScalar, ...], ...]
    translation: tuple[FieldScalar, ...]

    @property
    def dimension(self) -> int:
        return len(self.translation)

    def apply(self, p: Point) -> Point:
        n = self.dimension
        return tuple(
            sum((p[i] * self.matrix[i][j] for i in range(n)), FieldScalar(0))
            + self.translation[j]
            for j in range(n)
        )

    def compose(self, other: "AffineMap") -> "AffineMap":
        """The map 'self then other' (matching left-to-right word order)."""
        n = self.dimension
        a = tuple(
            tuple(
                sum((self.matrix[i][k] * other.matrix[k][j] for k in range(n)), FieldScalar(0))
                for j in range(n)
            )
            for i in range(n)
        )
        return AffineMap(a, other.apply(self.translation))

    def inverse(self) -> "AffineMap":
        inv = invert_matrix(self.matrix)
        minus_b = tuple(-x for x in self.translation)
        n = self.dimension
        b = tuple(
            sum((minus_b[i] * inv[i][j] for i in range(n)), FieldScalar(0)) for j in range(n)
        )
        return AffineMap(inv, b)

    def contraction_sq(self) -> FieldScalar:
        """An exact upper bound for the squared operator norm of the matrix.

        Similarities (A^T A = lambda I) yield the exact lambda; otherwise the
        squared Frobenius norm is used, which never underestimates.
        """
        n = self.dimension
        gram = [
            [
                sum((self.matrix[k][i] * self.matrix[k][j] for k in range(n)), FieldScalar(0))
                for j in range(n)
            ]
            for i in range(n)
        ]
        diag = gram[0][0]
        if all(
            gram[i][j] == (diag if i == j else FieldScalar(0))
            for i in range(n)
            for j in range(n)
        ):
            return diag
        return sum((x * x for row in self.matrix for x in row), FieldScalar(0))


def identity_map(dimension: int) -> AffineMap:
    one, zero = FieldScalar(1), FieldScalar(0)
    return AffineMap(
        tuple(tuple(one if i == j else zero for j in range(dimension)) for i in range(dimension)),
        tuple(zero for _ in range(dimension)),
    )


# ----- addresses ----------------------------------------------------------------


@dataclass(frozen=True)
class Address:
    """A left-infinite eventually periodic word ``period^-w tail``.

    Both parts are stored in display order (leftmost letter first).  The
    representation is normalized on construction: the period is primitive and
    the tail is shortest (letters that merely continue the period are absorbed
    into it, rotating the period), so two addresses denote the same infinite
    word exactly when they are equal.
    """

    period: tuple[str, ...]
    tail: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        period, tail = tuple(self.period), tuple(self.tail)
        if not period:
            raise IfsError("the periodic part of an address must be nonempty")
        for size in range(1, len(period)):
            if len(period) % size == 0 and period == period[:size] * (len(period) // size):
                period = period[:size]
                break
        while tail and tail[0] == period[0]:
            tail = tail[1:]
            period = period[1:] + period[:1]
        object.__setattr__(self, "period", period)
        object.__setattr__(self, "tail", tail)

    @property
    def rightmost(self) -> str:
        return self.tail[-1] if self.tail else self.period[-1]

    def shift(self) -> "Address":
        """Remove the rightmost letter."""
        if self.tail:
            return Address(self.period, self.tail[:-1])
        return Address(self.period[-1:] + self.period[:-1])

    def append(self, word: Sequence[str]) -> "Address":
        return Address(self.period, self.tail + tuple(word))

    def letters(self) -> set[str]:
        return set(self.period) | set(self.tail)

    def __repr__(self) -> str:
        sep = "" if all(len(x) == 1 for x in self.period + self.tail) else "·"
        return f"({sep.join(self.period)})^-w{sep.join(self.tail)}"


def shift_closure(addresses: Iterable[Address]) -> frozenset[Address]:
    """All strict shift iterates of the given addresses (a finite set)."""
    out: set[Address] = set()
    frontier = [a.shift() for a in addresses]
    while frontier:
        a = frontier.pop()
        if a not in out:
            out.add(a)
            frontier.append(a.shift())
    return frozenset(out)


# ----- the system ------------------------------------------------------------------


@dataclass
class PcfIfs:
    """An injective pcf IFS with asserted critical identifications."""

    alphabet: tuple[str, ...]
    maps: dict[str, AffineMap]
    identifications: tuple[tuple[Address, Address], ...]
    point_labels: dict[str, Point] = field(default_factory=dict)

    def __post_init__(self) -> None:
        self._inverses: dict[str, AffineMap] = {}
        self._points: dict[Address, Point] = {}
        self._db: dict[Point, frozenset[Address]] | None = None
        self._closure: tuple[frozenset[Address], frozenset[Point]] | None = None

    @property
    def dimension(self) -> int:
        return next(iter(self.maps.values())).dimension

    def map_of(self, letter: str) -> AffineMap:
        try:
            return self.maps[letter]
        except KeyError:
            raise IfsError(f"unknown letter {letter!r}") from None

    def inverse_of(self, letter: str) -> AffineMap:
        if letter not in self._inverses:
            self._inverses[letter] = self.map_of(letter).inverse()
        return self._inverses[letter]

    def apply_word(self, p: Point, word: Sequence[str]) -> Point:
        """Push a point forward along a word, leftmost letter first."""
        for x in word:
            p = self.map_of(x).apply(p)
        return p

    # ----- derived critical data -------------------------------------------------

    def critical_addresses(self) -> frozenset[Address]:
        return frozenset(a for pair in self.identifications for a in pair)

    def critical_points(self) -> list[Point]:
        """One point per identification, deduplicated, in listing order."""
        seen: list[Point] = []
        for alpha, beta in self.identifications:
            p = point_of_address(self, alpha)
            if point_of_address(self, beta) != p:
                raise IfsError(
                    f"identification {alpha!r} = {beta!r} evaluates to distinct points"
                )
            if p not in seen:
                seen.append(p)
        return seen

    def _database(self) -> dict[Point, frozenset[Address]]:
        if self._db is None:
            addresses = set(self.critical_addresses())
            addresses |= shift_closure(addresses)
            db: dict[Point, set[Address]] = {}
            for a in addresses:
                db.setdefault(point_of_address(self, a), set()).add(a)
            self._db = {p: frozenset(s) for p, s in db.items()}
        return self._db

    def cells_of(self, p: Point) -> tuple[str, ...]:
        """The letters z with p in K_z, by address endings; raises if unknown."""
        db = self._database()
        if p not in db:
            raise MembershipError(
                f"point {p!r} is not in the critical/post-critical database"
            )
        letters = {a.rightmost for a in db[p]}
        return tuple(x for x in self.alphabet if x in letters)

    def label_of(self, p: Point) -> str:
        for label in sorted(self.point_labels):
            if self.point_labels[label] == p:
                return label
        return "(" + ",".join(repr(c) for c in p) + ")"


def point_of_address(f: PcfIfs, a: Address) -> Point:
    """The point denoted by an address: exact periodic fixed point, then tail."""
    if a in f._points:
        return f._points[a]
    for x in a.letters():
        f.map_of(x)
    phi = identity_map(f.dimension)
    for x in a.period:
        phi = phi.compose(f.map_of(x))
    n = f.dimension
    one, zero = FieldScalar(1), FieldScalar(0)
    # p (I - A) = b, transposed into columns for the solver
    system = tuple(
        tuple((one if i == j else zero) - phi.matrix[i][j] for i in range(n)) for j in range(n)
    )
    try:
        fixed = solve_linear(system, phi.translation)
    except FieldError as exc:
        raise IfsError(f"periodic composition of {a!r} has no unique fixed point") from exc
    p = f.apply_word(fixed, a.tail)
    f._points[a] = p
    return p


def post_critical_closure(f: PcfIfs) -> tuple[frozenset[Address], frozenset[Point]]:
    """The shift closure of the critical addresses and its exact points."""
    if f._closure is None:
        pc = shift_closure(f.critical_addresses())
        pcrit = frozenset(point_of_address(f, a) for a in pc)
        f._closure = (pc, pcrit)
    return f._closure


def cell_membership(f: PcfIfs, p: Point, z: str) -> bool:
    """Whether p lies in the level-1 cell K_z, for a database point p."""
    if z not in f.maps:
        raise IfsError(f"unknown letter {z!r}")
    return z in f.cells_of(p)


def validate_pcf_ifs(f: PcfIfs) -> ValidationReport:
    """Check map invertibility, contraction, and the identification pairs."""
    report = ValidationReport()
    if len(set(f.alphabet)) != len(f.alphabet):
        report.fail("duplicate alphabet letters")
    if set(f.maps) != set(f.alphabet):
        report.fail("maps must be indexed exactly by the alphabet")
        return report
    for x in f.alphabet:
        m = f.maps[x]
        if m.dimension != f.dimension or any(len(row) != m.dimension for row in m.matrix):
            report.fail(f"map {x!r} has inconsistent dimensions")
            continue
        try:
            m.inverse()
        except FieldError:
            report.fail(f"map {x!r} is not invertible")
        if not m.contraction_sq() < FieldScalar(1):
            report.fail(f"map {x!r} has no certified contraction ratio below 1")
    for alpha, beta in f.identifications:
        for a in (alpha, beta):
            unknown = a.letters() - set(f.alphabet)
            if unknown:
                report.fail(f"address {a!r} uses unknown letters {sorted(unknown)!r}")
        if not report.ok:
            continue
        if point_of_address(f, alpha) != point_of_address(f, beta):
            report.fail(f"identification {alpha!r} = {beta!r} evaluates to distinct points")
    return report


# ----- the replacement system -----------------------------------------------------


def _color_name(f: PcfIfs, p: Point, x: str, q: Point, y: str) -> str:
    if p == q:
        return f"({x},{y})_{f.label_of(p)}"
    return f"[{f.label_of(p)},{f.label_of(q)}]_{{{x},{y}}}"


def vers_from_ifs(f: PcfIfs, full_palette: bool = False) -> Vers:
    """The replacement system recording same-level cell intersections.

    Colors are discovered by closure from the base color; ``full_palette``
    additionally emits a color for every critical and post-critical datum,
    whether or not it is reachable from the base.
    """
    report = validate_pcf_ifs(f)
    if not report.ok:
        raise IfsError("; ".join(report.issues))
    letters = f.alphabet
    index = {x: i for i, x in enumerate(letters)}
    data: dict[str, tuple[Point, str, Point, str]] = {}
    order: list[str] = [BASE_COLOR]
    pending: deque[str] = deque()

    def register(p: Point, x: str, q: Point, y: str) -> str:
        name = _color_name(f, p, x, q, y)
        if name not in data:
            data[name] = (p, x, q, y)
            order.append(name)
            pending.append(name)
        return name

    base_edges = [ReplacementEdge(z, "i", z, "i", BASE_COLOR) for z in letters]
    for p in f.critical_points():
        cells = f.cells_of(p)
        for i, x in enumerate(cells):
            for y in cells[i + 1 :]:
                base_edges.append(ReplacementEdge(x, "i", y, "i", register(p, x, p, y)))
    if full_palette:
        pc, pcrit = post_critical_closure(f)
        points = sorted(pcrit, key=f.label_of)
        for p in points:
            for q in points:
                for x in f.cells_of(p):
                    for y in f.cells_of(q):
                        if index[x] < index[y]:
                            register(p, x, q, y)

    replacements = {BASE_COLOR: ReplacementGraph(BASE_COLOR, tuple(base_edges))}
    while pending:
        name = pending.popleft()
        p, x, q, y = data[name]
        p2 = f.inverse_of(x).apply(p)
        q2 = f.inverse_of(y).apply(q)
        edges = []
        for z in f.cells_of(p2):
            for v in f.cells_of(q2):
                if z == v:
                    raise AmbiguousCellError(
                        f"peeled points of color {name!r} share the cell K_{z}; "
                        "the replacement rules do not cover this case"
                    )
                if index[z] < index[v]:
                    edges.append(ReplacementEdge(z, "i", v, "t", register(p2, z, q2, v)))
                else:
                    edges.append(ReplacementEdge(v, "t", z, "i", register(q2, v, p2, z)))
        replacements[name] = ReplacementGraph(name, tuple(edges))

    sigma = TypedGraph.build(
        [(IFS_TYPE, IFS_TYPE)],
        [Edge(x, IFS_TYPE, IFS_TYPE, "") for x in letters],
    )
    return Vers(
        sigma=sigma,
        start=IFS_TYPE,
        colors=tuple(order),
        kappa={c: (IFS_TYPE, IFS_TYPE) for c in order},
        replacements=replacements,
        base_colors=(BASE_COLOR,),
    )


# ----- the intersection oracle ------------------------------------------------------


def _parse_ifs_word(f: PcfIfs, w) -> tuple[str, ...]:
    if isinstance(w, str):
        if any(len(x) != 1 for x in f.alphabet):
            raise IfsError("pass multi-letter words as sequences, not strings")
        word = tuple(w)
    else:
        word = tuple(w)
    for x in word:
        if x not in f.maps:
            raise IfsError(f"unknown letter {x!r}")
    return word


def _point_in_cell(f: PcfIfs, p: Point, word: tuple[str, ...]) -> bool:
    """Whether p lies in K_word, peeling rightmost letters through the database.

    Points that leave the database are treated as outside every proper cell;
    for complete critical data this never misjudges (see module docstring).
    """
    while word:
        if p not in f._database():
            return False
        z = word[-1]
        if z not in f.cells_of(p):
            return False
        p = f.inverse_of(z).apply(p)
        word = word[:-1]
    return True


def cell_intersection_oracle(f: PcfIfs, u, v) -> set[Point]:
    """The exact intersection K_u ∩ K_v for distinct same-length words.

    Independent of the replacement machinery: strips the common rightmost
    suffix, collects critical points lying in both top cells, peels each
    candidate backward through exact inverse images, and pushes the survivors
    forward along the stripped suffix.
    """
    u, v = _parse_ifs_word(f, u), _parse_ifs_word(f, v)
    if len(u) != len(v):
        raise IfsError("words must have the same length")
    if u == v:
        raise IfsError("words must be distinct")
    suffix: tuple[str, ...] = ()
    while u[-1] == v[-1]:
        suffix = (u[-1],) + suffix
        u, v = u[:-1], v[:-1]
    x, y = u[-1], v[-1]
    u1, v1 = u[:-1], v[:-1]
    result: set[Point] = set()
    for r in f.critical_points():
        cells = f.cells_of(r)
        if x not in cells or y not in cells:
            continue
        if _point_in_cell(f, f.inverse_of(x).apply(r), u1) and _point_in_cell(
            f, f.inverse_of(y).apply(r), v1
        ):
            result.add(f.apply_word(r, suffix))
    return result


# ----- powers -------------------------------------------------------------------------


def _blocked(a: Address, k: int) -> Address:
    """Regroup an address into blocks of k letters (display order)."""
    period, tail = list(a.period), list(a.tail)
    while len(tail) % k:
        tail.insert(0, period[-1])
        period = period[-1:] + period[:-1]
    reps = lcm(len(period), k) // len(period)
    period = period * reps
    pblocks = tuple("".join(period[i : i + k]) for i in range(0, len(period), k))
    tblocks = tuple("".join(tail[i : i + k]) for i in range(0, len(tail), k))
    return Address(pblocks, tblocks)


def ifs_power(f: PcfIfs, k: int) -> PcfIfs:
    """The system of all k-fold compositions, with identifications re-coded.

    Power letters are length-k words in display order; identifications are the
    block regroupings of the originals under every phase alignment (appending
    each word of length < k to both sides), validated by exact point equality.
    """
    if k < 1:
        raise VersError("power must be >= 1")
    if k == 1:
        return f
    if any(len(x) != 1 for x in f.alphabet):
        raise IfsError("powers of systems with multi-letter alphabets are not supported")
    words = ["".join(w) for w in product(f.alphabet, repeat=k)]
    maps: dict[str, AffineMap] = {}
    for w in words:
        phi = identity_map(f.dimension)
        for x in w:
            phi = phi.compose(f.map_of(x))
        maps[w] = phi
    idents: list[tuple[Address, Address]] = []
    seen: set[tuple[Address, Address]] = set()
    for alpha, beta in f.identifications:
        for j in range(k):
            for w in product(f.alphabet, repeat=j):
                a2, b2 = _blocked(alpha.append(w), k), _blocked(beta.append(w), k)
                if a2 == b2:
                    continue
                key = (a2, b2) if repr(a2) <= repr(b2) else (b2, a2)
                if key in seen:
                    continue
                seen.add(key)
                idents.append(key)
    power = PcfIfs(
        alphabet=tuple(words),
        maps=maps,
        identifications=tuple(idents),
        point_labels=dict(f.point_labels),
    )
    for alpha, beta in idents:
        pa, pb = point_of_address(power, alpha), point_of_address(power, beta)
        if pa != pb:
            raise IfsError(f"power identification {alpha!r} = {beta!r} broke: {pa!r} != {pb!r}")
    return power


def tree_power(h: HistoryTruncation, k: int) -> TypedGraph:
    """The truncation restricted to levels divisible by k, as one graph.

    Vertical edges join each kept word to its k-fold predecessor; horizontal
    edges of the kept levels are inherited with their colors and provenance
    ids; vertical edges are colored "vertical".
    """
    if k < 1:
        raise VersError("power must be >= 1")
    if h.depth < k:
        raise VersError(f"truncation depth {h.depth} is smaller than the power {k}")
    vertices: list[tuple[str, str]] = []
    edges: list[Edge] = []
    for level in range(0, h.depth + 1, k):
        rendered = [h.render_at(level, i) for i in range(h.level_size(level))]
        vertices.extend((rendered[i], h.type_at(level, i)) for i in range(len(rendered)))
        if level > 0:
            for i, name in enumerate(rendered):
                j = i
                for lvl in range(level, level - k, -1):
                    j = h.pred(lvl, j)
                edges.append(Edge(f"v:{name}", h.render_at(level - k, j), name, "vertical"))
        for e in h.horizontal_edges(level):
            edges.append(Edge(e.id, h.vers.render_word(e.src), h.vers.render_word(e.dst), e.color))
    return TypedGraph.build(vertices, edges)


def ratio_condition_check(f: PcfIfs) -> bool:
    """Separation test forcing the absence of geodesic 2-squares.

    True when rho^2 * max(dist^2) < min(dist^2) over distinct post-critical
    pairs, where rho^2 is the certified squared contraction bound of the whole
    family; vacuously true with fewer than two post-critical points.
    """
    _pc, pcrit = post_critical_closure(f)
    points = sorted(pcrit, key=repr)
    if len(points) < 2:
        return True
    rho_sq = max((f.maps[x].contraction_sq() for x in f.alphabet))
    dists = [
        sum(((a - b) * (a - b) for a, b in zip(p, q)), FieldScalar(0))
        for i, p in enumerate(points)
        for q in points[i + 1 :]
    ]
    return rho_sq * max(dists) < min(dists)
