"""JSON documents, graph export, and oracle comparison reports.

Four document kinds describe the objects of this library: a replacement
system given explicitly (``vers``), an invertible letter transducer
(``automaton``), an injective post-critically finite affine iterated
function system (``ifs``), and an edge replacement system (``ers``).
Parsing checks the shape of a document first — errors carry a JSON-pointer
to the offending field — and then delegates to the structural validator of
the owning module.  Documents of the adapter kinds can be lowered to their
replacement systems, and compared at any finite level against the adapter's
independent oracle: the Schreier graph of the transducer, the exact
cell-intersection test of the function system, or the barycentric
subdivision of the edge replacement expansion.  Exports (DOT, GraphML,
JSON) are deterministic byte for byte.
"""

from __future__ import annotations

import json
import os
import time
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from hashlib import sha256
from importlib import resources
from itertools import combinations
from typing import Any, Callable
from xml.sax.saxutils import escape

from .automata import Automaton, schreier_graph, validate_automaton, vers_from_automaton
from .engine import (
    HistoryTruncation,
    ReplacementEdge,
    ReplacementGraph,
    Vers,
    gamma,
    validate_vers,
)
from .ers import Ers, ErsReplacement, full_expansion, validate_ers, vers_from_ers
from .graphs import (
    Edge,
    GraphError,
    TypedGraph,
    barycentric_subdivision,
    relabel,
)
from .ifs import (
    Address,
    AffineMap,
    IfsError,
    PcfIfs,
    cell_intersection_oracle,
    point_of_address,
    validate_pcf_ifs,
    vers_from_ifs,
)
from .numberfield import FieldError, FieldScalar

DOCUMENT_VERSION = 1
KINDS = ("vers", "automaton", "ifs", "ers")
FORMATS = ("json", "dot", "graphml")

# names used by the oracle subcommand for each document kind
ORACLE_KINDS = {"automaton": "schreier", "ifs": "ifs", "ers": "ers"}


class DocumentError(ValueError):
    """Raised for malformed documents; ``pointer`` locates the offending field."""

    def __init__(self, message: str, pointer: str = "", semantic: bool = False):
        super().__init__(f"{pointer}: {message}" if pointer else message)
        self.pointer = pointer
        self.semantic = semantic


@dataclass(frozen=True)
class SpecDocument:
    """A parsed and validated input document."""

    kind: str
    version: int
    payload: Vers | Automaton | PcfIfs | Ers
    digest: str = ""

    def vers(self, full_palette: bool = False) -> Vers:
        """The replacement system of the document (adapters are lowered)."""
        if self.kind == "vers":
            return self.payload
        if self.kind == "automaton":
            return vers_from_automaton(self.payload)
        if self.kind == "ifs":
            return vers_from_ifs(self.payload, full_palette)
        return vers_from_ers(self.payload)


@dataclass(frozen=True)
class Report:
    """Outcome of a top-level command, in machine- and human-readable form."""

    command: str
    inputs: str
    verdict: str
    details: tuple[str, ...]
    exit_code: int
    seconds: float

    def to_json(self) -> str:
        return json.dumps(
            {
                "command": self.command,
                "inputs": self.inputs,
                "verdict": self.verdict,
                "details": list(self.details),
                "exit_code": self.exit_code,
                "seconds": round(self.seconds, 6),
            },
            indent=2,
        ) + "\n"

    def render(self) -> str:
        lines = [f"{self.command}: {self.verdict}"]
        lines.extend(f"  {d}" for d in self.details)
        lines.append(f"  inputs: {self.inputs}")
        lines.append(f"  time: {self.seconds:.3f}s")
        return "\n".join(lines) + "\n"


# ----- schema plumbing --------------------------------------------------------


def _ptr(parent: str, key: Any) -> str:
    token = str(key).replace("~", "~0").replace("/", "~1")
    return f"{parent}/{token}"


def _as_object(x, pointer: str) -> dict:
    if not isinstance(x, dict):
        raise DocumentError(f"expected an object, got {type(x).__name__}", pointer)
    return x


def _as_list(x, pointer: str) -> list:
    if not isinstance(x, list):
        raise DocumentError(f"expected an array, got {type(x).__name__}", pointer)
    return x


def _as_str(x, pointer: str) -> str:
    if not isinstance(x, str):
        raise DocumentError(f"expected a string, got {type(x).__name__}", pointer)
    return x


def _as_int(x, pointer: str, minimum: int | None = None) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise DocumentError(f"expected an integer, got {type(x).__name__}", pointer)
    if minimum is not None and x < minimum:
        raise DocumentError(f"expected an integer >= {minimum}, got {x}", pointer)
    return x


_MISSING = object()


def _get(obj: dict, key: str, pointer: str, default=_MISSING):
    if key in obj:
        return obj[key]
    if default is _MISSING:
        raise DocumentError(f"missing required field {key!r}", pointer)
    return default


def _str_list(x, pointer: str) -> tuple[str, ...]:
    return tuple(_as_str(v, _ptr(pointer, k)) for k, v in enumerate(_as_list(x, pointer)))


# ----- graphs -----------------------------------------------------------------


def _parse_graph(obj, pointer: str) -> TypedGraph:
    o = _as_object(obj, pointer)
    vertices: list[tuple[str, str]] = []
    for k, entry in enumerate(_as_list(_get(o, "vertices", pointer), f"{pointer}/vertices")):
        p = f"{pointer}/vertices/{k}"
        e = _as_object(entry, p)
        vid = _as_str(_get(e, "id", p), f"{p}/id")
        vertices.append((vid, _as_str(_get(e, "type", p, vid), f"{p}/type")))
    edges: list[Edge] = []
    for k, entry in enumerate(_as_list(_get(o, "edges", pointer), f"{pointer}/edges")):
        p = f"{pointer}/edges/{k}"
        e = _as_object(entry, p)
        edges.append(
            Edge(
                _as_str(_get(e, "id", p), f"{p}/id"),
                _as_str(_get(e, "from", p), f"{p}/from"),
                _as_str(_get(e, "to", p), f"{p}/to"),
                _as_str(_get(e, "color", p, ""), f"{p}/color"),
            )
        )
    try:
        return TypedGraph.build(vertices, edges)
    except GraphError as err:
        raise DocumentError(str(err), pointer) from err


def _id_str(v) -> str:
    if isinstance(v, str):
        return v
    if isinstance(v, tuple):
        return "(" + ",".join(_id_str(x) for x in v) + ")"
    return str(v)


def graph_json(g: TypedGraph) -> dict:
    """The JSON form of a graph (non-string ids are flattened to strings)."""
    return {
        "vertices": [{"id": _id_str(u), "type": t} for u, t in g.vertices],
        "edges": [
            {"id": e.id, "from": _id_str(e.src), "to": _id_str(e.dst), "color": e.color}
            for e in g.edges
        ],
    }


def parse_graph_json(obj) -> TypedGraph:
    """Parse the JSON form of a graph (inverse of :func:`graph_json`)."""
    return _parse_graph(obj, "")


# ----- kind parsers -----------------------------------------------------------


def _parse_vers(obj: dict) -> Vers:
    sigma_obj = _as_object(_get(obj, "sigma", ""), "/sigma")
    start = _as_str(_get(sigma_obj, "start", "/sigma"), "/sigma/start")
    sigma = _parse_graph(sigma_obj, "/sigma")
    colors = _str_list(_get(obj, "colors", ""), "/colors")
    kappa_obj = _as_object(_get(obj, "kappa", ""), "/kappa")
    kappa: dict[str, tuple[str, str]] = {}
    for c in colors:
        if c not in kappa_obj:
            raise DocumentError(f"kappa is missing color {c!r}", "/kappa")
        p = _ptr("/kappa", c)
        pair = _str_list(kappa_obj[c], p)
        if len(pair) != 2:
            raise DocumentError(f"expected a pair of types, got {len(pair)} entries", p)
        kappa[c] = (pair[0], pair[1])
    for c in kappa_obj:
        if c not in kappa:
            raise DocumentError(f"kappa names unknown color {c!r}", "/kappa")
    repl_obj = _as_object(_get(obj, "replacements", ""), "/replacements")
    replacements: dict[str, ReplacementGraph] = {}
    for c in colors:
        if c not in repl_obj:
            raise DocumentError(f"replacements are missing color {c!r}", "/replacements")
        p = _ptr("/replacements", c)
        entry = _as_object(repl_obj[c], p)
        edges: list[ReplacementEdge] = []
        for k, eobj in enumerate(_as_list(_get(entry, "edges", p), f"{p}/edges")):
            ep = f"{p}/edges/{k}"
            e = _as_object(eobj, ep)
            ends: list[tuple[str, str]] = []
            for key in ("from", "to"):
                pair = _str_list(_get(e, key, ep), f"{ep}/{key}")
                if len(pair) != 2 or pair[1] not in ("i", "t"):
                    raise DocumentError(
                        "expected a [letter, marker] pair with marker 'i' or 't'",
                        f"{ep}/{key}",
                    )
                ends.append((pair[0], pair[1]))
            color = _as_str(_get(e, "color", ep), f"{ep}/color")
            edges.append(ReplacementEdge(ends[0][0], ends[0][1], ends[1][0], ends[1][1], color))
        replacements[c] = ReplacementGraph(c, tuple(edges))
    for c in repl_obj:
        if c not in replacements:
            raise DocumentError(f"replacements name unknown color {c!r}", "/replacements")
    base = _str_list(_get(obj, "base", ""), "/base")
    word_order = _as_str(_get(obj, "word_order", "", "newest_first"), "/word_order")
    if word_order not in ("newest_first", "base_first"):
        raise DocumentError(
            "expected 'newest_first' or 'base_first'", "/word_order"
        )
    return Vers(sigma, start, colors, kappa, replacements, base, word_order)


def _parse_automaton(obj: dict) -> Automaton:
    raw = _get(obj, "alphabet", "")
    if isinstance(raw, int) and not isinstance(raw, bool):
        if raw < 1:
            raise DocumentError("alphabet size must be >= 1", "/alphabet")
        alphabet = tuple(str(i) for i in range(raw))
    else:
        alphabet = _str_list(raw, "/alphabet")
    states = _str_list(_get(obj, "states", ""), "/states")
    transitions: dict[tuple[str, str], tuple[str, str]] = {}
    for k, entry in enumerate(_as_list(_get(obj, "transitions", ""), "/transitions")):
        p = f"/transitions/{k}"
        e = _as_object(entry, p)
        key = (
            _as_str(_get(e, "state", p), f"{p}/state"),
            _as_str(_get(e, "in", p), f"{p}/in"),
        )
        if key in transitions:
            raise DocumentError(f"duplicate transition for {key!r}", p)
        transitions[key] = (
            _as_str(_get(e, "out", p), f"{p}/out"),
            _as_str(_get(e, "next", p), f"{p}/next"),
        )
    return Automaton(alphabet, states, transitions)


def _parse_fraction(x, pointer: str) -> Fraction:
    if isinstance(x, int) and not isinstance(x, bool):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x)
        except (ValueError, ZeroDivisionError) as err:
            raise DocumentError(f"not an exact rational: {x!r}", pointer) from err
    raise DocumentError(
        f"expected an exact rational (integer or 'p/q'), got {type(x).__name__}", pointer
    )


def _parse_scalar(x, d: int, pointer: str) -> FieldScalar:
    if isinstance(x, dict):
        a = _parse_fraction(_get(x, "a", pointer, 0), f"{pointer}/a")
        b = _parse_fraction(_get(x, "b", pointer, 0), f"{pointer}/b")
        return FieldScalar(a, b, d)
    return FieldScalar(_parse_fraction(x, pointer))


def _parse_letters(x, alphabet: tuple[str, ...], pointer: str) -> tuple[str, ...]:
    letters = tuple(x) if isinstance(x, str) else _str_list(x, pointer)
    for letter in letters:
        if letter not in alphabet:
            raise DocumentError(f"unknown letter {letter!r}", pointer)
    return letters


def _parse_address(x, alphabet: tuple[str, ...], pointer: str) -> Address:
    o = _as_object(x, pointer)
    period = _parse_letters(_get(o, "period", pointer), alphabet, f"{pointer}/period")
    tail = _parse_letters(_get(o, "tail", pointer, ""), alphabet, f"{pointer}/tail")
    try:
        return Address(period, tail)
    except IfsError as err:
        raise DocumentError(str(err), pointer) from err


def _parse_ifs(obj: dict) -> PcfIfs:
    dimension = _as_int(_get(obj, "dimension", ""), "/dimension", minimum=1)
    d = _as_int(_get(obj, "sqrt", "", 0), "/sqrt", minimum=0)
    maps_raw = _as_list(_get(obj, "maps", ""), "/maps")
    if not maps_raw:
        raise DocumentError("expected at least one map", "/maps")
    alphabet = tuple(str(i + 1) for i in range(len(maps_raw)))
    if "alphabet" in obj:
        alphabet = _str_list(obj["alphabet"], "/alphabet")
        if len(alphabet) != len(maps_raw) or len(set(alphabet)) != len(alphabet):
            raise DocumentError("alphabet must list one distinct letter per map", "/alphabet")
    maps: dict[str, AffineMap] = {}
    for k, entry in enumerate(maps_raw):
        p = f"/maps/{k}"
        e = _as_object(entry, p)
        rows = _as_list(_get(e, "A", p), f"{p}/A")
        if len(rows) != dimension:
            raise DocumentError(f"expected {dimension} matrix rows", f"{p}/A")
        matrix = tuple(
            tuple(
                _parse_scalar(x, d, f"{p}/A/{i}/{j}")
                for j, x in enumerate(_as_list(row, f"{p}/A/{i}"))
            )
            for i, row in enumerate(rows)
        )
        if any(len(row) != dimension for row in matrix):
            raise DocumentError(f"expected {dimension} entries per matrix row", f"{p}/A")
        b = _as_list(_get(e, "b", p), f"{p}/b")
        if len(b) != dimension:
            raise DocumentError(f"expected a translation of length {dimension}", f"{p}/b")
        translation = tuple(_parse_scalar(x, d, f"{p}/b/{j}") for j, x in enumerate(b))
        maps[alphabet[k]] = AffineMap(matrix, translation)
    identifications: list[tuple[Address, Address]] = []
    labelled: list[tuple[str, Address | None, tuple[FieldScalar, ...] | None, str]] = []
    for k, entry in enumerate(_as_list(_get(obj, "critical", ""), "/critical")):
        p = f"/critical/{k}"
        e = _as_object(entry, p)
        alpha = _parse_address(_get(e, "alpha", p), alphabet, f"{p}/alpha")
        beta = _parse_address(_get(e, "beta", p), alphabet, f"{p}/beta")
        identifications.append((alpha, beta))
        if "label" in e:
            labelled.append((_as_str(e["label"], f"{p}/label"), alpha, None, f"{p}/label"))
    for k, entry in enumerate(_as_list(_get(obj, "point_labels", "", []), "/point_labels")):
        p = f"/point_labels/{k}"
        e = _as_object(entry, p)
        name = _as_str(_get(e, "name", p), f"{p}/name")
        if "address" in e:
            labelled.append((name, _parse_address(e["address"], alphabet, f"{p}/address"), None, p))
        else:
            coords = _as_list(_get(e, "point", p), f"{p}/point")
            if len(coords) != dimension:
                raise DocumentError(f"expected a point of length {dimension}", f"{p}/point")
            point = tuple(_parse_scalar(x, d, f"{p}/point/{j}") for j, x in enumerate(coords))
            labelled.append((name, None, point, p))
    bare = PcfIfs(alphabet, maps, tuple(identifications), {})
    point_labels: dict[str, tuple[FieldScalar, ...]] = {}
    for name, address, point, pointer in labelled:
        if address is not None:
            try:
                point = point_of_address(bare, address)
            except (IfsError, FieldError) as err:
                raise DocumentError(str(err), pointer, semantic=True) from err
        if point_labels.get(name, point) != point:
            raise DocumentError(f"label {name!r} is bound to two distinct points", pointer)
        point_labels[name] = point
    return PcfIfs(alphabet, maps, tuple(identifications), point_labels)


def _parse_ers(obj: dict) -> Ers:
    colors = _str_list(_get(obj, "colors", ""), "/colors")
    base = _parse_graph(_get(obj, "base", ""), "/base")
    repl_obj = _as_object(_get(obj, "replacements", ""), "/replacements")
    replacements: dict[str, ErsReplacement] = {}
    for c in colors:
        if c not in repl_obj:
            raise DocumentError(f"replacements are missing color {c!r}", "/replacements")
        p = _ptr("/replacements", c)
        entry = _as_object(repl_obj[c], p)
        replacements[c] = ErsReplacement(
            _parse_graph(_get(entry, "graph", p), f"{p}/graph"),
            _as_str(_get(entry, "iota", p), f"{p}/iota"),
            _as_str(_get(entry, "tau", p), f"{p}/tau"),
        )
    for c in repl_obj:
        if c not in replacements:
            raise DocumentError(f"replacements name unknown color {c!r}", "/replacements")
    return Ers(colors, base, replacements)


_PARSERS: dict[str, Callable[[dict], Any]] = {
    "vers": _parse_vers,
    "automaton": _parse_automaton,
    "ifs": _parse_ifs,
    "ers": _parse_ers,
}

_VALIDATORS = {
    "vers": validate_vers,
    "automaton": validate_automaton,
    "ifs": validate_pcf_ifs,
    "ers": validate_ers,
}


def _document_kind(obj: dict) -> str:
    if "kind" in obj:
        kind = _as_str(obj["kind"], "/kind")
        if kind not in KINDS:
            raise DocumentError(f"unknown document kind {kind!r}; expected one of {KINDS}", "/kind")
        return kind
    if "sigma" in obj:
        return "vers"
    if "maps" in obj:
        return "ifs"
    if "transitions" in obj:
        return "automaton"
    if "base" in obj and "replacements" in obj:
        return "ers"
    raise DocumentError(f"cannot infer the document kind; add a 'kind' field (one of {KINDS})")


def parse_spec(data: bytes | str) -> SpecDocument:
    """Parse and validate a JSON document into a :class:`SpecDocument`."""
    raw = data.encode("utf-8") if isinstance(data, str) else bytes(data)
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError as err:
        raise DocumentError(f"document is not UTF-8: {err}") from err
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as err:
        offset = len(text[: err.pos].encode("utf-8"))
        raise DocumentError(f"JSON parse error at byte offset {offset}: {err.msg}") from err
    top = _as_object(obj, "")
    version = top.get("version", DOCUMENT_VERSION)
    if isinstance(version, bool) or not isinstance(version, int) or version != DOCUMENT_VERSION:
        raise DocumentError(f"unrecognized document version {version!r}", "/version")
    kind = _document_kind(top)
    payload = _PARSERS[kind](top)
    report = _VALIDATORS[kind](payload)
    if not report.ok:
        raise DocumentError(
            f"invalid {kind} document: " + "; ".join(report.issues), semantic=True
        )
    return SpecDocument(kind, version, payload, sha256(raw).hexdigest())


# ----- document serialization ---------------------------------------------------


def vers_document(v: Vers) -> dict:
    """The JSON document of a replacement system (inverse of parsing)."""
    return {
        "kind": "vers",
        "version": DOCUMENT_VERSION,
        "sigma": {**graph_json(v.sigma), "start": v.start},
        "colors": list(v.colors),
        "kappa": {c: list(v.kappa[c]) for c in v.colors},
        "replacements": {
            c: {
                "edges": [
                    {
                        "from": [r.src_letter, r.src_marker],
                        "to": [r.dst_letter, r.dst_marker],
                        "color": r.color,
                    }
                    for r in v.replacements[c].edges
                ]
            }
            for c in v.colors
        },
        "base": list(v.base_colors),
        "word_order": v.word_order,
    }


def automaton_document(aut: Automaton) -> dict:
    """The JSON document of a letter transducer."""
    digits = tuple(str(i) for i in range(len(aut.alphabet)))
    return {
        "kind": "automaton",
        "version": DOCUMENT_VERSION,
        "alphabet": len(aut.alphabet) if aut.alphabet == digits else list(aut.alphabet),
        "states": list(aut.states),
        "transitions": [
            {"state": g, "in": x, "out": aut.transitions[(g, x)][0], "next": aut.transitions[(g, x)][1]}
            for g in aut.states
            for x in aut.alphabet
            if (g, x) in aut.transitions
        ],
    }


def _scalar_json(s: FieldScalar) -> str | dict:
    if s.b == 0:
        return str(s.a)
    return {"a": str(s.a), "b": str(s.b)}


def _address_json(a: Address) -> dict:
    single = all(len(x) == 1 for x in a.period + a.tail)
    out: dict = {"period": "".join(a.period) if single else list(a.period)}
    if a.tail:
        out["tail"] = "".join(a.tail) if single else list(a.tail)
    return out


def ifs_document(f: PcfIfs) -> dict:
    """The JSON document of an iterated function system."""
    ds = {s.d for m in f.maps.values() for s in (*m.translation, *(x for row in m.matrix for x in row))}
    ds |= {s.d for p in f.point_labels.values() for s in p}
    out: dict = {
        "kind": "ifs",
        "version": DOCUMENT_VERSION,
        "dimension": f.dimension,
        "sqrt": max(ds),
        "maps": [
            {
                "A": [[_scalar_json(x) for x in row] for row in f.maps[z].matrix],
                "b": [_scalar_json(x) for x in f.maps[z].translation],
            }
            for z in f.alphabet
        ],
    }
    if f.alphabet != tuple(str(i + 1) for i in range(len(f.alphabet))):
        out["alphabet"] = list(f.alphabet)
    out["critical"] = [
        {"alpha": _address_json(a), "beta": _address_json(b)} for a, b in f.identifications
    ]
    if f.point_labels:
        out["point_labels"] = [
            {"name": name, "point": [_scalar_json(x) for x in f.point_labels[name]]}
            for name in sorted(f.point_labels)
        ]
    return out


def ers_document(e: Ers) -> dict:
    """The JSON document of an edge replacement system."""
    return {
        "kind": "ers",
        "version": DOCUMENT_VERSION,
        "colors": list(e.colors),
        "base": graph_json(e.base),
        "replacements": {
            c: {
                "graph": graph_json(e.replacements[c].graph),
                "iota": _id_str(e.replacements[c].iota),
                "tau": _id_str(e.replacements[c].tau),
            }
            for c in e.colors
        },
    }


def document_bytes(doc: dict) -> bytes:
    """Canonical serialization of a JSON document (deterministic)."""
    return (json.dumps(doc, indent=2, ensure_ascii=False) + "\n").encode("utf-8")


# ----- export -------------------------------------------------------------------


def _dot_quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _dot_node(uid: str, typ: str) -> str:
    return f"  {_dot_quote(uid)} [label={_dot_quote(f'{uid}:{typ}')}];"


def _dot_edge(src: str, dst: str, color: str) -> str:
    attrs = f"label={_dot_quote(color)}, color={_dot_quote(color)}, style=solid"
    return f"  {_dot_quote(src)} -> {_dot_quote(dst)} [{attrs}];"


def _graph_dot(g: TypedGraph) -> str:
    lines = ["digraph {"]
    lines.extend(_dot_node(_id_str(u), t) for u, t in g.vertices)
    lines.extend(_dot_edge(_id_str(e.src), _id_str(e.dst), e.color) for e in g.edges)
    lines.append("}")
    return "\n".join(lines) + "\n"


def _history_dot(h: HistoryTruncation) -> str:
    lines = ["digraph {"]
    for level in range(h.depth + 1):
        g = h.graph_at(level)
        lines.extend(_dot_node(u, t) for u, t in g.vertices)
        lines.extend(_dot_edge(e.src, e.dst, e.color) for e in g.edges)
        if level:
            for i in range(h.level_size(level)):
                parent = h.render_at(level - 1, h.pred(level, i))
                lines.append(
                    f"  {_dot_quote(parent)} -> {_dot_quote(h.render_at(level, i))} [style=dashed];"
                )
    lines.append("}")
    return "\n".join(lines) + "\n"


_GRAPHML_HEADER = (
    '<?xml version="1.0" encoding="UTF-8"?>\n'
    '<graphml xmlns="http://graphml.graphdrawing.org/xmlns">\n'
    '  <key id="type" for="node" attr.name="type" attr.type="string"/>\n'
    '  <key id="level" for="node" attr.name="level" attr.type="int"/>\n'
    '  <key id="color" for="edge" attr.name="color" attr.type="string"/>\n'
    '  <key id="kind" for="edge" attr.name="kind" attr.type="string"/>\n'
    '  <graph edgedefault="directed">\n'
)


def _xml(s: str) -> str:
    return escape(s, {'"': "&quot;"})


def _graphml_node(uid: str, typ: str, level: int | None = None) -> str:
    data = f'<data key="type">{_xml(typ)}</data>'
    if level is not None:
        data += f'<data key="level">{level}</data>'
    return f'    <node id="{_xml(uid)}">{data}</node>\n'


def _graphml_edge(eid: str, src: str, dst: str, color: str, kind: str | None = None) -> str:
    data = f'<data key="color">{_xml(color)}</data>'
    if kind is not None:
        data += f'<data key="kind">{kind}</data>'
    return (
        f'    <edge id="{_xml(eid)}" source="{_xml(src)}" target="{_xml(dst)}">{data}</edge>\n'
    )


def _graph_graphml(g: TypedGraph) -> str:
    out = [_GRAPHML_HEADER]
    out.extend(_graphml_node(_id_str(u), t) for u, t in g.vertices)
    out.extend(_graphml_edge(e.id, _id_str(e.src), _id_str(e.dst), e.color) for e in g.edges)
    out.append("  </graph>\n</graphml>\n")
    return "".join(out)


def _history_graphml(h: HistoryTruncation) -> str:
    out = [_GRAPHML_HEADER]
    for level in range(h.depth + 1):
        g = h.graph_at(level)
        out.extend(_graphml_node(u, t, level) for u, t in g.vertices)
        out.extend(
            _graphml_edge(e.id, e.src, e.dst, e.color, "horizontal") for e in g.edges
        )
        if level:
            for i in range(h.level_size(level)):
                parent = h.render_at(level - 1, h.pred(level, i))
                child = h.render_at(level, i)
                out.append(_graphml_edge(f"vert.{level}.{i}", parent, child, "", "vertical"))
    out.append("  </graph>\n</graphml>\n")
    return "".join(out)


def _history_json(h: HistoryTruncation) -> dict:
    vertical = []
    for level in range(1, h.depth + 1):
        vertical.extend(
            {"from": h.render_at(level - 1, h.pred(level, i)), "to": h.render_at(level, i)}
            for i in range(h.level_size(level))
        )
    return {
        "depth": h.depth,
        "levels": [
            {"level": level, **graph_json(h.graph_at(level))} for level in range(h.depth + 1)
        ],
        "vertical": vertical,
    }


def export(g: TypedGraph | HistoryTruncation, format: str = "json") -> bytes:
    """Serialize a graph or history truncation to deterministic bytes."""
    if format not in FORMATS:
        raise DocumentError(f"unknown export format {format!r}; expected one of {FORMATS}")
    if isinstance(g, HistoryTruncation):
        if format == "json":
            return document_bytes(_history_json(g))
        text = _history_dot(g) if format == "dot" else _history_graphml(g)
        return text.encode("utf-8")
    if not isinstance(g, TypedGraph):
        raise DocumentError("export expects a TypedGraph or a HistoryTruncation")
    if format == "json":
        return document_bytes(graph_json(g))
    text = _graph_dot(g) if format == "dot" else _graph_graphml(g)
    return text.encode("utf-8")


# ----- oracle comparison ----------------------------------------------------------


def _graph_diffs(a: TypedGraph, b: TypedGraph, aname: str, bname: str) -> list[str]:
    diffs: list[str] = []
    ta, tb = a.vertex_types(), b.vertex_types()
    for u in sorted(set(ta) | set(tb), key=_id_str):
        if u not in tb:
            diffs.append(f"vertex {_id_str(u)!r} only in {aname}")
        elif u not in ta:
            diffs.append(f"vertex {_id_str(u)!r} only in {bname}")
        elif ta[u] != tb[u]:
            diffs.append(
                f"vertex {_id_str(u)!r} typed {ta[u]!r} in {aname} but {tb[u]!r} in {bname}"
            )
    ca = Counter((e.src, e.dst, e.color) for e in a.edges)
    cb = Counter((e.src, e.dst, e.color) for e in b.edges)
    for key in sorted(set(ca) | set(cb), key=lambda k: (_id_str(k[0]), _id_str(k[1]), k[2])):
        if ca[key] != cb[key]:
            src, dst, color = key
            diffs.append(
                f"edge {_id_str(src)!r} -> {_id_str(dst)!r} color {color!r}: "
                f"x{ca[key]} in {aname}, x{cb[key]} in {bname}"
            )
    return diffs


def _automaton_diffs(aut: Automaton, n: int) -> list[str]:
    lhs = gamma(vers_from_automaton(aut), n)
    rhs = schreier_graph(aut, n)
    if n == 0:
        rhs = relabel(rhs, {"": "ε"})
    return _graph_diffs(lhs, rhs, "expansion", "schreier graph")


def _subdivision_rename(n: int):
    # vertices of bary(full_expansion): edge words are letter tuples, their
    # midpoints are (word, local vertex) pairs, and base vertices are bare ids;
    # persistent vertices pad with V to the common word length
    def rename(u):
        if isinstance(u, tuple) and u and isinstance(u[0], tuple):
            word, inner = u
            return "".join(word) + inner + "V" * (n - 1 - len(word))
        if isinstance(u, tuple):
            return "".join(u)
        return u + "V" * (n - 1)

    return rename


def _ers_diffs(e: Ers, n: int) -> list[str]:
    if n < 1:
        raise DocumentError("the edge replacement oracle compares levels >= 1")
    lhs = gamma(vers_from_ers(e), n)
    oracle = barycentric_subdivision(full_expansion(e, n))
    rename = _subdivision_rename(n)
    rhs = relabel(oracle, {u: rename(u) for u, _t in oracle.vertices})
    return _graph_diffs(lhs, rhs, "expansion", "subdivided expansion")


def _ifs_diffs(f: PcfIfs, n: int, threads: int | None) -> list[str]:
    g = gamma(vers_from_ifs(f), n)
    words = sorted(u for u, _t in g.vertices)
    linked = {frozenset((e.src, e.dst)) for e in g.edges if e.src != e.dst}

    def check(chunk: list[tuple[str, str]]) -> list[str]:
        out = []
        for u, w in chunk:
            edge = frozenset((u, w)) in linked
            hit = bool(cell_intersection_oracle(f, u, w))
            if edge != hit:
                out.append(
                    f"pair ({u}, {w}): expansion edge {edge} but cells "
                    f"{'intersect' if hit else 'are disjoint'}"
                )
        return out

    pairs = list(combinations(words, 2))
    workers = threads if threads is not None else (os.cpu_count() or 1)
    if workers <= 1 or len(pairs) < 64:
        return check(pairs)
    size = -(-len(pairs) // workers)
    chunks = [pairs[i : i + size] for i in range(0, len(pairs), size)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return [d for part in pool.map(check, chunks) for d in part]


def oracle_compare(spec: SpecDocument, n: int, threads: int | None = None) -> Report:
    """Compare the expansion of a document against its independent oracle."""
    if spec.kind not in ORACLE_KINDS:
        raise DocumentError(
            f"no oracle for kind {spec.kind!r}; expected one of {tuple(ORACLE_KINDS)}"
        )
    started = time.perf_counter()
    if spec.kind == "automaton":
        diffs = _automaton_diffs(spec.payload, n)
    elif spec.kind == "ifs":
        diffs = _ifs_diffs(spec.payload, n, threads)
    else:
        diffs = _ers_diffs(spec.payload, n)
    details = diffs[:10]
    if len(diffs) > 10:
        details.append(f"({len(diffs)} differences in total)")
    return Report(
        command=f"oracle --kind {ORACLE_KINDS[spec.kind]} --level {n}",
        inputs=spec.digest or "(not hashed)",
        verdict="equal" if not diffs else "different",
        details=tuple(details),
        exit_code=0 if not diffs else 1,
        seconds=time.perf_counter() - started,
    )


# ----- bundled corpus -------------------------------------------------------------


def bundled_names() -> tuple[str, ...]:
    """Names of the documents shipped with the package."""
    root = resources.files(__package__) / "data"
    return tuple(sorted(p.name[: -len(".json")] for p in root.iterdir() if p.name.endswith(".json")))


def bundled(name: str) -> SpecDocument:
    """Load a bundled document by bare name (see :func:`bundled_names`)."""
    path = resources.files(__package__) / "data" / f"{name}.json"
    try:
        data = path.read_bytes()
    except (FileNotFoundError, OSError) as err:
        raise DocumentError(
            f"no bundled document named {name!r}; available: {', '.join(bundled_names())}"
        ) from err
    return parse_spec(data)
