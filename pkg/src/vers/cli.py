"""Command-line interface over documents: expansion, checks, and oracles.

Every subcommand reads a JSON document (file path or ``-`` for stdin),
lowers it to its replacement system when needed, and writes deterministic
output.  Exit codes follow one convention throughout: 0 when the checked
property holds (valid, equal, expanding, no squares, related), 1 when a
witness or difference was found, and 2 for inconclusive checks or input
errors.
"""

from __future__ import annotations

import os
import sys
from importlib import resources
from pathlib import Path
from typing import NoReturn

import click

from .automata import AutomatonError, schreier_graph
from .documents import (
    FORMATS,
    DocumentError,
    SpecDocument,
    bundled_names,
    document_bytes,
    export,
    ifs_document,
    oracle_compare,
    parse_spec,
    vers_document,
)
from .engine import VersError, gamma, history
from .ers import ErsError, gluing_related_at_depth
from .expansivity import find_expanding_constant, find_geodesic_squares, is_n_expanding
from .graphs import GraphError
from .ifs import IfsError, ifs_power
from .numberfield import FieldError

_ERRORS = (DocumentError, VersError, GraphError, AutomatonError, IfsError, ErsError, FieldError)

# how the oracle subcommand names each document kind
_ORACLE_DOC_KIND = {"schreier": "automaton", "ifs": "ifs", "ers": "ers"}


def _fail(message: str) -> NoReturn:
    click.echo(f"error: {message}", err=True)
    raise SystemExit(2)


def _read_bytes(path: str) -> bytes:
    try:
        if path == "-":
            return sys.stdin.buffer.read()
        if not os.path.exists(path) and path in bundled_names():
            return (resources.files("vers") / "data" / f"{path}.json").read_bytes()
        return Path(path).read_bytes()
    except OSError as err:
        _fail(str(err))


def _document(path: str) -> SpecDocument:
    try:
        return parse_spec(_read_bytes(path))
    except DocumentError as err:
        _fail(str(err))


def _require_kind(doc: SpecDocument, kind: str, command: str) -> None:
    if doc.kind != kind:
        _fail(f"{command} needs a {kind} document, got {doc.kind}")


def _emit(blob: bytes, output: str | None) -> None:
    if output and output != "-":
        Path(output).write_bytes(blob)
    else:
        click.echo(blob, nl=False)


_spec_option = click.option(
    "--spec", "spec_path", required=True, metavar="FILE",
    help="Input document (file path, '-' for stdin, or a bundled name).",
)
_format_option = click.option(
    "--format", "fmt", type=click.Choice(FORMATS), default="json", show_default=True,
    help="Output serialization.",
)
_output_option = click.option(
    "--output", default=None, metavar="FILE", help="Write to a file instead of stdout."
)


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.option(
    "--threads", type=click.IntRange(min=1), default=None,
    help="Cap on parallel workers for sweep-style checks (default: hardware "
    "parallelism; the VERS_THREADS environment variable takes precedence).",
)
@click.pass_context
def main(ctx: click.Context, threads: int | None) -> None:
    """Vertex-and-edge replacement systems: expansions, checks, and oracles."""
    env = os.environ.get("VERS_THREADS")
    if env is not None:
        try:
            threads = max(1, int(env))
        except ValueError:
            _fail(f"VERS_THREADS must be an integer, got {env!r}")
    ctx.obj = threads if threads is not None else (os.cpu_count() or 1)


@main.command()
@_spec_option
def validate(spec_path: str) -> None:
    """Parse and validate a document (exit 0 valid, 1 invalid, 2 malformed)."""
    data = _read_bytes(spec_path)
    try:
        doc = parse_spec(data)
    except DocumentError as err:
        click.echo(f"invalid: {err}", err=True)
        raise SystemExit(1 if err.semantic else 2) from err
    click.echo(f"valid {doc.kind} document (sha256 {doc.digest})")


@main.command()
@_spec_option
@click.option("--level", type=click.IntRange(min=0), required=True, help="Expansion level n.")
@_format_option
@_output_option
def expand(spec_path: str, level: int, fmt: str, output: str | None) -> None:
    """Export the n-th expansion graph of the document's system."""
    doc = _document(spec_path)
    try:
        _emit(export(gamma(doc.vers(), level), fmt), output)
    except _ERRORS as err:
        _fail(str(err))


@main.command("history")
@_spec_option
@click.option("--depth", type=click.IntRange(min=0), required=True, help="Truncation depth.")
@_format_option
@_output_option
def history_command(spec_path: str, depth: int, fmt: str, output: str | None) -> None:
    """Export the history graph truncation of the document's system."""
    doc = _document(spec_path)
    try:
        _emit(export(history(doc.vers(), depth), fmt), output)
    except _ERRORS as err:
        _fail(str(err))


@main.command("check-expanding")
@_spec_option
@click.option("--n", "n", type=click.IntRange(min=1), default=None, help="Test one constant n.")
@click.option("--max", "n_max", type=click.IntRange(min=1), default=None,
              help="Search the smallest constant up to this bound.")
@click.option("--reachable-only", is_flag=True, help="Restrict to typings realizable from the start type.")
@click.option("--fail-below", is_flag=True, help="Also reject descendant pairs closer than n.")
@click.option("--colors", default=None, metavar="C1,C2,...",
              help="Restrict path colors (diagnostic; only with --n).")
def check_expanding(spec_path: str, n: int | None, n_max: int | None,
                    reachable_only: bool, fail_below: bool, colors: str | None) -> None:
    """Run the abstract-path expansivity test (exit 0/1/2: yes/witness/inconclusive)."""
    if (n is None) == (n_max is None):
        _fail("pass exactly one of --n or --max")
    if colors is not None and n is None:
        _fail("--colors needs --n")
    doc = _document(spec_path)
    try:
        v = doc.vers()
        if n is not None:
            palette = tuple(c for c in colors.split(",") if c) if colors else None
            result = is_n_expanding(v, n, colors=palette, reachable_only=reachable_only,
                                    fail_below=fail_below)
            if result.expanding:
                click.echo(f"{n}-expanding")
                return
            w = result.witness
            click.echo(f"not {n}-expanding")
            click.echo(f"  path colors: {' '.join(w.path.colors)}")
            click.echo(f"  orientations: {' '.join(w.path.orientations)}")
            click.echo(f"  witness pair at distance {w.distance}: "
                       f"{'.'.join(w.pair[0])} / {'.'.join(w.pair[1])}")
            raise SystemExit(1)
        found = find_expanding_constant(v, n_max, reachable_only=reachable_only,
                                        fail_below=fail_below)
    except _ERRORS as err:
        _fail(str(err))
    if found is None:
        click.echo(f"inconclusive: not n-expanding for any n <= {n_max}")
        raise SystemExit(2)
    click.echo(f"expanding with constant {found}")


@main.command()
@_spec_option
@click.option("--size", type=click.IntRange(min=1), required=True, help="Side length n of the square.")
@click.option("--depth", type=click.IntRange(min=0), required=True, help="History truncation depth.")
def squares(spec_path: str, size: int, depth: int) -> None:
    """Search a history truncation for geodesic squares (exit 0 none, 1 found)."""
    doc = _document(spec_path)
    try:
        found = find_geodesic_squares(history(doc.vers(), depth), size)
    except _ERRORS as err:
        _fail(str(err))
    if not found:
        click.echo(f"no geodesic {size}-squares within depth {depth}")
        return
    click.echo(f"{len(found)} geodesic {size}-square(s) within depth {depth}")
    for sq in found[:10]:
        a, b, c, d = sq.corners
        click.echo(f"  levels {sq.top_level}..{sq.bottom_level}: {a} .. {b} over {c} .. {d}")
    raise SystemExit(1)


@main.command()
@_spec_option
@click.option("--level", type=click.IntRange(min=0), required=True, help="Word length n.")
@_format_option
@_output_option
def schreier(spec_path: str, level: int, fmt: str, output: str | None) -> None:
    """Export the level-n Schreier graph of an automaton document."""
    doc = _document(spec_path)
    _require_kind(doc, "automaton", "schreier")
    try:
        _emit(export(schreier_graph(doc.payload, level), fmt), output)
    except _ERRORS as err:
        _fail(str(err))


@main.command("from-automaton")
@click.argument("spec_path", metavar="SPEC")
@_output_option
def from_automaton(spec_path: str, output: str | None) -> None:
    """Print the replacement system derived from an automaton document."""
    doc = _document(spec_path)
    _require_kind(doc, "automaton", "from-automaton")
    try:
        _emit(document_bytes(vers_document(doc.vers())), output)
    except _ERRORS as err:
        _fail(str(err))


@main.command("from-ifs")
@click.argument("spec_path", metavar="SPEC")
@click.option("--all-colors", is_flag=True,
              help="Emit the full post-critical palette, not only reachable colors.")
@_output_option
def from_ifs(spec_path: str, all_colors: bool, output: str | None) -> None:
    """Print the replacement system derived from an ifs document."""
    doc = _document(spec_path)
    _require_kind(doc, "ifs", "from-ifs")
    try:
        _emit(document_bytes(vers_document(doc.vers(full_palette=all_colors))), output)
    except _ERRORS as err:
        _fail(str(err))


@main.command("from-ers")
@click.argument("spec_path", metavar="SPEC")
@_output_option
def from_ers(spec_path: str, output: str | None) -> None:
    """Print the replacement system derived from an ers document."""
    doc = _document(spec_path)
    _require_kind(doc, "ers", "from-ers")
    try:
        _emit(document_bytes(vers_document(doc.vers())), output)
    except _ERRORS as err:
        _fail(str(err))


@main.command("ifs-power")
@_spec_option
@click.option("--k", type=click.IntRange(min=1), required=True, help="Power exponent.")
@_output_option
def ifs_power_command(spec_path: str, k: int, output: str | None) -> None:
    """Print the k-th power system of an ifs document."""
    doc = _document(spec_path)
    _require_kind(doc, "ifs", "ifs-power")
    try:
        _emit(document_bytes(ifs_document(ifs_power(doc.payload, k))), output)
    except _ERRORS as err:
        _fail(str(err))


@main.command()
@_spec_option
@click.option("--u", "u", required=True, metavar="WORD", help="First edge word.")
@click.option("--v", "v", required=True, metavar="WORD", help="Second edge word.")
@click.option("--depth", type=click.IntRange(min=1), default=None,
              help="Test the prefixes of this length (default: the full words).")
def gluing(spec_path: str, u: str, v: str, depth: int | None) -> None:
    """Test the gluing relation on two ers edge words (exit 0 related, 1 not)."""
    doc = _document(spec_path)
    _require_kind(doc, "ers", "gluing")
    if depth is not None:
        if len(u) < depth or len(v) < depth:
            _fail(f"both words must have at least {depth} letters")
        u, v = u[:depth], v[:depth]
    try:
        related = gluing_related_at_depth(doc.payload, u, v)
    except _ERRORS as err:
        _fail(str(err))
    click.echo("related" if related else "unrelated")
    if not related:
        raise SystemExit(1)


@main.command()
@_spec_option
@click.option("--kind", type=click.Choice(tuple(_ORACLE_DOC_KIND)), default=None,
              help="Expected oracle (inferred from the document when omitted).")
@click.option("--level", type=click.IntRange(min=0), required=True, help="Comparison level n.")
@click.option("--json", "as_json", is_flag=True, help="Machine-readable report.")
@click.pass_context
def oracle(ctx: click.Context, spec_path: str, kind: str | None,
           level: int, as_json: bool) -> None:
    """Compare an adapter document against its independent oracle (exit 0 equal)."""
    doc = _document(spec_path)
    if kind is not None and _ORACLE_DOC_KIND[kind] != doc.kind:
        _fail(f"--kind {kind} needs a {_ORACLE_DOC_KIND[kind]} document, got {doc.kind}")
    try:
        report = oracle_compare(doc, level, threads=ctx.obj)
    except _ERRORS as err:
        _fail(str(err))
    click.echo(report.to_json() if as_json else report.render(), nl=False)
    if report.exit_code:
        raise SystemExit(report.exit_code)


if __name__ == "__main__":
    main()
