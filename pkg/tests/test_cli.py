"""Command-line interface: subcommands, exit codes, and deterministic output."""

from __future__ import annotations

import json
from importlib import resources

import pytest
from click.testing import CliRunner

from vers import (
    bundled,
    document_bytes,
    export,
    gamma,
    parse_spec,
    schreier_graph,
    vers_document,
)
from vers.cli import main


def _raw(name: str) -> bytes:
    return (resources.files("vers") / "data" / f"{name}.json").read_bytes()


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def expanding_doc(tmp_path):
    # an empty replacement disconnects every pair after one step, so the
    # system is n-expanding for every n
    doc = {
        "kind": "vers",
        "version": 1,
        "sigma": {
            "vertices": [{"id": "s"}],
            "edges": [{"id": "x", "from": "s", "to": "s"}],
            "start": "s",
        },
        "colors": ["c0"],
        "kappa": {"c0": ["s", "s"]},
        "replacements": {"c0": {"edges": []}},
        "base": ["c0"],
    }
    path = tmp_path / "expanding.json"
    path.write_bytes(document_bytes(doc))
    return str(path)


def test_help_lists_all_subcommands(runner):
    result = runner.invoke(main, ["--help"])
    assert result.exit_code == 0
    for command in (
        "validate", "expand", "history", "check-expanding", "squares", "schreier",
        "from-automaton", "from-ifs", "from-ers", "ifs-power", "gluing", "oracle",
    ):
        assert command in result.output


# ----- validate -------------------------------------------------------------------


def test_validate_bundled_file(runner, tmp_path):
    path = tmp_path / "doc.json"
    path.write_bytes(_raw("basilica-automaton"))
    result = runner.invoke(main, ["validate", "--spec", str(path)])
    assert result.exit_code == 0
    assert result.output.startswith("valid automaton document")


def test_validate_accepts_bundled_names(runner):
    result = runner.invoke(main, ["validate", "--spec", "sierpinski-ifs"])
    assert result.exit_code == 0
    assert result.output.startswith("valid ifs document")


def test_validate_reads_stdin(runner):
    result = runner.invoke(main, ["validate", "--spec", "-"], input=_raw("basilica-ers"))
    assert result.exit_code == 0
    assert "valid ers document" in result.output


def test_validate_semantic_error_exits_1(runner, tmp_path):
    doc = json.loads(_raw("odometer-automaton"))
    doc["transitions"][2]["out"] = "1"
    doc["transitions"][3]["out"] = "1"
    path = tmp_path / "bad.json"
    path.write_bytes(document_bytes(doc))
    result = runner.invoke(main, ["validate", "--spec", str(path)])
    assert result.exit_code == 1
    assert "invalid" in result.stderr


def test_validate_malformed_json_exits_2(runner, tmp_path):
    path = tmp_path / "trunc.json"
    path.write_bytes(_raw("basilica-automaton")[:-30])
    result = runner.invoke(main, ["validate", "--spec", str(path)])
    assert result.exit_code == 2
    assert "byte offset" in result.stderr


def test_missing_file_exits_2(runner):
    result = runner.invoke(main, ["expand", "--spec", "/no/such/file.json", "--level", "1"])
    assert result.exit_code == 2


# ----- expand / history / schreier ---------------------------------------------------


def test_expand_matches_library_export(runner):
    result = runner.invoke(main, ["expand", "--spec", "sierpinski-ifs", "--level", "1", "--format", "dot"])
    assert result.exit_code == 0
    expected = export(gamma(bundled("sierpinski-ifs").vers(), 1), "dot")
    assert result.stdout_bytes == expected


def test_expand_output_is_deterministic(runner):
    args = ["expand", "--spec", "basilica-ers", "--level", "3", "--format", "graphml"]
    assert runner.invoke(main, args).stdout_bytes == runner.invoke(main, args).stdout_bytes


def test_expand_writes_output_file(runner, tmp_path):
    out = tmp_path / "g.json"
    result = runner.invoke(
        main, ["expand", "--spec", "odometer-automaton", "--level", "2", "--output", str(out)]
    )
    assert result.exit_code == 0
    doc = json.loads(out.read_bytes())
    assert len(doc["vertices"]) == 4


def test_history_json_depth(runner):
    result = runner.invoke(main, ["history", "--spec", "odometer-automaton", "--depth", "2"])
    assert result.exit_code == 0
    doc = json.loads(result.output)
    assert doc["depth"] == 2
    assert [len(level["vertices"]) for level in doc["levels"]] == [1, 2, 4]


def test_schreier_matches_oracle_export(runner):
    result = runner.invoke(main, ["schreier", "--spec", "basilica-automaton", "--level", "2"])
    assert result.exit_code == 0
    expected = export(schreier_graph(bundled("basilica-automaton").payload, 2), "json")
    assert result.stdout_bytes == expected


def test_schreier_rejects_non_automaton(runner):
    result = runner.invoke(main, ["schreier", "--spec", "sierpinski-ifs", "--level", "2"])
    assert result.exit_code == 2
    assert "needs a automaton document" in result.stderr


# ----- check-expanding / squares ------------------------------------------------------


def test_check_expanding_yes(runner, expanding_doc):
    result = runner.invoke(main, ["check-expanding", "--spec", expanding_doc, "--n", "1"])
    assert result.exit_code == 0
    assert result.output.strip() == "1-expanding"


def test_check_expanding_search_finds_constant(runner, expanding_doc):
    result = runner.invoke(main, ["check-expanding", "--spec", expanding_doc, "--max", "3"])
    assert result.exit_code == 0
    assert result.output.strip() == "expanding with constant 1"


def test_check_expanding_witness(runner):
    result = runner.invoke(
        main,
        ["check-expanding", "--spec", "grigorchuk-automaton", "--n", "1", "--colors", "b,c,d"],
    )
    assert result.exit_code == 1
    assert "not 1-expanding" in result.output
    assert "path colors: b" in result.output
    assert "witness pair at distance 1" in result.output


def test_check_expanding_inconclusive(runner):
    result = runner.invoke(main, ["check-expanding", "--spec", "basilica-automaton", "--max", "2"])
    assert result.exit_code == 2
    assert "inconclusive" in result.output


def test_check_expanding_needs_exactly_one_mode(runner):
    both = runner.invoke(
        main, ["check-expanding", "--spec", "basilica-automaton", "--n", "1", "--max", "2"]
    )
    neither = runner.invoke(main, ["check-expanding", "--spec", "basilica-automaton"])
    assert both.exit_code == 2
    assert neither.exit_code == 2


def test_squares_found_and_not_found(runner):
    hit = runner.invoke(main, ["squares", "--spec", "odometer-automaton", "--size", "1", "--depth", "3"])
    assert hit.exit_code == 1
    assert "6 geodesic 1-square(s)" in hit.output
    miss = runner.invoke(main, ["squares", "--spec", "odometer-automaton", "--size", "2", "--depth", "4"])
    assert miss.exit_code == 0
    assert "no geodesic 2-squares" in miss.output


# ----- adapters -----------------------------------------------------------------------


def test_from_automaton_emits_vers_document(runner):
    result = runner.invoke(main, ["from-automaton", "basilica-automaton"])
    assert result.exit_code == 0
    expected = document_bytes(vers_document(bundled("basilica-automaton").vers()))
    assert result.stdout_bytes == expected


def test_from_ers_pipes_into_expand(runner):
    derived = runner.invoke(main, ["from-ers", "basilica-ers"])
    assert derived.exit_code == 0
    result = runner.invoke(
        main, ["expand", "--spec", "-", "--level", "2"], input=derived.stdout_bytes
    )
    assert result.exit_code == 0
    assert len(json.loads(result.output)["vertices"]) == 9


def test_from_ifs_all_colors_flag(runner):
    plain = runner.invoke(main, ["from-ifs", "sierpinski-ifs"])
    full = runner.invoke(main, ["from-ifs", "sierpinski-ifs", "--all-colors"])
    assert plain.exit_code == 0 and full.exit_code == 0
    c1 = set(json.loads(plain.output)["colors"])
    c2 = set(json.loads(full.output)["colors"])
    assert c1 <= c2
    assert len(c1) == 7


def test_from_automaton_rejects_wrong_kind(runner):
    result = runner.invoke(main, ["from-automaton", "basilica-ers"])
    assert result.exit_code == 2


def test_ifs_power_round_trips(runner):
    result = runner.invoke(main, ["ifs-power", "--spec", "sierpinski-ifs", "--k", "2"])
    assert result.exit_code == 0
    doc = parse_spec(result.stdout_bytes)
    assert doc.kind == "ifs"
    assert len(doc.payload.alphabet) == 9


# ----- gluing -------------------------------------------------------------------------


def test_gluing_related(runner):
    result = runner.invoke(
        main, ["gluing", "--spec", "basilica-ers", "--u", "L022222222", "--v", "L100000000"]
    )
    assert result.exit_code == 0
    assert result.output.strip() == "related"


def test_gluing_unrelated(runner):
    result = runner.invoke(main, ["gluing", "--spec", "basilica-ers", "--u", "L1", "--v", "R0"])
    assert result.exit_code == 1
    assert result.output.strip() == "unrelated"


def test_gluing_depth_truncates(runner):
    result = runner.invoke(
        main,
        ["gluing", "--spec", "basilica-ers", "--u", "L022222222", "--v", "L100000000", "--depth", "3"],
    )
    assert result.exit_code == 0
    short = runner.invoke(
        main, ["gluing", "--spec", "basilica-ers", "--u", "L0", "--v", "L100", "--depth", "3"]
    )
    assert short.exit_code == 2


def test_gluing_length_mismatch_exits_2(runner):
    result = runner.invoke(main, ["gluing", "--spec", "basilica-ers", "--u", "L0", "--v", "L"])
    assert result.exit_code == 2


# ----- oracle -------------------------------------------------------------------------


def test_oracle_human_report(runner):
    result = runner.invoke(main, ["oracle", "--spec", "basilica-automaton", "--level", "4"])
    assert result.exit_code == 0
    assert result.output.splitlines()[0] == "oracle --kind schreier --level 4: equal"


def test_oracle_json_report(runner):
    result = runner.invoke(
        main, ["oracle", "--spec", "basilica-ers", "--level", "3", "--json"]
    )
    assert result.exit_code == 0
    doc = json.loads(result.output)
    assert doc["verdict"] == "equal"
    assert doc["exit_code"] == 0
    assert doc["inputs"] == bundled("basilica-ers").digest


def test_oracle_kind_flag_must_match(runner):
    result = runner.invoke(
        main, ["oracle", "--spec", "basilica-ers", "--kind", "schreier", "--level", "2"]
    )
    assert result.exit_code == 2


def test_oracle_rejects_vers_documents(runner, expanding_doc):
    result = runner.invoke(main, ["oracle", "--spec", expanding_doc, "--level", "2"])
    assert result.exit_code == 2


def test_oracle_ers_level_zero_is_input_error(runner):
    result = runner.invoke(main, ["oracle", "--spec", "basilica-ers", "--level", "0"])
    assert result.exit_code == 2


# ----- threads ------------------------------------------------------------------------


def test_threads_flag_and_env(runner):
    flag = runner.invoke(
        main, ["--threads", "2", "oracle", "--spec", "sierpinski-ifs", "--level", "2", "--json"]
    )
    env = runner.invoke(
        main,
        ["oracle", "--spec", "sierpinski-ifs", "--level", "2", "--json"],
        env={"VERS_THREADS": "3"},
    )
    assert flag.exit_code == 0 and env.exit_code == 0
    assert json.loads(flag.output)["verdict"] == json.loads(env.output)["verdict"] == "equal"


def test_bad_vers_threads_env_exits_2(runner):
    result = runner.invoke(
        main,
        ["oracle", "--spec", "sierpinski-ifs", "--level", "1"],
        env={"VERS_THREADS": "many"},
    )
    assert result.exit_code == 2
