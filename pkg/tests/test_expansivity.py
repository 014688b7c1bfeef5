"""Expansivity checker and geodesic squares: oracles, witnesses, frozen counts."""

from __future__ import annotations

import itertools

import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from vers.automata import Automaton, vers_from_automaton
from vers.engine import VersError, expand, history
from vers.expansivity import (
    BACKWARD,
    FORWARD,
    AbstractPath,
    enumerate_abstract_paths,
    find_expanding_constant,
    find_geodesic_squares,
    is_n_expanding,
    same_level_distance,
)
from vers.graphs import bfs_distance


def _aut(alphabet, states, table):
    return Automaton(
        alphabet=tuple(alphabet),
        states=tuple(states),
        transitions={(g, x): tuple(out) for g, row in table.items() for x, out in row.items()},
    )


@pytest.fixture
def basilica_vers():
    return vers_from_automaton(
        _aut(
            "01",
            ["1", "a", "b"],
            {
                "1": {"0": ("0", "1"), "1": ("1", "1")},
                "a": {"0": ("0", "b"), "1": ("1", "1")},
                "b": {"0": ("1", "a"), "1": ("0", "1")},
            },
        )
    )


@pytest.fixture
def grigorchuk_vers():
    return vers_from_automaton(
        _aut(
            "01",
            ["1", "a", "b", "c", "d"],
            {
                "1": {"0": ("0", "1"), "1": ("1", "1")},
                "a": {"0": ("1", "1"), "1": ("0", "1")},
                "b": {"0": ("0", "a"), "1": ("1", "c")},
                "c": {"0": ("0", "a"), "1": ("1", "d")},
                "d": {"0": ("0", "1"), "1": ("1", "b")},
            },
        )
    )


@pytest.fixture
def odometer_vers_full(odometer_vers):
    return odometer_vers


# ----- path enumeration ---------------------------------------------------------


def _brute_force_paths(v, n):
    # independent re-derivation: try every (colors, orientations) tuple and
    # chain the types directly off kappa
    out = []
    for cols in itertools.product(v.colors, repeat=n):
        for orients in itertools.product((FORWARD, BACKWARD), repeat=n):
            types = []
            ok = True
            for c, o in zip(cols, orients):
                pair = v.kappa[c]
                prev_t, next_t = pair if o == FORWARD else pair[::-1]
                if types and types[-1] != prev_t:
                    ok = False
                    break
                if not types:
                    types.append(prev_t)
                types.append(next_t)
            if ok:
                out.append((cols, orients, tuple(types)))
    return out


def test_enumeration_counts_full_shift(odometer_vers, grigorchuk_vers):
    assert len(list(enumerate_abstract_paths(odometer_vers, 1))) == 4
    assert len(list(enumerate_abstract_paths(grigorchuk_vers, 1))) == 10
    assert len(list(enumerate_abstract_paths(odometer_vers, 2))) == 16


def test_enumeration_single_color_two_orientations(odometer_vers):
    paths = list(enumerate_abstract_paths(odometer_vers, 1, colors=("a",)))
    assert [(p.colors, p.orientations) for p in paths] == [
        (("a",), (FORWARD,)),
        (("a",), (BACKWARD,)),
    ]


def test_enumeration_matches_brute_force(two_type_vers, odometer_vers):
    for v, n in ((two_type_vers, 1), (two_type_vers, 2), (two_type_vers, 3), (odometer_vers, 2)):
        got = [(p.colors, p.orientations, p.types) for p in enumerate_abstract_paths(v, n)]
        assert sorted(got) == sorted(_brute_force_paths(v, n))
        assert len(got) == len(set(got))


def test_enumeration_respects_kappa_chaining(two_type_vers):
    # a c_sv edge forward ends at type v; no color starts another s-edge there
    for p in enumerate_abstract_paths(two_type_vers, 2):
        g = p.as_graph()
        from vers.graphs import validate_kappa_compatible

        assert validate_kappa_compatible(g, two_type_vers.kappa).ok


def test_enumeration_order_is_lexicographic(basilica_vers):
    paths = list(enumerate_abstract_paths(basilica_vers, 2))
    keys = [
        (
            tuple(basilica_vers.colors.index(c) for c in p.colors),
            tuple((FORWARD, BACKWARD).index(o) for o in p.orientations),
        )
        for p in paths
    ]
    assert keys == sorted(keys)


def test_enumeration_rejects_zero_length(odometer_vers):
    with pytest.raises(VersError):
        list(enumerate_abstract_paths(odometer_vers, 0))


def test_reachable_only_filter(two_type_vers):
    # every type of the two-type system is reachable, so the filter is a no-op
    with_flag = list(enumerate_abstract_paths(two_type_vers, 2, reachable_only=True))
    without = list(enumerate_abstract_paths(two_type_vers, 2))
    assert with_flag == without


# ----- the n-expanding test --------------------------------------------------------


def _reverify(v, result):
    """Witness soundness: re-expand the path and recompute the distance."""
    w = result.witness
    g = w.path.as_graph()
    for _ in range(w.path.length):
        g = expand(v, g)
    assert bfs_distance(g, w.pair[0], w.pair[1]) == w.distance
    assert w.pair[0][0] == "p0" and w.pair[1][0] == f"p{w.path.length}"
    assert len(w.geodesic) == w.distance + 1


def test_grigorchuk_not_expanding_plain(grigorchuk_vers):
    for n in (1, 2, 3):
        result = is_n_expanding(grigorchuk_vers, n)
        assert not result.expanding
        _reverify(grigorchuk_vers, result)


def test_grigorchuk_bcd_witness(grigorchuk_vers):
    # restricted to the b/c/d palette the witness path stays b/c/d-colored
    for n in (1, 2, 3):
        result = is_n_expanding(grigorchuk_vers, n, colors=("b", "c", "d"))
        assert not result.expanding
        assert set(result.witness.path.colors) <= {"b", "c", "d"}
        assert result.witness.distance == n
        _reverify(grigorchuk_vers, result)
    one = is_n_expanding(grigorchuk_vers, 1, colors=("b", "c", "d"))
    assert one.witness.path.colors == ("b",)


def test_basilica_not_expanding(basilica_vers):
    result = is_n_expanding(basilica_vers, 1, colors=("a",))
    assert not result.expanding
    assert result.witness.path.colors == ("a",)
    # R_a carries a single b-colored edge from 0.i to 1.t
    assert result.witness.pair == (("p0", "0"), ("p1", "1"))
    _reverify(basilica_vers, result)


def test_find_expanding_constant_none(grigorchuk_vers, odometer_vers, two_type_vers):
    assert find_expanding_constant(grigorchuk_vers, 3) is None
    assert find_expanding_constant(odometer_vers, 4) is None
    assert find_expanding_constant(two_type_vers, 3) is None


def test_fail_below_is_stricter(two_type_vers):
    # whatever fails plainly also fails in strict mode
    plain = is_n_expanding(two_type_vers, 2)
    strict = is_n_expanding(two_type_vers, 2, fail_below=True)
    assert not plain.expanding and not strict.expanding
    assert strict.witness.distance <= 2


# ----- same-level distance formula ----------------------------------------------------


@settings(suppress_health_check=[HealthCheck.function_scoped_fixture], max_examples=60)
@given(st.data())
def test_lifting_formula_matches_bfs(odometer_vers, two_type_vers, data):
    v = data.draw(st.sampled_from(["odo", "two"]))
    h = history(odometer_vers if v == "odo" else two_type_vers, 6)
    level = data.draw(st.integers(1, 6))
    a = data.draw(st.integers(0, h.level_size(level) - 1))
    b = data.draw(st.integers(0, h.level_size(level) - 1))
    formula = same_level_distance(h, level, a, b)
    oracle = h.at_distance(h.word_at(level, a), h.word_at(level, b))
    assert formula == oracle


# ----- geodesic squares -----------------------------------------------------------------


def test_squares_rejects_bad_input(odometer_vers):
    h = history(odometer_vers, 3)
    with pytest.raises(VersError):
        find_geodesic_squares(h, 0)
    with pytest.raises(VersError):
        find_geodesic_squares(h, 4)


def _check_square(h, sq):
    n = sq.size
    assert sq.bottom_level - sq.top_level == n
    assert len(sq.top_path) == n + 1 and len(sq.bottom_path) == n + 1
    assert len(sq.left_path) == n + 1 and len(sq.right_path) == n + 1
    # vertical chains connect the matching corners
    assert sq.left_path[0] == sq.bottom_path[0] and sq.left_path[-1] == sq.top_path[0]
    assert sq.right_path[0] == sq.bottom_path[-1] and sq.right_path[-1] == sq.top_path[-1]
    # both horizontal sides are geodesics of the history graph
    assert h.at_distance(sq.top_path[0], sq.top_path[-1]) == n
    assert h.at_distance(sq.bottom_path[0], sq.bottom_path[-1]) == n
    # consecutive path words are horizontally adjacent
    for path, level in ((sq.top_path, sq.top_level), (sq.bottom_path, sq.bottom_level)):
        for u, w in zip(path, path[1:]):
            _lu, iu = h.index_of(h.vers.parse_word(u))
            _lw, iw = h.index_of(h.vers.parse_word(w))
            assert iw in h.horizontal_adjacency(level)[iu]


def test_odometer_one_squares_census(odometer_vers):
    # cycle structure: at bottom level b >= 2 the odd positions pair with their
    # successors and project to distinct adjacent ancestors: 2^(b-1) squares
    h = history(odometer_vers, 8)
    squares = find_geodesic_squares(h, 1)
    by_level = {}
    for sq in squares:
        by_level.setdefault(sq.bottom_level, []).append(sq)
        _check_square(h, sq)
    assert sorted(by_level) == list(range(2, 9))
    for b, group in by_level.items():
        assert len(group) == 2 ** (b - 1)
    assert len(squares) == 254


def test_odometer_no_large_squares(odometer_vers):
    # predecessors halve cycle positions, so a distance-n pair projects to a
    # pair at distance at most ceil(n / 2^n) <= 1: only 1-squares can close
    h = history(odometer_vers, 8)
    assert find_geodesic_squares(h, 2) == []
    assert find_geodesic_squares(h, 3) == []


def test_two_type_squares_exist_and_lift(two_type_vers):
    # level graphs are simple paths shifting under Pred: squares of every size
    h = history(two_type_vers, 8)
    found = {n: find_geodesic_squares(h, n) for n in (1, 2, 3, 4)}
    for n, squares in found.items():
        assert squares, f"expected {n}-squares"
        for sq in squares:
            _check_square(h, sq)
    # square-lift: (n+1)-squares present forces n-squares present
    for n in (1, 2, 3):
        assert found[n + 1] and found[n]


def test_top_level_zero_gives_no_squares(two_type_vers):
    # with depth == size, the only candidate top level is the single root
    h = history(two_type_vers, 4)
    assert find_geodesic_squares(h, 4) == []


def test_squares_deterministic_order(odometer_vers):
    h = history(odometer_vers, 6)
    first = find_geodesic_squares(h, 1)
    second = find_geodesic_squares(history(odometer_vers, 6), 1)
    assert first == second
    levels = [sq.bottom_level for sq in first]
    assert levels == sorted(levels)
