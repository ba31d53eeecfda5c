import itertools
import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from amor.manifest import ConstraintSet, manifest_from_dict
from amor.permute import (
    EnumerationGuardError, Frame, Rng, Schedule, ScheduleError, build_schedule, enumerate_valid,
    factorial_checked, is_valid_frame, rng_next, sample_visible, shuffle,
)
from amor.verify import chi_square_uniform
from conftest import make_manifest
from strategies import manifests


def brute_force_valid(perm, together, adjacent):
    """Independent constraint check over a full ordering."""
    for a, b in together:
        if a in perm and b in perm:
            return False
    for a, b in adjacent:
        if a in perm and b in perm and abs(perm.index(a) - perm.index(b)) == 1:
            return False
    return True


# -- factorial_checked ---------------------------------------------------------

@pytest.mark.parametrize("n, expected", [(0, 1), (1, 1), (5, 120), (20, 2432902008176640000), (21, None), (100, None)])
def test_factorial_checked(n, expected):
    assert factorial_checked(n) == expected


def test_factorial_checked_boundary():
    assert math.factorial(20) < 2**64 <= math.factorial(21)
    with pytest.raises(ValueError):
        factorial_checked(-1)


# -- Rng -----------------------------------------------------------------------

def test_rng_is_a_value():
    a = Rng(9)
    b = a.copy()
    assert rng_next(a) == rng_next(b)
    assert a.state == b.state


def test_shuffle_does_not_mutate_input():
    items = ["a", "b", "c", "d"]
    out = shuffle(Rng(1), items)
    assert items == ["a", "b", "c", "d"]
    assert out == ["c", "a", "d", "b"]  # seed 1 on indices gives [2, 0, 3, 1]


# -- sample_visible ------------------------------------------------------------

def _with_p(ps, **extra):
    ids = [chr(ord("A") + i) for i in range(len(ps))]
    doc = {"authors": [{"id": i, "display_name": i, "p_appear": p} for i, p in zip(ids, ps)]}
    doc.update(extra)
    return manifest_from_dict(doc)


def test_all_visible_without_constraints():
    m = make_manifest(5)
    assert sample_visible(Rng(3), m) == list(m.ids)


def test_zero_probability_author_never_visible():
    m = _with_p([1, 0, 1])
    for seed in range(200):
        assert sample_visible(Rng(seed), m) == ["A", "C"]


def test_never_together_keeps_exactly_one_member():
    m = make_manifest(3, constraints={"never_together": [["A", "B"]]})
    seen = set()
    for seed in range(10_000):
        vis = sample_visible(Rng(seed), m)
        assert "C" in vis
        assert ("A" in vis) != ("B" in vis)
        seen.add(tuple(vis))
    assert seen == {("A", "C"), ("B", "C")}


def test_empty_set_falls_back_to_all_visible_minus_larger_id():
    m = _with_p([0, 0, 0], constraints={"never_together": [["A", "C"]]})
    assert sample_visible(Rng(0), m) == ["A", "B"]


def test_visibility_rate_matches_probability():
    m = _with_p([0.25, 1.0])
    rng = Rng(11)
    hits = sum("A" in sample_visible(rng, m) for _ in range(20_000))
    # 4 sigma on a binomial(20000, 0.25)
    assert abs(hits / 20_000 - 0.25) < 4 * math.sqrt(0.25 * 0.75 / 20_000)


# -- is_valid_frame ------------------------------------------------------------

def test_empty_constraints_accept_anything():
    for perm in itertools.permutations("ABCD"):
        assert is_valid_frame(perm, ConstraintSet())


def test_never_together_rejects_co_appearance():
    assert not is_valid_frame(["A", "C", "B"], ConstraintSet.from_pairs([("A", "B")]))
    assert is_valid_frame(["A", "C"], ConstraintSet.from_pairs([("A", "B")]))


def test_never_adjacent_matches_brute_force():
    cons = ConstraintSet.from_pairs(never_adjacent=[("B", "A")])
    assert is_valid_frame(["A", "C", "B"], cons)
    assert not is_valid_frame(["C", "A", "B"], cons)
    for perm in itertools.permutations("ABC"):
        assert is_valid_frame(perm, cons) == brute_force_valid(list(perm), [], [("A", "B")])


def test_duplicate_ids_are_invalid():
    assert not is_valid_frame(["A", "A"], ConstraintSet())


# -- enumerate_valid -----------------------------------------------------------

def test_enumerate_three_lexicographic():
    frames = enumerate_valid(make_manifest(3))
    assert [f.visible for f in frames] == list(itertools.permutations("ABC"))


def test_enumerate_four_with_adjacency():
    frames = enumerate_valid(make_manifest(4, constraints={"never_adjacent": [["A", "B"]]}))
    brute = [p for p in itertools.permutations("ABCD") if brute_force_valid(list(p), [], [("A", "B")])]
    assert len(brute) == 12
    assert [f.visible for f in frames] == brute


def test_enumerate_never_together_is_empty():
    assert enumerate_valid(make_manifest(3, constraints={"never_together": [["A", "B"]]})) == []


def test_enumerate_guard():
    with pytest.raises(EnumerationGuardError):
        enumerate_valid(make_manifest(10))  # 10! = 3628800 > 10^6
    assert len(enumerate_valid(make_manifest(1))) == 1


@st.composite
def constrained(draw, max_n=6):
    n = draw(st.integers(1, max_n))
    ids = [chr(ord("A") + i) for i in range(n)]
    pairs = [[a, b] for i, a in enumerate(ids) for b in ids[i + 1:]]
    chosen = draw(st.lists(st.sampled_from(pairs), unique_by=tuple, max_size=4)) if pairs else []
    cut = draw(st.integers(0, len(chosen)))
    return make_manifest(n, constraints={"never_together": chosen[:cut], "never_adjacent": chosen[cut:]})


@settings(max_examples=60, deadline=None)
@given(constrained())
def test_enumeration_equals_brute_force_set(m):
    cons = m.constraints
    brute = {p for p in itertools.permutations(m.ids)
             if brute_force_valid(list(p), cons.never_together, cons.never_adjacent)}
    got = [f.visible for f in enumerate_valid(m)]
    assert len(got) == len(set(got))
    assert set(got) == brute


# -- build_schedule ------------------------------------------------------------

def test_five_authors_enumeration(five_authors):
    s = build_schedule(five_authors)
    assert s.mode == "enumeration"
    assert len(s.frames) == 120
    assert {f.visible for f in s.frames} == set(itertools.permutations(five_authors.ids))
    # one seed-shuffle, so not left in lexicographic order
    assert [f.visible for f in s.frames] != sorted(f.visible for f in s.frames)


def test_single_author():
    s = build_schedule(make_manifest(1))
    assert [f.visible for f in s.frames] == [("A",)]


def test_seven_authors_sample():
    m = make_manifest(7)
    s = build_schedule(m)
    assert s.mode == "sampling"
    assert len(s.frames) == 120
    assert all(is_valid_frame(f, m.constraints) for f in s.frames)
    assert all(sorted(f.visible) == sorted(m.ids) for f in s.frames)


def test_enumeration_falls_back_when_budget_too_small():
    s = build_schedule(make_manifest(4), frames=10)
    assert s.mode == "sampling" and len(s.frames) == 10


def test_forced_modes():
    m = make_manifest(3)
    assert build_schedule(m, "sampling", frames=50).mode == "sampling"
    s = build_schedule(m, "enumeration")
    assert s.mode == "enumeration" and len(s.frames) == 6
    with pytest.raises(ValueError):
        build_schedule(m, "bogus")


def test_overrides_apply():
    s = build_schedule(make_manifest(6), seed=5, fps=2.5, frames=7)
    assert (s.seed, s.fps, len(s.frames)) == (5, 2.5, 7)


def test_static_modes():
    m = manifest_from_dict({"authors": [
        {"id": "x", "display_name": "Zed Adams", "given_name": "Zed", "family_name": "Adams"},
        {"id": "y", "display_name": "Amy Young", "given_name": "Amy", "family_name": "Young"},
        {"id": "z", "display_name": "Bob Brown", "given_name": "Bob", "family_name": "Brown", "p_appear": 0.0},
        {"id": "w", "display_name": "Amy Baker", "given_name": "Amy", "family_name": "Baker"},
    ]})
    assert build_schedule(m, "alpha_given").frames[0].visible == ("w", "y", "x")
    assert build_schedule(m, "alpha_family").frames[0].visible == ("x", "w", "y")
    assert build_schedule(m, "fixed").frames[0].visible == ("x", "y", "w")
    assert len(build_schedule(m, "fixed").frames) == 1


def test_static_mode_adjacency_conflict():
    m = make_manifest(3, constraints={"never_adjacent": [["A", "B"]]})
    with pytest.raises(ScheduleError) as exc:
        build_schedule(m, "fixed")
    assert exc.value.pair == ("A", "B")


def test_infeasible_constraints_name_the_pair():
    m = make_manifest(2, constraints={"never_adjacent": [["A", "B"]]})
    with pytest.raises(ScheduleError, match="'A', 'B'") as exc:
        build_schedule(m)
    assert exc.value.pair == ("A", "B")


def test_infeasible_sampling_names_the_pair():
    m = make_manifest(3, constraints={"never_adjacent": [["A", "B"], ["B", "C"], ["A", "C"]]})
    with pytest.raises(ScheduleError) as exc:
        build_schedule(m, "sampling")
    assert exc.value.pair in m.constraints.never_adjacent


@settings(max_examples=40, deadline=None)
@given(manifests(max_n=6))
def test_every_frame_is_valid(m):
    try:
        s = build_schedule(m, frames=25)
    except ScheduleError:
        return
    ids = set(m.ids)
    for f in s.frames:
        assert f.visible and set(f.visible) <= ids
        assert is_valid_frame(f, m.constraints)


@settings(max_examples=30, deadline=None)
@given(manifests(max_n=6), st.integers(0, 2**64 - 1))
def test_determinism(m, seed):
    try:
        a = build_schedule(m, seed=seed, frames=15)
    except ScheduleError:
        return
    b = build_schedule(m, seed=seed, frames=15)
    assert a == b
    assert a.to_json() == b.to_json()


def test_schedule_json_round_trip(five_authors):
    s = build_schedule(five_authors)
    assert Schedule.from_json(s.to_json()) == s
    assert isinstance(s.frames[0], Frame)


def test_shuffle_uniformity_n3():
    counts = dict.fromkeys(itertools.permutations(range(3)), 0)
    for seed in range(60_000):
        counts[tuple(shuffle(Rng(seed), [0, 1, 2]))] += 1
    result = chi_square_uniform(list(counts.values()))
    assert result.df == 5
    assert result.statistic <= 20.515


def test_first_position_fairness_sampling():
    m = make_manifest(4)
    s = build_schedule(m, "sampling", frames=8_000, seed=random.Random(4).getrandbits(64))
    firsts = [sum(f.visible[0] == a for f in s.frames) for a in m.ids]
    assert chi_square_uniform(firsts).passed
