import random

import pytest
from hypothesis import given, settings, strategies as st

from subdyn.checks import random_small_world_interaction
from subdyn.corpus import MONO
from subdyn.dynamics import MultiDynamics, OpenDynamics, build_existential_clock
from subdyn.errors import (CapExceeded, IllTypedDisposition, IncompatibleDispositions,
                           InefficientComponent, NotAnInteraction)
from subdyn.fincat import point_category
from subdyn.interact import (EMPTY_DISPOSITION, PARAM, REAL, Disposition, Interaction,
                             Relation, coherent_part, connectivity_structure, context,
                             connective_closure, global_connectivity, is_compatible, is_concrete, is_determining,
                             is_discrete, is_filtering, is_normal, is_normal_bruteforce,
                             is_operant, join_dispositions, null_interaction,
                             realization_connectivity, realization_relation, relation_issues,
                             restrict, sorted_structure, total_relation)
from subdyn.realize import nonempty_realizations

PT = "Id_•"


def point_dynamics(keep):
    """Motor 1; parameter p keeps exactly the states keep[p]."""
    c = point_category()
    states = set().union(*keep.values())
    trans = {(PT, p): {s: {s} for s in ss} for p, ss in keep.items()}
    d = MultiDynamics(c, tuple(keep), {"•": states}, trans)
    return OpenDynamics(d, build_existential_clock(c), {s: PT for s in states})


def ext(s):
    return ((PT, s),)


@pytest.fixture
def pair():
    """Two components; 'y' is coherent with both parameters, 'x' only with p."""
    a = point_dynamics({"p": {"x", "y"}, "q": {"y"}})
    b = point_dynamics({"p": {"x2", "y2"}, "q": {"y2"}})
    return ("1", "2"), {"1": a, "2": b}


def test_context(pair):
    _, comps = pair
    ctx = context(comps["1"])
    assert ctx.externals == (ext("x"), ext("y"))
    assert ctx.coherent == {("p", ext("x")), ("p", ext("y")), ("q", ext("y"))}


def test_coherent_part():
    a = point_dynamics({"p": {"x"}, "q": {"y"}})
    comps = {"0": a}
    good = ("p", ext("x"))
    assert coherent_part(Relation(("0",), comps, {(good,)})) == Relation(("0",), comps, {(good,)})
    mixed = Relation(("0",), comps, {(good,), (("q", ext("x")),)})
    assert coherent_part(mixed).tuples == {(good,)}
    assert coherent_part(Relation(("0",), comps, {(("q", ext("x")),)})) is None


def test_null_is_coherent_part_of_total(pair, diamond):
    idx, comps = pair
    assert coherent_part(total_relation(idx, comps)) == null_interaction(idx, comps)
    one = point_dynamics({"p": {"x"}, "q": {"y"}})
    assert len(null_interaction(("0",), {"0": one})) == 2
    om = null_interaction(("0",), {"0": diamond})
    assert len(om) == len(nonempty_realizations(diamond)) == 9


def test_interactions_reject_bad_rows(pair):
    idx, comps = pair
    with pytest.raises(NotAnInteraction):
        Interaction(idx, comps, {(("q", ext("x")), ("p", ext("x2")))})
    with pytest.raises(NotAnInteraction):
        Interaction(idx, comps, set())
    bad = Relation(idx, comps, {(("z", ext("x")), ("p", ext("nope")))})
    issues = relation_issues(bad)
    assert any("unknown parameter z" in m for m in issues)
    assert any("not a nonempty realization" in m for m in issues)


def test_inefficient_components_cannot_interact():
    c = point_category()
    dead = OpenDynamics(MultiDynamics(c, ("*",), {"•": {"x"}}, {}),
                        build_existential_clock(c), {"x": PT})
    with pytest.raises(InefficientComponent):
        null_interaction(("0",), {"0": dead})


def test_filtering(pair, diagonal):
    idx, comps = pair
    assert not is_filtering(total_relation(idx, comps))
    rows = {(("p", ext(a)), ("p", ext(b))) for a in "xy" for b in ("x2", "y2")}
    rows.discard((("p", ext("x")), ("p", ext("x2"))))
    assert is_filtering(Interaction(idx, comps, rows))
    assert is_filtering(diagonal.interaction)


def test_operant(pair, diagonal):
    idx, comps = pair
    assert not is_operant(null_interaction(idx, comps))
    assert is_operant(diagonal.interaction)
    assert is_operant(Interaction(idx, comps, {(("p", ext("x")), ("p", ext("x2")))}))


def test_normality(pair, diagonal):
    idx, comps = pair
    om = null_interaction(idx, comps)
    assert is_normal(om) and is_normal_bruteforce(om, cap=16)
    assert not is_normal(diagonal.interaction)
    assert not is_normal_bruteforce(diagonal.interaction)
    # every missing tuple involves x or x2, which q cannot realize
    r = Interaction(idx, comps, {(("q", ext("y")), ("q", ext("y2")))})
    assert is_normal(r) and is_normal_bruteforce(r, cap=16)
    # (y, y2) is coherent with every parameter choice, so leaving it out is not normal
    r2 = Interaction(idx, comps, {(("p", ext("x")), ("p", ext("x2")))})
    assert not is_normal(r2) and not is_normal_bruteforce(r2, cap=16)


def test_bruteforce_cap(why_family):
    with pytest.raises(CapExceeded):
        is_normal_bruteforce(why_family.interaction, cap=12)


def test_determining(pair, why_family):
    idx, comps = pair
    assert is_determining(why_family.interaction)
    assert is_concrete(why_family.interaction)
    two = Interaction(idx, comps, {(("p", ext("y")), ("p", ext("y2"))),
                                   (("q", ext("y")), ("p", ext("y2")))})
    assert not is_determining(two)
    assert is_determining(Interaction(idx, comps, {(("p", ext("y")), ("p", ext("y2")))}))


def test_concrete(pair, diagonal):
    idx, comps = pair
    assert not is_concrete(null_interaction(idx, comps))
    assert not is_concrete(diagonal.interaction)


def test_dispositions(pair):
    idx, comps = pair
    row = (("p", ext("y")), ("q", ext("y2")))
    r = Interaction(idx, comps, {row})
    assert is_compatible(EMPTY_DISPOSITION, r)
    full = restrict(row, idx, [("1", REAL), ("1", PARAM), ("2", REAL), ("2", PARAM)])
    assert is_compatible(full, r)
    assert is_compatible(Disposition({("2", PARAM): "q"}), r)
    assert not is_compatible(Disposition({("2", PARAM): "p"}), r)
    with pytest.raises(IllTypedDisposition):
        is_compatible(Disposition({("3", PARAM): "p"}), r)
    with pytest.raises(IllTypedDisposition):
        is_compatible(Disposition({("1", REAL): ext("nope")}), r)
    with pytest.raises(IllTypedDisposition):
        is_compatible(Disposition({("1", PARAM): "zz"}), r)


def test_join(pair):
    q = Disposition({("1", PARAM): "p"})
    assert join_dispositions(q, EMPTY_DISPOSITION) == q
    both = join_dispositions(q, Disposition({("2", PARAM): "q"}))
    assert both.as_dict() == {("1", PARAM): "p", ("2", PARAM): "q"}
    with pytest.raises(IncompatibleDispositions):
        join_dispositions(q, Disposition({("1", PARAM): "q"}))


def test_realization_relation(diagonal, pair):
    reals = context(diagonal.components["1"]).externals
    assert realization_relation(diagonal.interaction) == {(e, e) for e in reals}
    idx, comps = pair
    one = Interaction(idx, comps, {(("p", ext("x")), ("p", ext("x2")))})
    assert realization_relation(one) == {(ext("x"), ext("x2"))}


def test_connectivity(pair, diagonal):
    idx, comps = pair
    assert is_discrete(realization_connectivity(null_interaction(idx, comps)))
    assert frozenset({"1", "2"}) in realization_connectivity(diagonal.interaction)
    total = {(a, b) for a in "xy" for b in "uv"}
    assert is_discrete(connectivity_structure(total, ("A", "B")))
    assert sorted_structure(connectivity_structure({("x", "u"), ("y", "v")}, ("A", "B"))) == [
        [], ["A"], ["B"], ["A", "B"]]


def test_connectivity_base_and_closure():
    # A = B everywhere, C free: only {A, B} fails to split
    rel = {(a, a, c) for a in "xy" for c in "uv"}
    s = connectivity_structure(rel, ("A", "B", "C"))
    assert frozenset("AB") in s
    assert frozenset("AC") not in s and frozenset("ABC") not in s
    closed = connective_closure([frozenset({0, 1}), frozenset({1, 2})], 4)
    assert frozenset({0, 1, 2}) in closed
    assert frozenset({3}) in closed and frozenset() in closed
    assert frozenset({0, 2}) not in closed


def test_null_interaction_is_globally_discrete(pair):
    # the null interaction is a product of the per-component coherent sets
    idx, comps = pair
    assert is_discrete(global_connectivity(null_interaction(idx, comps)))


@given(st.integers(0, 100_000))
@settings(max_examples=60, deadline=None)
def test_normal_matches_brute_force(seed):
    r = random_small_world_interaction(random.Random(seed))
    assert is_normal(r) == is_normal_bruteforce(r, cap=12)


@given(st.integers(0, 100_000))
@settings(max_examples=40, deadline=None)
def test_inoperant_is_normal(seed):
    r = random_small_world_interaction(random.Random(seed))
    if not is_operant(r):
        assert is_normal(r)
