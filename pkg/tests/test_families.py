import random

import pytest
from hypothesis import given, settings, strategies as st

from subdyn.checks import random_family
from subdyn.corpus import build_band_dynamics
from subdyn.dynamics import MultiDynamics, OpenDynamics, build_existential_clock
from subdyn.errors import MissingArrowMap
from subdyn.families import (InteractiveFamily, Synchronization, is_rigid, validate_family,
                             validate_synchronization)
from subdyn.fincat import interval_arrow, point_category
from subdyn.interact import Relation, null_interaction


def chain(n=2):
    return build_band_dynamics(n, 1)


def ident_sync(a):
    return Synchronization({o: o for o in a.motor.objects},
                           {t: t for t in a.clock.all_instants()},
                           {e: e for e in a.motor.arrows})


def test_identity_sync():
    a = chain()
    s = ident_sync(a)
    assert validate_synchronization(s, a, a).ok
    assert is_rigid(s, a, a)


def test_constant_syncs_of_the_why_family(why_family):
    H = why_family.components["H"]
    for i in ("W", "Y"):
        s = why_family.syncs[i]
        assert validate_synchronization(s, H, why_family.components[i]).ok
    assert is_rigid(why_family.syncs["W"], H, why_family.components["W"])


def test_zigzag_is_not_monotone():
    a = chain()
    zig = {"0": "0", "1": "2", "2": "1"}
    s = Synchronization(zig, zig)
    rep = validate_synchronization(s, a, a)
    assert any(m.startswith("monotonicity") for m in rep.issues)


def test_order_reversing_is_allowed():
    a = chain()
    s = Synchronization({"0": "2", "1": "1", "2": "0"}, {"0": "2", "1": "1", "2": "0"})
    assert validate_synchronization(s, a, a).ok


def test_sync_typing():
    a = chain()
    s = Synchronization({o: "0" for o in a.motor.objects}, {"0": "0", "1": "1", "2": "0"})
    assert any(m.startswith("typing") for m in validate_synchronization(s, a, a).issues)


def test_clamped_shift_is_not_rigid():
    a = chain()
    objs = {"0": "1", "1": "2", "2": "2"}
    arrows = {interval_arrow(i, j): interval_arrow(int(objs[str(i)]), int(objs[str(j)]))
              for i in range(3) for j in range(i, 3)}
    s = Synchronization(objs, dict(objs), arrows)
    assert validate_synchronization(s, a, a).ok
    # when Δ follows the clamped shift the pair is rigid
    assert is_rigid(s, a, a)
    # with Δ = Id the shifted instants are not even over the right objects
    s_id = Synchronization({o: o for o in a.motor.objects}, dict(objs),
                           {e: e for e in a.motor.arrows})
    v = is_rigid(s_id, a, a)
    assert not v and v.witness.kind == "typing"
    with pytest.raises(MissingArrowMap):
        is_rigid(Synchronization(objs, dict(objs)), a, a)


def test_diamond_family_is_valid(diamond_family):
    assert validate_family(diamond_family).ok


def test_inefficient_component_is_reported(diamond):
    c = point_category()
    dead = OpenDynamics(MultiDynamics(c, ("*",), {"•": {"x"}}, {}),
                        build_existential_clock(c), {"x": "Id_•"})
    f = InteractiveFamily(("A", "D"), {"A": diamond, "D": dead},
                          Relation(("A", "D"), {"A": diamond, "D": dead}, set()), "A",
                          {"D": Synchronization({o: "•" for o in diamond.motor.objects},
                                                {t: "Id_•" for t in diamond.clock.all_instants()})})
    rep = validate_family(f)
    assert any("inefficient" in m for m in rep.issues)


def test_incoherent_tuple_is_reported():
    c = point_category()
    d = MultiDynamics(c, ("p", "q"), {"•": {"x", "y"}},
                      {("Id_•", "p"): {"x": {"x"}}, ("Id_•", "q"): {"y": {"y"}}})
    a = OpenDynamics(d, build_existential_clock(c), {"x": "Id_•", "y": "Id_•"})
    r = Relation(("0",), {"0": a}, {(("q", (("Id_•", "x"),)),)})
    rep = validate_family(InteractiveFamily(("0",), {"0": a}, r, "0"))
    assert any(m.startswith("coherence") for m in rep.issues)


def test_missing_sync_and_bad_chief(diamond):
    comps = {"A": diamond, "B": diamond}
    om = null_interaction(("A", "B"), comps)
    rep = validate_family(InteractiveFamily(("A", "B"), comps, om, "A", {}))
    assert any("synchronizations" in m for m in rep.issues)
    rep = validate_family(InteractiveFamily(("A", "B"), comps, om, "Z",
                                            {"B": ident_sync(diamond)}))
    assert any("chief" in m for m in rep.issues)


def test_why_family_is_valid(why_family):
    assert validate_family(why_family).ok


@given(st.integers(0, 100_000))
@settings(max_examples=40, deadline=None)
def test_random_families_are_valid(seed):
    f = random_family(random.Random(seed))
    assert validate_family(f).ok
    assert len(f.index) <= 3 and len(f.interaction) <= 6
