"""The ten acceptance criteria, each printed as one PASS/FAIL line.

Run under pytest (lines go straight to the terminal) or directly with
``python3 tests/test_acceptance.py``.
"""

import time
from itertools import product

import pytest

from subdyn.checks import (suite_determinism, suite_normality, suite_null, suite_quotient,
                           suite_stability)
from subdyn.corpus import (EXAMPLES, GridParams, build_diamond_open_dynamics, build_grid_source,
                           build_grid_why_family, build_two_branch_line, example_document,
                           grid_state, parse_history_state)
from subdyn.dynamics import out_of_play_states
from subdyn.generate import (canonical_family, generate, generate_functional, generate_mono,
                             generate_primary, generate_souple, is_regular, same_generated,
                             tuple_id)
from subdyn.interact import is_concrete
from subdyn.realize import Realization, enumerate_realizations
from subdyn.serialize import digest, generated_document, loads, validate_document


def sid(*xs):
    return tuple_id(xs)


def crit_1():
    t0 = time.perf_counter()
    m = generate_mono(canonical_family(build_diamond_open_dynamics()))
    (mu,) = m.result.params
    img = m.result.dyn.image
    got = (img("SVT", mu, sid("s'")), img("SV", mu, sid("s'")), img("VT", mu, sid("v")))
    dt = time.perf_counter() - t0
    want = (frozenset(), frozenset({sid("v")}), frozenset({sid("t")}))
    ok = tuple(map(frozenset, got)) == want and dt < 1
    return ok, f"SVT(s')={sorted(got[0])} SV(s')={sorted(got[1])} VT(v)={sorted(got[2])} {dt:.3f}s"


def _suite(fn, cases, budget=None):
    t0 = time.perf_counter()
    res = fn(0, cases)
    dt = time.perf_counter() - t0
    ok = res.ok and res.cases == cases and (budget is None or dt < budget)
    return ok, f"{res.summary()} {dt:.2f}s"


def crit_2():
    return _suite(suite_stability, 200, budget=60)


def crit_3():
    a = build_two_branch_line(3)
    regular = bool(is_regular(a))
    g = generate_primary(canonical_family(a))
    branch = {sid(f"b{t}") for t in range(4)}
    hors = out_of_play_states(g.result)
    ok = not regular and branch <= hors
    return ok, f"regular={regular} branch out of play: {len(branch & hors)}/{len(branch)}"


def crit_4():
    return _suite(suite_determinism, 100)


def crit_5():
    return _suite(suite_quotient, 100)


def crit_6():
    return _suite(suite_normality, 50)


def crit_7():
    return _suite(suite_null, 50)


def lipschitz_oracle(n, B):
    """Initial segments 0..k-1 carrying integer sequences in [-B, B] with steps of at most 1."""
    out = set()
    vals = range(-B, B + 1)
    for k in range(n + 2):
        for seq in product(vals, repeat=k):
            if all(abs(x - y) <= 1 for x, y in zip(seq, seq[1:])):
                out.add(Realization("*", tuple((str(t), grid_state(t, v))
                                               for t, v in enumerate(seq))))
    return out


def crit_8():
    t0 = time.perf_counter()
    got = enumerate_realizations(build_grid_source(GridParams(4, 3)))
    dt = time.perf_counter() - t0
    want = lipschitz_oracle(4, 3)
    ok = set(got) == want and len(got) == len(set(got)) and dt < 10
    return ok, f"{len(got)} enumerated, {len(want)} by brute force, {dt:.3f}s"


def band_and_prefix(m):
    """Count mono transitions that leave the band or rewrite the record."""
    bad = checked = 0
    for (e, _), rows in m.result.dyn.transitions.items():
        i, j = map(int, e.split("->"))
        for s, img in rows.items():
            _, h, y = m.state_tuples[s]
            r = int(y.split(":")[1])
            _, rec = parse_history_state(h)
            for b in img:
                _, h2, y2 = m.state_tuples[b]
                _, rec2 = parse_history_state(h2)
                checked += 1
                if abs(int(y2.split(":")[1]) - r) > j - i or rec2[:len(rec)] != rec:
                    bad += 1
    return checked, bad


def crit_9():
    ok, parts = True, []
    for n, B in ((3, 1), (3, 2), (4, 1), (4, 2)):
        f = build_grid_why_family(GridParams(n, B))
        p = generate_primary(f)
        fm, s, m = generate_functional(f, p), generate_souple(f, p), generate_mono(f, p)
        concrete = is_concrete(f.interaction)
        fs, sm, pf = same_generated(fm, s), same_generated(s, m), same_generated(p, fm)
        checked, bad = band_and_prefix(m)
        ok &= concrete and fs and sm and pf and checked > 0 and bad == 0
        parts.append(f"({n},{B}) concrete={concrete} p=f:{pf} f=s:{fs} s=m:{sm} "
                     f"|params| p={len(p.result.params)} f={len(fm.result.params)} "
                     f"band/prefix violations {bad}/{checked}")
    return ok, "; ".join(parts)


def crit_10():
    bad = []
    for name in sorted(EXAMPLES):
        doc = example_document(name)
        text = doc.dumps()
        if loads(text).dumps() != text:
            bad.append(f"{name} (family)")
        for mode in ("p", "f", "s", "m"):
            g = generate(doc.family(name), mode)
            out = generated_document(f"{name}[{mode}]", g, name, digest(doc.to_obj())).dumps()
            back = loads(out)
            if not validate_document(back).ok or back.dumps() != out:
                bad.append(f"{name}[{mode}]")
    return not bad, "all byte-identical" if not bad else "differs: " + ", ".join(bad)


CRITERIA = [
    (1, "diamond mono counterexample", crit_1),
    (2, "stability of primary generation", crit_2),
    (3, "two-branch non-regularity", crit_3),
    (4, "determinism implies functoriality", crit_4),
    (5, "quotient stability", crit_5),
    (6, "normality oracle", crit_6),
    (7, "null interaction", crit_7),
    (8, "grid source realization oracle", crit_8),
    (9, "grid WHY generation", crit_9),
    (10, "round-trip of every example", crit_10),
]


def line(num, title, ok, detail):
    return f"criterion {num:>2} {'PASS' if ok else 'FAIL'}  {title}: {detail}"


@pytest.mark.parametrize("num,title,fn", CRITERIA, ids=[f"criterion-{c[0]}" for c in CRITERIA])
def test_criterion(num, title, fn, capsys):
    ok, detail = fn()
    with capsys.disabled():
        print("\n" + line(num, title, ok, detail))
    assert ok, detail


if __name__ == "__main__":
    import sys
    results = [(num, title, *fn()) for num, title, fn in CRITERIA]
    for r in results:
        print(line(*r))
    sys.exit(0 if all(r[2] for r in results) else 1)
