"""Dynamics generated by interactive families, heap quotients and regularity."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import product
from typing import Any, Mapping, Optional

from .dynamics import (MultiDynamics, OpenDynamics, is_subfunctorial, quotient_parameters)
from .errors import FamilyInvalid, Inefficient
from .families import InteractiveFamily, validate_family
from .interact import context, null_interaction, param_relation
from .realize import is_efficient
from .report import PASS, Verdict, Witness


def tuple_id(items) -> str:
    return json.dumps(list(items), ensure_ascii=False, separators=(",", ":"))


@dataclass(frozen=True, eq=False)
class GeneratedDynamics:
    result: OpenDynamics
    param_tuples: Mapping[str, tuple]      # param id -> member parameter tuples
    state_tuples: Mapping[str, tuple]      # state id -> per-component states
    provenance: Mapping[str, Any] = field(default_factory=dict)


def _check(f: InteractiveFamily) -> None:
    rep = validate_family(f)
    if not rep.ok:
        raise FamilyInvalid(rep)


def generate_primary(f: InteractiveFamily, validate: bool = True) -> GeneratedDynamics:
    """Synchronized state tuples; transitions witnessed by rows of the interaction."""
    if validate:
        _check(f)
    comps = [f.components[i] for i in f.index]
    k0 = f.index.index(f.chief)
    chief = comps[k0]
    motor, clock = chief.motor, chief.clock

    def dmap(k: int, t: str) -> str:
        return t if k == k0 else f.syncs[f.index[k]].instant_map[t]

    states: dict[str, frozenset] = {}
    state_tuples: dict[str, tuple] = {}
    scansion: dict[str, str] = {}
    for o in motor.objects:
        ids = []
        for t in sorted(clock.instants[o]):
            fibers = [comps[k].fiber(dmap(k, t)) for k in range(len(comps))]
            for tup in product(*fibers):
                sid = tuple_id(tup)
                state_tuples[sid] = tup
                scansion[sid] = t
                ids.append(sid)
        states[o] = frozenset(ids)

    param_tuples: dict[str, tuple] = {}
    for lam in sorted(param_relation(f.interaction)):
        param_tuples[tuple_id(lam)] = (lam,)

    trans: dict[tuple, dict] = {}
    for e in sorted(motor.arrows):
        for p in param_tuples:
            trans[(e, p)] = {}
    steps = [(e, t, clock.act(e, t)) for e in sorted(motor.arrows)
             for t in sorted(clock.instants[motor.arrows[e].dom])]
    for row in f.interaction.rows():
        pid = tuple_id(tuple(p for p, _ in row))
        reals = [dict(ext) for _, ext in row]
        for e, t0, t1 in steps:
            a, b = [], []
            for k, m in enumerate(reals):
                x, y = m.get(dmap(k, t0)), m.get(dmap(k, t1))
                if x is None or y is None:
                    break
                a.append(x)
                b.append(y)
            else:
                trans[(e, pid)].setdefault(tuple_id(a), set()).add(tuple_id(b))
    dyn = MultiDynamics(motor, tuple(param_tuples), states, trans)
    result = OpenDynamics(dyn, clock, scansion)
    return GeneratedDynamics(result, param_tuples, state_tuples,
                             {"mode": "p", "chief": f.chief, "index": list(f.index)})


def heap_key(lam: tuple, heaps: Mapping[str, Any], index) -> tuple:
    return tuple(None if lam[k] in heaps.get(i, ()) else lam[k] for k, i in enumerate(index))


def heap_equivalence(M, heaps: Mapping[str, Any], index) -> list[frozenset]:
    """Blocks of λ ~ λ' iff each coordinate is equal or lies in that index's heap."""
    blocks: dict[tuple, set] = {}
    for lam in M:
        blocks.setdefault(heap_key(tuple(lam), heaps, index), set()).add(tuple(lam))
    return sorted((frozenset(b) for b in blocks.values()), key=lambda b: sorted(b))


def _block_name(block: frozenset, heaps, index) -> str:
    if len(block) == 1:
        return tuple_id(next(iter(block)))
    return tuple_id(heap_key(next(iter(block)), heaps, index))


def _compatible_params(f: InteractiveFamily) -> list[set]:
    lams = param_relation(f.interaction)
    return [{lam[k] for lam in lams} for k in range(len(f.index))]


def functional_heaps(f: InteractiveFamily) -> dict[str, frozenset]:
    """Parameters uniquely determined by the other components' realizations."""
    out = {}
    comp = _compatible_params(f)
    for k, i in enumerate(f.index):
        seen: dict[tuple, set] = {}
        for row in f.interaction.tuples:
            others = tuple(e for j, (_, e) in enumerate(row) if j != k)
            seen.setdefault(others, set()).add(row[k][0])
        heap = set()
        for lk in comp[k]:
            if all(ps == {lk} for ps in seen.values() if lk in ps):
                heap.add(lk)
        out[i] = frozenset(heap)
    return out


def souple_heaps(f: InteractiveFamily) -> dict[str, frozenset]:
    """Blocked parameters: R-compatible ones that are not libre."""
    out = {}
    comp = _compatible_params(f)
    rows = f.interaction.tuples
    for k, i in enumerate(f.index):
        # μ -> admissible 𝔟 among the other components
        others: dict[tuple, set] = {}
        for row in rows:
            mu = tuple(p for j, (p, _) in enumerate(row) if j != k)
            b = tuple(e for j, (_, e) in enumerate(row) if j != k)
            others.setdefault(mu, set()).add(b)
        blocked = set()
        for lk in comp[k]:
            premises = {(row[k][1], tuple(p for j, (p, _) in enumerate(row) if j != k))
                        for row in rows if row[k][0] == lk}
            libre = True
            for ak, mu in premises:
                for b in others.get(mu, ()):
                    full = _assemble(k, (lk, ak), mu, b)
                    if full not in rows:
                        libre = False
                        break
                if not libre:
                    break
            if not libre:
                blocked.add(lk)
        out[i] = frozenset(blocked)
    return out


def _assemble(k: int, pair: tuple, mu: tuple, b: tuple) -> tuple:
    row = [(p, e) for p, e in zip(mu, b)]
    row.insert(k, pair)
    return tuple(row)


def generate_with_heaps(f: InteractiveFamily, heaps: Mapping[str, Any],
                        mode: str = "heaps", primary: Optional[GeneratedDynamics] = None
                        ) -> GeneratedDynamics:
    g = primary if primary is not None else generate_primary(f)
    heaps = {i: frozenset(heaps.get(i, ())) for i in f.index}
    members = {g.param_tuples[p][0]: p for p in g.param_tuples}
    blocks = heap_equivalence(members, heaps, f.index)
    named = {}
    param_tuples = {}
    for b in blocks:
        name = _block_name(b, heaps, f.index)
        named[name] = [members[lam] for lam in b]
        param_tuples[name] = tuple(sorted(b))
    dyn = quotient_parameters(g.result.dyn, named)
    result = OpenDynamics(dyn, g.result.clock, g.result.scansion)
    prov = dict(g.provenance)
    prov["mode"] = mode
    prov["heaps"] = {i: sorted(heaps[i]) for i in f.index}
    return GeneratedDynamics(result, param_tuples, g.state_tuples, prov)


def generate_functional(f: InteractiveFamily, primary=None) -> GeneratedDynamics:
    return generate_with_heaps(f, functional_heaps(f), "f", primary)


def generate_souple(f: InteractiveFamily, primary=None) -> GeneratedDynamics:
    return generate_with_heaps(f, souple_heaps(f), "s", primary)


def generate_mono(f: InteractiveFamily, primary=None) -> GeneratedDynamics:
    heaps = {i: frozenset(context(f.components[i]).params) for i in f.index}
    return generate_with_heaps(f, heaps, "m", primary)


def generate(f: InteractiveFamily, mode: str, heaps: Optional[Mapping] = None
             ) -> GeneratedDynamics:
    if mode == "p":
        return generate_primary(f)
    if mode == "f":
        return generate_functional(f)
    if mode == "s":
        return generate_souple(f)
    if mode == "m":
        return generate_mono(f)
    if mode == "heaps":
        return generate_with_heaps(f, heaps or {})
    raise ValueError(f"unknown generation mode {mode!r}")


CANONICAL_INDEX = "0"


def canonical_family(a: OpenDynamics) -> InteractiveFamily:
    """The single-component family carrying the null interaction."""
    if not is_efficient(a):
        raise Inefficient("the dynamics has no nonempty realization")
    idx = (CANONICAL_INDEX,)
    comps = {CANONICAL_INDEX: a}
    return InteractiveFamily(idx, comps, null_interaction(idx, comps), CANONICAL_INDEX, {})


def is_regular(a: OpenDynamics) -> Verdict:
    """Whether ``a`` coincides with the dynamics primarily generated by its canonical family."""
    g = generate_primary(canonical_family(a))
    b = g.result.dyn
    d = a.dyn
    M = {g.param_tuples[p][0][0]: p for p in b.params}
    if set(M) != set(d.params):
        missing = sorted(set(d.params) - set(M))
        return Verdict(False, Witness("params", param=missing[0],
                                      detail="parameter has no nonempty realization"))
    unwrap = {sid: tup[0] for sid, tup in g.state_tuples.items()}
    for o in sorted(d.motor.objects):
        if {unwrap[s] for s in b.states[o]} != set(d.states[o]):
            return Verdict(False, Witness("states", element=o))
    for e in sorted(d.motor.arrows):
        for lam in d.params:
            mu = M[lam]
            src = {unwrap[s]: s for s in b.states[d.motor.arrows[e].dom]}
            for x in sorted(d.states[d.motor.arrows[e].dom]):
                got = {unwrap[y] for y in b.image(e, mu, src[x])}
                if got != set(d.image(e, lam, x)):
                    diff = sorted(got ^ set(d.image(e, lam, x)))
                    return Verdict(False, Witness("transition", (e,), lam, x, diff[0]))
    return PASS


def check_stability(g: GeneratedDynamics) -> Verdict:
    return is_subfunctorial(g.result.dyn)


def _by_members(g: GeneratedDynamics) -> tuple:
    d = g.result.dyn
    key = {p: frozenset(g.param_tuples[p]) for p in d.params}
    trans = frozenset((e, key[p], s, frozenset(m))
                      for (e, p), rows in d.transitions.items() for s, m in rows.items() if m)
    states = frozenset((o, frozenset(ss)) for o, ss in d.states.items())
    return frozenset(key.values()), states, trans


def same_generated(g1: GeneratedDynamics, g2: GeneratedDynamics) -> bool:
    """Equality of generated dynamics with parameters identified by their member tuples."""
    return (g1.result.motor == g2.result.motor and g1.result.scansion == g2.result.scansion
            and _by_members(g1) == _by_members(g2))
