"""Seeded random instances and the property suites run by ``subdyn check``."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Optional

from .dynamics import (DETERMINISTIC, MultiDynamics, OpenDynamics, build_essential_clock_singleton,
                       build_existential_clock, determinism_class, is_functorial,
                       is_subfunctorial, quotient_parameters, validate_open_dynamics)
from .families import InteractiveFamily, Synchronization, validate_synchronization
from .fincat import FiniteCategory, free_category, make_category
from .generate import generate_primary, tuple_id
from .interact import (Interaction, context, is_discrete, is_normal, is_normal_bruteforce,
                       is_operant, null_interaction, realization_connectivity)
from .realize import Realization, enumerate_realizations, is_realization

# ---------------------------------------------------------------- motors


def random_free_category(rng: random.Random, max_objects: int = 3, max_edges: int = 3,
                         name: str = "F") -> FiniteCategory:
    k = rng.randint(1, max_objects)
    objs = [f"o{i}" for i in range(k)]
    edges = []
    if k > 1:
        for e in range(rng.randint(0, max_edges)):
            i, j = sorted(rng.sample(range(k), 2))
            edges.append((f"e{e}", objs[i], objs[j]))
    return free_category(name, objs, edges)


def random_preorder_category(rng: random.Random, max_objects: int = 3,
                             name: str = "P") -> FiniteCategory:
    """Thin category of a random preorder (cycles allowed)."""
    k = rng.randint(1, max_objects)
    objs = [f"p{i}" for i in range(k)]
    le = {(i, i) for i in range(k)}
    for i in range(k):
        for j in range(k):
            if i != j and rng.random() < 0.35:
                le.add((i, j))
    changed = True
    while changed:
        changed = False
        for (a, b) in list(le):
            for (c, d) in list(le):
                if b == c and (a, d) not in le:
                    le.add((a, d))
                    changed = True

    def arr(i, j):
        return f"{objs[i]}<{objs[j]}"

    arrows = [(arr(i, j), objs[i], objs[j]) for i, j in sorted(le)]
    compose = {(arr(j, l), arr(i, j)): arr(i, l)
               for (i, j) in le for (j2, l) in le if j == j2}
    return make_category(name, objs, arrows, {o: arr(i, i) for i, o in enumerate(objs)}, compose)


_MONOIDS = {
    # name: (elements, multiplication table as dict), unit first
    "Z2": (["1", "a"], {("1", "1"): "1", ("1", "a"): "a", ("a", "1"): "a", ("a", "a"): "1"}),
    "Z3": (["1", "a", "b"], {(x, y): ["1", "a", "b"][(i + j) % 3]
                             for i, x in enumerate(["1", "a", "b"])
                             for j, y in enumerate(["1", "a", "b"])}),
    "Idem": (["1", "e"], {("1", "1"): "1", ("1", "e"): "e", ("e", "1"): "e", ("e", "e"): "e"}),
    "Zero": (["1", "a", "0"], {**{("1", x): x for x in ["1", "a", "0"]},
                               **{(x, "1"): x for x in ["a", "0"]},
                               ("a", "a"): "0", ("a", "0"): "0", ("0", "a"): "0",
                               ("0", "0"): "0"}),
}


def monoid_category(kind: str, name: Optional[str] = None) -> FiniteCategory:
    elems, mul = _MONOIDS[kind]
    arrows = [(f"m{x}", "*", "*") for x in elems]
    compose = {(f"m{g}", f"m{f}"): f"m{mul[(g, f)]}" for g in elems for f in elems}
    return make_category(name or kind, ["*"], arrows, {"*": f"m{elems[0]}"}, compose)


def random_motor(rng: random.Random, name: str = "M") -> FiniteCategory:
    r = rng.random()
    if r < 0.45:
        return random_free_category(rng, name=name)
    if r < 0.8:
        return random_preorder_category(rng, name=name)
    return monoid_category(rng.choice(sorted(_MONOIDS)), name=name)


# ---------------------------------------------------------------- dynamics


def repair(motor: FiniteCategory, params, states, trans) -> dict:
    """Shrink images until both sub-functoriality inclusions hold."""
    changed = True
    while changed:
        changed = False
        for o in motor.objects:
            i = motor.identities[o]
            for p in params:
                m = trans[(i, p)]
                for s in states[o]:
                    if m[s] - {s}:
                        m[s] = m[s] & {s}
                        changed = True
        for g, f in motor.composable_pairs():
            gf = motor.compose[(g, f)]
            for p in params:
                for s in states[motor.dom(f)]:
                    allowed = set()
                    for x in trans[(f, p)][s]:
                        allowed |= trans[(g, p)][x]
                    cur = trans[(gf, p)][s]
                    if cur - allowed:
                        trans[(gf, p)][s] = cur & allowed
                        changed = True
    return trans


def random_open_dynamics(rng: random.Random, motor: Optional[FiniteCategory] = None,
                         max_states: int = 3, max_params: int = 2, tag: str = "x",
                         keep_identity: float = 0.9, density: float = 0.6) -> OpenDynamics:
    motor = motor or random_motor(rng)
    clock = (build_essential_clock_singleton(motor) if rng.random() < 0.6
             else build_existential_clock(motor))
    params = [f"{tag}λ{k}" for k in range(rng.randint(1, max_params))]
    states = {o: [f"{tag}.{o}.{k}" for k in range(rng.randint(1, max_states))]
              for o in motor.objects}
    scansion = {s: rng.choice(sorted(clock.instants[o])) for o in motor.objects for s in states[o]}
    trans = {}
    for a in sorted(motor.arrows):
        arr = motor.arrows[a]
        for p in params:
            m = {}
            for s in states[arr.dom]:
                want = clock.act(a, scansion[s])
                ok = [b for b in states[arr.cod] if scansion[b] == want]
                if a == motor.identities[arr.dom]:
                    m[s] = {s} if rng.random() < keep_identity else set()
                else:
                    m[s] = {b for b in ok if rng.random() < density}
            trans[(a, p)] = m
    repair(motor, params, states, trans)
    d = MultiDynamics(motor, tuple(params), states, trans)
    return OpenDynamics(d, clock, scansion)


def random_efficient_open_dynamics(rng: random.Random, motor=None, tag: str = "x",
                                   **kw) -> OpenDynamics:
    while True:
        a = random_open_dynamics(rng, motor, tag=tag, **kw)
        if context(a).externals:
            return a


def random_deterministic_candidate(rng: random.Random, max_states: int = 3) -> MultiDynamics:
    """Singleton images everywhere, identities fixed; may or may not be sub-functorial."""
    motor = random_motor(rng)
    params = ("λ",)
    states = {o: [f"{o}.{k}" for k in range(rng.randint(1, max_states))] for o in motor.objects}
    # Start from a functor on generators half the time so that candidates often pass.
    trans = {}
    for a in sorted(motor.arrows):
        arr = motor.arrows[a]
        if a == motor.identities[arr.dom]:
            trans[(a, "λ")] = {s: {s} for s in states[arr.dom]}
        else:
            trans[(a, "λ")] = {s: {rng.choice(states[arr.cod])} for s in states[arr.dom]}
    if rng.random() < 0.7:
        # Overwrite composites by composing, in arrow order, to bias towards coherence.
        for _ in range(3):
            for g, f in motor.composable_pairs():
                gf = motor.compose[(g, f)]
                if gf in (g, f):
                    continue
                for s in states[motor.dom(f)]:
                    (x,) = trans[(f, "λ")][s]
                    trans[(gf, "λ")][s] = set(trans[(g, "λ")][x])
    return MultiDynamics(motor, params, states, trans)


def random_deterministic_subfunctorial(rng: random.Random, attempts: int = 500) -> MultiDynamics:
    for _ in range(attempts):
        d = random_deterministic_candidate(rng)
        if determinism_class(d) == DETERMINISTIC and is_subfunctorial(d):
            return d
    raise RuntimeError("no deterministic sub-functorial candidate found")


def random_partition(rng: random.Random, items) -> list[list[str]]:
    items = list(items)
    rng.shuffle(items)
    blocks: list[list[str]] = []
    for x in items:
        if blocks and rng.random() < 0.5:
            rng.choice(blocks).append(x)
        else:
            blocks.append([x])
    return blocks


# ---------------------------------------------------------------- families


def _monotone(s: Synchronization, chief: OpenDynamics, target: OpenDynamics) -> bool:
    return validate_synchronization(s, chief, target).ok


def random_sync(rng: random.Random, chief: OpenDynamics, target: OpenDynamics) -> Synchronization:
    for _ in range(20):
        om = {o: rng.choice(sorted(target.motor.objects)) for o in chief.motor.objects}
        im = {}
        for o in chief.motor.objects:
            for t in chief.clock.instants[o]:
                im[t] = rng.choice(sorted(target.clock.instants[om[o]]))
        s = Synchronization(om, im)
        if _monotone(s, chief, target):
            return s
    o = sorted(target.motor.objects)[0]
    t = sorted(target.clock.instants[o])[0]
    return Synchronization({x: o for x in chief.motor.objects},
                           {x: t for x in chief.clock.all_instants()})


def random_interaction(rng: random.Random, index, comps, max_rows: int = 6) -> Interaction:
    pools = [sorted(context(comps[i]).coherent) for i in index]
    rows = {tuple(rng.choice(p) for p in pools) for _ in range(rng.randint(1, max_rows))}
    return Interaction(tuple(index), comps, frozenset(rows))


def random_family(rng: random.Random, max_components: int = 3) -> InteractiveFamily:
    k = rng.randint(1, max_components)
    index = tuple(f"c{i}" for i in range(k))
    chief = rng.choice(index)
    comps = {}
    chief_dyn = random_efficient_open_dynamics(rng, tag=chief)
    comps[chief] = chief_dyn
    syncs = {}
    for i in index:
        if i == chief:
            continue
        a = None
        if rng.random() < 0.4:
            # Share the chief's motor and clock so the identity sync applies.
            cand = random_efficient_open_dynamics(rng, motor=chief_dyn.motor, tag=i)
            cand = OpenDynamics(cand.dyn, chief_dyn.clock, _fit_scansion(cand, chief_dyn))
            if validate_open_dynamics(cand).ok and context(cand).externals:
                a = cand
        if a is None:
            a = random_efficient_open_dynamics(rng, tag=i)
        comps[i] = a
        if a.clock is chief_dyn.clock:
            ident = {t: t for t in chief_dyn.clock.all_instants()}
            syncs[i] = Synchronization({o: o for o in chief_dyn.motor.objects}, ident,
                                       {e: e for e in chief_dyn.motor.arrows})
        else:
            syncs[i] = random_sync(rng, chief_dyn, a)
    R = random_interaction(rng, index, comps)
    return InteractiveFamily(index, comps, R, chief, syncs)


def _fit_scansion(a: OpenDynamics, like: OpenDynamics) -> dict:
    """Keep the scansion of ``a`` when it already fits ``like``'s clock."""
    if all(a.scansion[s] in like.clock.instants[o] for o, ss in a.dyn.states.items() for s in ss):
        return dict(a.scansion)
    return {s: sorted(like.clock.instants[o])[0] for o, ss in a.dyn.states.items() for s in ss}


# ---------------------------------------------------------------- mutant


def mutant_generate(f: InteractiveFamily):
    """Faulty generation: a and b may come from two different interaction rows."""
    g = generate_primary(f)
    comps = [f.components[i] for i in f.index]
    k0 = f.index.index(f.chief)
    clock = comps[k0].clock
    motor = comps[k0].motor

    def dmap(k, t):
        return t if k == k0 else f.syncs[f.index[k]].instant_map[t]

    rows_by_mu: dict = {}
    for row in f.interaction.rows():
        rows_by_mu.setdefault(tuple(p for p, _ in row), []).append([dict(e) for _, e in row])
    trans = {k: {s: set(v) for s, v in m.items()} for k, m in g.result.dyn.transitions.items()}
    for mu, rows in rows_by_mu.items():
        pid = tuple_id(mu)
        for e in motor.arrows:
            for t0 in clock.instants[motor.arrows[e].dom]:
                t1 = clock.act(e, t0)
                for ra, rb in product(rows, rows):
                    a = [ra[k].get(dmap(k, t0)) for k in range(len(comps))]
                    b = [rb[k].get(dmap(k, t1)) for k in range(len(comps))]
                    if None not in a and None not in b:
                        trans.setdefault((e, pid), {}).setdefault(tuple_id(a), set()).add(
                            tuple_id(b))
    d = MultiDynamics(motor, g.result.dyn.params, g.result.dyn.states, trans)
    return OpenDynamics(d, clock, g.result.scansion)


# ---------------------------------------------------------------- suites


@dataclass
class SuiteResult:
    name: str
    cases: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def summary(self) -> str:
        status = "ok" if self.ok else "FAILED"
        return f"{self.name}: {self.cases} cases, {len(self.failures)} failures ({status})"


def suite_stability(seed: int, cases: int, inject_fault: bool = False) -> SuiteResult:
    res = SuiteResult("stability")
    rng = random.Random(seed)
    for c in range(cases):
        f = random_family(rng)
        if inject_fault:
            dyn = mutant_generate(f).dyn
        else:
            dyn = generate_primary(f).result.dyn
        v = is_subfunctorial(dyn)
        res.cases += 1
        if not v:
            res.failures.append((c, str(v.witness)))
    return res


def suite_quotient(seed: int, cases: int, inject_fault: bool = False) -> SuiteResult:
    res = SuiteResult("quotient")
    rng = random.Random(seed)
    for c in range(cases):
        a = random_open_dynamics(rng, max_params=3, max_states=3)
        blocks = random_partition(rng, a.params)
        q = quotient_parameters(a.dyn, blocks)
        if inject_fault:
            q = _break_identity(q)
        v = is_subfunctorial(q)
        res.cases += 1
        if not v:
            res.failures.append((c, str(v.witness)))
    return res


def _break_identity(d: MultiDynamics) -> MultiDynamics:
    trans = {k: dict(m) for k, m in d.transitions.items()}
    for o in sorted(d.motor.objects):
        ss = sorted(d.states[o])
        if len(ss) >= 2:
            i = d.motor.identities[o]
            trans[(i, d.params[0])][ss[0]] = frozenset([ss[1]])
            break
    return MultiDynamics(d.motor, d.params, d.states, trans)


def suite_determinism(seed: int, cases: int, inject_fault: bool = False) -> SuiteResult:
    res = SuiteResult("determinism")
    rng = random.Random(seed)
    for c in range(cases):
        d = random_deterministic_subfunctorial(rng)
        if inject_fault:
            d = _break_identity(d)
        v = is_functorial(d)
        res.cases += 1
        if not v:
            res.failures.append((c, str(v.witness)))
    return res


def random_small_world_interaction(rng: random.Random, cap: int = 12) -> Interaction:
    """An interaction whose configuration space has at most ``cap`` elements."""
    while True:
        k = rng.randint(1, 2)
        index = tuple(f"c{i}" for i in range(k))
        comps = {}
        for i in index:
            motor = random_motor(rng) if rng.random() < 0.3 else monoid_category("Idem", "E")
            comps[i] = random_efficient_open_dynamics(rng, motor, tag=i, max_states=2,
                                                      keep_identity=0.75)
        size = 1
        for i in index:
            ctx = context(comps[i])
            size *= len(ctx.externals) * len(ctx.params)
        if size > cap:
            continue
        pools = [sorted(context(comps[i]).coherent) for i in index]
        world = list(product(*pools))
        rows = frozenset(r for r in world if rng.random() < 0.6) or frozenset([rng.choice(world)])
        return Interaction(index, comps, rows)


def suite_normality(seed: int, cases: int, inject_fault: bool = False) -> SuiteResult:
    res = SuiteResult("normality")
    rng = random.Random(seed)
    for c in range(cases):
        r = random_small_world_interaction(rng)
        fast = is_normal(r)
        slow = is_normal_bruteforce(r, cap=12)
        if inject_fault:
            fast = not fast
        res.cases += 1
        if fast != slow:
            res.failures.append((c, f"is_normal={fast} brute force={slow}"))
    return res


def suite_null(seed: int, cases: int, inject_fault: bool = False) -> SuiteResult:
    res = SuiteResult("null")
    rng = random.Random(seed)
    for c in range(cases):
        f = random_family(rng)
        om = null_interaction(f.index, f.components)
        res.cases += 1
        problems = []
        if is_operant(om) != inject_fault:
            problems.append("null interaction is operant")
        if not is_normal(om):
            problems.append("null interaction is not normal")
        if not is_discrete(realization_connectivity(om)):
            problems.append("realization structure of the null interaction is not discrete")
        if problems:
            res.failures.append((c, "; ".join(problems)))
    return res


def naive_realizations(a: OpenDynamics, lam) -> set:
    """Every partial instant->state map filtered by the realization test."""
    instants = sorted(a.clock.all_instants())
    choices = [[None] + a.fiber(t) for t in instants]
    out = set()
    for pick in product(*choices):
        r = Realization(lam, tuple((t, x) for t, x in zip(instants, pick) if x is not None))
        if is_realization(a, r):
            out.add(r)
    return out


def suite_oracle(seed: int, cases: int, inject_fault: bool = False) -> SuiteResult:
    res = SuiteResult("oracle")
    rng = random.Random(seed)
    done = 0
    while done < cases:
        a = random_open_dynamics(rng, max_states=3)
        if len(a.clock.all_instants()) > 6:
            continue
        done += 1
        for lam in a.params:
            fast = set(enumerate_realizations(a, lam))
            if inject_fault and fast:
                fast.pop()
            slow = naive_realizations(a, lam)
            if fast != slow:
                res.failures.append((done - 1, f"param {lam}: {len(fast)} vs {len(slow)}"))
                break
        res.cases += 1
    return res


SUITES: dict[str, Callable[..., SuiteResult]] = {
    "stability": suite_stability,
    "quotient": suite_quotient,
    "determinism": suite_determinism,
    "normality": suite_normality,
    "null": suite_null,
    "oracle": suite_oracle,
}
