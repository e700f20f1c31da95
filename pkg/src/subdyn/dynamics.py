"""Multi-dynamics, clocks, open dynamics and their structural checkers."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping, NamedTuple, Optional, Union

from .errors import (IllTypedDelta, InvalidPartition, MotorIsGraph, NotSubfunctorial,
                     UnknownParam)
from .fincat import DirectedGraph, FiniteCategory, Motor
from .report import PASS, ValidationReport, Verdict, Witness

EMPTY: frozenset = frozenset()


class _All:
    def __repr__(self):
        return "ALL"


ALL = _All()
"""Sentinel for "every parameter" in parameter-indexed queries."""

DETERMINISTIC = "deterministic"
WELL_QUASI_DETERMINISTIC = "well-quasi-deterministic"
PLURALIST = "pluralist"


@dataclass(frozen=True, eq=False)
class MultiDynamics:
    """Per-object state sets and parameter-indexed set-valued transitions.

    ``transitions[(arrow, param)][state]`` is the image of ``state``. Storage
    is sparse: only nonempty images are kept and ``image`` returns the empty
    set elsewhere, so every transition is total on its source.
    """

    motor: Motor
    params: tuple[str, ...]
    states: Mapping[str, frozenset]
    transitions: Mapping[tuple[str, str], Mapping[str, frozenset]]

    def __post_init__(self):
        params = tuple(sorted(self.params))
        states = {o: frozenset(self.states.get(o, ())) for o in self.motor.objects}
        for o in set(self.states) - set(states):
            # Kept so that validation can report them.
            states[o] = frozenset(self.states[o])
        trans = {(a, p): {} for a in self.motor.arrows for p in params}
        for key, m in self.transitions.items():
            trans[key] = {s: frozenset(v) for s, v in m.items() if v}
        object.__setattr__(self, "params", params)
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "transitions", trans)

    def image(self, arrow: str, param: str, state: str) -> frozenset:
        return self.transitions[(arrow, param)].get(state, EMPTY)

    def all_states(self) -> frozenset:
        out = set()
        for v in self.states.values():
            out |= v
        return frozenset(out)

    def typ(self, state: str) -> str:
        for o in sorted(self.states):
            if state in self.states[o]:
                return o
        raise KeyError(state)

    def __eq__(self, other):
        if not isinstance(other, MultiDynamics):
            return NotImplemented
        return (self.motor == other.motor and self.params == other.params
                and self.states == other.states and self.transitions == other.transitions)

    __hash__ = None


def validate_dynamics(d: MultiDynamics) -> ValidationReport:
    report = ValidationReport()
    if not d.params:
        report.add("parameter set is empty")
    objs = set(d.motor.objects)
    for o in sorted(set(d.states) - objs):
        report.add(f"states declared for unknown object {o}")
    seen: dict[str, str] = {}
    for o in sorted(d.states):
        for s in sorted(d.states[o]):
            if s in seen:
                report.add(f"disjointness: state {s} belongs to both {seen[s]} and {o}")
            else:
                seen[s] = o
    for (a, p) in sorted(d.transitions):
        if a not in d.motor.arrows:
            report.add(f"transition on unknown arrow {a}")
            continue
        if p not in d.params:
            report.add(f"transition for unknown parameter {p}")
            continue
        arr = d.motor.arrows[a]
        src, tgt = d.states.get(arr.dom, EMPTY), d.states.get(arr.cod, EMPTY)
        for s in sorted(d.transitions[(a, p)]):
            if s not in src:
                report.add(f"typing: {a}[{p}] defined on {s} outside {arr.dom}")
            bad = sorted(d.transitions[(a, p)][s] - tgt)
            if bad:
                report.add(f"typing: {a}[{p}]({s}) contains {bad[0]} outside {arr.cod}")
    return report


def _require_category(d: MultiDynamics) -> FiniteCategory:
    if not isinstance(d.motor, FiniteCategory):
        raise MotorIsGraph(f"motor {d.motor.name} has no composition")
    return d.motor


def _after(d: MultiDynamics, g: str, f: str, p: str, s: str) -> frozenset:
    """(g ⊙ f)(s) for the parameter p."""
    out: set = set()
    for x in d.image(f, p, s):
        out |= d.image(g, p, x)
    return frozenset(out)


def _check_laws(d: MultiDynamics, equality: bool) -> Verdict:
    c = _require_category(d)
    for g, f in sorted(c.composable_pairs()):
        gf = c.compose[(g, f)]
        for p in d.params:
            # States where either side can be nonempty; elsewhere both are empty.
            todo = set(d.transitions[(gf, p)])
            if equality:
                todo |= {s for s, img in d.transitions[(f, p)].items()
                         if any(d.image(g, p, x) for x in img)}
            for s in sorted(todo):
                lhs = d.image(gf, p, s)
                rhs = _after(d, g, f, p, s)
                extra = sorted(lhs - rhs)
                if extra:
                    return Verdict(False, Witness("composition", (gf, g, f), p, s, extra[0],
                                                  f"{gf}({s}) not within {g}({f}({s}))"))
                if equality:
                    missing = sorted(rhs - lhs)
                    if missing:
                        return Verdict(False, Witness("composition", (gf, g, f), p, s, missing[0],
                                                      f"{gf}({s}) misses an element of {g}({f}({s}))"))
    for o in sorted(c.objects):
        i = c.identities[o]
        for p in d.params:
            tr = d.transitions[(i, p)]
            todo = d.states[o] if equality else tr.keys()
            for s in sorted(todo):
                img = tr.get(s, EMPTY)
                if img - {s}:
                    return Verdict(False, Witness("identity", (i,), p, s, sorted(img - {s})[0],
                                                  "identity image leaves the state"))
                if equality and s not in img:
                    return Verdict(False, Witness("identity", (i,), p, s, s,
                                                  "identity image misses the state"))
    return PASS


def is_subfunctorial(d: MultiDynamics) -> Verdict:
    """Both inclusions (Id)_μ ⊆ Id and (g∘f)_μ ⊆ g_μ ⊙ f_μ, pointwise."""
    return _check_laws(d, equality=False)


def is_functorial(d: MultiDynamics) -> Verdict:
    return _check_laws(d, equality=True)


def determinism_class(d: MultiDynamics) -> str:
    some_empty = False
    for (a, p), m in d.transitions.items():
        if any(len(v) > 1 for v in m.values()):
            return PLURALIST
        if a in d.motor.arrows and len(m) < len(d.states[d.motor.arrows[a].dom]):
            some_empty = True
    return WELL_QUASI_DETERMINISTIC if some_empty else DETERMINISTIC


P_MONO, P_MULTI = "π̇", "π̄"
D_QUASI, D_DET, D_PLURAL = "δ̣", "δ", "δ̄"
F_FUNCT, F_SUB = "φ", "φ̲"

_D_SYMBOL = {DETERMINISTIC: D_DET, WELL_QUASI_DETERMINISTIC: D_QUASI, PLURALIST: D_PLURAL}


class ClassificationTag(NamedTuple):
    P: str
    D: str
    F: Optional[str]
    motor: str

    def __str__(self):
        parts = [self.P, self.D] + ([self.F] if self.F else []) + [self.motor]
        return "[" + " ".join(parts) + "]"


def classify(a: Union["OpenDynamics", MultiDynamics]) -> ClassificationTag:
    d = a.dyn if isinstance(a, OpenDynamics) else a
    v = is_subfunctorial(d)
    if not v:
        raise NotSubfunctorial(str(v.witness))
    P = P_MONO if len(d.params) == 1 else P_MULTI
    dc = determinism_class(d)
    F = None
    if dc != DETERMINISTIC:
        F = F_FUNCT if is_functorial(d) else F_SUB
    return ClassificationTag(P, _D_SYMBOL[dc], F, d.motor.name)


def block_name(members: Iterable[str]) -> str:
    ms = sorted(members)
    if len(ms) == 1:
        return ms[0]
    return json.dumps(ms, ensure_ascii=False, separators=(",", ":"))


def quotient_parameters(d: MultiDynamics,
                        blocks: Union[Mapping[str, Iterable[str]], Iterable[Iterable[str]]]
                        ) -> MultiDynamics:
    """Merge parameters blockwise; each transition becomes the union over its block.

    ``blocks`` is either a mapping from new parameter names to members or an
    iterable of member sets (names are then derived from the members).
    """
    if isinstance(blocks, Mapping):
        named = {k: frozenset(v) for k, v in blocks.items()}
    else:
        named = {}
        for b in blocks:
            b = frozenset(b)
            named[block_name(b)] = b
    seen: set = set()
    for name in sorted(named):
        b = named[name]
        if not b:
            raise InvalidPartition(f"block {name} is empty")
        if b & seen:
            raise InvalidPartition(f"block {name} overlaps another block")
        unknown = b - set(d.params)
        if unknown:
            raise InvalidPartition(f"block {name} contains unknown parameter {sorted(unknown)[0]}")
        seen |= b
    if seen != set(d.params):
        raise InvalidPartition(f"parameter {sorted(set(d.params) - seen)[0]} is not covered")
    trans = {}
    for a in d.motor.arrows:
        for name, b in named.items():
            acc: dict[str, set] = {}
            for m in b:
                for s, img in d.transitions[(a, m)].items():
                    acc.setdefault(s, set()).update(img)
            trans[(a, name)] = acc
    return MultiDynamics(d.motor, tuple(named), d.states, trans)


@dataclass(frozen=True)
class Functor:
    """Object and arrow maps between two motors."""

    obj_map: Mapping[str, str]
    arrow_map: Mapping[str, str]


def validate_functor(F: Functor, src: Motor, dst: Motor) -> ValidationReport:
    report = ValidationReport()
    for o in sorted(src.objects):
        if F.obj_map.get(o) not in dst.objects:
            report.add(f"object {o} is not sent to an object of {dst.name}")
    for a in sorted(src.arrows):
        b = F.arrow_map.get(a)
        if b not in dst.arrows:
            report.add(f"arrow {a} is not sent to an arrow of {dst.name}")
            continue
        x, y = src.arrows[a], dst.arrows[b]
        if (F.obj_map.get(x.dom), F.obj_map.get(x.cod)) != (y.dom, y.cod):
            report.add(f"arrow {a} is sent to {b} with the wrong type")
    if not report.ok:
        return report
    if isinstance(src, FiniteCategory):
        if not isinstance(dst, FiniteCategory):
            report.add("functor from a category into a graph")
            return report
        for o in sorted(src.objects):
            if F.arrow_map[src.identities[o]] != dst.identities[F.obj_map[o]]:
                report.add(f"identity of {o} is not preserved")
        for g, f in src.composable_pairs():
            lhs = F.arrow_map[src.compose[(g, f)]]
            rhs = dst.compose[(F.arrow_map[g], F.arrow_map[f])]
            if lhs != rhs:
                report.add(f"composite {g} o {f} is not preserved")
    return report


def is_dynamorphism(src: MultiDynamics, dst: MultiDynamics, theta: Mapping[str, str],
                    Delta: Functor, delta: Mapping[str, Iterable[str]]) -> Verdict:
    """Checks δ_T ⊙ e^α_λ ⊆ (Δe)^β_θ(λ) ⊙ δ_S pointwise."""
    rep = validate_functor(Delta, src.motor, dst.motor)
    if not rep.ok:
        raise IllTypedDelta(str(rep))
    for lam in src.params:
        if theta.get(lam) not in dst.params:
            raise UnknownParam(f"theta does not send {lam} to a parameter of the target")
    dl = {s: frozenset(delta.get(s, ())) for s in src.all_states()}
    for o in sorted(src.motor.objects):
        for s in sorted(src.states[o]):
            bad = sorted(dl[s] - dst.states[Delta.obj_map[o]])
            if bad:
                return Verdict(False, Witness("typing", (), None, s, bad[0],
                                              "delta leaves the image object"))
    for e in sorted(src.motor.arrows):
        arr = src.motor.arrows[e]
        de = Delta.arrow_map[e]
        for lam in src.params:
            mu = theta[lam]
            for a in sorted(src.states[arr.dom]):
                lhs = set()
                for b in src.image(e, lam, a):
                    lhs |= dl[b]
                rhs = set()
                for x in dl[a]:
                    rhs |= dst.image(de, mu, x)
                extra = sorted(lhs - rhs)
                if extra:
                    return Verdict(False, Witness("dynamorphism", (e,), lam, a, extra[0]))
    return PASS


@dataclass(frozen=True, eq=False)
class Clock:
    """Deterministic functorial mono-dynamics; its states are instants."""

    motor: Motor
    instants: Mapping[str, frozenset]
    action: Mapping[str, Mapping[str, str]]

    def __post_init__(self):
        object.__setattr__(self, "instants",
                           {o: frozenset(self.instants.get(o, ())) for o in self.motor.objects})
        object.__setattr__(self, "action", {a: dict(m) for a, m in self.action.items()})

    def all_instants(self) -> frozenset:
        return frozenset().union(*self.instants.values()) if self.instants else EMPTY

    def act(self, arrow: str, instant: str) -> str:
        return self.action[arrow][instant]

    def as_dynamics(self, param: str = "*") -> MultiDynamics:
        trans = {(a, param): {t: frozenset([u]) for t, u in m.items()}
                 for a, m in self.action.items()}
        return MultiDynamics(self.motor, (param,), self.instants, trans)

    def __eq__(self, other):
        if not isinstance(other, Clock):
            return NotImplemented
        return (self.motor == other.motor and self.instants == other.instants
                and self.action == other.action)

    __hash__ = None


def validate_clock(c: Clock) -> ValidationReport:
    report = ValidationReport()
    for a in sorted(c.motor.arrows):
        arr = c.motor.arrows[a]
        m = c.action.get(a)
        if m is None:
            report.add(f"clock has no action for arrow {a}")
            continue
        for t in sorted(c.instants[arr.dom]):
            if t not in m:
                report.add(f"clock action {a} undefined at instant {t}")
            elif m[t] not in c.instants[arr.cod]:
                report.add(f"clock action {a} sends {t} outside {arr.cod}")
    if not report.ok:
        return report
    d = c.as_dynamics()
    report.extend(validate_dynamics(d))
    if report.ok and isinstance(c.motor, FiniteCategory):
        v = is_functorial(d)
        if not v:
            report.add(f"clock is not functorial: {v.witness}")
    return report


def anteriority(c: Clock) -> frozenset:
    """Pairs (s, t) with t = e(s) for some arrow e."""
    return frozenset((t, u) for a, m in c.action.items() for t, u in m.items())


def build_existential_clock(c: FiniteCategory) -> Clock:
    instants = {o: frozenset(c.arrows_into(o)) for o in c.objects}
    action = {f: {a: c.compose[(f, a)] for a in c.arrows_into(c.dom(f))} for f in c.arrows}
    return Clock(c, instants, action)


def build_essential_clock_singleton(c: Motor) -> Clock:
    instants = {o: frozenset([o]) for o in c.objects}
    action = {f: {a.dom: a.cod} for f, a in c.arrows.items()}
    return Clock(c, instants, action)


@dataclass(frozen=True, eq=False)
class OpenDynamics:
    """A multi-dynamics dated by a clock through a scansion."""

    dyn: MultiDynamics
    clock: Clock
    scansion: Mapping[str, str]
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "scansion", dict(self.scansion))

    @property
    def motor(self) -> Motor:
        return self.dyn.motor

    @property
    def params(self) -> tuple[str, ...]:
        return self.dyn.params

    def fiber(self, instant: str) -> list[str]:
        """States dated by ``instant``, sorted."""
        fib = self._cache.get("fibers")
        if fib is None:
            fib = {}
            for s, t in self.scansion.items():
                fib.setdefault(t, []).append(s)
            for v in fib.values():
                v.sort()
            self._cache["fibers"] = fib
        return fib.get(instant, [])

    def __eq__(self, other):
        if not isinstance(other, OpenDynamics):
            return NotImplemented
        return (self.dyn == other.dyn and self.clock == other.clock
                and self.scansion == other.scansion)

    __hash__ = None


def validate_open_dynamics(a: OpenDynamics) -> ValidationReport:
    report = ValidationReport()
    report.extend(validate_dynamics(a.dyn), "dynamics: ")
    report.extend(validate_clock(a.clock), "clock: ")
    if a.clock.motor != a.dyn.motor:
        report.add("clock and dynamics have different motors")
    if not report.ok:
        return report
    for o in sorted(a.dyn.states):
        for s in sorted(a.dyn.states[o]):
            t = a.scansion.get(s)
            if t is None:
                report.add(f"scansion undefined on state {s}")
            elif t not in a.clock.instants[o]:
                report.add(f"scansion sends {s} to {t}, not an instant of {o}")
    for s in sorted(set(a.scansion) - a.dyn.all_states()):
        report.add(f"scansion defined on unknown state {s}")
    if not report.ok:
        return report
    for (e, p) in sorted(a.dyn.transitions):
        for s in sorted(a.dyn.transitions[(e, p)]):
            want = a.clock.act(e, a.scansion[s])
            for b in sorted(a.dyn.transitions[(e, p)][s]):
                if a.scansion[b] != want:
                    report.add(f"equivariance: {b} in {e}[{p}]({s}) is dated {a.scansion[b]}, "
                               f"expected {want}")
    return report


def scansion_dynamorphism(a: OpenDynamics) -> Verdict:
    """The scansion seen as a dynamorphism into the clock."""
    m = a.motor
    ident = Functor({o: o for o in m.objects}, {f: f for f in m.arrows})
    cd = a.clock.as_dynamics()
    theta = {p: cd.params[0] for p in a.params}
    return is_dynamorphism(a.dyn, cd, theta, ident, {s: [t] for s, t in a.scansion.items()})


def out_of_play_states(a: Union[OpenDynamics, MultiDynamics], mu=ALL) -> frozenset:
    d = a.dyn if isinstance(a, OpenDynamics) else a
    c = _require_category(d)
    if mu is ALL:
        ps = d.params
    elif mu in d.params:
        ps = (mu,)
    else:
        raise UnknownParam(str(mu))
    out = set()
    for o in c.objects:
        i = c.identities[o]
        for s in d.states[o]:
            if all(not d.image(i, p, s) for p in ps):
                out.add(s)
    return frozenset(out)


def is_graphical(d: MultiDynamics) -> bool:
    return isinstance(d.motor, DirectedGraph)
