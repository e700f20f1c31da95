"""Synchronizations and interactive families."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Optional

from .dynamics import (Functor, OpenDynamics, anteriority, is_subfunctorial,
                       validate_functor, validate_open_dynamics)
from .errors import MissingArrowMap, MotorIsGraph
from .interact import Relation, context, is_coherent_row, relation_issues
from .report import PASS, ValidationReport, Verdict, Witness


@dataclass(frozen=True)
class Synchronization:
    """Object map and instant map from the chief's clock to a component's clock."""

    obj_map: Mapping[str, str]
    instant_map: Mapping[str, str]
    arrow_map: Optional[Mapping[str, str]] = None

    def __hash__(self):
        return hash((tuple(sorted(self.obj_map.items())), tuple(sorted(self.instant_map.items()))))


def validate_synchronization(s: Synchronization, chief: OpenDynamics,
                             target: OpenDynamics) -> ValidationReport:
    report = ValidationReport()
    hc, hk = chief.clock, target.clock
    for o in sorted(chief.motor.objects):
        img = s.obj_map.get(o)
        if img not in target.motor.objects:
            report.add(f"object {o} is not sent to an object of the target motor")
            continue
        for t in sorted(hc.instants[o]):
            u = s.instant_map.get(t)
            if u is None:
                report.add(f"instant {t} has no image")
            elif u not in hk.instants[img]:
                report.add(f"typing: instant {t} of {o} is sent to {u}, not an instant of {img}")
    if not report.ok:
        return report
    src_order = sorted(anteriority(hc))
    dst_order = anteriority(hk)
    d = s.instant_map
    preserving = all((d[x], d[y]) in dst_order for x, y in src_order)
    reversing = all((d[y], d[x]) in dst_order for x, y in src_order)
    if not (preserving or reversing):
        report.add("monotonicity: the instant map neither preserves nor reverses anteriority")
    return report


def is_rigid(s: Synchronization, chief: OpenDynamics, target: OpenDynamics) -> Verdict:
    """δ ∘ e^h = (Δe)^k ∘ δ on every chief arrow."""
    if s.arrow_map is None:
        raise MissingArrowMap("rigidity needs the arrow map of the synchronization")
    rep = validate_functor(Functor(s.obj_map, s.arrow_map), chief.motor, target.motor)
    if not rep.ok:
        return Verdict(False, Witness("functor", detail=rep.issues[0]))
    hc, hk = chief.clock, target.clock
    for o in sorted(chief.motor.objects):
        for t in sorted(hc.instants[o]):
            if s.instant_map.get(t) not in hk.instants[s.obj_map[o]]:
                return Verdict(False, Witness("typing", element=t,
                                              detail=f"instant is not sent over {s.obj_map[o]}"))
    for e in sorted(chief.motor.arrows):
        arr = chief.motor.arrows[e]
        for t in sorted(hc.instants[arr.dom]):
            lhs = s.instant_map[hc.act(e, t)]
            rhs = hk.act(s.arrow_map[e], s.instant_map[t])
            if lhs != rhs:
                return Verdict(False, Witness("rigidity", (e,), element=t,
                                              detail=f"{lhs} != {rhs}"))
    return PASS


@dataclass(frozen=True, eq=False)
class InteractiveFamily:
    index: tuple[str, ...]
    components: Mapping[str, OpenDynamics]
    interaction: Relation
    chief: str
    syncs: Mapping[str, Synchronization] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "index", tuple(self.index))
        object.__setattr__(self, "components", dict(self.components))
        object.__setattr__(self, "syncs", dict(self.syncs))

    def sync(self, i: str) -> Optional[Synchronization]:
        return None if i == self.chief else self.syncs[i]


def validate_family(f: InteractiveFamily) -> ValidationReport:
    report = ValidationReport()
    if len(set(f.index)) != len(f.index):
        report.add("duplicate component names")
    if set(f.components) != set(f.index):
        report.add("components do not match the index")
        return report
    if f.chief not in f.index:
        report.add(f"chief {f.chief} is not a component")
    for i in f.index:
        a = f.components[i]
        sub = validate_open_dynamics(a)
        if not sub.ok:
            report.extend(sub, f"component {i}: ")
            continue
        try:
            v = is_subfunctorial(a.dyn)
        except MotorIsGraph:
            report.add(f"component {i}: motor has no composition")
            continue
        if not v:
            report.add(f"component {i}: not sub-functorial ({v.witness})")
        if not context(a).externals:
            report.add(f"component {i}: inefficient (only the empty realization)")
    if not report.ok:
        return report
    r = f.interaction
    if tuple(r.index) != f.index:
        report.add("interaction index differs from the family index")
    else:
        for msg in relation_issues(r):
            report.add(f"interaction: {msg}")
        ctxs = [context(f.components[i]) for i in f.index]
        for row in r.rows():
            if len(row) == len(ctxs) and not is_coherent_row(row, ctxs):
                report.add(f"coherence: row {_show_row(row)} is not coherent")
    expected = set(f.index) - {f.chief}
    if set(f.syncs) != expected:
        report.add(f"synchronizations given for {sorted(f.syncs)}, expected {sorted(expected)}")
    chief = f.components.get(f.chief)
    for i in sorted(set(f.syncs) & expected):
        sub = validate_synchronization(f.syncs[i], chief, f.components[i])
        report.extend(sub, f"synchronization {i}: ")
    return report


def _show_row(row) -> str:
    return "(" + ", ".join(f"{p}:{dict(e)}" for p, e in row) + ")"
