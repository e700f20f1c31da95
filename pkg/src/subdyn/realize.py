"""Realizations of open dynamics: verification, enumeration, efficiency."""

from __future__ import annotations

import os
from typing import Iterable, Iterator, NamedTuple, Optional

import networkx as nx

from .dynamics import ALL, OpenDynamics
from .errors import LimitExceeded, UnknownParam
from .report import PASS, Verdict, Witness

DEFAULT_LIMIT = 100_000


def default_limit() -> int:
    raw = os.environ.get("SUBDYN_LIMIT")
    if raw:
        try:
            v = int(raw)
        except ValueError:
            return DEFAULT_LIMIT
        if v > 0:
            return v
    return DEFAULT_LIMIT


class Realization(NamedTuple):
    """A parameter plus a partial section ``instant -> state``, stored sorted."""

    param: str
    assignment: tuple[tuple[str, str], ...]

    @classmethod
    def make(cls, param: str, assignment) -> "Realization":
        items = assignment.items() if hasattr(assignment, "items") else assignment
        return cls(param, tuple(sorted(items)))

    @property
    def domain(self) -> frozenset:
        return frozenset(t for t, _ in self.assignment)

    def as_dict(self) -> dict[str, str]:
        return dict(self.assignment)

    def is_empty(self) -> bool:
        return not self.assignment

    @property
    def external(self) -> tuple[tuple[str, str], ...]:
        return self.assignment


def is_realization(a: OpenDynamics, r: Realization) -> Verdict:
    if r.param not in a.params:
        raise UnknownParam(r.param)
    m = r.as_dict()
    if len(m) != len(r.assignment):
        return Verdict(False, Witness("section", detail="instant assigned twice"))
    instant_obj = {t: o for o, ts in a.clock.instants.items() for t in ts}
    for t in sorted(m):
        x = m[t]
        if t not in instant_obj:
            return Verdict(False, Witness("typing", element=t, detail="not an instant"))
        if x not in a.dyn.states[instant_obj[t]]:
            return Verdict(False, Witness("typing", state=x, element=t,
                                          detail="state not over the instant's object"))
        if a.scansion.get(x) != t:
            return Verdict(False, Witness("section", state=x, element=t,
                                          detail="state is not dated by its instant"))
    for f in sorted(a.motor.arrows):
        arr = a.motor.arrows[f]
        for t in sorted(a.clock.instants[arr.dom]):
            u = a.clock.act(f, t)
            if u not in m:
                continue
            if t not in m:
                return Verdict(False, Witness("closure", (f,), r.param, None, t,
                                              f"undefined at {t} though defined at {u}"))
            if m[u] not in a.dyn.image(f, r.param, m[t]):
                return Verdict(False, Witness("closure", (f,), r.param, m[t], m[u],
                                              f"{m[u]} not in {f}({m[t]})"))
    return PASS


def _plan(a: OpenDynamics):
    """Instant order plus, per position, the constraints against earlier positions."""
    cached = a._cache.get("plan")
    if cached is not None:
        return cached
    clock = a.clock
    instants = sorted(clock.all_instants())
    succ: dict[str, set] = {t: set() for t in instants}
    for f, m in clock.action.items():
        for t, u in m.items():
            if t != u:
                succ[t].add(u)
    order = _topological(instants, succ)
    pos = {t: i for i, t in enumerate(order)}
    # arrow constraints (src instant, dst instant, arrow)
    arrows_at: list[list[tuple[str, str, str]]] = [[] for _ in order]
    below: list[set] = [set() for _ in order]   # earlier instants that must be defined if this is
    above: list[set] = [set() for _ in order]   # earlier instants that force this one
    for f in sorted(a.motor.arrows):
        arr = a.motor.arrows[f]
        for t in sorted(clock.instants[arr.dom]):
            u = clock.act(f, t)
            k = max(pos[t], pos[u])
            arrows_at[k].append((t, u, f))
            if t != u:
                if pos[t] < pos[u]:
                    below[pos[u]].add(t)
                else:
                    above[pos[t]].add(u)
    plan = (order, arrows_at, [sorted(b) for b in below], [sorted(b) for b in above])
    a._cache["plan"] = plan
    return plan


def _topological(nodes: list[str], succ: dict[str, set]) -> list[str]:
    """Order compatible with the preorder; cyclic groups are kept adjacent."""
    g = nx.DiGraph()
    g.add_nodes_from(nodes)
    g.add_edges_from((t, u) for t in nodes for u in succ[t])
    cond = nx.condensation(g)
    members = {i: sorted(cond.nodes[i]["members"]) for i in cond.nodes}
    order: list[str] = []
    for i in nx.lexicographical_topological_sort(cond, key=lambda i: members[i][0]):
        order.extend(members[i])
    return order


def iter_realizations(a: OpenDynamics, lam=ALL) -> Iterator[Realization]:
    """All realizations for one parameter (or every parameter), by backtracking."""
    if lam is ALL:
        params = a.params
    elif lam in a.params:
        params = (lam,)
    else:
        raise UnknownParam(str(lam))
    order, arrows_at, below, above = _plan(a)
    n = len(order)
    d = a.dyn
    for p in params:
        assign: dict[str, Optional[str]] = {}

        def rec(k: int):
            if k == n:
                yield Realization(p, tuple(sorted((t, x) for t, x in assign.items()
                                                  if x is not None)))
                return
            t = order[k]
            must_define = any(assign[u] is not None for u in above[k])
            may_define = all(assign[u] is not None for u in below[k])
            if not must_define:
                assign[t] = None
                # Arrow constraints with one end undefined are covered by below/above.
                yield from rec(k + 1)
            if may_define:
                for x in a.fiber(t):
                    assign[t] = x
                    ok = True
                    for src, dst, f in arrows_at[k]:
                        xs = assign[src]
                        xd = assign[dst]
                        if xd is None:
                            continue
                        if xs is None or xd not in d.image(f, p, xs):
                            ok = False
                            break
                    if ok:
                        yield from rec(k + 1)
            assign.pop(t, None)

        yield from rec(0)


def enumerate_realizations(a: OpenDynamics, lam=ALL, limit: Optional[int] = None
                           ) -> list[Realization]:
    """Complete sorted list of realizations; raises LimitExceeded rather than truncating."""
    if limit is None:
        limit = default_limit()
    key = ("realizations", lam if lam is not ALL else "\x00ALL")
    cached = a._cache.get(key)
    if cached is not None:
        if len(cached) > limit:
            raise LimitExceeded(f"more than {limit} realizations")
        return list(cached)
    out = []
    for r in iter_realizations(a, lam):
        out.append(r)
        if len(out) > limit:
            raise LimitExceeded(f"more than {limit} realizations")
    out.sort()
    a._cache[key] = tuple(out)
    return out


def nonempty_realizations(a: OpenDynamics, lam=ALL, limit: Optional[int] = None
                          ) -> list[Realization]:
    return [r for r in enumerate_realizations(a, lam, limit) if r.assignment]


def passes_through(r: Realization, states: Iterable[str], a: OpenDynamics) -> bool:
    """Conjunction: r is defined at the date of every given state and equals it there."""
    m = r.as_dict()
    for x in states:
        t = a.scansion.get(x)
        if t is None or m.get(t) != x:
            return False
    return True


def is_efficient(a: OpenDynamics) -> bool:
    for r in iter_realizations(a):
        if r.assignment:
            return True
    return False
