"""Relations between realizations and parameters, interactions and their taxonomy."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import chain, combinations, product
from typing import Iterable, Mapping, Optional, Sequence

from .dynamics import OpenDynamics
from .errors import (CapExceeded, IllTypedDisposition, IncompatibleDispositions,
                     InefficientComponent, NotAnInteraction)
from .realize import nonempty_realizations

External = tuple  # sorted tuple of (instant, state) pairs
Pair = tuple      # (param, External)
Row = tuple       # one Pair per index, in index order


@dataclass(frozen=True)
class Context:
    """Per-component data an interaction ranges over."""

    params: tuple[str, ...]
    externals: tuple[External, ...]          # nonempty external parts, all params
    coherent: frozenset                      # {(param, external)} of nonempty realizations
    external_set: frozenset = frozenset()

    @property
    def pairs(self) -> list[Pair]:
        return [(p, e) for e in self.externals for p in self.params]


def context(a: OpenDynamics, limit: Optional[int] = None) -> Context:
    cached = a._cache.get("context")
    if cached is not None:
        return cached
    rs = nonempty_realizations(a, limit=limit)
    ctx = Context(
        params=a.params,
        externals=tuple(sorted({r.assignment for r in rs})),
        coherent=frozenset((r.param, r.assignment) for r in rs),
        external_set=frozenset(r.assignment for r in rs),
    )
    a._cache["context"] = ctx
    return ctx


@dataclass(frozen=True, eq=False)
class Relation:
    """A nonempty set of rows; each row pairs a parameter and a realization per index."""

    index: tuple[str, ...]
    components: Mapping[str, OpenDynamics]
    tuples: frozenset

    def __post_init__(self):
        object.__setattr__(self, "index", tuple(self.index))
        object.__setattr__(self, "tuples", frozenset(
            tuple((p, tuple(tuple(x) for x in e)) for p, e in row) for row in self.tuples))

    def contexts(self) -> list[Context]:
        return [context(self.components[i]) for i in self.index]

    def rows(self) -> list[Row]:
        return sorted(self.tuples)

    def __len__(self):
        return len(self.tuples)

    def __eq__(self, other):
        if not isinstance(other, Relation):
            return NotImplemented
        return self.index == other.index and self.tuples == other.tuples

    def __hash__(self):
        return hash((self.index, self.tuples))


def relation_issues(c: Relation) -> list[str]:
    issues = []
    if not c.tuples:
        issues.append("relation is empty")
    ctxs = c.contexts()
    n = len(c.index)
    for row in c.rows():
        if len(row) != n:
            issues.append(f"row of length {len(row)} over {n} indices")
            continue
        for i, ctx, (p, e) in zip(c.index, ctxs, row):
            if p not in ctx.params:
                issues.append(f"component {i}: unknown parameter {p}")
            if e not in ctx.external_set:
                issues.append(f"component {i}: {list(e)} is not a nonempty realization")
    return issues


def is_coherent_row(row: Row, ctxs: Sequence[Context]) -> bool:
    return all(pair in ctx.coherent for pair, ctx in zip(row, ctxs))


class Interaction(Relation):
    """A relation whose rows are all coherent."""

    def __post_init__(self):
        super().__post_init__()
        issues = relation_issues(self)
        if issues:
            raise NotAnInteraction("; ".join(issues))
        ctxs = self.contexts()
        for row in self.rows():
            if not is_coherent_row(row, ctxs):
                raise NotAnInteraction(f"incoherent row {row!r}")


def coherent_part(c: Relation) -> Optional[Interaction]:
    """Coherent rows of ``c``, or None when there are none."""
    ctxs = c.contexts()
    keep = frozenset(r for r in c.tuples if is_coherent_row(r, ctxs))
    if not keep:
        return None
    return Interaction(c.index, c.components, keep)


def total_relation(index: Sequence[str], components: Mapping[str, OpenDynamics]) -> Relation:
    ctxs = [context(components[i]) for i in index]
    for i, ctx in zip(index, ctxs):
        if not ctx.externals:
            raise InefficientComponent(f"component {i} has no nonempty realization")
    return Relation(tuple(index), components, frozenset(product(*(ctx.pairs for ctx in ctxs))))


def null_interaction(index: Sequence[str], components: Mapping[str, OpenDynamics]) -> Interaction:
    ctxs = [context(components[i]) for i in index]
    for i, ctx in zip(index, ctxs):
        if not ctx.externals:
            raise InefficientComponent(f"component {i} has no nonempty realization")
    rows = product(*(sorted(ctx.coherent) for ctx in ctxs))
    return Interaction(tuple(index), components, frozenset(rows))


def realization_relation(c: Relation) -> frozenset:
    return frozenset(tuple(e for _, e in row) for row in c.tuples)


def param_relation(c: Relation) -> frozenset:
    return frozenset(tuple(p for p, _ in row) for row in c.tuples)


def _world_size(c: Relation) -> int:
    n = 1
    for ctx in c.contexts():
        n *= len(ctx.externals)
    return n


def is_filtering(c: Relation) -> bool:
    return len(realization_relation(c)) < _world_size(c)


def is_operant(r: Interaction) -> bool:
    return is_filtering(r)


def is_normal(r: Interaction) -> bool:
    """Every uncovered realization tuple must admit some incoherent parameter pairing.

    That holds exactly when the uncovered tuples avoid the product of the
    realizations coherent with every parameter of their component.
    """
    ctxs = r.contexts()
    universal = []
    for ctx in ctxs:
        universal.append([e for e in ctx.externals
                          if all((p, e) in ctx.coherent for p in ctx.params)])
    dom = realization_relation(r)
    return all(sigma in dom for sigma in product(*universal))


def is_normal_bruteforce(r: Interaction, cap: int = 12) -> bool:
    """Search every C ⊇ |R| over all configurations with coherent part R for a non-filtering one."""
    ctxs = r.contexts()
    world = list(product(*(ctx.pairs for ctx in ctxs)))
    if len(world) > cap:
        raise CapExceeded(f"{len(world)} configurations exceed cap {cap}")
    rest = [row for row in world if row not in r.tuples]
    for k in range(len(rest) + 1):
        for extra in combinations(rest, k):
            c = Relation(r.index, r.components, r.tuples | frozenset(extra))
            if coherent_part(c) != r:
                continue
            if not is_filtering(c):
                return True
    return False


def is_determining(r: Relation) -> bool:
    seen: dict = {}
    for row in r.tuples:
        sigma = tuple(e for _, e in row)
        lam = tuple(p for p, _ in row)
        if seen.setdefault(sigma, lam) != lam:
            return False
    return True


def is_concrete(r: Interaction) -> bool:
    return is_normal(r) and is_determining(r)


REAL, PARAM = 0, 1


@dataclass(frozen=True)
class Disposition:
    """Partial assignment of realization slots (i, 0) and parameter slots (i, 1)."""

    slots: tuple = ()

    def __init__(self, slots: Mapping | Iterable = ()):
        items = slots.items() if isinstance(slots, Mapping) else slots
        norm = {}
        for (i, kind), v in items:
            if kind == REAL:
                v = tuple(tuple(x) for x in v)
            norm[(i, kind)] = v
        object.__setattr__(self, "slots", tuple(sorted(norm.items())))

    def as_dict(self) -> dict:
        return dict(self.slots)

    def __bool__(self):
        return bool(self.slots)


EMPTY_DISPOSITION = Disposition()


def check_disposition(q: Disposition, r: Relation) -> None:
    pos = {i: k for k, i in enumerate(r.index)}
    ctxs = r.contexts()
    for (i, kind), v in q.slots:
        if i not in pos or kind not in (REAL, PARAM):
            raise IllTypedDisposition(f"slot ({i}, {kind}) does not exist")
        ctx = ctxs[pos[i]]
        if kind == REAL and v not in ctx.external_set:
            raise IllTypedDisposition(f"slot ({i}, 0) holds a value outside the realizations")
        if kind == PARAM and v not in ctx.params:
            raise IllTypedDisposition(f"slot ({i}, 1) holds unknown parameter {v}")


def restrict(row: Row, index: Sequence[str], slots: Iterable) -> Disposition:
    pos = {i: k for k, i in enumerate(index)}
    return Disposition({(i, kind): row[pos[i]][1 - kind] for i, kind in slots})


def is_compatible(q: Disposition, r: Relation) -> bool:
    check_disposition(q, r)
    pos = {i: k for k, i in enumerate(r.index)}
    want = [(pos[i], 1 - kind, v) for (i, kind), v in q.slots]
    return any(all(row[k][j] == v for k, j, v in want) for row in r.tuples)


def join_dispositions(q: Disposition, r: Disposition) -> Disposition:
    out = q.as_dict()
    for k, v in r.slots:
        if k in out and out[k] != v:
            raise IncompatibleDispositions(f"slot {k} holds two different values")
        out[k] = v
    return Disposition(out)


def _factors(section: set, u: Sequence[int], v: Sequence[int]) -> bool:
    pu = {tuple(x[k] for k in u) for x in section}
    pv = {tuple(x[k] for k in v) for x in section}
    return len(pu) * len(pv) == len(section)


def _powerset(xs: Sequence) -> Iterable[tuple]:
    return chain.from_iterable(combinations(xs, k) for k in range(len(xs) + 1))


def connectivity_base(rel: Iterable[tuple], n: int) -> set:
    """Index sets K whose sections never split as a product over a bipartition of K."""
    rel = set(rel)
    base = set()
    for K in _powerset(range(n)):
        if not K:
            continue
        rest = [k for k in range(n) if k not in K]
        sections: dict[tuple, set] = {}
        for x in rel:
            sections.setdefault(tuple(x[k] for k in rest), set()).add(tuple(x[k] for k in K))
        local = range(len(K))
        splits = False
        # Bipartitions {U, V}; fixing K[0] in U avoids checking each twice.
        for extra in _powerset(local[1:]):
            U = (0,) + extra
            V = tuple(k for k in local if k not in U)
            if not V:
                continue
            if all(_factors(s, U, V) for s in sections.values()):
                splits = True
                break
        if not splits:
            base.add(frozenset(K))
    return base


def connective_closure(sets: Iterable[frozenset], n: int) -> frozenset:
    out = {frozenset()} | {frozenset([k]) for k in range(n)} | set(sets)
    changed = True
    while changed:
        changed = False
        cur = sorted(out, key=sorted)
        for a, b in combinations(cur, 2):
            if a & b and (a | b) not in out:
                out.add(a | b)
                changed = True
    return frozenset(out)


def connectivity_structure(rel: Iterable[tuple], index: Sequence[str]) -> frozenset:
    """Connected subsets of ``index`` for a relation given as tuples in index order."""
    n = len(index)
    closed = connective_closure(connectivity_base(rel, n), n)
    return frozenset(frozenset(index[k] for k in s) for s in closed)


def global_connectivity(r: Relation) -> frozenset:
    return connectivity_structure(r.tuples, r.index)


def realization_connectivity(r: Relation) -> frozenset:
    return connectivity_structure(realization_relation(r), r.index)


def is_discrete(structure: Iterable[frozenset]) -> bool:
    return all(len(s) <= 1 for s in structure)


def sorted_structure(structure: Iterable[frozenset]) -> list[list[str]]:
    return sorted((sorted(s) for s in structure), key=lambda s: (len(s), s))
