"""Finite small categories and directed graphs used as motors."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, NamedTuple, Optional, Union

from .report import ValidationReport


class Arrow(NamedTuple):
    id: str
    dom: str
    cod: str


@dataclass(frozen=True, eq=False)
class DirectedGraph:
    """Vertices and typed edges, without identities or composition."""

    name: str
    vertices: tuple[str, ...]
    edges: Mapping[str, Arrow]

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "edges", dict(self.edges))

    # The dynamics layer addresses graph and category motors uniformly.
    @property
    def objects(self) -> tuple[str, ...]:
        return self.vertices

    @property
    def arrows(self) -> Mapping[str, Arrow]:
        return self.edges

    def validate(self) -> ValidationReport:
        report = ValidationReport()
        vs = set(self.vertices)
        if len(vs) != len(self.vertices):
            report.add("duplicate vertex ids")
        for e in sorted(self.edges):
            a = self.edges[e]
            if a.id != e:
                report.add(f"edge key {e!r} holds edge named {a.id!r}")
            if a.dom not in vs or a.cod not in vs:
                report.add(f"edge {e} has undeclared endpoint ({a.dom} -> {a.cod})")
        return report

    def __eq__(self, other):
        if not isinstance(other, DirectedGraph) or isinstance(other, FiniteCategory):
            return NotImplemented
        return (self.name, set(self.vertices), self.edges) == (
            other.name, set(other.vertices), other.edges)

    def __hash__(self):
        return hash((self.name, frozenset(self.vertices)))


@dataclass(frozen=True, eq=False)
class FiniteCategory:
    """A small category given by an explicit, finite composition table.

    ``compose[(g, f)]`` is ``g o f`` and is defined exactly on pairs with
    ``dom g == cod f``. Arrow identity is by id: parallel arrows with
    different ids are different arrows.
    """

    name: str
    objects: tuple[str, ...]
    arrows: Mapping[str, Arrow]
    identities: Mapping[str, str]
    compose: Mapping[tuple[str, str], str]
    _out: dict = field(default_factory=dict, repr=False, compare=False)
    _in: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "objects", tuple(self.objects))
        object.__setattr__(self, "arrows", dict(self.arrows))
        object.__setattr__(self, "identities", dict(self.identities))
        object.__setattr__(self, "compose", dict(self.compose))
        for a in self.arrows.values():
            self._out.setdefault(a.dom, []).append(a.id)
            self._in.setdefault(a.cod, []).append(a.id)
        for d in (self._out, self._in):
            for k in d:
                d[k].sort()

    def dom(self, f: str) -> str:
        return self.arrows[f].dom

    def cod(self, f: str) -> str:
        return self.arrows[f].cod

    def arrows_from(self, obj: str) -> list[str]:
        return self._out.get(obj, [])

    def arrows_into(self, obj: str) -> list[str]:
        return self._in.get(obj, [])

    def composable_pairs(self) -> Iterable[tuple[str, str]]:
        """All ``(g, f)`` with ``dom g == cod f``, in lexicographic order."""
        for f in sorted(self.arrows):
            for g in self.arrows_from(self.arrows[f].cod):
                yield g, f

    def then(self, f: str, g: str) -> str:
        """Diagrammatic composite: first ``f``, then ``g``."""
        return self.compose[(g, f)]

    def __eq__(self, other):
        if not isinstance(other, FiniteCategory):
            return NotImplemented
        return (
            self.name == other.name
            and set(self.objects) == set(other.objects)
            and self.arrows == other.arrows
            and self.identities == other.identities
            and self.compose == other.compose
        )

    def __hash__(self):
        return hash((self.name, frozenset(self.objects), len(self.arrows)))


Motor = Union[FiniteCategory, DirectedGraph]


def make_category(name: str, objects: Iterable[str], arrows: Iterable[tuple[str, str, str]],
                  identities: Mapping[str, str],
                  compose: Mapping[tuple[str, str], str]) -> FiniteCategory:
    return FiniteCategory(
        name=name,
        objects=tuple(objects),
        arrows={a: Arrow(a, d, c) for a, d, c in arrows},
        identities=identities,
        compose=compose,
    )


def validate_category(c: FiniteCategory) -> ValidationReport:
    """Check the category axioms; every violation becomes a report entry."""
    report = ValidationReport()
    objs = set(c.objects)
    if len(objs) != len(c.objects):
        report.add("duplicate object ids")
    for key in sorted(c.arrows):
        a = c.arrows[key]
        if not key or a.id != key:
            report.add(f"arrow key {key!r} holds arrow named {a.id!r}")
        if a.dom not in objs or a.cod not in objs:
            report.add(f"arrow {key} has undeclared endpoint ({a.dom} -> {a.cod})")
    if not report.ok:
        return report

    for s in sorted(objs):
        i = c.identities.get(s)
        if i is None or i not in c.arrows:
            report.add(f"object {s} has no identity arrow")
            continue
        if c.arrows[i].dom != s or c.arrows[i].cod != s:
            report.add(f"identity {i} of {s} is typed {c.arrows[i].dom} -> {c.arrows[i].cod}")
    for s in sorted(set(c.identities) - objs):
        report.add(f"identity declared for unknown object {s}")

    for (g, f), h in sorted(c.compose.items()):
        if g not in c.arrows or f not in c.arrows:
            report.add(f"composition entry ({g}, {f}) names an unknown arrow")
        elif c.arrows[g].dom != c.arrows[f].cod:
            report.add(f"composition defined on non-composable pair ({g}, {f})")
        elif h not in c.arrows:
            report.add(f"composite {g} o {f} = {h} is not an arrow")
        elif (c.arrows[h].dom, c.arrows[h].cod) != (c.arrows[f].dom, c.arrows[g].cod):
            report.add(
                f"composite {g} o {f} = {h} has type {c.arrows[h].dom} -> {c.arrows[h].cod}, "
                f"expected {c.arrows[f].dom} -> {c.arrows[g].cod}")
    missing = [(g, f) for g, f in c.composable_pairs() if (g, f) not in c.compose]
    for g, f in missing:
        report.add(f"composition undefined on composable pair ({g}, {f})")
    if not report.ok:
        return report

    for f in sorted(c.arrows):
        a = c.arrows[f]
        idt, ids = c.identities[a.cod], c.identities[a.dom]
        if c.compose[(idt, f)] != f:
            report.add(f"left identity law fails: {idt} o {f} = {c.compose[(idt, f)]}")
        if c.compose[(f, ids)] != f:
            report.add(f"right identity law fails: {f} o {ids} = {c.compose[(f, ids)]}")

    for g, f in c.composable_pairs():
        gf = c.compose[(g, f)]
        for h in c.arrows_from(c.arrows[g].cod):
            left = c.compose[(h, gf)]
            right = c.compose[(c.compose[(h, g)], f)]
            if left != right:
                report.add(
                    f"associativity fails on ({h}, {g}, {f}): {h} o ({g} o {f}) = {left} "
                    f"but ({h} o {g}) o {f} = {right}")
    return report


def underlying_graph(c: FiniteCategory) -> DirectedGraph:
    return DirectedGraph(name=c.name, vertices=c.objects, edges=dict(c.arrows))


def point_category(name: str = "1", obj: str = "•") -> FiniteCategory:
    """The one-object, one-arrow category."""
    idn = f"Id_{obj}"
    return make_category(name, [obj], [(idn, obj, obj)], {obj: idn}, {(idn, idn): idn})


def interval_arrow(i: int, j: int) -> str:
    return f"{i}->{j}"


def build_interval_poset(n: int, start: int = 0, name: Optional[str] = None) -> FiniteCategory:
    """Chain poset on objects ``start .. start+n`` with one arrow i -> j per i <= j."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    points = range(start, start + n + 1)
    objects = [str(i) for i in points]
    arrows = [(interval_arrow(i, j), str(i), str(j)) for i in points for j in points if i <= j]
    identities = {str(i): interval_arrow(i, i) for i in points}
    compose = {
        (interval_arrow(j, k), interval_arrow(i, j)): interval_arrow(i, k)
        for i in points for j in points for k in points if i <= j <= k
    }
    if name is None:
        name = f"T_{n}" if start == 0 else f"T_{start}..{start + n}"
    return make_category(name, objects, arrows, identities, compose)


def build_diamond_category() -> FiniteCategory:
    """Four objects S, U, V, T with the two distinct composites SUT != SVT."""
    objs = ["S", "U", "V", "T"]
    arrows = [
        ("Id_S", "S", "S"), ("Id_U", "U", "U"), ("Id_V", "V", "V"), ("Id_T", "T", "T"),
        ("SU", "S", "U"), ("SV", "S", "V"), ("UT", "U", "T"), ("VT", "V", "T"),
        ("SUT", "S", "T"), ("SVT", "S", "T"),
    ]
    identities = {o: f"Id_{o}" for o in objs}
    compose = {("UT", "SU"): "SUT", ("VT", "SV"): "SVT"}
    typed = {a: (d, c) for a, d, c in arrows}
    for a, (d, c) in typed.items():
        compose[(identities[c], a)] = a
        compose[(a, identities[d])] = a
    return make_category("𝐂", objs, arrows, identities, compose)


def free_category(name: str, vertices: Iterable[str],
                  edges: Iterable[tuple[str, str, str]]) -> FiniteCategory:
    """Path category of an acyclic multigraph; arrows are named by their edge paths.

    A path e1 then e2 ... is named ``e1.e2...``; identities are ``Id_<v>``.
    """
    vertices = list(vertices)
    edges = list(edges)
    out: dict[str, list[tuple[str, str]]] = {v: [] for v in vertices}
    for e, d, c in edges:
        out[d].append((e, c))
    paths: dict[str, tuple[str, str, tuple[str, ...]]] = {}
    for v in vertices:
        paths[f"Id_{v}"] = (v, v, ())
        stack = [(v, ())]
        while stack:
            here, path = stack.pop()
            if len(path) > len(edges):
                raise ValueError("free_category requires an acyclic graph")
            for e, c in out[here]:
                p = path + (e,)
                paths[".".join(p)] = (v, c, p)
                stack.append((c, p))
    by_path = {p: name_ for name_, (_, _, p) in paths.items() if p}
    identities = {v: f"Id_{v}" for v in vertices}
    compose = {}
    for g, (gd, gc, gp) in paths.items():
        for f, (fd, fc, fp) in paths.items():
            if gd != fc:
                continue
            p = fp + gp
            compose[(g, f)] = by_path[p] if p else identities[fd]
    return make_category(name, vertices, [(a, d, c) for a, (d, c, _) in paths.items()],
                         identities, compose)
