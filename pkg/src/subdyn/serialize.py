"""Family-spec JSON documents: canonical encoding, parsing and validation."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from typing import Any, Mapping, Optional

from .dynamics import (Clock, MultiDynamics, OpenDynamics, validate_clock, validate_dynamics,
                       validate_open_dynamics)
from .errors import DocumentError
from .families import InteractiveFamily, Synchronization, validate_family
from .fincat import Arrow, DirectedGraph, FiniteCategory, validate_category
from .interact import Relation, coherent_part, relation_issues
from .realize import Realization, is_realization
from .report import ValidationReport

KEYS = ("categories", "dynamics", "clocks", "open_dynamics", "realizations", "interactions",
        "families", "provenance")


def canonical_json(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def digest(obj: Any) -> str:
    return hashlib.sha256(canonical_json(obj).encode("utf-8")).hexdigest()


def _sorted_rows(rows):
    return sorted(rows, key=canonical_json)


def encode_motor(c) -> dict:
    arrows = sorted([a.id, a.dom, a.cod] for a in c.arrows.values())
    if isinstance(c, DirectedGraph):
        return {"kind": "graph", "objects": sorted(c.objects), "arrows": arrows}
    return {
        "kind": "category",
        "objects": sorted(c.objects),
        "arrows": arrows,
        "identities": dict(c.identities),
        "compose": sorted([g, f, h] for (g, f), h in c.compose.items()),
    }


def encode_dynamics(d: MultiDynamics) -> dict:
    rows = []
    for (a, p), m in d.transitions.items():
        for s, img in m.items():
            if img:
                rows.append([a, p, s, sorted(img)])
    return {
        "motor": d.motor.name,
        "params": sorted(d.params),
        "states": {o: sorted(ss) for o, ss in d.states.items()},
        "transitions": sorted(rows),
    }


def encode_clock(c: Clock) -> dict:
    return {
        "motor": c.motor.name,
        "instants": {o: sorted(ts) for o, ts in c.instants.items()},
        "action": sorted([a, t, u] for a, m in c.action.items() for t, u in m.items()),
    }


def encode_realization(r: Realization) -> dict:
    return {"param": r.param, "assignment": [list(p) for p in r.assignment]}


def encode_relation(r: Relation, names: Mapping[str, str]) -> dict:
    rows = []
    for row in r.tuples:
        rows.append({i: {"param": p, "realization": [list(x) for x in e]}
                     for i, (p, e) in zip(r.index, row)})
    return {
        "index": list(r.index),
        "components": {i: names[i] for i in r.index},
        "tuples": _sorted_rows(rows),
    }


def encode_sync(s: Synchronization) -> dict:
    out = {"objects": dict(s.obj_map), "instants": dict(s.instant_map)}
    if s.arrow_map is not None:
        out["arrows"] = dict(s.arrow_map)
    return out


@dataclass
class Document:
    """Named registry of every object a family-spec file can hold."""

    categories: dict = field(default_factory=dict)
    dynamics: dict = field(default_factory=dict)
    clocks: dict = field(default_factory=dict)
    open_dynamics: dict = field(default_factory=dict)
    realizations: dict = field(default_factory=dict)
    interactions: dict = field(default_factory=dict)
    families: dict = field(default_factory=dict)
    provenance: dict = field(default_factory=dict)
    # name of the interaction used by each family
    family_interaction: dict = field(default_factory=dict)

    def add_motor(self, c) -> str:
        have = self.categories.get(c.name)
        if have is not None and have != c:
            raise DocumentError(f"two different motors named {c.name}")
        self.categories[c.name] = c
        return c.name

    def add_open_dynamics(self, name: str, a: OpenDynamics) -> str:
        if name in self.open_dynamics and self.open_dynamics[name] is not a:
            if self.open_dynamics[name] != a:
                raise DocumentError(f"two different open dynamics named {name}")
        self.add_motor(a.motor)
        self.dynamics[name] = a.dyn
        self.clocks[name] = a.clock
        self.open_dynamics[name] = a
        return name

    def add_family(self, name: str, f: InteractiveFamily,
                   component_names: Optional[Mapping[str, str]] = None) -> str:
        names = dict(component_names or {i: f"{name}.{i}" for i in f.index})
        for i in f.index:
            self.add_open_dynamics(names[i], f.components[i])
        self.interactions[name] = (f.interaction, names)
        self.families[name] = (f, names)
        self.family_interaction[name] = name
        return name

    def family(self, name: str) -> InteractiveFamily:
        if name not in self.families:
            raise DocumentError(f"no family named {name}")
        return self.families[name][0]

    def open_dynamic(self, name: str) -> OpenDynamics:
        if name not in self.open_dynamics:
            raise DocumentError(f"no open dynamics named {name}")
        return self.open_dynamics[name]

    def to_obj(self) -> dict:
        out: dict = {
            "categories": {n: encode_motor(c) for n, c in self.categories.items()},
            "dynamics": {n: encode_dynamics(d) for n, d in self.dynamics.items()},
            "clocks": {n: encode_clock(c) for n, c in self.clocks.items()},
            "open_dynamics": {},
            "interactions": {},
            "families": {},
        }
        for n, a in self.open_dynamics.items():
            dname = _name_of(self.dynamics, a.dyn, n)
            cname = _name_of(self.clocks, a.clock, n)
            out["open_dynamics"][n] = {
                "dynamics": dname,
                "clock": cname,
                "scansion": sorted([s, t] for s, t in a.scansion.items()),
            }
        for n, (r, names) in self.interactions.items():
            out["interactions"][n] = encode_relation(r, names)
        for n, (f, names) in self.families.items():
            out["families"][n] = {
                "index": list(f.index),
                "components": {i: names[i] for i in f.index},
                "interaction": self.family_interaction[n],
                "chief": f.chief,
                "syncs": {i: encode_sync(s) for i, s in f.syncs.items()},
            }
        if self.realizations:
            out["realizations"] = {
                n: sorted((encode_realization(r) for r in rs), key=canonical_json)
                for n, rs in self.realizations.items()}
        if self.provenance:
            out["provenance"] = self.provenance
        return out

    def dumps(self) -> str:
        return canonical_json(self.to_obj()) + "\n"


def _name_of(registry: Mapping, obj, default: str) -> str:
    if default in registry and registry[default] is obj:
        return default
    for n, v in registry.items():
        if v is obj:
            return n
    return default


def _req(obj: Mapping, key: str, where: str):
    if not isinstance(obj, Mapping) or key not in obj:
        raise DocumentError(f"{where}: missing key {key!r}")
    return obj[key]


def _pairs(rows, where: str) -> list[tuple[str, str]]:
    out = []
    for r in rows:
        if not (isinstance(r, list) and len(r) == 2 and all(isinstance(x, str) for x in r)):
            raise DocumentError(f"{where}: expected [string, string] pairs")
        out.append((r[0], r[1]))
    return out


def decode_motor(name: str, obj: Mapping):
    where = f"categories.{name}"
    objects = _req(obj, "objects", where)
    arrows = {}
    for row in _req(obj, "arrows", where):
        if not (isinstance(row, list) and len(row) == 3):
            raise DocumentError(f"{where}: arrows must be [id, dom, cod]")
        arrows[row[0]] = Arrow(*row)
    if obj.get("kind", "category") == "graph":
        return DirectedGraph(name, objects, arrows)
    compose = {}
    for row in _req(obj, "compose", where):
        if not (isinstance(row, list) and len(row) == 3):
            raise DocumentError(f"{where}: compose entries must be [g, f, g∘f]")
        compose[(row[0], row[1])] = row[2]
    return FiniteCategory(name, objects, arrows, dict(_req(obj, "identities", where)), compose)


def loads(text: str) -> Document:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise DocumentError(f"malformed JSON: {e}") from e
    if not isinstance(raw, dict):
        raise DocumentError("document must be a JSON object")
    try:
        return _decode(raw)
    except (AttributeError, TypeError, ValueError, KeyError) as e:
        raise DocumentError(f"badly shaped document: {e!r}") from e


def _decode(raw: dict) -> Document:
    unknown = set(raw) - set(KEYS)
    if unknown:
        raise DocumentError(f"unknown top-level key {sorted(unknown)[0]!r}")
    doc = Document()
    for n, c in raw.get("categories", {}).items():
        doc.categories[n] = decode_motor(n, c)

    def motor(ref: str, where: str):
        if ref not in doc.categories:
            raise DocumentError(f"{where}: unknown motor {ref!r}")
        return doc.categories[ref]

    for n, d in raw.get("dynamics", {}).items():
        where = f"dynamics.{n}"
        m = motor(_req(d, "motor", where), where)
        trans: dict = {}
        for row in _req(d, "transitions", where):
            if not (isinstance(row, list) and len(row) == 4 and isinstance(row[3], list)):
                raise DocumentError(f"{where}: transitions must be [arrow, param, state, [images]]")
            trans.setdefault((row[0], row[1]), {}).setdefault(row[2], set()).update(row[3])
        doc.dynamics[n] = MultiDynamics(m, tuple(_req(d, "params", where)),
                                        {o: frozenset(v) for o, v in _req(d, "states", where).items()},
                                        trans)
    for n, c in raw.get("clocks", {}).items():
        where = f"clocks.{n}"
        m = motor(_req(c, "motor", where), where)
        action: dict = {}
        for row in _req(c, "action", where):
            if not (isinstance(row, list) and len(row) == 3):
                raise DocumentError(f"{where}: action entries must be [arrow, instant, instant]")
            action.setdefault(row[0], {})[row[1]] = row[2]
        doc.clocks[n] = Clock(m, {o: frozenset(v) for o, v in _req(c, "instants", where).items()},
                              action)
    for n, a in raw.get("open_dynamics", {}).items():
        where = f"open_dynamics.{n}"
        dn, cn = _req(a, "dynamics", where), _req(a, "clock", where)
        if dn not in doc.dynamics:
            raise DocumentError(f"{where}: unknown dynamics {dn!r}")
        if cn not in doc.clocks:
            raise DocumentError(f"{where}: unknown clock {cn!r}")
        doc.open_dynamics[n] = OpenDynamics(doc.dynamics[dn], doc.clocks[cn],
                                            dict(_pairs(_req(a, "scansion", where), where)))
    for n, rs in raw.get("realizations", {}).items():
        if n not in doc.open_dynamics:
            raise DocumentError(f"realizations.{n}: unknown open dynamics")
        doc.realizations[n] = [
            Realization(_req(r, "param", f"realizations.{n}"),
                        tuple(_pairs(_req(r, "assignment", f"realizations.{n}"), n)))
            for r in rs]
    for n, r in raw.get("interactions", {}).items():
        where = f"interactions.{n}"
        index = tuple(_req(r, "index", where))
        names = dict(_req(r, "components", where))
        if set(names) != set(index):
            raise DocumentError(f"{where}: components do not match the index")
        comps = {}
        for i in index:
            if names[i] not in doc.open_dynamics:
                raise DocumentError(f"{where}: unknown open dynamics {names[i]!r}")
            comps[i] = doc.open_dynamics[names[i]]
        rows = set()
        for t in _req(r, "tuples", where):
            if not isinstance(t, Mapping) or set(t) != set(index):
                raise DocumentError(f"{where}: each tuple needs exactly one entry per index")
            rows.add(tuple((_req(t[i], "param", where),
                            tuple(_pairs(_req(t[i], "realization", where), where)))
                           for i in index))
        doc.interactions[n] = (Relation(index, comps, frozenset(rows)), names)
    for n, fam in raw.get("families", {}).items():
        where = f"families.{n}"
        index = tuple(_req(fam, "index", where))
        names = dict(_req(fam, "components", where))
        if set(names) != set(index):
            raise DocumentError(f"{where}: components do not match the index")
        iname = _req(fam, "interaction", where)
        if iname not in doc.interactions:
            raise DocumentError(f"{where}: unknown interaction {iname!r}")
        rel, rnames = doc.interactions[iname]
        if rnames != names or rel.index != index:
            raise DocumentError(f"{where}: interaction {iname!r} is over different components")
        syncs = {}
        for i, s in _req(fam, "syncs", where).items():
            syncs[i] = Synchronization(dict(_req(s, "objects", where)),
                                       dict(_req(s, "instants", where)),
                                       dict(s["arrows"]) if "arrows" in s else None)
        comps = {i: doc.open_dynamics[names[i]] for i in index}
        doc.families[n] = (InteractiveFamily(index, comps, rel, _req(fam, "chief", where), syncs),
                           names)
        doc.family_interaction[n] = iname
    prov = raw.get("provenance", {})
    if not isinstance(prov, Mapping):
        raise DocumentError("provenance must be an object")
    doc.provenance = dict(prov)
    return doc


def load(path: str) -> Document:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise DocumentError(f"cannot read {path}: {e}") from e
    return loads(text)


def validate_document(doc: Document) -> ValidationReport:
    report = ValidationReport()
    for n, c in sorted(doc.categories.items()):
        if isinstance(c, FiniteCategory):
            report.extend(validate_category(c), f"category {n}: ")
        else:
            report.extend(c.validate(), f"graph {n}: ")
    for n, d in sorted(doc.dynamics.items()):
        report.extend(validate_dynamics(d), f"dynamics {n}: ")
    for n, c in sorted(doc.clocks.items()):
        report.extend(validate_clock(c), f"clock {n}: ")
    if not report.ok:
        return report
    for n, a in sorted(doc.open_dynamics.items()):
        report.extend(validate_open_dynamics(a), f"open dynamics {n}: ")
    if not report.ok:
        return report
    for n, rs in sorted(doc.realizations.items()):
        a = doc.open_dynamics[n]
        for r in rs:
            if r.param not in a.params:
                report.add(f"realizations {n}: unknown parameter {r.param}")
            elif not is_realization(a, r):
                report.add(f"realizations {n}: {list(r.assignment)} is not a realization")
    used = set(doc.family_interaction.values())
    for n, (r, _) in sorted(doc.interactions.items()):
        if n in used:
            continue  # reported through the family
        for msg in relation_issues(r):
            report.add(f"interaction {n}: {msg}")
        if r.tuples and coherent_part(r) != r:
            report.add(f"interaction {n}: some tuple is not coherent")
    for n, (f, _) in sorted(doc.families.items()):
        report.extend(validate_family(f), f"family {n}: ")
    return report


def generated_document(name: str, g, family_name: str, family_digest: str) -> Document:
    """A document holding one generated open dynamics and where it came from."""
    doc = Document()
    doc.add_open_dynamics(name, g.result)
    prov = dict(g.provenance)
    prov["family"] = family_name
    prov["family_hash"] = family_digest
    prov["dynamic"] = name
    prov["params"] = {p: [list(m) for m in members] for p, members in g.param_tuples.items()}
    doc.provenance = prov
    return doc
