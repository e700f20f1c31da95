"""Finite constructions of the reference examples.

Continuous time becomes an interval poset with one instant per object
(the essential clock), Lipschitz bands become integer bands, and function
spaces become finite sets of integer-valued partial functions.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import product
from typing import Iterable, Mapping, Optional

from .dynamics import (MultiDynamics, OpenDynamics, build_essential_clock_singleton,
                       build_existential_clock)
from .families import InteractiveFamily, Synchronization
from .fincat import build_diamond_category, build_interval_poset, interval_arrow, point_category
from .interact import Interaction, context
from .realize import nonempty_realizations

MONO = "*"


@dataclass(frozen=True)
class GridParams:
    n: int
    B: int

    def __post_init__(self):
        if self.n < 1 or self.B < 1:
            raise ValueError("grid needs n >= 1 and B >= 1")

    @property
    def values(self) -> range:
        return range(-self.B, self.B + 1)


def _open(motor, params, states, trans, clock=None) -> OpenDynamics:
    clock = clock or build_essential_clock_singleton(motor)
    d = MultiDynamics(motor, params, states, trans)
    scansion = {}
    for o, ss in d.states.items():
        (t,) = clock.instants[o]
        for s in ss:
            scansion[s] = t
    return OpenDynamics(d, clock, scansion)


def build_diamond_open_dynamics() -> OpenDynamics:
    c = build_diamond_category()
    states = {"S": {"s", "s'"}, "U": {"u", "u'"}, "V": {"v"}, "T": {"t", "t'"}}
    table = {
        "SU": {"s": "u", "s'": "u'"},
        "SV": {"s": "v", "s'": "v"},
        "UT": {"u": "t", "u'": "t'"},
        "VT": {"v": "t"},
        "SUT": {"s": "t", "s'": "t'"},
        "SVT": {"s": "t", "s'": "t"},
    }
    for o, ss in states.items():
        table[c.identities[o]] = {x: x for x in ss}
    trans = {(a, MONO): {x: {y} for x, y in m.items()} for a, m in table.items()}
    return _open(c, (MONO,), states, trans)


def build_two_branch_line(N: int) -> OpenDynamics:
    """Main line r_t over -N..N plus a detached branch b_t over 0..N."""
    if N < 1:
        raise ValueError("N must be at least 1")
    c = build_interval_poset(2 * N, start=-N)
    times = range(-N, N + 1)
    states = {str(t): {f"r{t}"} | ({f"b{t}"} if t >= 0 else set()) for t in times}
    trans = {}
    for i in times:
        for j in times:
            if i > j:
                continue
            m = {f"r{i}": {f"r{j}"}}
            if i >= 0:
                m[f"b{i}"] = {f"b{j}"}
            trans[(interval_arrow(i, j), MONO)] = m
    return _open(c, (MONO,), states, trans)


def grid_state(t: int, a: int) -> str:
    return f"{t}:{a}"


def build_grid_source(g: GridParams) -> OpenDynamics:
    """States t:a; the arrow i->j reaches every value within distance j-i."""
    c = build_interval_poset(g.n)
    states = {str(t): {grid_state(t, a) for a in g.values} for t in range(g.n + 1)}
    trans = {}
    for i in range(g.n + 1):
        for j in range(i, g.n + 1):
            d = j - i
            trans[(interval_arrow(i, j), MONO)] = {
                grid_state(i, a): {grid_state(j, b) for b in g.values if abs(b - a) <= d}
                for a in g.values
            }
    return _open(c, (MONO,), states, trans)


def _seq(values: Iterable[int]) -> str:
    return json.dumps(list(values), separators=(",", ":"))


def history_state(t: int, f: Iterable[int]) -> str:
    return f"{t}:{_seq(f)}"


def parse_history_state(s: str) -> tuple[int, list[int]]:
    t, f = s.split(":", 1)
    return int(t), json.loads(f)


def build_grid_history(g: GridParams) -> OpenDynamics:
    """States (t, f) with f the record on instants 1..t-1; parameters are future sequences.

    The parameter γ on 1..m extends a record from t to t+d by γ on t..t+d-1,
    when γ is defined there; otherwise the image is empty.
    """
    c = build_interval_poset(g.n - 1, start=1)
    times = range(1, g.n + 1)
    vals = list(g.values)
    records = {t: [list(f) for f in product(vals, repeat=t - 1)] for t in times}
    states = {str(t): {history_state(t, f) for f in records[t]} for t in times}
    params = [_seq(gam) for m in range(g.n + 1) for gam in product(vals, repeat=m)]
    trans = {}
    for p in params:
        gam = json.loads(p)
        for i in times:
            for j in times:
                if i > j:
                    continue
                m = {}
                if i == j or j - 1 <= len(gam):
                    ext = gam[i - 1:j - 1]
                    for f in records[i]:
                        m[history_state(i, f)] = {history_state(j, f + ext)}
                trans[(interval_arrow(i, j), p)] = m
    return _open(c, params, states, trans)


def encode_fn(f: Mapping[int, int]) -> str:
    return "{" + ",".join(f"{k}:{f[k]}" for k in sorted(f)) + "}"


def decode_fn(s: str) -> dict[int, int]:
    body = s.strip()[1:-1]
    if not body:
        return {}
    return {int(k): int(v) for k, v in (item.split(":") for item in body.split(","))}


def compatible_fns(f: Mapping[int, int], g: Mapping[int, int]) -> bool:
    return all(f[k] == g[k] for k in f.keys() & g.keys())


def interval_functions(lo: int, hi: int, values: Iterable[int]) -> list[dict[int, int]]:
    """Every function whose domain is an integer interval inside lo..hi (plus the empty one)."""
    vals = list(values)
    out: list[dict[int, int]] = [{}]
    for a in range(lo, hi + 1):
        for b in range(a, hi + 1):
            for vs in product(vals, repeat=b - a + 1):
                out.append(dict(zip(range(a, b + 1), vs)))
    return out


def build_grid_timeless(fn_set: Iterable[Mapping[int, int]]) -> OpenDynamics:
    """Motor 1; the identity keeps f for the parameter ω exactly when they agree."""
    c = point_category()
    fns = {encode_fn(f): dict(f) for f in fn_set}
    idn = c.identities["•"]
    trans = {(idn, w): {f: ({f} if compatible_fns(fns[w], fns[f]) else set()) for f in fns}
             for w in fns}
    return _open(c, tuple(fns), {"•": set(fns)}, trans, clock=build_existential_clock(c))


def _identity_sync(src, dst) -> Synchronization:
    objs = {o: o for o in src.motor.objects}
    instants = {t: t for t in src.clock.all_instants()}
    arrows = {a: a for a in src.motor.arrows}
    return Synchronization(objs, instants, arrows)


def _constant_sync(src, target_obj: str, target_instant: str, target_arrow: str):
    return Synchronization({o: target_obj for o in src.motor.objects},
                           {t: target_instant for t in src.clock.all_instants()},
                           {a: target_arrow for a in src.motor.arrows})


WHY_INDEX = ("W", "H", "Y")


def build_grid_why_family(g: GridParams, fn_set: Optional[Iterable[Mapping[int, int]]] = None
                          ) -> InteractiveFamily:
    """Timeless W, history H (chief) and source Y, with the recording interaction.

    A row pairs a source realization y with γ = y without instant 0, a history
    realization of γ whose final record is ω, and any w compatible with ω.
    """
    Y = build_grid_source(g)
    H = build_grid_history(g)
    if fn_set is None:
        fn_set = interval_functions(1, g.n - 1, g.values)
    W = build_grid_timeless(fn_set)
    comps = {"W": W, "H": H, "Y": Y}

    w_real = {f: (("Id_•", f),) for f in W.dyn.params}
    w_fns = {f: decode_fn(f) for f in W.dyn.params}
    # history realizations: γ -> list of (external, final record)
    h_real: dict[str, list] = {}
    for r in nonempty_realizations(H):
        _, rec = parse_history_state(max(r.assignment, key=lambda p: int(p[0]))[1])
        h_real.setdefault(r.param, []).append((r.assignment, rec))
    rows = set()
    for ry in nonempty_realizations(Y):
        seq = sorted((int(t), int(x.split(":")[1])) for t, x in ry.assignment)
        gamma = _seq(v for t, v in seq if t != 0)
        for hext, rec in h_real.get(gamma, ()):
            omega = encode_fn(dict(enumerate(rec, start=1)))
            if omega not in w_fns:
                continue
            for wf, wfn in w_fns.items():
                if compatible_fns(w_fns[omega], wfn):
                    rows.add(((omega, w_real[wf]), (gamma, hext), (MONO, ry.assignment)))
    R = Interaction(WHY_INDEX, comps, frozenset(rows))
    syncs = {"Y": _identity_sync(H, Y), "W": _constant_sync(H, "•", "Id_•", "Id_•")}
    return InteractiveFamily(WHY_INDEX, comps, R, "H", syncs)


def build_band_dynamics(n: int, width: int) -> OpenDynamics:
    """Values 0..width-1 at each instant 0..n; every arrow reaches every value."""
    c = build_interval_poset(n)
    vals = range(width)
    states = {str(t): {grid_state(t, a) for a in vals} for t in range(n + 1)}
    trans = {}
    for i in range(n + 1):
        for j in range(i, n + 1):
            full = {grid_state(j, b) for b in vals}
            trans[(interval_arrow(i, j), MONO)] = {
                grid_state(i, a): ({grid_state(j, a)} if i == j else full) for a in vals}
    return _open(c, (MONO,), states, trans)


def build_diagonal_family(n: int = 0, width: int = 2) -> InteractiveFamily:
    """Two copies of one mono-dynamics tied by equal realizations."""
    A = build_band_dynamics(n, width)
    B = build_band_dynamics(n, width)
    comps = {"1": A, "2": B}
    reals = context(A).externals
    rows = frozenset(((MONO, e), (MONO, e)) for e in reals)
    R = Interaction(("1", "2"), comps, rows)
    return InteractiveFamily(("1", "2"), comps, R, "1", {"2": _identity_sync(A, B)})


def _canonical_doc(name: str, a: OpenDynamics):
    from .generate import canonical_family
    from .serialize import Document
    doc = Document()
    doc.add_family(name, canonical_family(a), {"0": name})
    return doc


def _family_doc(name: str, f: InteractiveFamily):
    from .serialize import Document
    doc = Document()
    doc.add_family(name, f)
    return doc


def _small_fns():
    return interval_functions(1, 2, range(-1, 2))


EXAMPLES = {
    "diamond": lambda: _canonical_doc("diamond", build_diamond_open_dynamics()),
    "two-branch": lambda: _canonical_doc("two-branch", build_two_branch_line(3)),
    "grid-source": lambda: _canonical_doc("grid-source", build_grid_source(GridParams(3, 1))),
    "grid-history": lambda: _canonical_doc("grid-history", build_grid_history(GridParams(3, 1))),
    "grid-timeless": lambda: _canonical_doc("grid-timeless", build_grid_timeless(_small_fns())),
    "grid-why": lambda: _family_doc("grid-why", build_grid_why_family(GridParams(3, 1))),
    "diagonal": lambda: _family_doc("diagonal", build_diagonal_family()),
}
"""Each corpus example as a family-spec document; the family carries the example's name."""


def example_document(name: str):
    if name not in EXAMPLES:
        raise KeyError(name)
    return EXAMPLES[name]()
