"""Command-line front end.

Exit codes: 0 success, 1 bad input or failed validation, 2 property or check failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from . import checks
from .corpus import EXAMPLES, example_document
from .dynamics import ALL, classify, is_subfunctorial
from .errors import DocumentError, FamilyInvalid, LimitExceeded, SubdynError
from .generate import generate
from .interact import (coherent_part, global_connectivity, is_concrete, is_determining,
                       is_filtering, is_normal, is_operant, null_interaction,
                       realization_connectivity, sorted_structure)
from .realize import enumerate_realizations
from .serialize import (Document, digest, generated_document, load,
                        validate_document)

OK, INPUT_ERROR, CHECK_FAILED = 0, 1, 2
MODES = ("p", "f", "s", "m", "heaps")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(INPUT_ERROR, f"{self.prog}: error: {message}\n")


def _fail(msg: str, code: int = INPUT_ERROR) -> int:
    print(f"error: {msg}", file=sys.stderr)
    return code


def _write(text: str, out: Optional[str]) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def _load_valid(path: str) -> Document:
    doc = load(path)
    rep = validate_document(doc)
    if not rep.ok:
        raise DocumentError(str(rep))
    return doc


def _pick(registry: dict, name: Optional[str], what: str) -> str:
    if name is not None:
        if name not in registry:
            raise DocumentError(f"no {what} named {name}")
        return name
    if len(registry) != 1:
        raise DocumentError(f"document holds {len(registry)} {what}s; name one")
    return next(iter(registry))


def cmd_validate(args) -> int:
    doc = load(args.path)
    rep = validate_document(doc)
    if rep.ok:
        print("ok")
        return OK
    print(str(rep))
    return INPUT_ERROR


def cmd_classify(args) -> int:
    doc = _load_valid(args.path)
    name = _pick(doc.open_dynamics, args.dynamic, "open dynamics")
    print(str(classify(doc.open_dynamics[name])))
    return OK


def _show_realization(r) -> str:
    body = " ".join(f"{t}={s}" for t, s in r.assignment) if r.assignment else "∅"
    return f"{r.param}\t{body}"


def cmd_realizations(args) -> int:
    doc = _load_valid(args.path)
    name = _pick(doc.open_dynamics, args.dynamic, "open dynamics")
    a = doc.open_dynamics[name]
    if args.param is not None and args.param not in a.params:
        return _fail(f"unknown parameter {args.param}")
    lam = args.param if args.param is not None else ALL
    try:
        rs = enumerate_realizations(a, lam, limit=args.limit)
    except LimitExceeded as e:
        return _fail(str(e), CHECK_FAILED)
    n_inst = len(a.clock.all_instants())
    for r in rs:
        print(_show_realization(r))
    full = sum(1 for r in rs if len(r.assignment) == n_inst)
    print(f"# {len(rs)} realizations, {full} with full domain")
    return OK


def interaction_report(r) -> dict:
    cp = coherent_part(r)
    return {
        "tuples": len(r),
        "coherent_part": len(cp) if cp is not None else 0,
        "filtering": is_filtering(r),
        "operant": is_operant(r),
        "normal": is_normal(r),
        "determining": is_determining(r),
        "concrete": is_concrete(r),
        "connectivity": {
            "global": sorted_structure(global_connectivity(r)),
            "realizations": sorted_structure(realization_connectivity(r)),
        },
    }


def cmd_interaction_report(args) -> int:
    doc = _load_valid(args.path)
    name = _pick(doc.families, args.family, "family")
    f = doc.family(name)
    r = null_interaction(f.index, f.components) if args.null else f.interaction
    rep = {"family": name, "interaction": "null" if args.null else doc.family_interaction[name]}
    rep.update(interaction_report(r))
    print(json.dumps(rep, sort_keys=True, ensure_ascii=False, indent=2))
    return OK


def _read_heaps(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            obj = json.load(fh)
    except (OSError, json.JSONDecodeError) as e:
        raise DocumentError(f"cannot read heaps file {path}: {e}") from e
    if not isinstance(obj, dict) or not all(isinstance(v, list) for v in obj.values()):
        raise DocumentError("heaps file must map each index to a list of parameters")
    return obj


def cmd_generate(args) -> int:
    if args.mode not in MODES:
        return _fail(f"unknown mode {args.mode!r}; expected one of {', '.join(MODES)}")
    if args.mode == "heaps" and args.heaps is None:
        return _fail("mode heaps needs --heaps FILE")
    doc = _load_valid(args.path)
    name = _pick(doc.families, args.family, "family")
    f = doc.family(name)
    heaps = _read_heaps(args.heaps) if args.heaps else None
    if heaps is not None:
        unknown = sorted(set(heaps) - set(f.index))
        if unknown:
            return _fail(f"heaps name unknown index {unknown[0]}")
    g = generate(f, args.mode, heaps)
    out_name = args.name or f"{name}[{args.mode}]"
    gdoc = generated_document(out_name, g, name, digest(doc.to_obj()))
    _write(gdoc.dumps(), args.out)
    return OK


def _check_document(path: str) -> checks.SuiteResult:
    from .generate import generate_primary
    doc = _load_valid(path)
    res = checks.SuiteResult(f"document {path}")
    for n, a in sorted(doc.open_dynamics.items()):
        res.cases += 1
        v = is_subfunctorial(a.dyn)
        if not v:
            res.failures.append((n, str(v.witness)))
    for n, (f, _) in sorted(doc.families.items()):
        res.cases += 1
        v = is_subfunctorial(generate_primary(f).result.dyn)
        if not v:
            res.failures.append((n, str(v.witness)))
    return res


def cmd_check(args) -> int:
    results = []
    if args.path is not None:
        results.append(_check_document(args.path))
    suites = [args.suite] if args.suite else ([] if args.path else sorted(checks.SUITES))
    for s in suites:
        results.append(checks.SUITES[s](args.seed, args.cases, inject_fault=args.inject_fault))
    code = OK
    for r in results:
        print(r.summary())
        for case, witness in r.failures[:5]:
            print(f"  case {case}: {witness}")
        if not r.ok:
            code = CHECK_FAILED
    return code


def cmd_examples(args) -> int:
    if args.action == "list":
        for n in sorted(EXAMPLES):
            print(n)
        return OK
    if args.name is None:
        return _fail("examples emit needs a NAME")
    if args.name not in EXAMPLES:
        return _fail(f"unknown example {args.name}; try: {', '.join(sorted(EXAMPLES))}")
    _write(example_document(args.name).dumps(), args.out)
    return OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="subdyn", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("validate", help="run every structural validator on a document")
    s.add_argument("path")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("classify", help="print the classification tag of an open dynamics")
    s.add_argument("path")
    s.add_argument("--dynamic")
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("realizations", help="list realizations in canonical order")
    s.add_argument("path")
    s.add_argument("--dynamic")
    s.add_argument("--param")
    s.add_argument("--limit", type=int)
    s.set_defaults(func=cmd_realizations)

    s = sub.add_parser("interaction-report", help="taxonomy flags and connectivity of a family")
    s.add_argument("path")
    s.add_argument("--family")
    s.add_argument("--null", action="store_true", help="report on the null interaction instead")
    s.set_defaults(func=cmd_interaction_report)

    s = sub.add_parser("generate", help="write the dynamics generated by a family")
    s.add_argument("path")
    s.add_argument("--family")
    s.add_argument("--mode", required=True)
    s.add_argument("--heaps")
    s.add_argument("--name", help="name of the generated open dynamics")
    s.add_argument("--out")
    s.set_defaults(func=cmd_generate)

    s = sub.add_parser("check", help="seeded property suites, optionally on a document")
    s.add_argument("path", nargs="?")
    s.add_argument("--suite", choices=sorted(checks.SUITES))
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--cases", type=int, default=100)
    s.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("examples", help="list or emit corpus examples")
    s.add_argument("action", choices=("list", "emit"))
    s.add_argument("name", nargs="?")
    s.add_argument("--out")
    s.set_defaults(func=cmd_examples)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except LimitExceeded as e:
        return _fail(str(e), CHECK_FAILED)
    except FamilyInvalid as e:
        return _fail(f"invalid family:\n{e.report}")
    except (DocumentError, SubdynError, ValueError) as e:
        return _fail(str(e))


if __name__ == "__main__":
    sys.exit(main())
