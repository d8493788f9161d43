"""Command-line scenario runner.

    fieldgeom TASK --spec SCENARIO.json [--seed N] [--out REPORT.json]
    fieldgeom selftest [--seed N] [--scale smoke|full] [--out REPORT.json]

A scenario is a JSON object holding an ``extension`` block (``nvars``,
``k_vars``, optional ``labels``) and task-specific inputs written in the
expression grammar. The report echoes the inputs and the seed and lists the
results. Exit codes: 0 ok, 1 selftest failure, 2 parse error,
3 precondition violation, 4 internal error.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
import time
from fractions import Fraction
from typing import Any, Dict

from . import selftest as _selftest
from .configurations import build_psi_instance, j_map, j_membership, mult_construct, psi_check, q_membership, q_tuple
from .exact import ExprSyntaxError
from .logic import FormulaSyntaxError, Tower, evaluate, parse_formula, prop31_witness, thm32_harness
from .planes import (
    DegenerateConfiguration,
    DesarguesConfig,
    PlaneAnchor,
    ProjPoint,
    collinear,
    coordinatization_check,
    desargues_result,
    plane_point,
    random_desargues_config,
)
from .points import point_of
from .pregeometry import ExtensionSpec, PreconditionError, basis_of, in_closure, trdeg
from .reconstruction import (
    AnchorMismatch,
    SubstitutionMap,
    affine_map,
    dependent_point_recovery,
    identity_map,
    mobius_map,
    permutation_map,
    recover_field_map,
)

TASKS = ("rank", "closure", "plane", "desargues", "config", "reconstruct", "logic", "selftest")

EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_PRE, EXIT_INTERNAL = 0, 1, 2, 3, 4


class ScenarioError(ValueError):
    """Malformed scenario document."""


def _need(doc: Dict[str, Any], key: str):
    if key not in doc:
        raise ScenarioError(f"scenario is missing {key!r}")
    return doc[key]


def load_extension(doc: Dict[str, Any]) -> ExtensionSpec:
    ext = doc.get("extension", doc.get("spec"))
    if not isinstance(ext, dict):
        raise ScenarioError("scenario needs an 'extension' object with 'nvars'")
    try:
        return ExtensionSpec(int(ext["nvars"]), frozenset(ext.get("k_vars", ())), tuple(ext.get("labels", ())))
    except (KeyError, TypeError, ValueError) as exc:
        raise ScenarioError(f"bad extension block: {exc}") from exc


def _elems(spec, texts):
    if not isinstance(texts, list):
        raise ScenarioError("expected a list of expressions")
    return [spec.parse(str(t)) for t in texts]


def _vec(v):
    if not isinstance(v, (list, tuple)) or len(v) != 3:
        raise ScenarioError(f"expected a 3-vector, got {v!r}")
    return tuple(Fraction(str(c)) for c in v)


def _q(x: Fraction) -> str:
    return str(x)


# -- tasks -------------------------------------------------------------------------

def task_rank(doc, rng):
    spec = load_extension(doc)
    xs = _elems(spec, _need(doc, "elems"))
    basis = basis_of(spec, xs)
    return {"rank": trdeg(spec, xs), "basis": [spec.fmt(b) for b in basis], "independent": len(basis) == len(xs)}


def task_closure(doc, rng):
    spec = load_extension(doc)
    queries = doc.get("queries") or [{"y": _need(doc, "y"), "xs": _need(doc, "xs")}]
    out = []
    for q in queries:
        y = spec.parse(str(_need(q, "y")))
        xs = _elems(spec, _need(q, "xs"))
        out.append({"y": spec.fmt(y), "xs": [spec.fmt(x) for x in xs], "in_closure": in_closure(spec, y, xs)})
    return {"queries": out}


def task_plane(doc, rng):
    spec = load_extension(doc)
    x, y, z = _elems(spec, _need(doc, "anchor"))
    anchor = PlaneAnchor(spec, x, y, z, doc.get("mode", "additive"))
    triples = _need(doc, "triples")
    if len(triples) % 3:
        raise ScenarioError("'triples' must hold coefficient vectors in groups of three")
    groups = [triples[i:i + 3] for i in range(0, len(triples), 3)]
    out = []
    for g in groups:
        vs = [_vec(v) for v in g]
        pts = [plane_point(anchor, v) for v in vs]
        out.append({
            "vectors": [[_q(c) for c in v] for v in vs],
            "points": [spec.fmt(p.rep) for p in pts],
            "collinear": collinear(*pts),
            "coordinatization_ok": coordinatization_check(anchor, vs),
        })
    return {"mode": anchor.mode, "groups": out}


def _pp(v):
    return ProjPoint(_vec(v))


def task_desargues(doc, rng):
    if doc.get("random"):
        cfg = random_desargues_config(rng)
    else:
        cfg = DesarguesConfig(_pp(_need(doc, "center")), tuple(_pp(v) for v in _need(doc, "tri1")),
                              tuple(_pp(v) for v in _need(doc, "tri2")))
    anchor = None
    if "anchor" in doc:
        spec = load_extension(doc)
        anchor = PlaneAnchor(spec, *_elems(spec, doc["anchor"]))
    res = desargues_result(cfg, anchor)
    return {
        "center": [_q(c) for c in cfg.center.coords],
        "tri1": [[_q(c) for c in p.coords] for p in cfg.tri1],
        "tri2": [[_q(c) for c in p.coords] for p in cfg.tri2],
        "holds": res.holds,
        "axis_points": [[_q(c) for c in p.coords] for p in res.axis_points],
        "lifted": res.lifted,
    }


def task_config(doc, rng):
    spec = load_extension(doc)
    kind = _need(doc, "kind")
    if kind == "j":
        x, a = _elems(spec, [_need(doc, "x"), _need(doc, "a")])
        jt = j_map(spec, x, a)
        jm = j_membership(jt, (x, a))
        return {"points": [repr(p) for p in jt.points], "witness_path": jm.witness_path,
                "decomposition_path": jm.decomposition_path, "agree": jm.agree}
    if kind == "q":
        x, y = _elems(spec, [_need(doc, "x"), _need(doc, "y")])
        return {"points": [repr(p) for p in q_tuple(spec, x, y)], "member": q_membership(q_tuple(spec, x, y), (x, y))}
    if kind == "mult":
        x, y = _elems(spec, [_need(doc, "x"), _need(doc, "y")])
        E = mult_construct(point_of(spec, x), point_of(spec, y), point_of(spec, x / y), x, y)
        return {"product_point": repr(E), "equals_point_of_product": E == point_of(spec, x * y)}
    if kind == "psi":
        a, b, c, d, x = _elems(spec, [_need(doc, k) for k in ("a", "b", "c", "d", "x")])
        inst = build_psi_instance(spec, a, b, c, d, x)
        rep = psi_check(inst, rng, samples=int(doc.get("samples", 8)))
        return {"slots": {k: repr(v) for k, v in inst.points.items()}, "results": rep.results,
                "passed": rep.passed}
    raise ScenarioError(f"unknown config kind {kind!r}")


def _automorphism(spec, desc) -> SubstitutionMap:
    if desc == "identity":
        return identity_map(spec)
    if not isinstance(desc, dict) or len(desc) != 1:
        raise ScenarioError("automorphism must be one of {swap|perm|affine|mobius|identity|images}")
    (k, v), = desc.items()
    if k == "swap":
        i, j = (int(u) for u in v)
        return permutation_map(spec, {i: j, j: i})
    if k == "perm":
        return permutation_map(spec, {int(a): int(b) for a, b in v.items()})
    if k == "affine":
        i, alpha, beta = v
        return affine_map(spec, int(i), Fraction(str(alpha)), Fraction(str(beta)))
    if k == "mobius":
        i, *coef = v
        return mobius_map(spec, int(i), *(Fraction(str(c)) for c in coef))
    if k == "identity":
        return identity_map(spec)
    if k == "images":
        return SubstitutionMap(spec, _elems(spec, v), "images")
    raise ScenarioError(f"unknown automorphism {k!r}")


def task_reconstruct(doc, rng):
    spec = load_extension(doc)
    F = _automorphism(spec, _need(doc, "automorphism"))
    anchor = spec.parse(str(doc["anchor"])) if "anchor" in doc else None
    base = spec.parse(str(doc["base"])) if "base" in doc else None
    rec = recover_field_map(F, anchor, base)
    samples = _elems(spec, _need(doc, "samples"))
    images = [rec(x) for x in samples]
    out = {
        "automorphism": F.name,
        "anchor": spec.fmt(rec.anchor),
        "base": spec.fmt(rec.base),
        "scale": spec.fmt(rec.scale),
        "recovered": [spec.fmt(y) for y in images],
        "matches_substitution": [y == F.field_map(x) for x, y in zip(samples, images)],
    }
    dep = doc.get("dependent", [])
    if dep:
        pts = [dependent_point_recovery(rec, a) for a in _elems(spec, dep)]
        out["dependent_points"] = [repr(p) for p in pts]
    return out


def task_logic(doc, rng):
    spec = load_extension(doc)
    formulas = [parse_formula(str(t), spec) for t in _need(doc, "formulas")]
    if "tower" in doc:
        tw = doc["tower"]
        spec2 = load_extension({"extension": _need(tw, "extension")})
        images = tuple(_elems(spec2, tw["images"])) if "images" in tw else ()
        rep = thm32_harness(Tower(spec, spec2, images), formulas, pools=bool(doc.get("pools", False)))
        return rep.to_dict()
    assign = {k: spec.parse(str(v)) for k, v in doc.get("assignment", {}).items()}
    out = {"values": [evaluate(spec, f, assign) for f in formulas]}
    if "flats" in doc:
        out["witness_outside_flats"] = spec.fmt(prop31_witness(spec, [tuple(int(v) for v in f) for f in doc["flats"]]))
    return out


TASK_FUNCS = {
    "rank": task_rank,
    "closure": task_closure,
    "plane": task_plane,
    "desargues": task_desargues,
    "config": task_config,
    "reconstruct": task_reconstruct,
    "logic": task_logic,
}


def run_scenario(doc: Dict[str, Any], seed: int | None = None, task: str | None = None, timings: bool = False) -> Dict[str, Any]:
    """Run one scenario document and return its report; an explicit ``seed`` overrides the document's."""
    if not isinstance(doc, dict):
        raise ScenarioError("scenario must be a JSON object")
    task = task or _need(doc, "task")
    if doc.get("task", task) != task:
        raise ScenarioError(f"scenario task {doc.get('task')!r} does not match subcommand {task!r}")
    if task not in TASK_FUNCS:
        raise ScenarioError(f"unknown task {task!r}")
    if seed is None:
        seed = int(doc.get("seed", 0))
    t0 = time.perf_counter()
    results = TASK_FUNCS[task](doc, random.Random(seed))
    report = {"task": task, "seed": seed, "inputs": doc, "results": results}
    if timings:
        report["seconds"] = round(time.perf_counter() - t0, 4)
    return report


def _dump(report, out):
    text = json.dumps(report, sort_keys=True, indent=2, default=str) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fieldgeom", description="Combinatorial geometries of rational function fields.")
    p.add_argument("task", choices=TASKS)
    p.add_argument("--spec", help="scenario file (JSON)")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", help="write the report here instead of stdout")
    p.add_argument("--scale", choices=_selftest.SCALES, default="smoke", help="selftest size")
    p.add_argument("--timings", action="store_true", help="include wall-clock timings in the report")
    p.add_argument("--inject-fault", metavar="FAMILY", default=None,
                   help="selftest debug hook: flip the first answer of FAMILY")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.task == "selftest":
        try:
            rep = _selftest.run_selftest(args.seed if args.seed is not None else 1, args.scale,
                                         fault=args.inject_fault, timings=args.timings)
        except ValueError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_PARSE
        for line in _selftest.summary_lines(rep):
            print(line)
        if args.out:
            with open(args.out, "w") as fh:
                fh.write(_selftest.dumps(rep))
        return EXIT_OK if rep["passed"] else EXIT_FAIL
    if not args.spec:
        print("error: --spec SCENARIO is required for this task", file=sys.stderr)
        return EXIT_PARSE
    try:
        with open(args.spec) as fh:
            doc = json.load(fh)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except json.JSONDecodeError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    try:
        report = run_scenario(doc, args.seed, args.task, args.timings)
    except (ScenarioError, ExprSyntaxError, FormulaSyntaxError) as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (PreconditionError, DegenerateConfiguration, AnchorMismatch) as exc:
        print(f"precondition violated: {exc}", file=sys.stderr)
        return EXIT_PRE
    except Exception as exc:  # anything else is a bug or a failed internal check
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    _dump(report, args.out)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
