"""Seeded self-test over every family of checks.

Each family draws its instances from one ``random.Random`` derived from the
run seed and the family name, so families are independent of each other and
of execution order. Reports hold outcomes only (no timings) and are
byte-identical for a fixed seed and scale.
"""
from __future__ import annotations

import json
import random
import time
import zlib
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional

from .configurations import (
    j_map,
    j_membership,
    mult_construct,
    q_membership,
    q_second_presentation,
    is_generic_pair,
)
from .exact import RatFunc
from .logic import Tower, counterexample_family, random_coordinate_formula, thm32_harness, prop31_witness
from .planes import (
    PlaneAnchor,
    coordinatization_check,
    desargues_check,
    maximality_probe,
    random_desargues_config,
)
from .points import GeoPoint, point_of
from .pregeometry import (
    ExtensionSpec,
    dependence_oracle_bruteforce,
    evaluate_annihilator,
    exchange_check,
    in_closure,
    is_independent,
    trdeg,
)
from .reconstruction import (
    J1Class,
    affine_map,
    dependent_point_recovery,
    identity_map,
    mobius_map,
    mu,
    permutation_map,
    ratio_add,
    ratio_mul,
    recover_field_map,
)

SCALES = ("smoke", "full")


# -- random elements ---------------------------------------------------------------

def random_poly(spec: ExtensionSpec, rng: random.Random, degree: int = 3, terms: int = 3, vars_=None) -> RatFunc:
    vs = list(vars_ or range(1, spec.nvars + 1))
    out = spec.const(rng.randint(-3, 3))
    for _ in range(rng.randint(1, terms)):
        m = spec.const(rng.choice([-3, -2, -1, 1, 2, 3]))
        for _ in range(rng.randint(1, degree)):
            m = m * spec.var(rng.choice(vs))
        out = out + m
    return out


def random_element(spec: ExtensionSpec, rng: random.Random, degree: int = 3, frac: float = 0.25, vars_=None) -> RatFunc:
    """A random polynomial of total degree <= ``degree``, sometimes divided by a small polynomial."""
    num = random_poly(spec, rng, degree, vars_=vars_)
    if rng.random() < frac:
        den = random_poly(spec, rng, 1, 2, vars_=vars_)
        if not den.is_zero():
            return num / den
    return num


def _transcendental(spec, rng, gen, tries=50):
    for _ in range(tries):
        x = gen()
        if trdeg(spec, [x]) == 1:
            return x
    raise RuntimeError("generator kept producing constants")


# -- bookkeeping -----------------------------------------------------------------

@dataclass
class FamilyResult:
    checks: int = 0
    failures: List[str] = field(default_factory=list)
    stats: Dict[str, int] = field(default_factory=dict)
    by_invariant: Dict[str, int] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.checks > 0 and not self.failures

    def to_dict(self):
        return {"checks": self.checks, "failed": len(self.failures), "failures": self.failures[:10],
                "passed": self.passed, "stats": dict(sorted(self.stats.items())),
                "by_invariant": dict(sorted(self.by_invariant.items()))}


class _Ctx:
    def __init__(self, name: str, fault: bool):
        self.res = FamilyResult()
        self.name = name
        self._fault = fault

    def check(self, invariant: str, ok: bool, detail: str = ""):
        if self._fault:
            ok = not ok  # debug hook: flip the first answer of this family
            self._fault = False
        self.res.checks += 1
        self.res.by_invariant[invariant] = self.res.by_invariant.get(invariant, 0) + 1
        if not ok:
            self.res.failures.append(f"{invariant}: {detail}" if detail else invariant)

    def count(self, key: str, k: int = 1):
        self.res.stats[key] = self.res.stats.get(key, 0) + k


def _rng(seed: int, family: str) -> random.Random:
    return random.Random(seed * 1_000_003 + zlib.crc32(family.encode()))


# -- families ------------------------------------------------------------------------

def fam_pregeometry(ctx: _Ctx, rng: random.Random, full: bool):
    n_ex = 500 if full else 60
    n_cl = 100 if full else 20
    for _ in range(n_ex):
        n = rng.randint(2, 6)
        spec = ExtensionSpec(n, frozenset(rng.sample(range(1, n + 1), rng.randint(0, 1))))
        A = [random_element(spec, rng) for _ in range(rng.randint(0, min(3, n - 1)))]
        y = random_element(spec, rng)
        # a built from A and y so the antecedent of exchange usually holds
        if A and rng.random() < 0.7:
            a = A[0] * y + y * rng.randint(1, 3)
        else:
            a = y * y + rng.randint(1, 5) if rng.random() < 0.5 else random_element(spec, rng)
        ant = in_closure(spec, a, A + [y]) and not in_closure(spec, a, A)
        ctx.count("exchange_nontrivial", int(ant))
        ctx.check("exchange", exchange_check(spec, a, y, A), f"A={A} a={a} y={y}")
    for _ in range(n_cl):
        n = rng.randint(2, 5)
        spec = ExtensionSpec(n)
        X = [random_element(spec, rng, 2) for _ in range(rng.randint(1, 3))]
        Z = [random_element(spec, rng, 2) for _ in range(rng.randint(1, 2))]
        y = X[0] * X[-1] + X[0] + rng.randint(1, 4)
        w = random_element(spec, rng, 2)
        ctx.check("extensive", all(in_closure(spec, x, X) for x in X), f"X={X}")
        ctx.check("monotone", (not in_closure(spec, w, X)) or in_closure(spec, w, X + Z), f"X={X} Z={Z} w={w}")
        ctx.check("monotone", in_closure(spec, y, X + Z), f"X={X} y={y}")
        z = y * y - X[0]
        ctx.check("idempotent", in_closure(spec, z, X + [y]) and in_closure(spec, z, X), f"X={X} z={z}")
        ctx.check("rank_bound", trdeg(spec, X + Z) <= min(len(X + Z), spec.trdeg_L), f"X={X}")


def _oracle_instance(rng: random.Random):
    n = rng.randint(2, 3)
    spec = ExtensionSpec(n)
    kind = rng.random()
    if kind < 0.4:
        # triangular change of variables: independent
        k = rng.randint(1, n)
        xs = []
        for i in range(1, k + 1):
            rest = list(range(i + 1, n + 1))
            x = spec.var(i) * rng.choice([1, 2, -1])
            if rest:
                x = x + random_poly(spec, rng, 2, 2, vars_=rest)
            xs.append(x)
        rng.shuffle(xs)
    elif kind < 0.8:
        # a polynomial relation of degree <= 2 between up to 3 elements
        u = random_poly(spec, rng, 1, 2)
        v = random_poly(spec, rng, 1, 2)
        c = [rng.randint(-2, 2) for _ in range(4)]
        w = u * u * c[0] + u * v * c[1] + v * c[2] + c[3] + u
        xs = [u, v, w] if rng.random() < 0.5 else [u, w]
    else:
        # powers of one element: relation of degree 3 or 4
        u = random_poly(spec, rng, 1, 2)
        p, q = rng.choice([(2, 3), (3, 4), (1, 4), (2, 1)])
        xs = [u ** p + rng.randint(0, 2), u ** q]
    return spec, xs


def fam_oracle(ctx: _Ctx, rng: random.Random, full: bool):
    for _ in range(100 if full else 20):
        spec, xs = _oracle_instance(rng)
        jac = is_independent(spec, xs)
        orc = dependence_oracle_bruteforce(spec, xs, max_degree=4)
        ctx.count("dependent", int(not jac))
        ctx.check("jacobian_vs_oracle", jac == orc.independent, f"xs={[spec.fmt(x) for x in xs]}")
        if orc.annihilator is not None:
            ctx.check("annihilator_vanishes", evaluate_annihilator(spec, orc.annihilator, xs).is_zero())


def fam_planes(ctx: _Ctx, rng: random.Random, full: bool):
    m = 200 if full else 30
    spec = ExtensionSpec(4, frozenset({4}))
    t = [spec.var(i) for i in range(1, 5)]
    anchors = {
        "additive": PlaneAnchor(spec, t[0], t[1], t[2], "additive"),
        "multiplicative": PlaneAnchor(spec, t[0], t[1] + t[3], t[2], "multiplicative"),
    }
    for mode, anchor in anchors.items():
        box = 5 if mode == "additive" else 3
        for i in range(m):
            vs = []
            while len(vs) < 2:
                v = tuple(rng.randint(-box, box) for _ in range(3))
                if any(v):
                    vs.append(v)
            if i % 2 == 0:
                # a dependent third vector
                while True:
                    a, b = rng.randint(-2, 2), rng.randint(-2, 2)
                    v3 = tuple(a * p + b * q for p, q in zip(*vs))
                    if any(v3):
                        break
            else:
                v3 = tuple(rng.randint(-box, box) for _ in range(3))
                if not any(v3):
                    v3 = (1, 0, 0)
            vs.append(v3)
            ctx.check(f"coordinatization_{mode}", coordinatization_check(anchor, vs), f"{vs}")
    anchor = anchors["additive"]
    cands = []
    for _ in range(40 if full else 10):
        v = tuple(rng.choice([-1, 0, 1, 2]) for _ in range(3))
        if any(v):
            cands.append(anchor.element(v))
    cands += [t[0] * t[1] + t[2], t[0] ** 2 + t[1], t[0] + t[1] * t[3] + t[2]]
    rep = maximality_probe(anchor, cands)
    ctx.count("maximality_compatible", rep.compatible)
    ctx.check("maximality_probe", rep.passed and rep.compatible > 0, f"failures={rep.failures}")


def fam_desargues(ctx: _Ctx, rng: random.Random, full: bool):
    spec = ExtensionSpec(3)
    anchor = PlaneAnchor(spec, *(spec.var(i) for i in (1, 2, 3)))
    for i in range(20 if full else 5):
        cfg = random_desargues_config(rng)
        ctx.check("desargues", desargues_check(cfg, anchor if i % 4 == 0 else None), f"{cfg}")


def _generic_pair(spec, rng, vars_=None):
    while True:
        x = random_element(spec, rng, 2, 0.2, vars_)
        y = random_element(spec, rng, 2, 0.2, vars_)
        if is_generic_pair(spec, x, y):
            return x, y


def fam_configurations(ctx: _Ctx, rng: random.Random, full: bool):
    m = 50 if full else 10
    spec = ExtensionSpec(4)
    for _ in range(m):
        x, z = _generic_pair(spec, rng)
        tup = q_second_presentation(spec, x, z)
        ctx.check("q_double_presentation", q_membership(tup, (x, x * z)), f"x={x} z={z}")
    for i in range(m):
        x, a = _generic_pair(spec, rng)
        jt = j_map(spec, x, a)
        jm = j_membership(jt, (x, a))
        ctx.check("j_decomposition", jm.agree and bool(jm), f"x={x} a={a}")
        if i % 5 == 0:
            w = _transcendental(spec, rng, lambda: random_element(spec, rng, 2))
            bad = jt.points[:2] + (GeoPoint(w, spec),) + jt.points[3:]
            jb = j_membership(bad, (x, a))
            ctx.check("j_decomposition_negative", jb.agree, f"x={x} a={a} w={w}")
            ctx.count("negatives_rejected", int(not bool(jb)))
    for _ in range(m):
        x, y = _generic_pair(spec, rng)
        X, Y, V = (point_of(spec, e) for e in (x, y, x / y))
        ctx.check("mult_construct", mult_construct(X, Y, V, x, y) == point_of(spec, x * y), f"x={x} y={y}")


def _off_anchor(spec, rng, anchor, vars_=None):
    while True:
        x = random_element(spec, rng, 2, 0.2, vars_)
        if is_generic_pair(spec, x, anchor):
            return x


def fam_reconstruction(ctx: _Ctx, rng: random.Random, full: bool):
    spec = ExtensionSpec(5)
    t = [None] + [spec.var(i) for i in range(1, 6)]
    a = t[5]
    J = J1Class(spec, a)
    for _ in range(100 if full else 20):
        def cls():
            if rng.random() < 0.1:
                return J.zero()
            return J.ratio(_off_anchor(spec, rng, a), _off_anchor(spec, rng, a))

        p, q = cls(), cls()
        ctx.check("mu_mul", mu(ratio_mul(p, q)) == mu(p) * mu(q), f"{p} {q}")
        ctx.check("mu_add", mu(ratio_add(p, q)) == mu(p) + mu(q), f"{p} {q}")
    n_samples = 20 if full else 6
    maps = []
    for _ in range(3 if full else 1):
        perm = list(range(1, 6))
        while perm == list(range(1, 6)):
            rng.shuffle(perm)
        maps.append(("permutation", permutation_map(spec, {i + 1: p for i, p in enumerate(perm)})))
    for _ in range(2 if full else 1):
        maps.append(("affine", affine_map(spec, rng.randint(1, 5), rng.choice([1, 2, -1, Fraction(1, 2)]), rng.randint(-3, 3))))
    maps.append(("mobius", mobius_map(spec, 1, 1, 2, 1, 3)))
    maps.append(("identity", identity_map(spec)))
    for kind, F in maps:
        rec = recover_field_map(F)
        xs = [random_element(spec, rng, 2, 0.3) for _ in range(n_samples - 4)]
        xs += [spec.const(rng.randint(-5, 5)), spec.const(Fraction(rng.randint(1, 9), rng.randint(1, 9)))]
        xs += [a * a + 1, 1 / (a + 1)]
        for x in xs:
            ok = rec(x) == F.field_map(x)
            ctx.check("round_trip", ok, f"{F.name} x={spec.fmt(x)}")
            if trdeg(spec, [x]) == 1:
                ctx.check("point_contract", rec.point_contract(x), f"{F.name} x={spec.fmt(x)}")
            else:
                ctx.check("constants_to_constants", trdeg(spec, [rec(x)]) == 0, f"{F.name} x={spec.fmt(x)}")
        for ap in (a * a + 1, 1 / (a + 1), a * 3 - 2):
            got = dependent_point_recovery(rec, ap)
            ctx.check("dependent_point", got == GeoPoint(F.field_map(ap), spec) and got == F(GeoPoint(ap, spec)),
                      f"{F.name} a'={spec.fmt(ap)}")
        if kind == "identity":
            ctx.check("identity_recovers_identity", all(rec(x) == x for x in xs))
        ctx.count(f"maps_{kind}")
        # fewest samples seen by any map of this kind
        key = f"min_samples_{kind}"
        ctx.res.stats[key] = min(ctx.res.stats.get(key, len(xs)), len(xs))


def fam_logic(ctx: _Ctx, rng: random.Random, full: bool):
    spec = ExtensionSpec(3)
    t = [spec.var(i) for i in (1, 2, 3)]
    tower = Tower(spec, spec, (t[1], t[2] ** 2, t[0]))
    suite = [random_coordinate_formula(spec, rng) for _ in range(100 if full else 20)]
    rep = thm32_harness(tower, suite, pools=True)
    for row in rep.rows:
        ctx.check("transfer_agreement", row["agree"], row["formula"])
        ctx.check("pool_consistent", row["pool_consistent"], row["formula"])
        ctx.count("true_in_L1", int(row["L1"]))
    tw, phi = counterexample_family()
    cx = thm32_harness(tw, [phi])
    row = cx.rows[0]
    ctx.check("counterexample_disagrees", (not tw.hypothesis) and row["L1"] is False and row["L2"] is True,
              f"{row}")


def fam_subflat_union(ctx: _Ctx, rng: random.Random, full: bool):
    for _ in range(100 if full else 20):
        n = rng.randint(2, 5)
        spec = ExtensionSpec(n, frozenset(rng.sample(range(1, n + 1), rng.randint(0, 1))))
        free = list(spec.free_vars)
        if len(free) < 1:
            continue
        flats = []
        for _ in range(rng.randint(1, 4)):
            flats.append(tuple(sorted(rng.sample(free, rng.randint(0, len(free) - 1)))))
        w = prop31_witness(spec, flats)
        ok = all(not in_closure(spec, w, [spec.var(v) for v in f]) for f in flats)
        ctx.check("witness_outside_flats", ok, f"n={n} S={sorted(spec.k_vars)} flats={flats}")


FAMILIES: Dict[str, Callable] = {
    "pregeometry": fam_pregeometry,
    "oracle": fam_oracle,
    "planes": fam_planes,
    "desargues": fam_desargues,
    "configurations": fam_configurations,
    "reconstruction": fam_reconstruction,
    "logic": fam_logic,
    "subflat_union": fam_subflat_union,
}


def run_selftest(seed: int = 1, scale: str = "smoke", fault: Optional[str] = None,
                 families=None, timings: bool = False) -> dict:
    """Run the families; ``fault`` names a family whose first answer is flipped."""
    if scale not in SCALES:
        raise ValueError(f"scale must be one of {SCALES}")
    names = list(families or FAMILIES)
    if fault is not None and fault not in FAMILIES:
        raise ValueError(f"unknown family {fault!r}")
    out = {}
    for name in names:
        ctx = _Ctx(name, fault == name)
        t0 = time.perf_counter()
        try:
            FAMILIES[name](ctx, _rng(seed, name), scale == "full")
        except Exception as exc:  # a crash is a failure of the family, reported by name
            ctx.res.failures.append(f"crash: {type(exc).__name__}: {exc}")
        out[name] = ctx.res.to_dict()
        if timings:
            out[name]["seconds"] = round(time.perf_counter() - t0, 3)
    return {"seed": seed, "scale": scale, "fault": fault, "families": out,
            "passed": all(f["passed"] for f in out.values())}


def summary_lines(report: dict) -> List[str]:
    lines = []
    for name, f in report["families"].items():
        status = "PASS" if f["passed"] else "FAIL"
        lines.append(f"{status} {name}: {f['checks'] - f['failed']}/{f['checks']}")
        for msg in f["failures"][:3]:
            lines.append(f"    {msg}")
    return lines


def dumps(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2, default=str) + "\n"
