"""The language {acl_n} over a field, one-quantifier formulas, and towers.

Formulas are kept in disjunctive normal form: a disjunction of conjunctions
of atoms, optionally under a single ``exists``. Atoms are closure statements
``target in acl(params)`` (or its negation) and (in)equalities between terms.
A term is a symbol name (the bound variable or an assigned parameter) or an
element of the field.

Text form, one s-expression per formula::

    (exists x (or (and (acl x ("t1" "t2")) (nacl x ("t1")) (neq x "t1+t2")) ...))

Quoted strings are field elements in the expression grammar, bare words are
symbols.
"""
from __future__ import annotations

import itertools
import random
import re
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

from .exact import ExprSyntaxError, RatFunc
from .points import coordinate_flat_intersection, coordinate_support
from .pregeometry import ExtensionSpec, PreconditionError, in_closure, trdeg


class FormulaSyntaxError(ValueError):
    pass


class UnassignedSymbol(KeyError):
    pass


class UnsupportedFormula(PreconditionError):
    pass


@dataclass(frozen=True)
class Sym:
    name: str


Term = Union[Sym, RatFunc]


@dataclass(frozen=True)
class InAcl:
    target: Term
    params: Tuple[Term, ...]
    negated: bool = False


@dataclass(frozen=True)
class Eq:
    left: Term
    right: Term
    negated: bool = False


Atom = Union[InAcl, Eq]


@dataclass(frozen=True)
class FormulaAST:
    disjuncts: Tuple[Tuple[Atom, ...], ...]
    bound: Optional[str] = None  # name of the existentially bound variable, if any

    @property
    def quantifier(self) -> Optional[str]:
        return None if self.bound is None else "exists"

    def map_elements(self, fn: Callable[[RatFunc], RatFunc]) -> "FormulaAST":
        def t(x):
            return x if isinstance(x, Sym) else fn(x)

        def a(at):
            if isinstance(at, InAcl):
                return InAcl(t(at.target), tuple(t(p) for p in at.params), at.negated)
            return Eq(t(at.left), t(at.right), at.negated)

        return FormulaAST(tuple(tuple(a(at) for at in d) for d in self.disjuncts), self.bound)

    def to_text(self, spec: ExtensionSpec) -> str:
        def t(x):
            return x.name if isinstance(x, Sym) else f'"{spec.fmt(x)}"'

        def a(at):
            if isinstance(at, InAcl):
                head = "nacl" if at.negated else "acl"
                return f"({head} {t(at.target)} ({' '.join(t(p) for p in at.params)}))"
            return f"({'neq' if at.negated else 'eq'} {t(at.left)} {t(at.right)})"

        conj = ["(and " + " ".join(a(x) for x in d) + ")" for d in self.disjuncts]
        body = "(or " + " ".join(conj) + ")"
        return body if self.bound is None else f"(exists {self.bound} {body})"


# -- s-expression reader -----------------------------------------------------------

_SX = re.compile(r'\s*(?:(\()|(\))|"([^"]*)"|([^\s()"]+))')


def _read_sexpr(text: str):
    pos, stack, top = 0, [[]], None
    text = text.strip()
    while pos < len(text):
        m = _SX.match(text, pos)
        if not m:
            raise FormulaSyntaxError(f"unexpected character at {pos}")
        pos = m.end()
        op, cl, s, w = m.groups()
        if op:
            stack.append([])
        elif cl:
            if len(stack) == 1:
                raise FormulaSyntaxError("unbalanced ')'")
            done = stack.pop()
            stack[-1].append(done)
        elif s is not None:
            stack[-1].append(("str", s))
        else:
            stack[-1].append(("word", w))
    if len(stack) != 1:
        raise FormulaSyntaxError("unbalanced '('")
    if len(stack[0]) != 1:
        raise FormulaSyntaxError("expected exactly one formula")
    top = stack[0][0]
    return top


def _head(node):
    if not isinstance(node, list) or not node or not isinstance(node[0], tuple) or node[0][0] != "word":
        raise FormulaSyntaxError(f"expected (head ...), got {node!r}")
    return node[0][1]


def parse_formula(text: str, spec: ExtensionSpec) -> FormulaAST:
    node = _read_sexpr(text)

    def term(n):
        if isinstance(n, list):
            raise FormulaSyntaxError("a term cannot be a list")
        kind, v = n
        if kind != "str":
            return Sym(v)
        try:
            return spec.parse(v)
        except ExprSyntaxError as e:
            raise FormulaSyntaxError(str(e)) from e

    def atom(n):
        h = _head(n)
        if h in ("acl", "nacl"):
            if len(n) != 3 or not isinstance(n[2], list):
                raise FormulaSyntaxError(f"({h} target (params...)) expected")
            return InAcl(term(n[1]), tuple(term(p) for p in n[2]), h == "nacl")
        if h in ("eq", "neq"):
            if len(n) != 3:
                raise FormulaSyntaxError(f"({h} left right) expected")
            return Eq(term(n[1]), term(n[2]), h == "neq")
        raise FormulaSyntaxError(f"unknown atom {h!r}")

    def conj(n):
        return tuple(atom(a) for a in n[1:]) if _head(n) == "and" else (atom(n),)

    def body(n):
        return tuple(conj(c) for c in n[1:]) if _head(n) == "or" else (conj(n),)

    bound = None
    if _head(node) == "exists":
        if len(node) != 3 or node[1][0] != "word":
            raise FormulaSyntaxError("(exists var body) expected")
        bound = node[1][1]
        node = node[2]
    ds = body(node)
    if not ds or any(not d for d in ds):
        raise FormulaSyntaxError("empty disjunction or conjunction")
    return FormulaAST(ds, bound)


# -- evaluation ------------------------------------------------------------------

def _resolve(t: Term, env: Dict[str, RatFunc]) -> RatFunc:
    if isinstance(t, Sym):
        if t.name not in env:
            raise UnassignedSymbol(t.name)
        return env[t.name]
    return t


def _eval_atom(spec, at: Atom, env) -> bool:
    if isinstance(at, InAcl):
        v = in_closure(spec, _resolve(at.target, env), [_resolve(p, env) for p in at.params])
    else:
        v = _resolve(at.left, env) == _resolve(at.right, env)
    return v != at.negated


def eval_qf(spec: ExtensionSpec, phi: FormulaAST, assignment: Dict[str, RatFunc]) -> bool:
    if phi.bound is not None:
        raise UnsupportedFormula("eval_qf takes a quantifier-free formula")
    return any(all(_eval_atom(spec, a, assignment) for a in d) for d in phi.disjuncts)


def _mentions(t: Term, name: str) -> bool:
    return isinstance(t, Sym) and t.name == name


def _disjunct_coordinate(spec, d, x, env) -> Optional[bool]:
    """Decide exists x. d by the flat criterion; None if d is outside the fragment."""
    pos, neg, eqs, neqs = [], [], [], []
    for at in d:
        if isinstance(at, InAcl):
            if any(_mentions(p, x) for p in at.params):
                return None
            if not _mentions(at.target, x):
                if not _eval_atom(spec, at, env):
                    return False
                continue
            params = [_resolve(p, env) for p in at.params]
            supp = coordinate_support(spec, params)
            if supp is None:
                return None
            (neg if at.negated else pos).append(supp)
        else:
            l, r = _mentions(at.left, x), _mentions(at.right, x)
            if l and r:
                if at.negated:
                    return False  # x != x
                continue
            if not (l or r):
                if not _eval_atom(spec, at, env):
                    return False
                continue
            other = _resolve(at.right if l else at.left, env)
            (neqs if at.negated else eqs).append(other)
    if eqs:
        # x is pinned down; check the whole conjunction at that value
        env2 = dict(env)
        env2[x] = eqs[0]
        return all(_eval_atom(spec, a, env2) for a in d)
    C = set(spec.free_vars)
    for A in pos:
        C = set(coordinate_flat_intersection(C, A))
    # acl(C) minus finitely many proper coordinate subflats is nonempty, and then
    # infinite, so finitely many inequalities never empty it
    return all(not C <= set(B) for B in neg)


def default_pool(spec: ExtensionSpec, max_vars: int = 3, shifts=(0, 1, 2, 3)) -> List[RatFunc]:
    """All {-1, 0, 1}-combinations of at most ``max_vars`` basis variables, plus small shifts."""
    vs = [spec.var(i) for i in spec.free_vars]
    out = []
    seen = set()
    for k in range(0, min(max_vars, len(vs)) + 1):
        for sub in itertools.combinations(range(len(vs)), k):
            for signs in itertools.product((1, -1), repeat=k):
                base = spec.const(0)
                for i, s in zip(sub, signs):
                    base = base + vs[i] * s
                for c in shifts:
                    e = base + c
                    if e not in seen:
                        seen.add(e)
                        out.append(e)
    return out


def pool_search(spec: ExtensionSpec, phi: FormulaAST, pool: Sequence[RatFunc], assignment=None) -> Optional[RatFunc]:
    """The first pool element satisfying the body of an exists-formula, or None.

    Elements the bound variable is compared against are tried first.
    """
    if phi.bound is None:
        raise UnsupportedFormula("pool search needs an exists-formula")
    env = dict(assignment or {})
    pinned = [
        t
        for d in phi.disjuncts
        for at in d
        if isinstance(at, Eq)
        for t in (at.left, at.right)
        if not isinstance(t, Sym)
    ]
    for w in pinned + list(pool):
        env[phi.bound] = w
        if any(all(_eval_atom(spec, a, env) for a in d) for d in phi.disjuncts):
            return w
    return None


def eval_exists(spec: ExtensionSpec, phi: FormulaAST, assignment=None, pool: Optional[Sequence[RatFunc]] = None) -> bool:
    """Truth of a one-quantifier formula.

    Disjuncts whose closure atoms all name coordinate flats are decided
    exactly. Any other disjunct is searched over ``pool``; without a pool it
    is rejected.
    """
    if phi.bound is None:
        raise UnsupportedFormula("eval_exists takes an exists-formula")
    env = dict(assignment or {})
    if phi.bound in env:
        raise PreconditionError(f"bound variable {phi.bound} is also assigned")
    for d in phi.disjuncts:
        v = _disjunct_coordinate(spec, d, phi.bound, env)
        if v is None:
            if pool is None:
                raise UnsupportedFormula("closure atom outside the coordinate fragment and no pool given")
            v = pool_search(spec, FormulaAST((d,), phi.bound), pool, env) is not None
        if v:
            return True
    return False


def evaluate(spec: ExtensionSpec, phi: FormulaAST, assignment=None, pool=None) -> bool:
    if phi.bound is None:
        return eval_qf(spec, phi, assignment or {})
    return eval_exists(spec, phi, assignment, pool)


# -- towers ------------------------------------------------------------------------

@dataclass
class Tower:
    """L1 embedded in L2 over the same K by t_i -> images[i]; default is the prefix embedding."""

    spec1: ExtensionSpec
    spec2: ExtensionSpec
    images: Tuple[RatFunc, ...] = ()

    def __post_init__(self):
        if self.spec1.nvars > self.spec2.nvars and not self.images:
            raise PreconditionError("prefix embedding needs L1 to have no more variables than L2")
        if not self.images:
            self.images = tuple(self.spec2.var(i) for i in range(1, self.spec1.nvars + 1))
        self.images = tuple(self.images)
        if len(self.images) != self.spec1.nvars:
            raise PreconditionError("need one image per variable of L1")
        for s in self.spec1.k_vars:
            if s not in self.spec2.k_vars or self.images[s - 1] != self.spec2.var(s):
                raise PreconditionError(f"embedding must fix t{s} in K")
        if len(self.spec1.k_vars) != len(self.spec2.k_vars):
            raise PreconditionError("L1 and L2 must share K")
        free_imgs = [self.images[i - 1] for i in self.spec1.free_vars]
        if trdeg(self.spec2, free_imgs) != len(free_imgs):
            raise PreconditionError("embedding is not injective (images dependent)")

    @property
    def hypothesis(self) -> bool:
        return self.spec1.trdeg_L == self.spec2.trdeg_L

    def embed(self, x: RatFunc) -> RatFunc:
        return x.compose(self.images)


def random_coordinate_formula(spec: ExtensionSpec, rng: random.Random, max_disjuncts=3, max_atoms=3) -> FormulaAST:
    """A seeded exists-formula in the coordinate fragment over ``spec``."""
    free = list(spec.free_vars)
    x = Sym("x")

    def gens(vs):
        # disguise the coordinate flat acl(vs) behind other generators sometimes
        els = [spec.var(v) for v in vs]
        if len(els) >= 2 and rng.random() < 0.5:
            u, w = els[0], els[1]
            els[0], els[1] = u + w, u * w + rng.randint(1, 3)
        return tuple(els)

    def elem():
        k = rng.randint(0, min(2, len(free)))
        e = spec.const(rng.randint(-2, 2))
        for v in rng.sample(free, k):
            e = e + spec.var(v) * rng.choice((1, -1))
        return e

    ds = []
    for _ in range(rng.randint(1, max_disjuncts)):
        atoms = []
        for _ in range(rng.randint(1, max_atoms)):
            r = rng.random()
            if r < 0.8:
                vs = rng.sample(free, rng.randint(0, len(free)))
                atoms.append(InAcl(x, gens(sorted(vs)), negated=rng.random() < 0.5))
            else:
                atoms.append(Eq(x, elem(), negated=rng.random() < 0.7))
        ds.append(tuple(atoms))
    return FormulaAST(tuple(ds), "x")


@dataclass
class HarnessReport:
    hypothesis: bool
    rows: List[dict] = field(default_factory=list)

    @property
    def agreement(self) -> float:
        return sum(r["agree"] for r in self.rows) / len(self.rows) if self.rows else 1.0

    @property
    def disagreements(self) -> List[dict]:
        return [r for r in self.rows if not r["agree"]]

    def to_dict(self) -> dict:
        return {"hypothesis": self.hypothesis, "agreement": self.agreement, "rows": self.rows}


def thm32_harness(tower: Tower, suite: Sequence[FormulaAST], pools: bool = False) -> HarnessReport:
    """Evaluate each formula over L1 and, with embedded parameters, over L2.

    With ``pools`` set, each side is also searched over its default pool and
    the two verdicts of each side must agree.
    """
    rep = HarnessReport(tower.hypothesis)
    for phi in suite:
        phi2 = phi.map_elements(tower.embed)
        v1 = evaluate(tower.spec1, phi)
        v2 = evaluate(tower.spec2, phi2)
        row = {"formula": phi.to_text(tower.spec1), "L1": v1, "L2": v2, "agree": v1 == v2}
        if pools and phi.bound is not None:
            p1 = pool_search(tower.spec1, phi, default_pool(tower.spec1)) is not None
            p2 = pool_search(tower.spec2, phi2, default_pool(tower.spec2)) is not None
            row["pool_L1"], row["pool_L2"] = p1, p2
            row["pool_consistent"] = p1 == v1 and p2 == v2
        rep.rows.append(row)
    return rep


def counterexample_family() -> Tuple[Tower, FormulaAST]:
    """Q(t1) inside Q(t1, t2) with exists x. x not in acl(t1)."""
    s1, s2 = ExtensionSpec(1), ExtensionSpec(2)
    phi = FormulaAST(((InAcl(Sym("x"), (s1.var(1),), negated=True),),), "x")
    return Tower(s1, s2), phi


# -- unions of subflats ------------------------------------------------------------

def prop31_witness(spec: ExtensionSpec, subfield_flats: Sequence) -> RatFunc:
    """An element outside every given proper flat.

    Flats are variable-index collections or generator lists of RatFunc.
    """
    gens_list = []
    for f in subfield_flats:
        f = list(f)
        if all(isinstance(v, int) and not isinstance(v, bool) for v in f):
            for v in f:
                if v not in spec.free_vars:
                    raise PreconditionError(f"t{v} is not a basis variable outside K")
            gens_list.append([spec.var(v) for v in f])
        else:
            gens_list.append(list(getattr(f, "gens", f)))
    for g in gens_list:
        if trdeg(spec, g) >= spec.trdeg_L:
            raise PreconditionError("flat is not proper")

    def outside(w):
        return all(not in_closure(spec, w, g) for g in gens_list)

    free = [spec.var(i) for i in spec.free_vars]
    candidates = list(free) + [sum(free[1:], free[0])]
    # any len(free) of these are independent, so each proper flat holds fewer than len(free)
    candidates += [sum((v * (k + 1) ** i for i, v in enumerate(free)), spec.const(0)) for k in range(1, len(gens_list) * len(free) + 2)]
    for w in candidates:
        if outside(w):
            return w
    raise AssertionError("no element outside the given flats was found")
