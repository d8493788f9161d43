"""Sparse multivariate polynomials with exact rational coefficients.

Terms are stored as ``{exponent tuple: coefficient}``. Coefficients are kept
as ``int`` when integral and ``Fraction`` otherwise, which keeps the common
integer case fast. Monomials are compared in graded-lexicographic order.

The module-level ``_p*`` helpers work on raw term dicts and are shared with
the matrix code; :class:`MPoly` wraps them in an immutable value type.
"""
from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd as igcd, isqrt
from numbers import Rational
from typing import Dict, Iterable, Mapping, Sequence, Tuple

Exp = Tuple[int, ...]
Terms = Dict[Exp, object]


class NVarsMismatch(ValueError):
    pass


def _num(c):
    """Collapse integral Fractions to int."""
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


def _div(a, b):
    if isinstance(a, int) and isinstance(b, int):
        q, r = divmod(a, b)
        if r == 0:
            return q
        return Fraction(a, b)
    return _num(Fraction(a) / b)


def grlex_key(e: Exp):
    return (sum(e), e)


# -- raw term-dict arithmetic ------------------------------------------------

def _padd(a: Terms, b: Terms) -> Terms:
    if len(a) < len(b):
        a, b = b, a
    out = dict(a)
    for e, c in b.items():
        v = out.get(e)
        if v is None:
            out[e] = c
        else:
            v = v + c
            if v:
                out[e] = v
            else:
                del out[e]
    return out


def _pneg(a: Terms) -> Terms:
    return {e: -c for e, c in a.items()}


def _psub(a: Terms, b: Terms) -> Terms:
    out = dict(a)
    for e, c in b.items():
        v = out.get(e)
        if v is None:
            out[e] = -c
        else:
            v = v - c
            if v:
                out[e] = v
            else:
                del out[e]
    return out


def _pscale(a: Terms, c) -> Terms:
    if not c:
        return {}
    return {e: _num(v * c) for e, v in a.items()}


def _pmul(a: Terms, b: Terms) -> Terms:
    if not a or not b:
        return {}
    if len(a) < len(b):
        a, b = b, a
    out: Terms = {}
    get = out.get
    for eb, cb in b.items():
        for ea, ca in a.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            v = get(e)
            out[e] = ca * cb if v is None else v + ca * cb
    return {e: _num(c) for e, c in out.items() if c}


def _pmul_term(a: Terms, e0: Exp, c0) -> Terms:
    return {tuple(x + y for x, y in zip(e, e0)): _num(c * c0) for e, c in a.items()}


def _lead(a: Terms) -> Exp:
    return max(a, key=grlex_key)


def _pdivexact(a: Terms, b: Terms) -> Terms:
    """Quotient ``a / b`` assuming ``b`` divides ``a`` exactly."""
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    if len(b) == 1:
        (eb, cb), = b.items()
        out = {}
        for e, c in a.items():
            d = tuple(x - y for x, y in zip(e, eb))
            if min(d, default=0) < 0:
                raise ValueError("inexact polynomial division")
            out[d] = _div(c, cb)
        return out
    lb = _lead(b)
    lc = b[lb]
    r = dict(a)
    q: Terms = {}
    while r:
        lr = _lead(r)
        d = tuple(x - y for x, y in zip(lr, lb))
        if min(d, default=0) < 0:
            raise ValueError("inexact polynomial division")
        c = _div(r[lr], lc)
        q[d] = c
        r = _psub(r, _pmul_term(b, d, c))
    return q


def _is_const(a: Terms) -> bool:
    return not a or (len(a) == 1 and not any(next(iter(a))))


def _content_int(a: Terms) -> int:
    return reduce(igcd, (int(c) for c in a.values()), 0)


def _to_primitive_int(a: Terms) -> Terms:
    """Scale to integer coefficients with content 1 and positive leading coefficient."""
    if not a:
        return {}
    den = 1
    for c in a.values():
        if isinstance(c, Fraction):
            den = den * c.denominator // igcd(den, c.denominator)
    ints = {e: int(c * den) for e, c in a.items()}
    g = _content_int(ints)
    if ints[_lead(ints)] < 0:
        g = -g
    return {e: c // g for e, c in ints.items()}


# -- recursive gcd over Z[t1..tn] ---------------------------------------------

def _split(a: Terms, v: int) -> Dict[int, Terms]:
    """View ``a`` as univariate in variable ``v``: {degree: coefficient terms}."""
    out: Dict[int, Terms] = {}
    for e, c in a.items():
        k = e[v]
        if k:
            e = e[:v] + (0,) + e[v + 1:]
        out.setdefault(k, {})[e] = c
    return out


def _join(parts: Mapping[int, Terms], v: int) -> Terms:
    out: Terms = {}
    for k, p in parts.items():
        for e, c in p.items():
            out[e[:v] + (k,) + e[v + 1:]] = c
    return out


def _top_var(a: Terms, b: Terms):
    best = -1
    for p in (a, b):
        for e in p:
            for i in range(len(e) - 1, best, -1):
                if e[i]:
                    best = i
                    break
    return best


def _try_div(a: Terms, b: Terms):
    """``a / b`` if ``b`` divides ``a``, else None."""
    for i in range(len(next(iter(b)))):
        if max(e[i] for e in b) > max(e[i] for e in a):
            return None
    try:
        return _pdivexact(a, b)
    except ValueError:
        return None


def _maxnorm(a: Terms) -> int:
    return max(abs(c) for c in a.values())


def _eval_var(a: Terms, v: int, x: int) -> Terms:
    out: Terms = {}
    for e, c in a.items():
        k = e[v]
        if k:
            c = c * x ** k
            e = e[:v] + (0,) + e[v + 1:]
        out[e] = out.get(e, 0) + c
    return {e: c for e, c in out.items() if c}


def _interpolate(h: Terms, v: int, x: int) -> Terms:
    """Read integer coefficients as balanced base-x digits of powers of variable v."""
    out: Terms = {}
    half = x // 2
    for e, c in h.items():
        k = 0
        while c:
            d = c % x
            if d > half:
                d -= x
            if d:
                out[e[:v] + (k,) + e[v + 1:]] = d
            c = (c - d) // x
            k += 1
    return out


def _primitive_signed(a: Terms) -> Terms:
    g = _content_int(a)
    if a[_lead(a)] < 0:
        g = -g
    return {e: c // g for e, c in a.items()}


def _heu_gcd(a: Terms, b: Terms):
    """Heuristic gcd by evaluation at large integers; None when it gives up.

    Every candidate is checked by exact division, so a returned value is a
    common divisor; the size of the evaluation point makes it the greatest.
    """
    if _is_const(a) or _is_const(b):
        nv = len(next(iter(a)))
        return {(0,) * nv: igcd(_content_int(a), _content_int(b))}
    ca, cb = _content_int(a), _content_int(b)
    gc = igcd(ca, cb)
    a = {e: c // ca for e, c in a.items()}
    b = {e: c // cb for e, c in b.items()}
    v = _top_var(a, b)
    x = 2 * min(_maxnorm(a), _maxnorm(b)) + 29
    for _ in range(6):
        fa, fb = _eval_var(a, v, x), _eval_var(b, v, x)
        if fa and fb:
            h = _heu_gcd(fa, fb)
            if h is None:
                return None
            for cand, src in ((h, None), (_pdivexact(fa, h), a), (_pdivexact(fb, h), b)):
                g = _interpolate(cand, v, x)
                if not g:
                    continue
                g = _primitive_signed(g)
                if src is not None:
                    g = _try_div(src, g)
                    if g is None or any(isinstance(c, Fraction) for c in g.values()):
                        continue
                    g = _primitive_signed(g)
                if _try_div(a, g) is not None and _try_div(b, g) is not None:
                    return {e: c * gc for e, c in g.items()}
        x = x * 73794 * isqrt(isqrt(x)) // 27011
    return None


def _gcd_int(a: Terms, b: Terms) -> Terms:
    """gcd of integer polynomials; result primitive with positive leading coefficient."""
    if a and b and not _is_const(a) and not _is_const(b) and len(a) > 1 and len(b) > 1:
        g = _heu_gcd(a, b)
        if g is not None:
            return g
    return _gcd_prs(a, b)


def _gcd_prs(a: Terms, b: Terms) -> Terms:
    if not a:
        return _to_primitive_int(b)
    if not b:
        return _to_primitive_int(a)
    if _is_const(a) or _is_const(b):
        nv = len(next(iter(a)))
        return {(0,) * nv: igcd(_content_int(a), _content_int(b))}
    if len(a) == 1 or len(b) == 1:
        return _gcd_monomial(a, b)
    v = _top_var(a, b)
    pa, pb = _split(a, v), _split(b, v)
    ca = _gcd_many(list(pa.values()))
    cb = _gcd_many(list(pb.values()))
    g_cont = _gcd_int(ca, cb)
    if max(pa) == 0 or max(pb) == 0:
        # one side is free of v, so the gcd lives in the content ring
        return g_cont
    ua = {k: _pdivexact(p, ca) for k, p in pa.items()}
    ub = {k: _pdivexact(p, cb) for k, p in pb.items()}
    if max(ua) < max(ub):
        ua, ub = ub, ua
    while True:
        r = _prem(ua, ub)
        if not r:
            g_pp = ub
            break
        if max(r) == 0:
            g_pp = None
            break
        cr = _gcd_many(list(r.values()))
        ua, ub = ub, {k: _pdivexact(p, cr) for k, p in r.items()}
    if g_pp is None:
        return g_cont
    cg = _gcd_many(list(g_pp.values()))
    g_pp = {k: _pdivexact(p, cg) for k, p in g_pp.items()}
    out = _pmul(g_cont, _join(g_pp, v))
    if out[_lead(out)] < 0:
        out = _pneg(out)
    return out


def _gcd_monomial(a: Terms, b: Terms) -> Terms:
    exps = list(a) + list(b)
    m = tuple(min(col) for col in zip(*exps))
    return {m: igcd(_content_int(a), _content_int(b))}


def _gcd_many(ps: Sequence[Terms]) -> Terms:
    ps = sorted(ps, key=len)
    g = ps[0]
    for p in ps[1:]:
        if _is_const(g):
            break
        g = _gcd_int(g, p)
    return _to_primitive_int(g)


def _prem(a: Dict[int, Terms], b: Dict[int, Terms]) -> Dict[int, Terms]:
    """A nonzero multiple of the pseudo-remainder of ``a`` by ``b`` in the split variable."""
    db = max(b)
    lb = b[db]
    r = dict(a)
    while r and max(r) >= db:
        dr = max(r)
        lr = r[dr]
        shift = dr - db
        new: Dict[int, Terms] = {}
        for k, p in r.items():
            if k == dr:
                continue
            new[k] = _pmul(p, lb)
        for k, p in b.items():
            if k == db:
                continue
            kk = k + shift
            t = _pmul(p, lr)
            new[kk] = _psub(new[kk], t) if kk in new else _pneg(t)
        r = {k: p for k, p in new.items() if p}
    return r


# -- public value type ---------------------------------------------------------

class MPoly:
    """Immutable sparse polynomial in ``nvars`` variables over the rationals."""

    __slots__ = ("terms", "nvars", "_hash")

    def __init__(self, terms: Mapping[Exp, object] | None = None, nvars: int = 0):
        clean: Terms = {}
        for e, c in (terms or {}).items():
            if len(e) != nvars:
                raise NVarsMismatch(f"exponent {e} does not have length {nvars}")
            if any(x < 0 for x in e):
                raise ValueError(f"negative exponent in {e}")
            if not isinstance(c, (int, Fraction)):
                c = Fraction(c)
            if c:
                clean[tuple(e)] = _num(c)
        self.terms = clean
        self.nvars = nvars
        self._hash = None

    @classmethod
    def _raw(cls, terms: Terms, nvars: int) -> "MPoly":
        obj = cls.__new__(cls)
        obj.terms = terms
        obj.nvars = nvars
        obj._hash = None
        return obj

    @classmethod
    def const(cls, c, nvars: int) -> "MPoly":
        c = _num(Fraction(c))
        return cls._raw({(0,) * nvars: c} if c else {}, nvars)

    @classmethod
    def var(cls, i: int, nvars: int) -> "MPoly":
        """The variable with 0-based index ``i``."""
        if not 0 <= i < nvars:
            raise IndexError(f"variable index {i} out of range for {nvars} variables")
        e = [0] * nvars
        e[i] = 1
        return cls._raw({tuple(e): 1}, nvars)

    # structure
    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return _is_const(self.terms)

    def constant_value(self):
        if not self.is_constant():
            raise ValueError("not a constant polynomial")
        return next(iter(self.terms.values()), 0)

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def degree_in(self, i: int) -> int:
        return max((e[i] for e in self.terms), default=-1)

    def variables(self) -> set:
        return {i for e in self.terms for i, k in enumerate(e) if k}

    def leading_exp(self) -> Exp:
        return _lead(self.terms)

    def leading_coeff(self):
        return self.terms[_lead(self.terms)] if self.terms else 0

    def _check(self, other: "MPoly"):
        if self.nvars != other.nvars:
            raise NVarsMismatch(f"{self.nvars} vs {other.nvars} variables")

    def _coerce(self, other) -> "MPoly":
        if isinstance(other, MPoly):
            self._check(other)
            return other
        if isinstance(other, (int, Rational)):
            return MPoly.const(other, self.nvars)
        return NotImplemented

    # arithmetic
    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return MPoly._raw(_padd(self.terms, other.terms), self.nvars)

    __radd__ = __add__

    def __neg__(self):
        return MPoly._raw(_pneg(self.terms), self.nvars)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return MPoly._raw(_psub(self.terms, other.terms), self.nvars)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Rational)) and not isinstance(other, MPoly):
            return MPoly._raw(_pscale(self.terms, _num(Fraction(other))), self.nvars)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return MPoly._raw(_pmul(self.terms, other.terms), self.nvars)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("polynomial powers need a nonnegative integer exponent")
        result = MPoly.const(1, self.nvars)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def exact_div(self, other: "MPoly") -> "MPoly":
        self._check(other)
        return MPoly._raw(_pdivexact(self.terms, other.terms), self.nvars)

    def divides(self, other: "MPoly") -> bool:
        try:
            q = other.exact_div(self)
        except ValueError:
            return False
        return q * self == other

    def gcd(self, other: "MPoly") -> "MPoly":
        """Greatest common divisor, monic under grlex (zero iff both are zero)."""
        self._check(other)
        if not self.terms and not other.terms:
            return MPoly._raw({}, self.nvars)
        g = _gcd_int(_to_primitive_int(self.terms), _to_primitive_int(other.terms))
        return MPoly._raw(g, self.nvars).monic()

    def monic(self) -> "MPoly":
        if not self.terms:
            return self
        lc = self.leading_coeff()
        if lc == 1:
            return self
        return MPoly._raw({e: _div(c, lc) for e, c in self.terms.items()}, self.nvars)

    def diff(self, i: int) -> "MPoly":
        if not 0 <= i < self.nvars:
            raise IndexError(f"variable index {i} out of range for {self.nvars} variables")
        out = {}
        for e, c in self.terms.items():
            k = e[i]
            if k:
                out[e[:i] + (k - 1,) + e[i + 1:]] = c * k
        return MPoly._raw(out, self.nvars)

    def eval(self, point: Sequence):
        """Value at a rational point (exact)."""
        if len(point) != self.nvars:
            raise NVarsMismatch(f"point has {len(point)} coordinates, need {self.nvars}")
        total = 0
        for e, c in self.terms.items():
            v = c
            for x, k in zip(point, e):
                if k:
                    v = v * x ** k
            total = total + v
        return _num(Fraction(total)) if not isinstance(total, int) else total

    def eval_mod(self, point: Sequence[int], p: int) -> int:
        total = 0
        for e, c in self.terms.items():
            if isinstance(c, Fraction):
                v = c.numerator * pow(c.denominator, -1, p)
            else:
                v = c
            for x, k in zip(point, e):
                if k:
                    v = v * pow(x, k, p)
            total = (total + v) % p
        return total

    def denominator_lcm(self) -> int:
        den = 1
        for c in self.terms.values():
            if isinstance(c, Fraction):
                den = den * c.denominator // igcd(den, c.denominator)
        return den

    def extend(self, nvars: int, offset: int = 0) -> "MPoly":
        """Embed into a ring with ``nvars`` variables, shifting indices by ``offset``."""
        if offset + self.nvars > nvars:
            raise NVarsMismatch("target ring too small")
        pre, post = (0,) * offset, (0,) * (nvars - offset - self.nvars)
        return MPoly._raw({pre + e + post: c for e, c in self.terms.items()}, nvars)

    def compose(self, images: Sequence):
        """Substitute ``images[i]`` for variable i; images may be MPoly or RatFunc."""
        if len(images) != self.nvars:
            raise NVarsMismatch("need one image per variable")
        one = images[0] ** 0 if images else None
        total = None
        cache = {}
        for e, c in sorted(self.terms.items(), key=lambda kv: grlex_key(kv[0])):
            term = one * c
            for i, k in enumerate(e):
                if k:
                    key = (i, k)
                    if key not in cache:
                        cache[key] = images[i] ** k
                    term = term * cache[key]
            total = term if total is None else total + term
        if total is None:
            return one * 0
        return total

    # comparison / display
    def __eq__(self, other):
        if isinstance(other, MPoly):
            return self.nvars == other.nvars and self.terms == other.terms
        if isinstance(other, (int, Rational)):
            return self.is_constant() and self.constant_value() == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self.terms.items())))
        return self._hash

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: grlex_key(kv[0]), reverse=True)

    def to_str(self, labels: Sequence[str] | None = None) -> str:
        if not self.terms:
            return "0"
        labels = labels or [f"t{i + 1}" for i in range(self.nvars)]
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                labels[i] if k == 1 else f"{labels[i]}^{k}" for i, k in enumerate(e) if k
            )
            neg = c < 0
            a = -c if neg else c
            if mono:
                body = mono if a == 1 else (f"{a}*{mono}" if isinstance(a, int) else f"({a})*{mono}")
            else:
                body = str(a) if isinstance(a, int) else f"({a})"
            parts.append(("-" if neg else "+", body))
        first_sign, first = parts[0]
        s = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            s += f" {sign} {body}"
        return s

    def __str__(self):
        return self.to_str()

    def __repr__(self):
        return f"MPoly({self.to_str()!r}, nvars={self.nvars})"


def poly_ops(p: MPoly, q, kind: str):
    """Dispatch for the basic polynomial operations by name."""
    if kind == "add":
        return p + q
    if kind == "sub":
        return p - q
    if kind == "mul":
        return p * q
    if kind == "gcd":
        return p.gcd(q)
    if kind in ("eval", "eval-at-rational-point"):
        return p.eval(q)
    raise ValueError(f"unknown polynomial operation {kind!r}")


def from_terms(pairs: Iterable[Tuple[Exp, object]], nvars: int) -> MPoly:
    acc: Terms = {}
    for e, c in pairs:
        acc = _padd(acc, {tuple(e): c})
    return MPoly(acc, nvars)
