"""Reduced rational functions over the rationals."""
from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Sequence

from .poly import MPoly, NVarsMismatch, _div, _pdivexact


class RatFunc:
    """``num / den`` with ``gcd(num, den) = 1`` and ``den`` monic under grlex.

    Instances are immutable; two equal rational functions have identical
    ``num`` and ``den`` terms, so ``==`` and ``hash`` are structural.
    """

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num: MPoly, den: MPoly | None = None):
        if den is None:
            den = MPoly.const(1, num.nvars)
        n, d = _normalize(num, den)
        self.num = n
        self.den = d
        self._hash = None

    @classmethod
    def _raw(cls, num: MPoly, den: MPoly) -> "RatFunc":
        obj = cls.__new__(cls)
        obj.num = num
        obj.den = den
        obj._hash = None
        return obj

    @classmethod
    def const(cls, c, nvars: int) -> "RatFunc":
        return cls._raw(MPoly.const(c, nvars), MPoly.const(1, nvars))

    @classmethod
    def var(cls, i: int, nvars: int) -> "RatFunc":
        return cls._raw(MPoly.var(i, nvars), MPoly.const(1, nvars))

    @classmethod
    def from_poly(cls, p: MPoly) -> "RatFunc":
        return cls._raw(p, MPoly.const(1, p.nvars))

    @property
    def nvars(self) -> int:
        return self.num.nvars

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("not a constant")
        return Fraction(self.num.constant_value()) / self.den.constant_value()

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    def variables(self) -> set:
        return self.num.variables() | self.den.variables()

    def _coerce(self, other):
        if isinstance(other, RatFunc):
            if other.nvars != self.nvars:
                raise NVarsMismatch(f"{self.nvars} vs {other.nvars} variables")
            return other
        if isinstance(other, MPoly):
            if other.nvars != self.nvars:
                raise NVarsMismatch(f"{self.nvars} vs {other.nvars} variables")
            return RatFunc.from_poly(other)
        if isinstance(other, (int, Rational)):
            return RatFunc.const(other, self.nvars)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.den == other.den:
            return RatFunc(self.num + other.num, self.den)
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc._raw(-self.num, self.den)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other.is_constant():
            c = other.constant_value()
            return RatFunc._raw(self.num * c, self.den) if c else RatFunc.const(0, self.nvars)
        # cross-cancel first so the products stay small
        g1 = self.num.gcd(other.den)
        g2 = other.num.gcd(self.den)
        n1, d2 = _cancel(self.num, other.den, g1)
        n2, d1 = _cancel(other.num, self.den, g2)
        return RatFunc._from_coprime(n1 * n2, d1 * d2)

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero rational function")
        return RatFunc._from_coprime(self.den, self.num)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        if not isinstance(k, int):
            raise ValueError("integer exponent required")
        if k < 0:
            return self.inverse() ** (-k)
        # gcd(num^k, den^k) = 1 already
        return RatFunc._raw(self.num ** k, self.den ** k)

    def diff(self, i: int) -> "RatFunc":
        """Partial derivative in the variable with 0-based index ``i``."""
        if not 0 <= i < self.nvars:
            raise IndexError(f"variable index {i} out of range for {self.nvars} variables")
        if self.den.is_constant():
            return RatFunc._raw(self.num.diff(i) * Fraction(1, self.den.constant_value()),
                                MPoly.const(1, self.nvars))
        return RatFunc(self.num.diff(i) * self.den - self.num * self.den.diff(i), self.den * self.den)

    def eval(self, point: Sequence):
        d = self.den.eval(point)
        if d == 0:
            raise ZeroDivisionError("denominator vanishes at evaluation point")
        return Fraction(self.num.eval(point)) / d

    def compose(self, images: Sequence["RatFunc"]) -> "RatFunc":
        """Substitute ``images[i]`` for variable i."""
        return self.num.compose(images) / self.den.compose(images)

    def extend(self, nvars: int, offset: int = 0) -> "RatFunc":
        return RatFunc._raw(self.num.extend(nvars, offset), self.den.extend(nvars, offset))

    @classmethod
    def _from_coprime(cls, num: MPoly, den: MPoly) -> "RatFunc":
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        lc = den.leading_coeff()
        if lc != 1:
            num = num * (Fraction(1) / Fraction(lc))
            den = den.monic()
        if num.is_zero():
            den = MPoly.const(1, num.nvars)
        return cls._raw(num, den)

    def __eq__(self, other):
        if isinstance(other, RatFunc):
            return self.num == other.num and self.den == other.den
        if isinstance(other, (MPoly, int, Rational)):
            try:
                other = self._coerce(other)
            except NVarsMismatch:
                return False
            return self == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    def to_str(self, labels: Sequence[str] | None = None) -> str:
        n = self.num.to_str(labels)
        if self.den == 1:
            return n
        d = self.den.to_str(labels)
        if len(self.num.terms) > 1:
            n = f"({n})"
        if len(self.den.terms) > 1 or (self.den.leading_coeff() != 1):
            d = f"({d})"
        elif "*" in d or "^" in d:
            d = f"({d})"
        return f"{n}/{d}"

    def __str__(self):
        return self.to_str()

    def __repr__(self):
        return f"RatFunc({self.to_str()!r})"


def _cancel(n: MPoly, d: MPoly, g: MPoly):
    if g.is_constant():
        return n, d
    return n.exact_div(g), d.exact_div(g)


def _normalize(num: MPoly, den: MPoly):
    if num.nvars != den.nvars:
        raise NVarsMismatch(f"{num.nvars} vs {den.nvars} variables")
    if den.is_zero():
        raise ZeroDivisionError("zero denominator")
    nv = num.nvars
    if num.is_zero():
        return MPoly.const(0, nv), MPoly.const(1, nv)
    if not den.is_constant():
        g = num.gcd(den)
        if not g.is_constant():
            num = MPoly._raw(_pdivexact(num.terms, g.terms), nv)
            den = MPoly._raw(_pdivexact(den.terms, g.terms), nv)
    lc = den.leading_coeff()
    if lc != 1:
        num = MPoly._raw({e: _div(c, lc) for e, c in num.terms.items()}, nv)
        den = den.monic()
    return num, den


def ratfunc_normalize(num: MPoly, den: MPoly) -> RatFunc:
    return RatFunc(num, den)
