"""Exact real arithmetic for the base of a radix system.

Every quantity the radix machinery touches (the base, the partition point,
tile endpoints and lengths) lies in the number field ``Q(b)`` generated by the
least root ``b`` of the base equation.  Elements of that field are stored as
coefficient vectors modulo the minimal polynomial of ``b``, so equality is
structural and order is decided by refining an isolating interval of ``b``.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal as _D, localcontext
from fractions import Fraction
from functools import reduce
import math
from math import gcd

from . import poly as P
from .binstr import EpString

__all__ = [
    "AlgebraicReal", "NumberField", "FieldElement", "PolyFraction",
    "BaseSolution", "NoBaseError",
    "series_form", "series_value", "solve_base", "project", "cmp", "to_float", "charpoly",
]

Rational = (int, Fraction)


def charpoly(rows) -> list:
    """Characteristic polynomial ``det(xI - M)`` of a square matrix, low-first."""
    from sympy import QQ
    from sympy.polys.matrices import DomainMatrix

    n = len(rows)
    if n == 0:
        return [Fraction(1)]
    dm = DomainMatrix([[QQ(Fraction(v).numerator, Fraction(v).denominator) for v in r] for r in rows],
                      (n, n), QQ)
    coeffs = dm.charpoly()
    return [Fraction(int(c.numerator), int(c.denominator)) for c in reversed(coeffs)]


def _sig_digits(lo: Fraction, hi: Fraction, digits: int) -> str:
    with localcontext() as ctx:
        ctx.prec = digits + 10
        mid = (_D(lo.numerator) / _D(lo.denominator) + _D(hi.numerator) / _D(hi.denominator)) / 2
        ctx.prec = digits
        return str(+mid) if mid != 0 else "0"


class AlgebraicReal:
    """A real root of an integer polynomial inside a rational interval.

    The interval ``[lo, hi]`` holds exactly one root of ``poly``; when
    ``lo == hi`` the root is that rational.  Refinement narrows the interval
    in place and never widens it.
    """

    __slots__ = ("poly", "lo", "hi", "_seq")

    def __init__(self, poly, lo, hi, check: bool = True):
        self.poly = P.squarefree(poly)
        if P.degree(self.poly) < 1:
            raise ValueError("defining polynomial must be nonconstant")
        lo, hi = Fraction(lo), Fraction(hi)
        if lo > hi:
            raise ValueError("empty interval")
        self._seq = None
        if P.evaluate(self.poly, lo) == 0:
            hi = lo
        elif P.evaluate(self.poly, hi) == 0:
            lo = hi
        elif check and P.count_roots(self.poly, lo, hi, self.seq) != 1:
            raise ValueError(f"interval [{lo}, {hi}] does not isolate one root of {P.to_str(self.poly)}")
        self.lo, self.hi = lo, hi

    @classmethod
    def from_rational(cls, q) -> AlgebraicReal:
        q = Fraction(q)
        return cls([-q.numerator, q.denominator], q, q, check=False)

    @property
    def seq(self):
        if self._seq is None:
            self._seq = P.sturm_sequence(self.poly)
        return self._seq

    @property
    def is_rational(self) -> bool:
        return self.lo == self.hi

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def refine(self) -> None:
        if self.lo == self.hi:
            return
        mid = (self.lo + self.hi) / 2
        v = P.evaluate(self.poly, mid)
        if v == 0:
            self.lo = self.hi = mid
        elif (v > 0) == (P.evaluate(self.poly, self.lo) > 0):
            self.lo = mid
        else:
            self.hi = mid

    def refine_to(self, width) -> AlgebraicReal:
        width = Fraction(width)
        while self.hi - self.lo > width:
            self.refine()
        return self

    def cmp(self, other) -> int:
        if isinstance(other, Rational):
            other = AlgebraicReal.from_rational(other)
        if isinstance(other, FieldElement):
            other = other.to_algebraic()
        g = None
        while True:
            if self.hi < other.lo:
                return -1
            if self.lo > other.hi:
                return 1
            if g is None:
                g = P.gcd_poly(self.poly, other.poly)
            lo, hi = max(self.lo, other.lo), min(self.hi, other.hi)
            if P.degree(g) >= 1 and P.count_roots_closed(g, lo, hi) > 0:
                return 0
            if self.is_rational and other.is_rational:
                return (self.lo > other.lo) - (self.lo < other.lo)
            if self.width >= other.width:
                self.refine()
            else:
                other.refine()

    def __eq__(self, other):
        if not isinstance(other, (AlgebraicReal, FieldElement) + Rational):
            return NotImplemented
        return self.cmp(other) == 0

    def __lt__(self, other):
        return self.cmp(other) < 0

    def __le__(self, other):
        return self.cmp(other) <= 0

    def __gt__(self, other):
        return self.cmp(other) > 0

    def __ge__(self, other):
        return self.cmp(other) >= 0

    __hash__ = None

    def to_float(self, digits: int = 15) -> str:
        """Decimal string with ``digits`` significant digits."""
        mag = max(abs(self.lo), abs(self.hi), Fraction(1, 10**6))
        self.refine_to(mag * Fraction(1, 10 ** (digits + 2)))
        return _sig_digits(self.lo, self.hi, digits)

    def __float__(self):
        return float(self.to_float(17))

    def display_interval(self) -> tuple[Fraction, Fraction]:
        """A short-denominator isolating interval for printing."""
        if self.is_rational:
            return self.lo, self.hi
        k = 2
        while True:
            scale = 10**k
            lo = Fraction(math.floor(self.lo * scale), scale)
            hi = Fraction(math.ceil(self.hi * scale), scale)
            if P.evaluate(self.poly, lo) != 0 and P.evaluate(self.poly, hi) != 0 \
                    and P.count_roots(self.poly, lo, hi, self.seq) == 1:
                return lo, hi
            k += 1
            if scale * self.width > 1:
                self.refine()

    def __str__(self):
        lo, hi = self.display_interval()
        return f"root of {P.to_str(self.poly)} in [{lo},{hi}] ≈ {self.to_float(10)}"

    def __repr__(self):
        return f"AlgebraicReal({P.to_str(self.poly)!r}, {self.lo}, {self.hi})"


def cmp(x, y) -> int:
    if isinstance(x, FieldElement):
        return x.cmp(y)
    if isinstance(x, Rational):
        x = AlgebraicReal.from_rational(x)
    return x.cmp(y)


def to_float(x, digits: int = 15) -> str:
    if isinstance(x, Rational):
        x = AlgebraicReal.from_rational(x)
    return x.to_float(digits)


def _imul(a, b):
    p = (a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1])
    return min(p), max(p)


class NumberField:
    """The field ``Q(g)`` for a real algebraic generator ``g``."""

    def __init__(self, gen: AlgebraicReal, name: str = "b"):
        if len(P.irreducible_factors(gen.poly)) != 1:
            raise ValueError("generator polynomial must be irreducible; use NumberField.from_root")
        self.gen = gen
        self.name = name
        self.minpoly = list(gen.poly)
        self.degree = d = len(self.minpoly) - 1
        m = P.monic(self.minpoly)
        # x^k mod minpoly for k = d .. 2d-2, over a common denominator
        red, cur = [], [-c for c in m[:-1]]
        for _ in range(max(d - 1, 1)):
            red.append(cur)
            top = cur[-1]
            cur = [Fraction(0)] + cur[:-1]
            cur = [c - top * mc for c, mc in zip(cur, m[:-1])]
        den = reduce(lambda a, v: a * v.denominator // gcd(a, v.denominator),
                     (Fraction(v) for r in red for v in r), 1)
        self._red_den = den
        self._red = [tuple(int(Fraction(v) * den) for v in r) for r in red]
        gen.refine_to(Fraction(1, 10**40) * max(1, abs(gen.hi)))
        gf = float((gen.lo + gen.hi) / 2)
        self._gpow = [gf**i for i in range(d)]
        self._gabs = [abs(v) for v in self._gpow]

    @classmethod
    def from_root(cls, p, lo, hi, name: str = "b") -> NumberField:
        """Field generated by the unique root of ``p`` in ``[lo, hi]``."""
        root = AlgebraicReal(p, lo, hi)
        for f in P.irreducible_factors(root.poly):
            if P.count_roots_closed(f, root.lo, root.hi) == 1:
                return cls(AlgebraicReal(f, root.lo, root.hi), name)
        raise AssertionError("no irreducible factor vanishes at the root")

    # element construction -------------------------------------------------
    def element(self, coeffs) -> FieldElement:
        coeffs = [Fraction(c) for c in coeffs]
        if len(coeffs) > self.degree:
            coeffs = P.rem(coeffs, self.minpoly)
        coeffs = coeffs + [Fraction(0)] * (self.degree - len(coeffs))
        den = reduce(lambda a, c: a * c.denominator // gcd(a, c.denominator), coeffs, 1)
        return FieldElement._make(self, tuple(int(c * den) for c in coeffs), den)

    def eval_bits(self, bits: str) -> FieldElement:
        """``sum bits_k g^k`` for the generator ``g``."""
        m = self.minpoly
        d = self.degree
        if d > 1 and m[-1] == 1:
            # integer Horner with the companion recurrence of a monic minpoly
            low = m[:-1]
            v = [0] * d
            for ch in reversed(bits):
                t = v[-1]
                v = [0] + v[:-1]
                if t:
                    for i, c in enumerate(low):
                        v[i] -= t * c
                if ch == "1":
                    v[0] += 1
            return FieldElement._make(self, tuple(v), 1)
        if d == 1:
            g = self.gen.lo
            n = len(bits)
            num = sum(g.numerator**k * g.denominator**(n - 1 - k) for k, ch in enumerate(bits) if ch == "1")
            return self(Fraction(num, g.denominator ** max(n - 1, 0)))
        return self.element([int(ch) for ch in bits])

    def __call__(self, value) -> FieldElement:
        if isinstance(value, FieldElement):
            if value.field is not self and value.field != self:
                raise ValueError("element belongs to a different field")
            return value
        return self.element([Fraction(value)])

    @property
    def one(self) -> FieldElement:
        return self(1)

    @property
    def zero(self) -> FieldElement:
        return self(0)

    @property
    def generator(self) -> FieldElement:
        if self.degree == 1:
            return self(self.gen.lo)
        return self.element([0, 1])

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, NumberField):
            return NotImplemented
        if self.name != other.name or self.minpoly != other.minpoly:
            return False
        # both intervals isolate one root, so they share it iff their overlap holds a root
        lo, hi = max(self.gen.lo, other.gen.lo), min(self.gen.hi, other.gen.hi)
        return lo <= hi and P.count_roots_closed(self.minpoly, lo, hi) == 1

    def __hash__(self):
        return hash((self.name, tuple(self.minpoly)))

    def __repr__(self):
        return f"NumberField({P.to_str(self.minpoly)}, {self.name})"


class FieldElement:
    """Exact element of a :class:`NumberField`.

    Stored as integer numerators over one positive denominator in lowest terms,
    so hashing and equality are structural.
    """

    __slots__ = ("field", "nums", "den", "_hash")

    @staticmethod
    def _make(field, nums, den) -> FieldElement:
        g = reduce(gcd, nums, den)
        if g != 1:
            nums = tuple(n // g for n in nums)
            den //= g
        e = object.__new__(FieldElement)
        e.field, e.nums, e.den = field, nums, den
        e._hash = None
        return e

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.field is not self.field and other.field != self.field:
                raise ValueError("elements of different fields")
            return other
        if isinstance(other, int):
            return FieldElement._make(self.field, (other,) + (0,) * (len(self.nums) - 1), 1)
        if isinstance(other, Fraction):
            nums = (other.numerator,) + (0,) * (len(self.nums) - 1)
            return FieldElement._make(self.field, nums, other.denominator)
        return None

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(n, self.den) for n in self.nums)

    @property
    def is_rational(self) -> bool:
        return not any(self.nums[1:])

    def to_fraction(self) -> Fraction:
        if not self.is_rational:
            raise ValueError("element is irrational")
        return Fraction(self.nums[0], self.den)

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        nums = tuple(a * o.den + b * self.den for a, b in zip(self.nums, o.nums))
        return FieldElement._make(self.field, nums, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return FieldElement._make(self.field, tuple(-a for a in self.nums), self.den)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        nums = tuple(a * o.den - b * self.den for a, b in zip(self.nums, o.nums))
        return FieldElement._make(self.field, nums, self.den * o.den)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        if isinstance(other, Rational):
            q = Fraction(other)
            return FieldElement._make(self.field, tuple(a * q.numerator for a in self.nums),
                                      self.den * q.denominator)
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        f = self.field
        d = f.degree
        if d == 1:
            return FieldElement._make(f, (self.nums[0] * o.nums[0],), self.den * o.den)
        prod = [0] * (2 * d - 1)
        for i, a in enumerate(self.nums):
            if a:
                for j, b in enumerate(o.nums):
                    prod[i + j] += a * b
        rd = f._red_den
        out = [c * rd for c in prod[:d]]
        for k, c in enumerate(prod[d:]):
            if c:
                for i, r in enumerate(f._red[k]):
                    out[i] += c * r
        return FieldElement._make(f, tuple(out), self.den * o.den * rd)

    __rmul__ = __mul__

    def inverse(self) -> FieldElement:
        if not any(self.nums):
            raise ZeroDivisionError("inverse of zero")
        f = self.field
        if f.degree == 1:
            return f(Fraction(self.den, self.nums[0]))
        g, s, _ = P.ext_gcd(list(self.coeffs), f.minpoly)
        assert P.degree(g) == 0
        return f.element(s)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result, base = self.field.one, self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # ordering ------------------------------------------------------------
    def _interval(self):
        gen = self.field.gen
        lo = hi = Fraction(0)
        for n in reversed(self.nums):
            lo, hi = _imul((lo, hi), (gen.lo, gen.hi))
            lo, hi = lo + n, hi + n
        return lo / self.den, hi / self.den

    def interval(self, width=None) -> tuple[Fraction, Fraction]:
        """Rational enclosure of the value, optionally at most ``width`` wide."""
        lo, hi = self._interval()
        while width is not None and hi - lo > width and not self.field.gen.is_rational:
            self.field.gen.refine()
            lo, hi = self._interval()
        return lo, hi

    def sign(self) -> int:
        if not any(self.nums):
            return 0
        if self.is_rational:
            return 1 if self.nums[0] > 0 else -1
        f = self.field
        try:
            s = sum(n * g for n, g in zip(self.nums, f._gpow))
            mag = sum(abs(n) * g for n, g in zip(self.nums, f._gabs))
            if abs(s) > 1e-9 * mag:
                return 1 if s > 0 else -1
        except OverflowError:
            pass
        while True:
            lo, hi = self._interval()
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            f.gen.refine()

    def cmp(self, other) -> int:
        o = self._coerce(other)
        if o is None:
            if isinstance(other, AlgebraicReal):
                return self.to_algebraic().cmp(other)
            raise TypeError(f"cannot compare with {type(other).__name__}")
        return (self - o).sign()

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return (other.nums == self.nums and other.den == self.den
                    and (other.field is self.field or other.field == self.field))
        if isinstance(other, Rational):
            return self.is_rational and Fraction(self.nums[0], self.den) == other
        if isinstance(other, AlgebraicReal):
            return self.cmp(other) == 0
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            if self.is_rational:
                self._hash = hash(Fraction(self.nums[0], self.den))
            else:
                self._hash = hash((self.nums, self.den))
        return self._hash

    def __lt__(self, other):
        return self.cmp(other) < 0

    def __le__(self, other):
        return self.cmp(other) <= 0

    def __gt__(self, other):
        return self.cmp(other) > 0

    def __ge__(self, other):
        return self.cmp(other) >= 0

    def __float__(self):
        lo, hi = self.interval(Fraction(1, 10**20))
        return float((lo + hi) / 2)

    def to_float(self, digits: int = 15) -> str:
        if self.is_rational:
            return to_float(Fraction(self.nums[0], self.den), digits)
        lo, hi = self.interval()
        mag = max(abs(lo), abs(hi), Fraction(1, 10**6))
        lo, hi = self.interval(mag * Fraction(1, 10 ** (digits + 2)))
        return _sig_digits(lo, hi, digits)

    def to_algebraic(self) -> AlgebraicReal:
        """The same number as a root of its minimal polynomial."""
        if self.is_rational:
            return AlgebraicReal.from_rational(Fraction(self.nums[0], self.den))
        f = self.field
        gpow = [f.one]
        for _ in range(f.degree - 1):
            gpow.append(gpow[-1] * f.generator)
        cols = [(self * g).coeffs for g in gpow]
        rows = [[cols[j][i] for j in range(f.degree)] for i in range(f.degree)]
        sq = P.squarefree(charpoly(rows))
        lo, hi = self._interval()
        while P.count_roots_closed(sq, lo, hi) != 1:
            f.gen.refine()
            lo, hi = self._interval()
        return AlgebraicReal(sq, lo, hi)

    def __str__(self):
        terms = []
        name = self.field.name
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mono = "" if i == 0 else name if i == 1 else f"{name}^{i}"
            if not mono:
                terms.append(str(c))
            elif c == 1:
                terms.append(mono)
            elif c == -1:
                terms.append("-" + mono)
            else:
                terms.append(f"{c}*{mono}")
        if not terms:
            return "0"
        return " + ".join(terms).replace("+ -", "- ")

    def __repr__(self):
        return f"FieldElement({self}, {self.field!r})"


@dataclass(frozen=True)
class PolyFraction:
    """Rational function ``num / den`` with integer coefficients."""

    num: tuple
    den: tuple

    def __call__(self, x):
        return P.evaluate(self.num, x) / P.evaluate(self.den, x)

    def __str__(self):
        return f"({P.to_str(self.num)})/({P.to_str(self.den)})"


def series_form(w: EpString) -> PolyFraction:
    """Closed form of ``sum w_n x^n`` for ``|x| < 1``.

    With ``m = |pre|`` and ``q = |per|`` the sum is
    ``pre(x) + x^m per(x) / (1 - x^q)``, put over one denominator and reduced.
    """
    m, q = len(w.pre), len(w.per)
    pre = [int(c) for c in w.pre]
    per = [int(c) for c in w.per]
    den = P.sub([1], P.monomial(q))
    num = P.add(P.mul(pre, den), P.mul(P.monomial(m), per))
    if not num:
        return PolyFraction((), (1,))
    g = P.gcd_poly(num, den)
    if P.degree(g) > 0:
        num = P.divmod_poly(num, g)[0]
        den = P.divmod_poly(den, g)[0]
    # integer coefficients, den(0) = 1 after scaling
    num_f = [Fraction(c) for c in num]
    den_f = [Fraction(c) for c in den]
    k = den_f[0]
    num_f = [c / k for c in num_f]
    den_f = [c / k for c in den_f]
    scale = reduce(lambda a, c: a * c.denominator // gcd(a, c.denominator), num_f + den_f, 1)
    return PolyFraction(tuple(int(c * scale) for c in num_f), tuple(int(c * scale) for c in den_f))


class NoBaseError(ValueError):
    """The base equation has no root in ``[1/2, 1)``."""


@dataclass(frozen=True)
class BaseSolution:
    """Least root ``b`` in ``[1/2, 1)`` and the field ``Q(b)``."""

    b: AlgebraicReal
    field: NumberField
    equation: tuple

    @property
    def b_elem(self) -> FieldElement:
        return self.field.generator

    @property
    def B_elem(self) -> FieldElement:
        return self.field.generator.inverse()

    @property
    def B(self) -> AlgebraicReal:
        return self.B_elem.to_algebraic()


def base_equation(alpha: EpString, beta: EpString) -> list[int]:
    """Integer polynomial whose roots in (0,1) solve the series equality."""
    fa, fb = series_form(alpha), series_form(beta)
    return P.primitive(P.sub(P.mul(fa.num, fb.den), P.mul(fb.num, fa.den)))


def solve_base(alpha, beta=None) -> BaseSolution:
    """Least solution in ``[1/2, 1)`` of ``sum alpha_n x^n = sum beta_n x^n``.

    Accepts either a pair object with ``alpha``/``beta`` or two strings.
    """
    if beta is None:
        alpha, beta = alpha.alpha, alpha.beta
    eq = base_equation(alpha, beta)
    if not eq:
        raise NoBaseError("series are identical")
    roots = [r for r in P.isolate_roots(eq, Fraction(1, 2), 1) if r[0] < 1]
    if not roots:
        raise NoBaseError(f"{P.to_str(eq)} has no root in [1/2, 1)")
    lo, hi = roots[0]
    field = NumberField.from_root(eq, lo, hi, "b")
    return BaseSolution(field.gen, field, tuple(eq))


def _horner(word: str, x):
    if isinstance(x, FieldElement) and x.den == 1 and x == x.field.generator:
        return x.field.eval_bits(word)
    acc = x * 0
    for ch in reversed(word):
        acc = acc * x
        if ch == "1":
            acc = acc + 1
    return acc


def series_value(w: EpString, x):
    """``sum w_n x^n`` for ``|x| < 1``, evaluated directly in ``x``'s field."""
    m, q = len(w.pre), len(w.per)
    tail = _horner(w.per, x)
    if tail != 0:
        tail = x**m * tail / (1 - x**q)
    return _horner(w.pre, x) + tail


def project(b: FieldElement, w: EpString) -> FieldElement:
    """``(1 - b) * sum w_k b^k`` evaluated exactly in the field of ``b``."""
    return (1 - b) * series_value(w, b)
