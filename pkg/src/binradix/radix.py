"""Binary radix systems built from admissible pairs.

The base comes from the least root ``b`` of the series equation and the
partition point is ``p = pi_b(alpha) = pi_b(beta)``.  Encoding runs the
piecewise linear map

    f(x) = B x            on the left branch
    f(x) = B x + 1 - B    on the right branch

whose branches meet at ``p``; the minus map puts ``p`` on the left branch,
the plus map on the right.  All arithmetic happens exactly in ``Q(b)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from numbers import Rational

from .admissible import (AdmissiblePair, NotAdmissibleError, PrefixAutomaton, Variant,
                         build_automaton, check_admissible, is_null, member_decimal)
from . import poly as P
from .binstr import ZERO, Decimal, EpString
from .numeric import (AlgebraicReal, BaseSolution, FieldElement, NoBaseError, NumberField,
                      _horner, charpoly, project, series_value, solve_base)

__all__ = [
    "RadixError", "NullPairError", "ProjectionMismatchError", "NotMemberError",
    "RadixSystem", "build", "radix_value", "prefix_value", "itinerary", "orbit",
    "EncodeResult", "encode", "PairFromBase", "pair_from_base", "base_field",
    "lap_count", "to_exact", "DEFAULT_MAX_STEPS",
]

DEFAULT_MAX_STEPS = 4096


class RadixError(ValueError):
    pass


class NullPairError(RadixError):
    pass


class ProjectionMismatchError(RadixError):
    pass


class NotMemberError(RadixError):
    pass


@dataclass(frozen=True, eq=False)
class RadixSystem:
    pair: AdmissiblePair
    variant: Variant
    solution: BaseSolution
    b: FieldElement
    B: FieldElement
    p: FieldElement

    @property
    def field(self) -> NumberField:
        return self.solution.field

    def real(self, x: FieldElement) -> AlgebraicReal:
        return self.field(x).to_algebraic()

    def with_variant(self, variant: Variant) -> RadixSystem:
        return RadixSystem(self.pair, variant, self.solution, self.b, self.B, self.p)

    def __str__(self):
        return f"R({self.pair.alpha}, {self.pair.beta}, {self.variant})"


def build(pair: AdmissiblePair, variant: Variant = Variant.MINUS) -> RadixSystem:
    """Validate ``pair`` and assemble its radix system."""
    if is_null(pair):
        raise NullPairError(f"null pair {pair}: address space has zero growth rate")
    try:
        sol = solve_base(pair)
    except NoBaseError as e:
        raise NullPairError(f"null pair {pair}: {e}") from None
    b = sol.b_elem
    p = project(b, pair.alpha)
    if p != project(b, pair.beta):
        raise ProjectionMismatchError(f"projection mismatch for {pair}")
    B = 1 / b
    if not (1 < B <= 2) or not (1 - b <= p <= b):
        raise RadixError(f"base data out of range for {pair}")
    return RadixSystem(pair, variant, sol, b, B, p)


def to_exact(sys: RadixSystem, x) -> FieldElement:
    """Convert an int, Fraction, float or field element to ``Q(b)``."""
    if isinstance(x, FieldElement):
        return sys.field(x)
    if isinstance(x, float):
        x = Fraction(x)
    if not isinstance(x, Rational):
        raise TypeError(f"cannot convert {type(x).__name__} to an exact value")
    return sys.field(Fraction(x))


def _power(sys: RadixSystem, n: int) -> FieldElement:
    return sys.B ** n if n >= 0 else sys.b ** (-n)


def radix_value(sys: RadixSystem, d: Decimal, check: bool = True) -> FieldElement:
    """Exact value ``sum d_k B^(N-k)`` of a member decimal."""
    if check and not member_decimal(d, sys.pair, sys.variant):
        raise NotMemberError(f"{d} is not in the address space of {sys}")
    return _power(sys, d.point) * series_value(d.digits, sys.b)


def prefix_value(sys: RadixSystem, bits: str, point: int) -> FieldElement:
    """Value of a finite digit string with the point after position ``point``."""
    return _power(sys, point) * _horner(bits, sys.b)


# itineraries -----------------------------------------------------------------

def _branch(y, p, variant: Variant) -> int:
    c = (y > p) - (y < p)
    if c == 0:
        return 0 if variant is Variant.MINUS else 1
    return 0 if c < 0 else 1


def itinerary(B, p, y, variant: Variant, K: int) -> str:
    """First ``K`` itinerary bits of ``y`` under ``f_(B, p, variant)``."""
    out = []
    shift = 1 - B
    for _ in range(K):
        bit = _branch(y, p, variant)
        out.append("01"[bit])
        y = B * y if bit == 0 else B * y + shift
    return "".join(out)


def orbit(B, p, y, variant: Variant, max_steps: int = DEFAULT_MAX_STEPS):
    """Itinerary bits of ``y`` until the orbit revisits a point.

    Returns ``(bits, start)`` where ``bits[start:]`` repeats forever, or
    ``(bits, None)`` if no point repeated within ``max_steps``.
    """
    seen = {}
    out = []
    shift = 1 - B
    for k in range(max_steps):
        if y in seen:
            return "".join(out), seen[y]
        seen[y] = k
        bit = _branch(y, p, variant)
        out.append("01"[bit])
        y = B * y if bit == 0 else B * y + shift
    return "".join(out), None


class _IntegerOrbit:
    """Orbit stepping on integer coordinates in the basis ``1, B, ..., B^(d-1)``.

    Applies when ``B`` is an algebraic integer: multiplication by ``B`` is
    then an integer matrix, so an orbit started at ``v / D`` stays on the
    lattice ``Z^d / D`` and points can be hashed as integer tuples.
    """

    def __init__(self, B: FieldElement, p: FieldElement):
        field = B.field
        d = field.degree
        mp = P.primitive(charpoly(_mult_matrix(B)))
        if mp[-1] != 1:
            raise ValueError("B is not an algebraic integer")
        self.d, self.low = d, mp[:-1]
        powers = [B**i for i in range(d)]
        self._basis = powers
        # columns: coordinates of B^i in the field's own basis
        cols = [[Fraction(n, e.den) for n in e.nums] for e in powers]
        self._inv = _invert([[cols[j][i] for j in range(d)] for i in range(d)])
        bf = float(B.to_float(20))
        self._bpow = [bf**i for i in range(d)]
        self.p = self.coords(p)
        self.shift = self.coords(1 - B)

    def coords(self, e: FieldElement) -> list[Fraction]:
        vec = [Fraction(n, e.den) for n in e.nums]
        return [sum(r * v for r, v in zip(row, vec)) for row in self._inv]

    def _sign(self, w) -> int:
        s = mag = 0.0
        try:
            for x, g in zip(w, self._bpow):
                t = x * g
                s += t
                mag += abs(t)
        except OverflowError:
            s = mag = 0.0
        if abs(s) > 1e-9 * mag:
            return 1 if s > 0 else -1
        if not any(w):
            return 0
        return sum((e * x for e, x in zip(self._basis, w)), self._basis[0] * 0).sign()

    def run(self, y: FieldElement, variant: Variant, max_steps: int, closed: bool = True):
        yc = self.coords(y)
        den = 1
        for c in yc + self.p + self.shift:
            den = den * c.denominator // gcd(den, c.denominator)
        v = [int(c * den) for c in yc]
        pv = [int(c * den) for c in self.p]
        sv = [int(c * den) for c in self.shift]
        low, minus = self.low, variant is Variant.MINUS
        seen, out = {}, []
        for k in range(max_steps):
            if closed:
                key = tuple(v)
                if key in seen:
                    return "".join(out), seen[key]
                seen[key] = k
            c = self._sign([a - b for a, b in zip(v, pv)])
            bit = 0 if c < 0 or (c == 0 and minus) else 1
            out.append("01"[bit])
            t = v[-1]
            v = [0] + v[:-1]
            if t:
                v = [a - t * m for a, m in zip(v, low)]
            if bit:
                v = [a + b for a, b in zip(v, sv)]
        return "".join(out), None


def _mult_matrix(e: FieldElement) -> list[list[Fraction]]:
    field = e.field
    rows = []
    x = e
    basis = [field.element([0] * i + [1]) for i in range(field.degree)]
    cols = []
    for bvec in basis:
        prod = x * bvec
        cols.append([Fraction(n, prod.den) for n in prod.nums])
    for i in range(field.degree):
        rows.append([cols[j][i] for j in range(field.degree)])
    return rows


def _invert(m: list[list[Fraction]]) -> list[list[Fraction]]:
    n = len(m)
    a = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    for col in range(n):
        piv = next(r for r in range(col, n) if a[r][col] != 0)
        a[col], a[piv] = a[piv], a[col]
        pv = a[col][col]
        a[col] = [x / pv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [row[n:] for row in a]


def _stepper(sys: RadixSystem):
    cache = sys.__dict__
    if "_orbit" not in cache:
        try:
            cache["_orbit"] = _IntegerOrbit(sys.B, sys.p)
        except ValueError:
            cache["_orbit"] = None
    return cache["_orbit"]


@dataclass(frozen=True)
class EncodeResult:
    """Output of :func:`encode`: an exact decimal or a truncated prefix."""

    variant: Variant
    decimal: Decimal | None = None
    prefix: str | None = None
    point: int = -1

    @property
    def truncated(self) -> bool:
        return self.decimal is None

    def __str__(self):
        if self.decimal is not None:
            return str(self.decimal)
        ip = self.prefix[: self.point + 1].lstrip("0")
        return ip + "." + self.prefix[self.point + 1:] + "…"


def _leading(sys: RadixSystem, x: FieldElement) -> tuple[int, FieldElement]:
    y = (1 - sys.b) * x
    n = 0
    while y >= sys.p:
        y = y * sys.b
        n += 1
    return n, y


def encode(sys: RadixSystem, x, digits: int = 64, exact: bool = True,
           max_steps: int = DEFAULT_MAX_STEPS) -> EncodeResult:
    """Digit expansion of ``x >= 0`` in ``sys``.

    Finds the least ``N`` with ``y = b^N (1 - b) x < p``, then reads the
    itinerary of ``y`` with the point after position ``N``.  In exact mode
    the orbit is followed until it repeats, giving an eventually periodic
    decimal; otherwise (or if it does not repeat within ``max_steps``) the
    integer part and ``digits`` bits after the point are returned, so the
    error is below ``B^-digits / (1 - b)`` whatever the size of ``x``.
    """
    x = to_exact(sys, x)
    if x < 0:
        raise RadixError("negative numbers have no expansion")
    if x == 0:
        return EncodeResult(sys.variant, decimal=Decimal(ZERO, -1))
    n, y = _leading(sys, x)
    fast = _stepper(sys)
    if exact:
        if fast is not None:
            bits, start = fast.run(y, sys.variant, max_steps)
        else:
            bits, start = orbit(sys.B, sys.p, y, sys.variant, max_steps)
        if start is not None:
            return EncodeResult(sys.variant, decimal=Decimal(EpString(bits[:start], bits[start:]), n))
    if digits < 0:
        raise ValueError("digits must be non-negative")
    k = n + 1 + digits
    if fast is not None:
        bits = fast.run(y, sys.variant, k, closed=False)[0]
    else:
        bits = itinerary(sys.B, sys.p, y, sys.variant, k)
    return EncodeResult(sys.variant, prefix=bits, point=n)


def decode(sys: RadixSystem, result: EncodeResult | Decimal, check: bool = True) -> FieldElement:
    """Value of an encode result; truncated prefixes are padded with zeros."""
    if isinstance(result, Decimal):
        return radix_value(sys, result, check)
    if result.decimal is not None:
        return radix_value(sys, result.decimal, check)
    return prefix_value(sys, result.prefix, result.point)


__all__.append("decode")


# pairs from a base -------------------------------------------------------------

def base_field(poly, lo, hi) -> tuple[NumberField, FieldElement]:
    """Field ``Q(B)`` for the root of ``poly`` in ``[lo, hi]``, and ``B`` in it."""
    field = NumberField.from_root(poly, lo, hi, "B")
    return field, field.generator


@dataclass(frozen=True)
class PairFromBase:
    alpha: EpString | str
    beta: EpString | str
    truncated: bool
    pair: AdmissiblePair | None = None
    violation: str | None = None


def pair_from_base(B, p, max_steps: int = DEFAULT_MAX_STEPS) -> PairFromBase:
    """Itineraries of ``p`` under the minus and plus maps.

    ``B`` and ``p`` are exact (rationals or elements of one number field).
    When both orbits close the strings are exact and checked for admissibility.
    """
    b = 1 / B
    if not (1 < B <= 2):
        raise RadixError("B must satisfy 1 < B <= 2")
    if not (1 - b <= p <= b):
        raise RadixError("p must satisfy 1 - 1/B <= p <= 1/B")
    a_bits, a_start = orbit(B, p, p, Variant.MINUS, max_steps)
    b_bits, b_start = orbit(B, p, p, Variant.PLUS, max_steps)
    if a_start is None or b_start is None:
        return PairFromBase(a_bits, b_bits, True)
    alpha = EpString(a_bits[:a_start], a_bits[a_start:])
    beta = EpString(b_bits[:b_start], b_bits[b_start:])
    try:
        return PairFromBase(alpha, beta, False, check_admissible(alpha, beta))
    except NotAdmissibleError as e:
        return PairFromBase(alpha, beta, False, None, str(e))


# lap counting ------------------------------------------------------------------

def lap_count(sys: RadixSystem, n: int, leading_zero: bool = False) -> int:
    """Number of distinct length-``n`` minus itineraries of points in ``[0, 1]``.

    Computed by pulling ``p`` back through the inverse branches
    ``g0(x) = b x`` and ``g1(x) = b x + 1 - b``: the points whose first ``n``
    itinerary bits change are the preimages of ``p`` of order below ``n``.
    With ``leading_zero`` only points of ``[0, B p]`` count, matching the
    decimals' extra condition ``0 omega <= alpha``.
    """
    b, p = sys.b, sys.p
    points = set()
    level = {p}
    for _ in range(n):
        points |= level
        nxt = set()
        for z in level:
            left = b * z
            if left <= p:
                nxt.add(left)
            right = b * z + 1 - b
            if right > p:
                nxt.add(right)
        level = nxt
    if leading_zero:
        top = sys.B * p
        return 1 + sum(1 for z in points if z < top)
    return 1 + len(points)


def automaton(sys: RadixSystem, leading_zero: bool = False) -> PrefixAutomaton:
    return build_automaton(sys.pair, sys.variant, leading_zero)


__all__.append("automaton")
