"""Dense univariate polynomials over Q.

Polynomials are lists of coefficients, constant term first.  Integer
polynomials use ``int`` coefficients; everything else uses ``Fraction``.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import reduce
from math import gcd

Poly = list


def trim(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def degree(p) -> int:
    return len(trim(p)) - 1


def add(p, q):
    n = max(len(p), len(q))
    return trim([(p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(n)])


def sub(p, q):
    n = max(len(p), len(q))
    return trim([(p[i] if i < len(p) else 0) - (q[i] if i < len(q) else 0) for i in range(n)])


def mul(p, q):
    if not p or not q:
        return []
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return trim(out)


def scale(p, c):
    return trim([c * a for a in p])


def monomial(n: int, c=1):
    return [0] * n + [c]


def divmod_poly(a, b):
    """Quotient and remainder over Q."""
    b = trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = [Fraction(x) for x in trim(a)]
    db, lb = len(b) - 1, Fraction(b[-1])
    q = [Fraction(0)] * max(len(r) - db, 0)
    while len(r) - 1 >= db and r:
        k = len(r) - 1 - db
        c = r[-1] / lb
        q[k] = c
        for i, bc in enumerate(b):
            r[i + k] -= c * bc
        r = trim(r)
    return trim(q), r


def rem(a, b):
    return divmod_poly(a, b)[1]


def monic(p):
    p = trim(p)
    if not p:
        return p
    lc = Fraction(p[-1])
    return [Fraction(c) / lc for c in p]


def gcd_poly(a, b):
    a, b = trim(a), trim(b)
    while b:
        a, b = b, rem(a, b)
    return monic(a)


def ext_gcd(a, b):
    """Return ``(g, s, t)`` with ``s*a + t*b = g`` and ``g`` monic."""
    r0, r1 = trim(a), trim(b)
    s0, s1 = [Fraction(1)], []
    t0, t1 = [], [Fraction(1)]
    while r1:
        q, r = divmod_poly(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, sub(s0, mul(q, s1))
        t0, t1 = t1, sub(t0, mul(q, t1))
    lc = Fraction(r0[-1])
    return scale(r0, 1 / lc), scale(s0, 1 / lc), scale(t0, 1 / lc)


def derivative(p):
    return trim([i * c for i, c in enumerate(p)][1:])


def evaluate(p, x):
    acc = 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def primitive(p) -> list[int]:
    """Scale to coprime integer coefficients with positive leading term."""
    p = [Fraction(c) for c in trim(p)]
    if not p:
        return []
    den = reduce(lambda a, c: a * c.denominator // gcd(a, c.denominator), p, 1)
    ints = [int(c * den) for c in p]
    g = reduce(gcd, ints)
    if ints[-1] < 0:
        g = -g
    return [c // g for c in ints]


def squarefree(p) -> list[int]:
    p = trim(p)
    if degree(p) < 1:
        return primitive(p)
    g = gcd_poly(p, derivative(p))
    return primitive(divmod_poly(p, g)[0])


def sturm_sequence(p):
    p = [Fraction(c) for c in trim(p)]
    seq = [p, derivative(p)]
    while seq[-1]:
        r = rem(seq[-2], seq[-1])
        seq.append([-c for c in r])
    return seq[:-1]


def _sign_changes(seq, x) -> int:
    signs = [v for v in (evaluate(s, x) for s in seq) if v != 0]
    return sum(1 for u, v in zip(signs, signs[1:]) if (u < 0) != (v < 0))


def count_roots(p, a, b, seq=None) -> int:
    """Number of distinct real roots in the half-open interval ``(a, b]``."""
    if degree(p) < 1:
        return 0
    if seq is None:
        seq = sturm_sequence(p)
    return _sign_changes(seq, a) - _sign_changes(seq, b)


def count_roots_closed(p, a, b, seq=None) -> int:
    n = count_roots(p, a, b, seq)
    return n + (1 if evaluate(p, a) == 0 else 0)


def isolate_roots(p, a, b) -> list[tuple[Fraction, Fraction]]:
    """Isolating intervals for the real roots in ``[a, b]``, left to right.

    Each interval is either a single rational root ``(r, r)`` or an open
    interval ``(lo, hi)`` containing exactly one root with no root at the ends.
    """
    p = squarefree(p)
    a, b = Fraction(a), Fraction(b)
    if degree(p) < 1:
        return []
    seq = sturm_sequence(p)
    out = []

    def rec(lo, hi, n):
        # n = roots in the open interval (lo, hi)
        if n == 0:
            return
        if n == 1 and evaluate(p, lo) != 0 and evaluate(p, hi) != 0:
            out.append((lo, hi))
            return
        mid = (lo + hi) / 2
        left = count_roots(p, lo, mid, seq)
        if evaluate(p, mid) == 0:
            rec(lo, mid, left - 1)
            out.append((mid, mid))
            rec(mid, hi, n - left)
        else:
            rec(lo, mid, left)
            rec(mid, hi, n - left)

    if evaluate(p, a) == 0:
        out.append((a, a))
    inner = count_roots(p, a, b, seq) - (1 if evaluate(p, b) == 0 else 0)
    rec(a, b, inner)
    if a != b and evaluate(p, b) == 0:
        out.append((b, b))
    return out


def root_bound(p) -> Fraction:
    """Cauchy bound: every real root lies in ``[-R, R]``."""
    p = trim(p)
    lc = abs(Fraction(p[-1]))
    return 1 + max(abs(Fraction(c)) / lc for c in p[:-1]) if len(p) > 1 else Fraction(1)


def irreducible_factors(p) -> list[list[int]]:
    """Factor an integer polynomial over Q (delegated to sympy)."""
    from sympy import Poly as SPoly, symbols

    x = symbols("x")
    sp = SPoly(list(reversed(primitive(p))), x)
    _, factors = sp.factor_list()
    return [primitive([int(c) for c in reversed(f.all_coeffs())]) for f, _ in factors]


def to_str(p, var: str = "x") -> str:
    """Format like ``x^3+x^2-1``."""
    p = trim(p)
    if not p:
        return "0"
    parts = []
    for i in range(len(p) - 1, -1, -1):
        c = Fraction(p[i])
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        if i == 0:
            body = str(mag)
        else:
            mono = var if i == 1 else f"{var}^{i}"
            if mag == 1:
                body = mono
            elif mag.denominator == 1:
                body = f"{mag}{mono}"
            else:
                body = f"({mag}){mono}"
        parts.append((sign, body))
    first_sign, first = parts[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in parts[1:]:
        out += sign + body
    return out


_TERM = re.compile(
    r"\s*([+-])?\s*(?:\(?(\d+(?:/\d+)?)\)?)?\s*\*?\s*(?:([a-z])(?:\^(\d+))?)?\s*"
)


def parse_poly(text: str, var: str = "x") -> list[Fraction]:
    """Parse ``x^3+x^2-1`` or ``3/2x-1``; coefficients may be fractions."""
    pos, coeffs = 0, {}
    text = text.strip()
    if not text:
        raise ValueError("empty polynomial")
    while pos < len(text):
        m = _TERM.match(text, pos)
        if m is None or m.end() == pos or (m.group(2) is None and m.group(3) is None):
            raise ValueError(f"cannot parse polynomial {text!r} at position {pos}")
        sign, num, name, power = m.groups()
        if name is not None and name != var:
            raise ValueError(f"unknown variable {name!r} in {text!r}")
        c = Fraction(num) if num is not None else Fraction(1)
        if sign == "-":
            c = -c
        n = 0 if name is None else int(power) if power else 1
        coeffs[n] = coeffs.get(n, 0) + c
        pos = m.end()
    out = [Fraction(0)] * (max(coeffs) + 1)
    for n, c in coeffs.items():
        out[n] = c
    return trim(out)
