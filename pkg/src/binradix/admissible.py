"""Admissible pairs, address spaces and their prefix automata.

A pair ``(alpha, beta)`` is admissible when alpha starts ``01``, beta starts
``10`` and no shift of alpha falls in ``(alpha, beta]`` and no shift of beta
in ``[alpha, beta)``.  Since both strings are eventually periodic, "every
shift" ranges over finitely many distinct shifts.

Membership in the address spaces uses the suffix form:

* minus: every suffix starting with 0 is ``<= alpha``, every suffix starting
  with 1 is ``> beta``;
* plus: every 0-suffix is ``< alpha``, every 1-suffix is ``>= beta``.
"""

from __future__ import annotations

import enum
import json
import math
from math import lcm
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple

from . import poly as P
from .binstr import Decimal, EpString, lex_cmp
from .numeric import AlgebraicReal, charpoly

__all__ = [
    "Variant", "Violation", "NotAdmissibleError", "AdmissiblePair",
    "find_violation", "check_admissible", "member", "member_decimal",
    "PrefixAutomaton", "build_automaton", "count_prefixes", "spectral_radius",
    "growth_rate", "is_null", "NULL_EPS",
    "ForbiddenSet", "NoFiniteSetError", "forbidden_candidates", "derive_forbidden_set",
    "avoids", "FactorAutomaton",
]

NULL_EPS = Fraction(1, 10**6)


class Variant(enum.Enum):
    MINUS = "-"
    PLUS = "+"

    @classmethod
    def parse(cls, text: str) -> Variant:
        t = text.strip().lower()
        if t in ("-", "minus", "m"):
            return cls.MINUS
        if t in ("+", "plus", "p"):
            return cls.PLUS
        raise ValueError(f"unknown variant {text!r}")

    def __str__(self):
        return self.value


class Violation(NamedTuple):
    """Witness that a pair is not admissible."""

    n: int
    which: str
    condition: int
    detail: str


class NotAdmissibleError(ValueError):
    def __init__(self, violation: Violation):
        super().__init__(violation.detail)
        self.violation = violation


def find_violation(alpha: EpString, beta: EpString) -> Violation | None:
    if alpha.unroll(2) != "01":
        return Violation(0, "alpha", 1, f"alpha = {alpha} must start with 01")
    if beta.unroll(2) != "10":
        return Violation(0, "beta", 1, f"beta = {beta} must start with 10")
    for n, s in enumerate(alpha.distinct_shifts()):
        if lex_cmp(alpha, s) < 0 and lex_cmp(s, beta) <= 0:
            return Violation(n, "alpha", 2, f"S^{n} alpha = {s} lies in (alpha, beta]")
    for n, s in enumerate(beta.distinct_shifts()):
        if lex_cmp(alpha, s) <= 0 and lex_cmp(s, beta) < 0:
            return Violation(n, "beta", 2, f"S^{n} beta = {s} lies in [alpha, beta)")
    return None


@dataclass(frozen=True)
class AdmissiblePair:
    alpha: EpString
    beta: EpString

    def __post_init__(self):
        v = find_violation(self.alpha, self.beta)
        if v is not None:
            raise NotAdmissibleError(v)

    def __str__(self):
        return f"({self.alpha}, {self.beta})"


def check_admissible(alpha: EpString, beta: EpString) -> AdmissiblePair:
    """Return the validated pair or raise :class:`NotAdmissibleError`."""
    return AdmissiblePair(alpha, beta)


def member(omega: EpString, pair: AdmissiblePair, variant: Variant) -> bool:
    """Whether ``omega`` lies in the address space of ``pair`` and ``variant``."""
    plus = variant is Variant.PLUS
    alpha, beta = pair.alpha, pair.beta
    m, q = len(omega.pre), len(omega.per)
    # a window this long decides every comparison (see lex_cmp)
    width = m + max(len(alpha.pre) + lcm(q, len(alpha.per)),
                    len(beta.pre) + lcm(q, len(beta.per)))
    text = omega.unroll(m + q + width)
    a, b = alpha.unroll(width), beta.unroll(width)
    for i in range(m + q):
        s = text[i:i + width]
        if s[0] == "0":
            if s > a or (plus and s == a):
                return False
        elif s < b or (not plus and s == b):
            return False
    return True


def member_decimal(d: Decimal, pair: AdmissiblePair, variant: Variant) -> bool:
    """Membership of a decimal; the point position plays no role."""
    w = d.digits
    if not member(w, pair, variant):
        return False
    c = lex_cmp(w.prepend("0"), pair.alpha)
    return c <= 0 if variant is Variant.MINUS else c < 0


# prefix automata -------------------------------------------------------------

def _successor(w: EpString):
    span, start = w.span, w.cycle_start
    return [m + 1 if m + 1 < span else start for m in range(span)]


@dataclass
class PrefixAutomaton:
    """DFA accepting the finite prefixes of an address space.

    A state records, for every suffix still tied with the first bits of alpha
    (suffixes starting with 0) or beta (starting with 1), how far the tie has
    gone; positions past the preperiod wrap around the period, which keeps the
    state set finite.  Only states with an infinite continuation are kept.
    """

    pair: AdmissiblePair
    variant: Variant
    leading_zero: bool
    keys: list = field(repr=False)
    delta: list = field(repr=False)
    initial: int | None = 0

    @property
    def size(self) -> int:
        return len(self.keys)

    def step(self, state: int | None, bit) -> int | None:
        if state is None:
            return None
        return self.delta[state][int(bit)]

    def run(self, word: str) -> int | None:
        s = self.initial
        for ch in word:
            s = self.step(s, ch)
            if s is None:
                return None
        return s

    def accepts(self, word: str) -> bool:
        return self.run(word) is not None

    def matrix(self) -> list[list[int]]:
        n = self.size
        m = [[0] * n for _ in range(n)]
        for i, (t0, t1) in enumerate(self.delta):
            for t in (t0, t1):
                if t is not None:
                    m[i][t] += 1
        return m

    def edges(self) -> list[tuple[int, int, int]]:
        return [(i, b, t) for i, row in enumerate(self.delta) for b, t in enumerate(row) if t is not None]

    def to_json(self) -> str:
        return json.dumps({"states": self.size, "initial": self.initial, "edges": self.edges()})


def _raw_step(key, c, alpha, beta, na, nb):
    act_a, act_b = key
    new_a = set()
    for m in act_a:
        a = alpha[m]
        if c == a:
            new_a.add(na[m])
        elif c > a:
            return None
    if c == "0":
        new_a.add(na[0])
    new_b = set()
    for m in act_b:
        b = beta[m]
        if c == b:
            new_b.add(nb[m])
        elif c < b:
            return None
    if c == "1":
        new_b.add(nb[0])
    return frozenset(new_a), frozenset(new_b)


def build_automaton(pair: AdmissiblePair, variant: Variant = Variant.MINUS,
                    leading_zero: bool = False) -> PrefixAutomaton:
    """Prefix automaton for the address space of ``pair``.

    With ``leading_zero`` the automaton starts as if a 0 had already been
    read, which adds the condition ``0 omega <= alpha`` (``<`` for plus) used
    for decimals.  Strict and non-strict comparisons only differ on strings
    tied with alpha or beta forever, which no finite prefix can detect, so the
    accepted language is the same for both variants.
    """
    alpha, beta = pair.alpha, pair.beta
    na, nb = _successor(alpha), _successor(beta)
    start = (frozenset([na[0]]) if leading_zero else frozenset(), frozenset())
    index = {start: 0}
    keys, raw = [start], []
    todo = deque([start])
    while todo:
        k = todo.popleft()
        row = []
        for c in "01":
            t = _raw_step(k, c, alpha, beta, na, nb)
            if t is not None and t not in index:
                index[t] = len(keys)
                keys.append(t)
                todo.append(t)
            row.append(None if t is None else index[t])
        raw.append(row)

    live = [True] * len(keys)
    changed = True
    while changed:
        changed = False
        for i, row in enumerate(raw):
            if live[i] and not any(t is not None and live[t] for t in row):
                live[i] = False
                changed = True

    if not live[0]:
        return PrefixAutomaton(pair, variant, leading_zero, [], [], None)
    # renumber live states in breadth-first order from the start
    order, seen = [], {0}
    todo = deque([0])
    while todo:
        i = todo.popleft()
        order.append(i)
        for t in raw[i]:
            if t is not None and live[t] and t not in seen:
                seen.add(t)
                todo.append(t)
    new = {old: j for j, old in enumerate(order)}
    delta = [tuple(new[t] if t is not None and live[t] else None for t in raw[i]) for i in order]
    return PrefixAutomaton(pair, variant, leading_zero, [keys[i] for i in order], delta, 0)


def count_prefixes(aut: PrefixAutomaton, n: int) -> int:
    """Number of accepted words of length ``n``."""
    if aut.initial is None:
        return 0
    v = [0] * aut.size
    v[aut.initial] = 1
    for _ in range(n):
        w = [0] * aut.size
        for i, x in enumerate(v):
            if x:
                for t in aut.delta[i]:
                    if t is not None:
                        w[t] += x
        v = w
    return sum(v)


def spectral_radius(aut: PrefixAutomaton) -> AlgebraicReal:
    """Exact Perron root of the transition matrix."""
    if aut.size == 0:
        return AlgebraicReal.from_rational(0)
    cp = P.primitive(charpoly(aut.matrix()))
    roots = P.isolate_roots(cp, 0, P.root_bound(cp))
    lo, hi = roots[-1]
    for f in P.irreducible_factors(cp):
        if P.count_roots_closed(f, lo, hi) == 1:
            return AlgebraicReal(f, lo, hi)
    return AlgebraicReal(cp, lo, hi)


def growth_rate(aut: PrefixAutomaton) -> float:
    """Exponential growth rate ``lim (1/n) ln |words of length n|``."""
    rho = spectral_radius(aut)
    if rho.cmp(0) == 0:
        return -math.inf
    return math.log(float(rho.to_float(20)))


def is_null(pair: AdmissiblePair) -> bool:
    rho = spectral_radius(build_automaton(pair, Variant.MINUS))
    return rho.cmp(1 + NULL_EPS) <= 0


# forbidden factors -----------------------------------------------------------

class NoFiniteSetError(ValueError):
    """No finite forbidden-factor description was found."""

    def __init__(self, message: str, family: list[str], witness: str | None = None):
        super().__init__(message)
        self.family = family
        self.witness = witness


@dataclass(frozen=True)
class ForbiddenSet:
    """Finite set of words whose avoidance characterizes the decimals.

    A string ``omega`` with any number of leading zeros is the digit string
    of a decimal in the address space exactly when it contains none of
    ``words``.  The equivalence was checked on all words up to ``verified_to``.
    """

    words: tuple[str, ...]
    verified_to: int

    def __iter__(self):
        return iter(self.words)

    def __contains__(self, w):
        return w in self.words

    def __len__(self):
        return len(self.words)

    def __str__(self):
        return "\n".join(self.words)


def _minimal(words) -> list[str]:
    kept: list[str] = []
    for w in sorted(set(words), key=lambda s: (len(s), s)):
        if not any(k in w for k in kept):
            kept.append(w)
    return kept


def forbidden_candidates(pair: AdmissiblePair, extra: int = 0) -> list[str]:
    """Minimal candidate forbidden words from the first digits of alpha, beta.

    Where ``alpha_k = 0`` the word ``alpha_1..alpha_{k-1} 1`` pushes a
    0-suffix above alpha (the leading 0 is dropped: a virtual leading zero
    always precedes a decimal).  Where ``beta_k = 1`` the word
    ``beta_0..beta_{k-1} 0`` pushes a 1-suffix below beta.  Indices run up to
    ``|pre| + 2|per| + extra``.
    """
    alpha, beta = pair.alpha, pair.beta
    words = []
    ka = len(alpha.pre) + 2 * len(alpha.per) + extra
    for k in range(2, ka + 1):
        if alpha[k] == "0":
            words.append(alpha.unroll(k)[1:] + "1")
    kb = len(beta.pre) + 2 * len(beta.per) + extra
    for k in range(2, kb + 1):
        if beta[k] == "1":
            words.append(beta.unroll(k) + "0")
    return _minimal(words)


def avoids(word: str, forbidden) -> bool:
    return not any(f in word for f in forbidden)


class FactorAutomaton:
    """DFA for the words avoiding every member of a finite set."""

    def __init__(self, words):
        self.words = set(words)
        prefixes = {""} | {w[:i] for w in self.words for i in range(len(w))}
        self._prefixes = prefixes
        self.delta = {}
        for s in prefixes:
            row = []
            for c in "01":
                t = s + c
                if any(t.endswith(w) for w in self.words):
                    row.append(None)
                    continue
                while t not in prefixes:
                    t = t[1:]
                row.append(t)
            self.delta[s] = tuple(row)
        self.initial = ""

    def step(self, state, bit):
        if state is None:
            return None
        return self.delta[state][int(bit)]


def _first_disagreement(fa: FactorAutomaton, aut: PrefixAutomaton, depth: int) -> str | None:
    frontier = {(fa.initial, aut.initial): ""}
    for _ in range(depth):
        nxt = {}
        for (fs, ps), word in frontier.items():
            for c in "01":
                f2, p2 = fa.step(fs, c), aut.step(ps, c)
                if (f2 is None) != (p2 is None):
                    return word + c
                if f2 is not None and (f2, p2) not in nxt:
                    nxt[(f2, p2)] = word + c
        frontier = nxt
    return None


def derive_forbidden_set(pair: AdmissiblePair, max_len: int = 40) -> ForbiddenSet:
    """Finite forbidden-factor set for the decimals of ``pair``.

    Raises :class:`NoFiniteSetError` when candidates keep appearing past the
    periodic bound or when avoidance and automaton acceptance disagree on
    some word of length at most ``max_len``.
    """
    words = forbidden_candidates(pair)
    period = max(len(pair.alpha.per), len(pair.beta.per))
    longer = forbidden_candidates(pair, extra=2 * period)
    if longer != words:
        raise NoFiniteSetError(
            f"forbidden words keep appearing for {pair}: {', '.join(longer)}, ...", longer)
    aut = build_automaton(pair, Variant.MINUS, leading_zero=True)
    witness = _first_disagreement(FactorAutomaton(words), aut, max_len)
    if witness is not None:
        raise NoFiniteSetError(
            f"avoiding {{{', '.join(words)}}} disagrees with the address space on {witness}",
            words, witness)
    return ForbiddenSet(tuple(words), max_len)
