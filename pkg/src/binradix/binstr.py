"""Eventually periodic bit-strings and decimals.

An :class:`EpString` is an infinite string ``pre + per + per + ...`` kept in
normal form (primitive period, shortest preperiod), so two values denote the
same infinite string exactly when they compare equal.  A :class:`Decimal` is
an ``EpString`` with a point placed after position ``point``.

Text notation uses parentheses for the repeating block::

    0(1)      = 0111...
    11.0(1)   = 11 . 0111...
    .(10)     = . 101010...
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from math import lcm

__all__ = [
    "EpString", "Decimal", "ParseError", "ZERO",
    "normalize", "bit_at", "shift", "lex_cmp", "distinct_shifts",
    "contains_factor", "parse", "parse_epstring", "parse_decimal",
    "format_value", "decimal_cmp",
]

_BITS = frozenset("01")


def _check_bits(word: str, what: str) -> None:
    if not _BITS.issuperset(word):
        raise ValueError(f"{what} must contain only 0 and 1, got {word!r}")


def _primitive_root(word: str) -> str:
    n = len(word)
    for d in range(1, n):
        if n % d == 0 and word[:d] * (n // d) == word:
            return word[:d]
    return word


def normalize(pre: str, per: str) -> tuple[str, str]:
    """Return the normal form ``(pre, per)`` of the string ``pre (per)``."""
    if not per:
        raise ValueError("period must be nonempty")
    _check_bits(pre, "preperiod")
    _check_bits(per, "period")
    per = _primitive_root(per)
    # rotate trailing preperiod bits into the cycle
    while pre and pre[-1] == per[-1]:
        per = per[-1] + per[:-1]
        pre = pre[:-1]
    return pre, per


@dataclass(frozen=True)
class EpString:
    """Eventually periodic infinite bit-string, always in normal form."""

    pre: str
    per: str

    def __post_init__(self):
        pre, per = normalize(self.pre, self.per)
        object.__setattr__(self, "pre", pre)
        object.__setattr__(self, "per", per)

    @classmethod
    def _normal(cls, pre: str, per: str) -> EpString:
        # caller guarantees (pre, per) is already a normal form
        w = object.__new__(cls)
        object.__setattr__(w, "pre", pre)
        object.__setattr__(w, "per", per)
        return w

    @classmethod
    def periodic(cls, per: str) -> EpString:
        return cls("", per)

    def __getitem__(self, n: int) -> str:
        if n < 0:
            raise IndexError("negative index into an infinite string")
        m = len(self.pre)
        if n < m:
            return self.pre[n]
        return self.per[(n - m) % len(self.per)]

    def bit(self, n: int) -> int:
        return int(self[n])

    def unroll(self, n: int) -> str:
        """First ``n`` bits as a str."""
        m = len(self.pre)
        if n <= m:
            return self.pre[:n]
        q = len(self.per)
        reps = (n - m) // q + 1
        return (self.pre + self.per * reps)[:n]

    def shift(self, n: int = 1) -> EpString:
        # suffixes and rotations of a normal form are normal
        m = len(self.pre)
        if n < m:
            return EpString._normal(self.pre[n:], self.per)
        k = (n - m) % len(self.per)
        return EpString._normal("", self.per[k:] + self.per[:k])

    def prepend(self, word: str) -> EpString:
        return EpString(word + self.pre, self.per)

    @property
    def cycle_start(self) -> int:
        return len(self.pre)

    @property
    def span(self) -> int:
        """Number of distinct shifts, ``len(pre) + len(per)``."""
        return len(self.pre) + len(self.per)

    def distinct_shifts(self) -> list[EpString]:
        return [self.shift(i) for i in range(self.span)]

    def contains_factor(self, factor: str) -> bool:
        if not factor:
            raise ValueError("factor must be nonempty")
        window = self.unroll(len(self.pre) + 2 * len(self.per) + len(factor))
        return factor in window

    def is_periodic(self) -> bool:
        return not self.pre

    def __lt__(self, other):
        return lex_cmp(self, other) < 0

    def __le__(self, other):
        return lex_cmp(self, other) <= 0

    def __gt__(self, other):
        return lex_cmp(self, other) > 0

    def __ge__(self, other):
        return lex_cmp(self, other) >= 0

    def __str__(self):
        return f"{self.pre}({self.per})"

    def __repr__(self):
        return f"EpString({str(self)!r})"


ZERO = EpString("", "0")


def bit_at(w: EpString, n: int) -> int:
    return w.bit(n)


def shift(w: EpString, n: int) -> EpString:
    return w.shift(n)


def distinct_shifts(w: EpString) -> list[EpString]:
    return w.distinct_shifts()


def contains_factor(w: EpString, factor: str) -> bool:
    return w.contains_factor(factor)


def lex_cmp(a: EpString, b: EpString) -> int:
    """Lexicographic comparison: -1, 0 or 1.

    Past ``len(a.pre) + len(b.pre) + lcm(|a.per|, |b.per|)`` positions both
    strings are jointly periodic, so a difference must show up before then.
    """
    if a == b:
        return 0
    window = len(a.pre) + len(b.pre) + lcm(len(a.per), len(b.per))
    x, y = a.unroll(window), b.unroll(window)
    return -1 if x < y else 1


@dataclass(frozen=True)
class Decimal:
    """Bit-string with a point after position ``point`` (``-1``: before all).

    Leading zeros in front of the point are dropped on construction, so
    ``01.1(0)`` and ``1.1(0)`` are the same value.
    """

    digits: EpString
    point: int

    def __post_init__(self):
        if self.point < -1:
            raise ValueError("point must be >= -1")
        digits, point = self.digits, self.point
        while point >= 0 and digits[0] == "0":
            digits = digits.shift(1)
            point -= 1
        object.__setattr__(self, "digits", digits)
        object.__setattr__(self, "point", point)

    @property
    def integer_part(self) -> str:
        """Bits left of the point (empty for values below one)."""
        return self.digits.unroll(self.point + 1)

    @property
    def fraction(self) -> EpString:
        return self.digits.shift(self.point + 1)

    def padded(self, point: int) -> EpString:
        """Digits with zeros prepended so the point sits after ``point``."""
        if point < self.point:
            raise ValueError("cannot pad to a smaller point")
        return self.digits.prepend("0" * (point - self.point))

    def is_zero(self) -> bool:
        return self.digits == ZERO

    def __str__(self):
        ip = self.integer_part
        frac = self.fraction
        if not ip and frac == ZERO:
            return "0."
        return ip + "." + ("" if frac == ZERO else str(frac))

    def __repr__(self):
        return f"Decimal({str(self)!r})"


def decimal_cmp(a: Decimal, b: Decimal) -> int:
    """Lexicographic order on decimals after aligning the points."""
    n = max(a.point, b.point)
    return lex_cmp(a.padded(n), b.padded(n))


class ParseError(ValueError):
    def __init__(self, text: str, pos: int, msg: str):
        super().__init__(f"{msg} at position {pos} in {text!r}")
        self.text = text
        self.pos = pos


_EP_RE = re.compile(r"([01]*)\(([01]+)\)")
_DEC_RE = re.compile(r"([01]*)\.([01]*)(?:\(([01]+)\))?")


def _first_bad(text: str, allowed: str) -> int:
    for i, ch in enumerate(text):
        if ch not in allowed:
            return i
    return len(text)


def parse_epstring(text: str) -> EpString:
    m = _EP_RE.fullmatch(text)
    if m is None:
        pos = _first_bad(text, "01")
        if pos == len(text):
            raise ParseError(text, pos, "expected '(' starting the period")
        if text[pos] == "(" and text.endswith(")") and pos == len(text) - 2:
            raise ParseError(text, pos + 1, "empty period")
        raise ParseError(text, pos, "unexpected character")
    return EpString(m.group(1), m.group(2))


def parse_decimal(text: str) -> Decimal:
    m = _DEC_RE.fullmatch(text)
    if m is None:
        pos = _first_bad(text, "01")
        if pos < len(text) and text[pos] == ".":
            tail = text[pos + 1:]
            inner = _first_bad(tail, "01")
            if inner < len(tail) and tail[inner] == "(":
                rest = tail[inner + 1:]
                close = _first_bad(rest, "01")
                if close == 0 and rest[:1] == ")":
                    raise ParseError(text, pos + inner + 2, "empty period")
                inner += 1 + close
                if close < len(rest) and rest[close] == ")":
                    inner += 1
            pos += 1 + inner
        if pos == len(text):
            raise ParseError(text, pos, "expected '.'")
        raise ParseError(text, pos, "unexpected character")
    ip, frac, per = m.groups()
    if per is None:
        if "1" in frac:
            raise ParseError(text, len(text), "repeating block required after a nonzero fraction")
        per = "0"
    return Decimal(EpString(ip + frac, per), len(ip) - 1)


def parse(text: str) -> EpString | Decimal:
    """Parse ``0(1)``-style strings and ``11.0(1)``-style decimals."""
    text = text.strip()
    if "." in text:
        return parse_decimal(text)
    return parse_epstring(text)


def format_value(value: EpString | Decimal) -> str:
    return str(value)
