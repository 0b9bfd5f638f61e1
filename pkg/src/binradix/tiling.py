"""Tilings of the half-line by integer-part classes.

The tile with label ``s`` is the closure of the set of values whose decimal
has integer part ``s``.  Tiles are consecutive closed intervals; classifying
them by exact length gives a finite alphabet, and expanding the tiling by
``B`` maps each tile onto a run of tiles, which yields substitution rules.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .admissible import PrefixAutomaton, Variant, build_automaton
from .binstr import ZERO, Decimal, EpString
from .numeric import FieldElement
from .radix import RadixSystem, _stepper, encode, radix_value

__all__ = [
    "Tile", "Tiling", "TilingError", "NotSubstitutive", "SubstitutionSystem", "TileLengths",
    "tile_interval", "generate_tiling", "tile_lengths", "length_candidates",
    "in_powers_of_B", "type_names",
    "derive_substitution", "verify_self_replicating", "expand", "tiling_json", "tiling_svg",
]


class TilingError(RuntimeError):
    """Generated tiles failed to line up; signals a bug upstream."""


class NotSubstitutive(ValueError):
    def __init__(self, message: str, type_id: int | None = None, first=None, second=None):
        super().__init__(message)
        self.type_id = type_id
        self.first = first
        self.second = second


@dataclass(frozen=True, eq=False)
class Tile:
    label: str
    lo: FieldElement
    hi: FieldElement
    type_id: int | None = None

    @property
    def length(self) -> FieldElement:
        return self.hi - self.lo


@dataclass(eq=False)
class Tiling:
    system: RadixSystem
    tiles: list[Tile]
    lengths: list[FieldElement] = field(default_factory=list)

    def __len__(self):
        return len(self.tiles)

    @property
    def types(self) -> list[int]:
        return [t.type_id for t in self.tiles]

    @property
    def boundaries(self) -> list[FieldElement]:
        return [self.tiles[0].lo] + [t.hi for t in self.tiles]

    def names(self) -> list[str]:
        return type_names(self.system, self.lengths)

    def type_string(self) -> str:
        names = self.names()
        sep = "" if all(len(n) == 1 for n in names) else " "
        return sep.join(names[t] for t in self.types)


def _decimal_automaton(sys: RadixSystem) -> PrefixAutomaton:
    cache = sys.__dict__
    if "_dec_aut" not in cache:
        cache["_dec_aut"] = build_automaton(sys.pair, Variant.MINUS, leading_zero=True)
    return cache["_dec_aut"]


def _greedy(aut: PrefixAutomaton, state: int, prefer: int) -> EpString:
    seen, bits = {}, []
    while state not in seen:
        seen[state] = len(bits)
        row = aut.delta[state]
        bit = prefer if row[prefer] is not None else 1 - prefer
        bits.append(str(bit))
        state = row[bit]
    start = seen[state]
    return EpString("".join(bits[:start]), "".join(bits[start:]))


def tile_interval(sys: RadixSystem, s: str) -> Tile | None:
    """The tile labelled ``s``, or ``None`` if no decimal has integer part ``s``.

    The endpoints come from the least and greatest continuations of ``s``
    in the decimal automaton; both are eventually periodic because the
    greedy choice depends only on the automaton state.
    """
    if not s or set(s) - {"0", "1"}:
        raise ValueError(f"label must be a nonempty bit word, got {s!r}")
    aut = _decimal_automaton(sys)
    state = aut.run(s)
    if state is None:
        return None
    point = len(s) - 1
    low, top = _greedy(aut, state, 0), _greedy(aut, state, 1)
    lo = radix_value(sys, Decimal(low.prepend(s), point), check=False)
    hi = radix_value(sys, Decimal(top.prepend(s), point), check=False)
    return Tile(s, lo, hi)


def _next_label(sys: RadixSystem, x: FieldElement) -> str:
    plus = sys.with_variant(Variant.PLUS)
    r = encode(plus, x, digits=0, exact=False)
    return r.prefix[: r.point + 1].lstrip("0") or "0"


def generate_tiling(sys: RadixSystem, count: int) -> Tiling:
    """The first ``count`` tiles, walking boundary to boundary from 0."""
    if count < 1:
        raise ValueError("count must be positive")
    first = tile_interval(sys, "0")
    tiles = [first]
    while len(tiles) < count:
        x = tiles[-1].hi
        label = _next_label(sys, x)
        tile = tile_interval(sys, label)
        if tile is None or tile.lo != x:
            raise TilingError(f"no tile starts at boundary {x} (label {label})")
        tiles.append(tile)
    lengths = []
    for t in tiles:
        if t.length not in lengths:
            lengths.append(t.length)
    lengths.sort()
    index = {v: i for i, v in enumerate(lengths)}
    tiles = [Tile(t.label, t.lo, t.hi, index[t.length]) for t in tiles]
    return Tiling(sys, tiles, lengths)


def type_names(sys: RadixSystem, lengths: list[FieldElement]) -> list[str]:
    """``1`` and ``B`` when every length is the smallest or ``B`` times it, else indices."""
    if lengths:
        unit = lengths[0]
        rel = [v / unit for v in lengths]
        if all(r == 1 or r == sys.B for r in rel):
            return ["1" if r == 1 else "B" for r in rel]
    return [str(i) for i in range(len(lengths))]


def in_powers_of_B(sys: RadixSystem, x: FieldElement, max_power: int = 40) -> str:
    """Write ``x`` as ``B^k`` when possible, else as a polynomial in ``B``."""
    power = sys.field.one
    for k in range(max_power + 1):
        if x == power:
            return "1" if k == 0 else "B" if k == 1 else f"B^{k}"
        if power > x:
            break
        power = power * sys.B
    orbit = _stepper(sys)
    if orbit is None:
        return str(x)
    terms = []
    for i, c in enumerate(orbit.coords(x)):
        if c == 0:
            continue
        mono = "" if i == 0 else "B" if i == 1 else f"B^{i}"
        coef = str(abs(c)) if (abs(c) != 1 or not mono) else ""
        body = coef + ("*" if coef and mono else "") + mono
        terms.append(("-" if c < 0 else "+", body))
    if not terms:
        return "0"
    out = ("-" if terms[0][0] == "-" else "") + terms[0][1]
    for sign, body in terms[1:]:
        out += f" {sign} {body}"
    return out


def length_candidates(sys: RadixSystem) -> list[FieldElement]:
    """Positive differences ``pi(.S^m alpha) - pi(.S^n beta)``.

    The first tile starts at 0, the value of ``.(0)``, so ``(0)`` joins the
    shifts of beta as a possible left end.
    """
    ups = [radix_value(sys, Decimal(s, -1), check=False) for s in sys.pair.alpha.distinct_shifts()]
    lefts = set(sys.pair.beta.distinct_shifts()) | {ZERO}
    downs = [radix_value(sys, Decimal(s, -1), check=False) for s in lefts]
    out = []
    for u in ups:
        for d in downs:
            v = u - d
            if v > 0 and v not in out:
                out.append(v)
    return sorted(out)


@dataclass(frozen=True)
class TileLengths:
    """Observed lengths (ascending) with counts, and the candidate set."""

    lengths: tuple[FieldElement, ...]
    counts: tuple[int, ...]
    candidates: tuple[FieldElement, ...]

    @property
    def relative(self) -> tuple[FieldElement, ...]:
        return tuple(v / self.lengths[0] for v in self.lengths)

    def all_candidates(self) -> bool:
        return all(v in self.candidates for v in self.lengths)


def tile_lengths(sys: RadixSystem, tiling: Tiling | None = None, count: int = 200) -> TileLengths:
    if tiling is None:
        tiling = generate_tiling(sys, count)
    counts = [0] * len(tiling.lengths)
    for t in tiling.tiles:
        counts[t.type_id] += 1
    return TileLengths(tuple(tiling.lengths), tuple(counts), tuple(length_candidates(sys)))


@dataclass(frozen=True)
class SubstitutionSystem:
    """Rules ``t <- w``: the tile ``B T`` for ``T`` of type ``t`` is tiled by ``w``."""

    lengths: tuple[FieldElement, ...]
    rules: dict
    axiom: int
    names: tuple[str, ...]

    def word(self, types) -> str:
        sep = "" if all(len(n) == 1 for n in self.names) else " "
        return sep.join(self.names[t] for t in types)

    def rule_strings(self) -> list[str]:
        return [f"{self.names[t]}←{self.word(self.rules[t])}" for t in sorted(self.rules)]

    def __str__(self):
        return ", ".join(self.rule_strings())


def _rules_from(tiling: Tiling):
    sys = tiling.system
    bounds = tiling.boundaries
    where = {x: i for i, x in enumerate(bounds)}
    last = bounds[-1]
    rules, witness = {}, {}
    for k, tile in enumerate(tiling.tiles):
        lo, hi = sys.B * tile.lo, sys.B * tile.hi
        if hi > last:
            break
        i, j = where.get(lo), where.get(hi)
        if i is None or j is None:
            raise NotSubstitutive(f"B times tile {k} ({tile.label}) does not end on tile boundaries",
                                  tile.type_id, k)
        image = tuple(t.type_id for t in tiling.tiles[i:j])
        t = tile.type_id
        if t in rules and rules[t] != image:
            raise NotSubstitutive(f"type {t} expands inconsistently at tiles {witness[t]} and {k}",
                                  t, (witness[t], rules[t]), (k, image))
        if t not in rules:
            rules[t], witness[t] = image, k
    return rules


def derive_substitution(sys: RadixSystem, sample_size: int = 200, max_size: int = 5000) -> SubstitutionSystem:
    """Read substitution rules off the expansion ``x -> B x`` of the tiling.

    The sample grows until every tile type observed has a rule.
    """
    size = sample_size
    while True:
        tiling = generate_tiling(sys, size)
        rules = _rules_from(tiling)
        if len(rules) == len(tiling.lengths):
            break
        if size >= max_size:
            missing = sorted(set(range(len(tiling.lengths))) - set(rules))
            raise NotSubstitutive(f"no occurrence expands inside {size} tiles for types {missing}")
        size = min(2 * size, max_size)
    for t, image in rules.items():
        total = sum((tiling.lengths[u] for u in image), sys.field.zero)
        if total != sys.B * tiling.lengths[t]:
            raise NotSubstitutive(f"rule for type {t} does not preserve length", t)
    names = tuple(type_names(sys, tiling.lengths))
    return SubstitutionSystem(tuple(tiling.lengths), rules, tiling.tiles[0].type_id, names)


def verify_self_replicating(sys: RadixSystem, tiling: Tiling) -> bool:
    """Whether ``B x`` is a boundary for every boundary ``x`` with ``B x`` in range."""
    bounds = tiling.boundaries
    known = set(bounds)
    last = bounds[-1]
    for x in bounds:
        y = sys.B * x
        if y > last:
            continue
        if y not in known:
            return False
    return True


def expand(subst: SubstitutionSystem, steps: int) -> list[int]:
    """Apply the rules ``steps`` times starting from the axiom."""
    word = [subst.axiom]
    for _ in range(steps):
        word = [u for t in word for u in subst.rules[t]]
    return word


def tiling_json(tiling: Tiling, digits: int = 12) -> list[dict]:
    names = tiling.names()
    return [{
        "label": t.label,
        "lo": str(t.lo),
        "hi": str(t.hi),
        "type": names[t.type_id],
        "length": str(t.length),
        "lo_float": t.lo.to_float(digits),
        "hi_float": t.hi.to_float(digits),
    } for t in tiling.tiles]


_PALETTE = ["#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f",
            "#edc948", "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac"]


def tiling_svg(tiling: Tiling, width: int = 1000, height: int = 40) -> str:
    """One rectangle per tile, coloured by type."""
    end = float(tiling.boundaries[-1])
    scale = width / end if end else 1.0
    names = tiling.names()
    rects = []
    for t in tiling.tiles:
        x0, x1 = float(t.lo) * scale, float(t.hi) * scale
        colour = _PALETTE[t.type_id % len(_PALETTE)]
        rects.append(
            f'<rect x="{x0:.3f}" y="0" width="{x1 - x0:.3f}" height="{height}" '
            f'fill="{colour}" stroke="black" stroke-width="0.5"><title>{json.dumps(t.label)[1:-1]} '
            f'type {names[t.type_id]}</title></rect>')
    return (f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">\n'
            + "\n".join(rects) + "\n</svg>\n")
