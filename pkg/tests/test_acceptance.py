"""Acceptance criteria 1-11, each at its stated tolerance.

Tests are named ``test_criterion_NN_*``; the summary at the end of the run
prints one PASS/FAIL line per criterion number.
"""

import io
import json
import random
import re
from fractions import Fraction
from math import log, sqrt
from pathlib import Path

import pytest

from binradix.admissible import (NoFiniteSetError, Variant, build_automaton, check_admissible,
                                 count_prefixes, derive_forbidden_set, growth_rate, is_null, member_decimal)
from binradix.binstr import decimal_cmp, parse_epstring
from binradix.cli import run
from binradix.numeric import solve_base
from binradix.radix import base_field, decode, encode, lap_count, pair_from_base, radix_value
from binradix.tiling import derive_substitution, generate_tiling, in_powers_of_B, tile_lengths, verify_self_replicating
from conftest import ALL_PAIRS, CUBIC, GOLDEN, NON_NULL, QUINTIC, SPARSE, STD, pair, system
from oracles import brute_prefixes
from sampling import sample_decimals

GOLDEN_DIR = Path(__file__).parent / "golden"


def cli_json(*argv):
    out = io.StringIO()
    code = run(["--json", *argv], out, io.StringIO())
    return code, json.loads(out.getvalue())


# 1 -------------------------------------------------------------------------------------------

def test_criterion_01_standard_base():
    s = solve_base(pair(*STD))
    assert s.b.is_rational and s.b.lo == Fraction(1, 2)


def test_criterion_01_golden_base():
    s = solve_base(pair(*GOLDEN))
    assert abs(float(s.B) - (1 + sqrt(5)) / 2) <= 1e-10
    assert s.b.poly == [-1, 1, 1]  # x^2+x-1


@pytest.mark.parametrize("p", CUBIC, ids=["cubic1", "cubic2", "cubic3"])
def test_criterion_01_cubic_bases(p):
    s = solve_base(pair(*p))
    assert abs(float(s.b) - 0.7549) <= 1e-4
    assert abs(float(s.B) - 1.3247) <= 1e-4
    assert s.b.poly == [-1, 0, 1, 1]  # x^3+x^2-1


# 2 -------------------------------------------------------------------------------------------

PUBLISHED_FORBIDDEN = [
    (QUINTIC, {"111", "11011", "000"}),
    (GOLDEN, {"11"}),
    (CUBIC[0], {"11", "101", "1001", "10001"}),
    (CUBIC[1], {"100", "111"}),
    (CUBIC[2], {"11", "1000"}),
]


@pytest.mark.parametrize("p,want", PUBLISHED_FORBIDDEN, ids=["quintic", "golden", "cubic1", "cubic2", "cubic3"])
def test_criterion_02_forbidden_set(p, want, report):
    got = set(derive_forbidden_set(pair(*p)).words)
    if got != want:
        report(f"criterion 2: {p} derived {sorted(got)}, published {sorted(want)}")
    assert got == want


def test_criterion_02_no_finite_set():
    with pytest.raises(NoFiniteSetError) as exc:
        derive_forbidden_set(check_admissible(parse_epstring("011(01)"), parse_epstring("1(0)")))
    assert exc.value.family[:3] == ["111", "11011", "1101011"]


# 3 -------------------------------------------------------------------------------------------

def test_criterion_03_null_pair(report):
    a = pair(*SPARSE)
    aut = build_automaton(a)
    rate = log(count_prefixes(aut, 200)) / 200
    null = is_null(a)
    report(f"criterion 3: {SPARSE} is_null={null}, ln|G_200|/200={rate:.4f}, "
           f"growth_rate={growth_rate(aut):.6f} (ln sqrt 2 = {log(sqrt(2)):.6f})")
    assert null
    assert rate < 0.05


@pytest.mark.parametrize("p", NON_NULL, ids=["std", "golden", "cubic1", "cubic2", "cubic3"])
def test_criterion_03_non_null_pairs(p):
    assert not is_null(pair(*p))


# 4 -------------------------------------------------------------------------------------------

@pytest.mark.parametrize("p", NON_NULL, ids=["std", "golden", "cubic1", "cubic2", "cubic3"])
def test_criterion_04_entropy_identity(p):
    s = system(*p)
    assert abs(growth_rate(build_automaton(s.pair)) - log(float(s.B))) <= 1e-6


# 5 -------------------------------------------------------------------------------------------

@pytest.mark.parametrize("p", NON_NULL, ids=["std", "golden", "cubic1", "cubic2", "cubic3"])
def test_criterion_05_roundtrip(p, report):
    s = system(*p)
    aut = build_automaton(s.pair, s.variant, leading_zero=True)
    rng = random.Random(f"criterion 5 {p}")
    closed = 0
    for _ in range(1000):
        q = rng.randint(1, 50)
        x = Fraction(rng.randrange(0, 100 * q), q)
        r = encode(s, x, max_steps=4096)
        if r.truncated:
            assert aut.accepts(r.prefix)
        else:
            closed += 1
            assert member_decimal(r.decimal, s.pair, s.variant)
            assert decode(s, r) == x
        t = encode(s, x, digits=64, exact=False)
        if x:
            assert aut.accepts(t.prefix)
        assert abs(float(decode(s, t)) - float(x)) < 1e-6
    report(f"criterion 5: {p} {closed}/1000 orbits closed within 4096 steps")


# 6 -------------------------------------------------------------------------------------------

@pytest.mark.parametrize("p", ALL_PAIRS, ids=["std", "golden", "cubic1", "cubic2", "cubic3", "quintic", "sparse"])
def test_criterion_06_oracles(p):
    a = pair(*p)
    aut = build_automaton(a)
    counts = [count_prefixes(aut, n) for n in range(13)]
    assert counts == [len(brute_prefixes(a.alpha, a.beta, n)) for n in range(13)]
    assert counts == [lap_count(system(*p), n) for n in range(13)]


# 7 -------------------------------------------------------------------------------------------

def test_criterion_07_golden_tiling():
    s = system(*GOLDEN)
    assert generate_tiling(s, 22).type_string() == "B1BB1B1BB1BB1B1BB1B1BB"
    assert set(derive_substitution(s).rule_strings()) == {"B←B1", "1←B"}
    assert verify_self_replicating(s, generate_tiling(s, 50))


# 8 -------------------------------------------------------------------------------------------

PUBLISHED_RULES = {
    CUBIC[0]: ["0←1", "1←2", "2←3", "3←4", "4←40"],
    CUBIC[1]: ["0←1", "1←2", "2←10", "3←32"],
    CUBIC[2]: ["0←1", "1←2", "2←01", "3←31"],
}
PUBLISHED_LENGTHS = {
    CUBIC[0]: ["1", "B", "B^2", "B^3", "B^4"],
    CUBIC[1]: ["1", "B", "B^2", "B^3", "B^6"],
    CUBIC[2]: ["1", "B", "B^2", "B^3", "B^5"],  # printed as 1+B+B^2, which equals B^5
}


def _published_sequences():
    text = (Path(__file__).parents[1] / "paper.md")
    if not text.exists():
        return {}
    found = re.findall(r"the tiling begins, from left to right:\s*\$\$(.*?)\\dots", text.read_text())
    return {p: re.sub(r"[^0-9]", "", raw) for p, raw in zip(CUBIC, found)}


@pytest.mark.parametrize("p", CUBIC, ids=["cubic1", "cubic2", "cubic3"])
def test_criterion_08_substitutions(p, report):
    s = system(*p)
    assert derive_substitution(s).rule_strings() == PUBLISHED_RULES[p]
    tiling = generate_tiling(s, 100)
    assert verify_self_replicating(s, tiling)
    observed = [in_powers_of_B(s, r) for r in tile_lengths(s, tiling).relative]
    if observed != PUBLISHED_LENGTHS[p]:
        report(f"criterion 8: {p} relative lengths {observed}, published {PUBLISHED_LENGTHS[p]}")
    seq = _published_sequences().get(p)
    if seq is not None and tiling.type_string()[:len(seq)] != seq:
        report(f"criterion 8: {p} opening sequence differs from the published one")


# 9 -------------------------------------------------------------------------------------------

def test_criterion_09_golden_recovery():
    _, B = base_field([-1, -1, 1], 1, 2)
    b = 1 / B
    r = pair_from_base(B, b * b)
    assert (str(r.alpha), str(r.beta)) == ("(01)", "1(0)")
    got = solve_base(r.pair).B
    assert got.poly == [-1, -1, 1] and got.cmp(B.to_algebraic()) == 0


def test_criterion_09_standard_recovery():
    r = pair_from_base(2, Fraction(1, 2))
    assert (str(r.alpha), str(r.beta)) == ("0(1)", "1(0)")
    assert solve_base(r.pair).B_elem == 2


# 10 ------------------------------------------------------------------------------------------

@pytest.mark.parametrize("p", NON_NULL, ids=["std", "golden", "cubic1", "cubic2", "cubic3"])
@pytest.mark.parametrize("v", "-+")
def test_criterion_10_monotonicity(p, v):
    s = system(*p, v)
    ds = sample_decimals(s.pair, s.variant, 300, seed=10)
    values = {d: radix_value(s, d) for d in ds}
    rng = random.Random(f"criterion 10 {p}{v}")
    for _ in range(500):
        d1, d2 = rng.sample(ds, 2)
        if decimal_cmp(d1, d2) > 0:
            d1, d2 = d2, d1
        assert values[d1] < values[d2]


# 11 ------------------------------------------------------------------------------------------

def test_criterion_11_cli_reproduces_library(monkeypatch):
    monkeypatch.setenv("RADIX_PRECISION", "40")
    _, base = cli_json("base", *GOLDEN)
    assert base["b"]["poly"] == "x^2+x-1" and base["B"]["value"].startswith("1.618033988749")
    for p in [GOLDEN, *CUBIC, QUINTIC]:
        _, data = cli_json("forbidden", *p)
        assert data["words"] == list(derive_forbidden_set(pair(*p)).words)
    _, runaway = cli_json("forbidden", "011(01)", "1(0)")
    assert runaway["finite"] is False
    _, growth = cli_json("growth", *SPARSE, "--n", "200")
    assert growth["null"] == is_null(pair(*SPARSE))
    for p in NON_NULL:
        _, g = cli_json("growth", *p, "--n", "12")
        assert abs(float(g["growth_rate"]) - log(float(system(*p).B))) <= 1e-6
        assert [int(c) for c in g["counts"]] == [lap_count(system(*p), n) for n in range(1, 13)]
    _, enc = cli_json("encode", *STD, "7/2", "--variant", "-")
    _, dec = cli_json("decode", *STD, enc["decimal"], "--variant", "-")
    assert enc["decimal"] == "11.0(1)" and dec["exact"] == "7/2"
    _, tiling = cli_json("tiling", *GOLDEN, "--count", "22")
    assert "".join(t["type"] for t in tiling["tiles"]) == "B1BB1B1BB1BB1B1BB1B1BB"
    for p, rules in PUBLISHED_RULES.items():
        _, sub = cli_json("subst", *p, "--count", "100")
        assert sub["rules"] == rules and sub["self_replicating"]
    _, rec = cli_json("pair-from-base", "--poly", "x^2-x-1", "--interval", "1,2", "--p", "2-x")
    assert (rec["alpha"], rec["beta"], rec["base_matches"]) == ("(01)", "1(0)", True)


def test_criterion_11_golden_files_pinned(monkeypatch):
    monkeypatch.setenv("RADIX_PRECISION", "40")
    from test_cli import CASES
    assert len(list(GOLDEN_DIR.glob("*.json"))) == len(CASES)
    for name, argv in CASES.items():
        out = io.StringIO()
        run(["--json", *argv], out, io.StringIO())
        assert out.getvalue() == (GOLDEN_DIR / f"{name}.json").read_text(), name
