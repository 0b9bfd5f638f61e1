import json
import random
from math import log

import pytest

from binradix.admissible import (AdmissiblePair, NoFiniteSetError, NotAdmissibleError, Variant, avoids,
                                 build_automaton, check_admissible, count_prefixes, derive_forbidden_set,
                                 find_violation, forbidden_candidates, growth_rate, is_null, member,
                                 member_decimal, spectral_radius)
from binradix.binstr import Decimal, EpString, parse, parse_epstring
from conftest import ALL_PAIRS, CUBIC, GOLDEN, NON_NULL, QUINTIC, SPARSE, STD, pair
from oracles import brute_prefixes, raw_member, raw_shifts
from sampling import sample_decimals

MINUS, PLUS = Variant.MINUS, Variant.PLUS


def ep(text):
    return parse_epstring(text)


# admissibility -----------------------------------------------------------------------

@pytest.mark.parametrize("p", ALL_PAIRS + [("011(01)", "1(0)")])
def test_published_pairs_are_admissible(p):
    assert isinstance(check_admissible(ep(p[0]), ep(p[1])), AdmissiblePair)


def test_violation_witness_for_shared_period():
    with pytest.raises(NotAdmissibleError) as exc:
        check_admissible(ep("(01)"), ep("(10)"))
    v = exc.value.violation
    assert v.condition == 2 and v.n == 1
    # both S^1 alpha = beta and S^1 beta = alpha violate; either is a valid witness
    assert v.which in ("alpha", "beta")


@pytest.mark.parametrize("a,b,which", [("1(0)", "(10)", "alpha"), ("(01)", "(01)", "beta"), ("0(1)", "0(1)", "beta")])
def test_violation_wrong_start(a, b, which):
    v = find_violation(ep(a), ep(b))
    assert v.condition == 1 and v.which == which


def test_admissibility_matches_raw_definition():
    rng = random.Random(7)

    def rand(start):
        pre = start + "".join(rng.choice("01") for _ in range(rng.randint(0, 3)))
        per = "".join(rng.choice("01") for _ in range(rng.randint(1, 4)))
        return EpString(pre, per)

    for _ in range(400):
        a, b = rand("01"), rand("10")
        ok_alpha = all(not (s > a and s <= b) for s in raw_shifts(a))
        ok_beta = all(not (s >= a and s < b) for s in raw_shifts(b))
        assert (find_violation(a, b) is None) == (ok_alpha and ok_beta), (a, b)


# membership ----------------------------------------------------------------------------

def test_member_examples():
    g = pair(*GOLDEN)
    assert not member(ep("1(0)"), g, MINUS)
    assert member(ep("(10)"), g, MINUS)
    for p in ALL_PAIRS:
        for v in Variant:
            assert member(ep("(0)"), pair(*p), v)


def test_member_decimal_examples():
    assert not member_decimal(parse("11."), pair(*GOLDEN), PLUS)
    assert not member_decimal(parse("1.1(0)"), pair(*STD), MINUS)
    assert member_decimal(parse(".(10)"), pair(*GOLDEN), MINUS)


@pytest.mark.parametrize("p", ALL_PAIRS)
@pytest.mark.parametrize("variant", list(Variant))
def test_member_matches_interval_definition(p, variant):
    a = pair(*p)
    rng = random.Random(f"{p}{variant}")
    hits = 0
    for _ in range(1000):
        pre = "".join(rng.choice("01") for _ in range(rng.randint(0, 8)))
        per = "".join(rng.choice("01") for _ in range(rng.randint(1, 8)))
        w = EpString(pre, per)
        got = member(w, a, variant)
        assert got == raw_member(w, a.alpha, a.beta, variant is PLUS), w
        hits += got
    for d in sample_decimals(a, variant, 200, seed=3):
        assert raw_member(d.digits, a.alpha, a.beta, variant is PLUS)
        hits += 1
    assert hits >= 200


@pytest.mark.parametrize("p", ALL_PAIRS)
@pytest.mark.parametrize("variant", list(Variant))
def test_closure_under_leading_zero_and_point_moves(p, variant):
    a = pair(*p)
    for d in sample_decimals(a, variant, 100, seed=5):
        w = d.digits
        for k in range(4):
            for point in range(-1, 10):
                assert member_decimal(Decimal(w.prepend("0" * k), point), a, variant)


@pytest.mark.parametrize("p", ALL_PAIRS)
def test_member_is_shift_invariant(p):
    a = pair(*p)
    for d in sample_decimals(a, MINUS, 100, seed=11):
        for s in d.digits.distinct_shifts():
            assert member(s, a, MINUS)


# automata ---------------------------------------------------------------------------------

def test_standard_pair_counts_are_powers_of_two():
    aut = build_automaton(pair(*STD))
    assert [count_prefixes(aut, n) for n in range(13)] == [2**n for n in range(13)]


def test_golden_decimal_counts_are_fibonacci():
    aut = build_automaton(pair(*GOLDEN), leading_zero=True)
    assert [count_prefixes(aut, n) for n in range(1, 6)] == [2, 3, 5, 8, 13]


def test_golden_counts_without_leading_zero():
    # (1) is a member, so words with 11 are prefixes of the plain address space
    aut = build_automaton(pair(*GOLDEN))
    assert [count_prefixes(aut, n) for n in range(1, 6)] == [2, 4, 7, 12, 20]


@pytest.mark.parametrize("p", ALL_PAIRS)
@pytest.mark.parametrize("leading_zero", [False, True])
def test_automaton_matches_brute_force(p, leading_zero):
    a = pair(*p)
    for variant in Variant:
        aut = build_automaton(a, variant, leading_zero=leading_zero)
        for n in range(0, 10):
            words = brute_prefixes(a.alpha, a.beta, n, plus=variant is PLUS, leading_zero=leading_zero)
            accepted = {w for w in words if aut.accepts(w)}
            assert accepted == words
            assert count_prefixes(aut, n) == len(words)


@pytest.mark.parametrize("p", ALL_PAIRS)
def test_variants_share_prefix_language(p):
    a = pair(*p)
    for lz in (False, True):
        m = build_automaton(a, MINUS, leading_zero=lz)
        q = build_automaton(a, PLUS, leading_zero=lz)
        assert [count_prefixes(m, n) for n in range(20)] == [count_prefixes(q, n) for n in range(20)]


@pytest.mark.parametrize("p", ALL_PAIRS)
def test_live_states_have_live_successors(p):
    aut = build_automaton(pair(*p))
    for state in range(aut.size):
        assert any(aut.step(state, c) is not None for c in "01")


def test_automaton_json_edge_list():
    aut = build_automaton(pair(*GOLDEN))
    data = json.loads(aut.to_json())
    assert data["states"] == aut.size
    assert [tuple(e) for e in data["edges"]] == aut.edges()
    assert all(c in (0, 1) for _, c, _ in aut.edges())


# growth -------------------------------------------------------------------------------------

def test_growth_examples():
    assert abs(growth_rate(build_automaton(pair(*STD))) - log(2)) < 1e-12
    assert abs(growth_rate(build_automaton(pair(*GOLDEN))) - 0.4812118250596) < 1e-10


@pytest.mark.parametrize("p", NON_NULL + [QUINTIC])
def test_non_null_pairs(p):
    assert not is_null(pair(*p))


def test_spectral_radius_is_exact_algebraic():
    rho = spectral_radius(build_automaton(pair(*CUBIC[0])))
    assert rho.poly == [-1, -1, 0, 1]


def test_sparse_pair_grows():
    # an independent check of the published zero-entropy claim: exhaustive
    # enumeration finds exponential growth, matching the automaton
    a = pair(*SPARSE)
    aut = build_automaton(a)
    counts = [len(brute_prefixes(a.alpha, a.beta, n)) for n in (4, 8, 12)]
    assert counts == [count_prefixes(aut, n) for n in (4, 8, 12)]
    assert counts == [14, 90, 418]
    assert raw_member(ep("(1001)"), a.alpha, a.beta, plus=False)
    rho = spectral_radius(aut)
    assert rho.poly == [-2, 0, 1]
    assert not is_null(a)


# forbidden sets --------------------------------------------------------------------------------

@pytest.mark.parametrize("p,want", [
    (GOLDEN, {"11"}),
    (CUBIC[0], {"11", "101", "1001", "10001"}),
    (CUBIC[1], {"100", "111"}),
    (CUBIC[2], {"11", "1000"}),
    (QUINTIC, {"111", "1000", "11011"}),
])
def test_forbidden_sets(p, want):
    fs = derive_forbidden_set(pair(*p))
    assert set(fs.words) == want
    assert fs.verified_to == 40
    assert str(fs) == "\n".join(sorted(want, key=lambda w: (len(w), w)))


def test_standard_pair_forbids_nothing_but_tails():
    fs = derive_forbidden_set(pair(*STD))
    assert set(fs.words) == set()


def test_eventually_periodic_alpha_has_no_finite_set():
    with pytest.raises(NoFiniteSetError) as exc:
        derive_forbidden_set(check_admissible(ep("011(01)"), ep("1(0)")))
    assert exc.value.family[:3] == ["111", "11011", "1101011"]


@pytest.mark.parametrize("p", NON_NULL + [QUINTIC])
def test_forbidden_sets_are_minimal(p):
    words = derive_forbidden_set(pair(*p)).words
    for u in words:
        for w in words:
            assert u == w or u not in w


@pytest.mark.parametrize("p", NON_NULL + [QUINTIC])
def test_forbidden_set_soundness(p):
    a = pair(*p)
    words = derive_forbidden_set(a).words
    aut = build_automaton(a, leading_zero=True)
    for n in range(13):
        for i in range(2**n):
            w = format(i, f"0{n}b") if n else ""
            assert avoids(w, words) == aut.accepts(w), w


def test_candidates_come_from_both_strings():
    cands = forbidden_candidates(pair(*CUBIC[1]))
    assert "100" in cands and "111" in cands


def test_quintic_forbids_1000_not_000():
    # checked against exhaustive enumeration: (0) is a member of every address
    # space, so 000 occurs, while a 1 followed by three 0s falls below beta = (100)
    a = pair(*QUINTIC)
    words = brute_prefixes(a.alpha, a.beta, 8, leading_zero=True)
    assert any("000" in w for w in words)
    assert not any("1000" in w for w in words)
    assert member(ep("(0)"), a, MINUS)
