import functools
import math
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from cyclefrac import families as F
from cyclefrac import permstat
from cyclefrac.families import (
    LAMBDA,
    SCHEMES,
    SPECIALIZATIONS,
    CapExceededError,
    Family,
    enumerate_family,
    family_array,
    family_count,
    generating_polynomial,
    generating_value_mod,
    series_of_family,
    specialize,
    weight,
)
from cyclefrac.polyring import Polynomial, eval_mod, parse_polynomial, var
from cyclefrac.verifier import modular_assignment
from oracle_weights import oracle_polynomial

GOLDEN = Path(__file__).parent / "golden"

# Frozen from the breadth-first enumerator after the small sizes were
# confirmed against filtering all of S_n.
DPERM_COUNTS = [1, 2, 8, 56, 608, 9440, 198272]
CYCLEALT_COUNTS = [1, 1, 5, 61, 1385, 50521, 2702765]


def words(fam):
    return [p.word for p in enumerate_family(fam)]


@pytest.mark.parametrize("kind", F.KINDS)
def test_enumerator_matches_filter(kind):
    for n in range(0, 9, 1 if kind == "perm" else 2):
        want = sorted(oracles.filter_family(kind, n))
        got = words(Family(kind, n))
        assert got == want
        assert [tuple(r) for r in family_array(Family(kind, n)).tolist()] == want


def test_frozen_counts():
    for k, c in enumerate(DPERM_COUNTS):
        assert family_count(Family("dperm", 2 * k)) == c
    for k, c in enumerate(CYCLEALT_COUNTS):
        assert family_count(Family("cyclealt", 2 * k)) == c
    for n in range(10):
        assert family_count(Family("perm", n)) == math.factorial(n)


def test_small_members():
    assert words(Family("dperm", 2)) == [(1, 2), (2, 1)]
    assert words(Family("cyclealt", 2)) == [(2, 1)]
    assert family_count(Family("cyclealt", 4)) == 5


def test_backtracking_matches_array_at_larger_sizes():
    for kind, n in (("dperm", 10), ("cyclealt", 10)):
        arr = family_array(Family(kind, n))
        got = words(Family(kind, n))
        assert len(got) == len(arr)
        assert got == [tuple(r) for r in arr.tolist()]


def test_family_tags():
    assert Family.parse("dperm(6)") == Family("dperm", 6)
    assert str(Family("cyclealt", 4)) == "cyclealt(4)"
    assert Family.at_order("dperm", 3) == Family("dperm", 6)
    assert Family.at_order("perm", 3) == Family("perm", 3)
    for bad in ("dperm(5)", "foo(2)", "perm"):
        with pytest.raises(ValueError):
            Family.parse(bad)
    assert Family("dperm", 4).contains(permstat.Permutation((2, 1, 4, 3)))
    assert not Family("dperm", 4).contains(permstat.Permutation((3, 1, 2, 4)))
    assert not Family("cyclealt", 4).contains(permstat.Permutation((2, 1)))


def test_caps(monkeypatch):
    monkeypatch.delenv(F.CAP_ENV, raising=False)
    with pytest.raises(CapExceededError, match="--max-n"):
        family_count(Family("perm", 10))
    with pytest.raises(CapExceededError, match=F.CAP_ENV):
        generating_polynomial(Family("dperm", 14), "xy-dperm")
    assert family_count(Family("perm", 10), max_n=10) == math.factorial(10)
    monkeypatch.setenv(F.CAP_ENV, "3")
    with pytest.raises(CapExceededError):
        family_count(Family("perm", 4))
    monkeypatch.setenv(F.CAP_ENV, "x")
    with pytest.raises(ValueError, match="must be an integer"):
        family_count(Family("perm", 4))


def test_single_fixed_point():
    assert generating_polynomial(Family("perm", 1), "master-perm") == var("e", 0) * var("lambda")
    assert generating_polynomial(Family("perm", 0), "master-perm") == 1


def test_dperm_2_records():
    lam, x, y = var("lambda"), var("x"), var("y")
    assert generating_polynomial(Family("dperm", 2), "xy-dperm") == lam**2 * x**2 + lam * x * y


def test_simple_perm_2():
    lam = var("lambda")
    want = lam**2 * var("w", 0) ** 2 + lam * var("x1") * var("y1")
    assert generating_polynomial(Family("perm", 2), "simple-perm") == want


def test_simple_dperm_2():
    lam = var("lambda")
    want = lam**2 * var("ze") * var("zo") + lam * var("x1") * var("y1")
    assert generating_polynomial(Family("dperm", 2), "simple-dperm") == want


def test_master_polynomial_coefficient():
    p = generating_polynomial(Family("perm", 2), "master-perm")
    ab = var("a", 0, 0) * var("b", 0, 0)
    assert p.coefficient(next(iter((ab * var("lambda")).terms))) == 1
    assert p.coefficient(next(iter((ab * var("lambda") ** 2).terms))) == 0


@pytest.mark.parametrize("name, kind, scheme, n", [
    ("perm-3.master-perm.txt", "perm", "master-perm", 3),
    ("perm-4.master-perm.txt", "perm", "master-perm", 4),
    ("dperm-6.xy-dperm.txt", "dperm", "xy-dperm", 6),
    ("cyclealt-6.simple-cyclealt.txt", "cyclealt", "simple-cyclealt", 6),
])
def test_golden_polynomials(name, kind, scheme, n):
    text = (GOLDEN / name).read_text().strip()
    golden = parse_polynomial(text)
    assert oracle_polynomial(kind, scheme, n) == golden
    got = generating_polynomial(Family(kind, n), scheme)
    assert got == golden
    assert str(got) == text


def test_golden_series():
    text = (GOLDEN / "dperm.xy-dperm.lambda-1.order4.txt").read_text().strip()
    assert series_of_family("dperm", "xy-dperm", 4, lam=-1).to_text() == text


def test_schemes_are_consistent_with_their_family():
    for scheme in SCHEMES.values():
        assert scheme.family in F.KINDS
        assert "lambda" in scheme.variable_names()


def test_weight_vanishes_outside_cycle_alternating():
    assert weight(permstat.Permutation((1, 2)), "master-cyclealt") == 0
    assert weight(permstat.Permutation((2, 1)), "master-cyclealt") != 0


@functools.lru_cache(maxsize=None)
def reference_polynomial(kind, scheme, n):
    total = Polynomial()
    for p in enumerate_family(Family(kind, n)):
        total = total + weight(p, scheme)
    return total


SCHEME_SIZES = [
    (name, size)
    for name, s in SCHEMES.items()
    for size in ((0, 1, 2, 3, 4, 5) if s.family == "perm" else (0, 2, 4, 6))
]


@pytest.mark.parametrize("scheme, n", SCHEME_SIZES)
def test_bulk_path_matches_per_permutation_weights(scheme, n):
    kind = SCHEMES[scheme].family
    want = reference_polynomial(kind, scheme, n)
    assert generating_polynomial(Family(kind, n), scheme) == want
    assert generating_polynomial(Family(kind, n), scheme, lam=-1) == want.substitute(
        {LAMBDA: -1}, keep_unmapped=True)


def test_index_codes_round_trip():
    for w in oracles.filter_family("perm", 6):
        p = permstat.Permutation(w)
        codes, cyc = F.index_codes(p)
        assert cyc == oracles.cycles_of(w)
        for (i, c, r, ref), code in zip(permstat._index_data(p), codes):
            cc, rc, parity_pos, dec = F.decode_index(code, p.n)
            assert (cc, rc, parity_pos % 2) == (c, r, i % 2)
            assert F._crossing_pair(cc, dec) == F._crossing_pair(c, ref)


def test_vectorised_codes_match_reference():
    for kind, n in (("perm", 7), ("dperm", 8), ("cyclealt", 8)):
        arr = family_array(Family(kind, n))
        codes, cyc = F._codes_chunk(np.asarray(arr))
        for row, code_row, c in zip(arr.tolist(), codes.tolist(), cyc.tolist()):
            want_codes, want_cyc = F.index_codes(permstat.Permutation(tuple(row)))
            assert code_row == want_codes
            assert c == want_cyc


def test_reduced_table_totals():
    for kind, n, count in (("perm", 6, 720), ("dperm", 8, 608), ("cyclealt", 8, 1385)):
        assert F.reduced_table(Family(kind, n)).total == count


def test_unit_weights_count_the_family():
    for n in range(8):
        p = generating_polynomial(Family("perm", n), "simple-perm", lam=1)
        assert p.substitute(F.all_ones_except_lambda) == math.factorial(n)
    for k in range(5):
        p = generating_polynomial(Family("dperm", 2 * k), "xy-dperm", lam=1)
        assert p.substitute(F.all_ones_except_lambda) == DPERM_COUNTS[k]
        p = generating_polynomial(Family("cyclealt", 2 * k), "simple-cyclealt", lam=1)
        assert p.substitute(F.all_ones_except_lambda) == CYCLEALT_COUNTS[k]


def test_series_examples():
    ones = F.all_ones_except_lambda
    s = series_of_family("perm", "simple-perm", 4, lam=1, substitution=ones)
    assert s.to_text() == "1; 1; 2; 6; 24"
    s = series_of_family("perm", "simple-perm", 4, lam=-1, substitution=ones)
    assert s.to_text() == "1; -1; 0; 0; 0"
    s = series_of_family("dperm", "xy-dperm", 3, lam=-1, substitution=ones)
    assert s.to_text() == "1; 0; 0; 0"


def test_modular_value_matches_polynomial():
    for kind, scheme, n in (("perm", "big-perm-pq", 5), ("dperm", "pq-dperm", 6),
                            ("cyclealt", "evenodd-cyclealt-pq", 6)):
        poly = generating_polynomial(Family(kind, n), scheme)
        a = modular_assignment(7, 0)
        assert generating_value_mod(Family(kind, n), scheme, a) == eval_mod(poly, a)


def test_peak_antirecords_are_exclusive_on_cycle_alternating():
    for n in (2, 4, 6, 8):
        for w in oracles.filter_family("cyclealt", n):
            s = permstat.profile(permstat.Permutation(w))
            assert s.eareccpeakeven == s.areccpeakeven
            assert s.eareccpeakodd == s.areccpeakodd


def test_fixed_point_record_iff_not_jumped():
    for n in range(1, 8):
        for w in oracles.filter_family("perm", n):
            for i in range(1, n + 1):
                if w[i - 1] == i:
                    rar = oracles.is_record(w, i) and oracles.is_antirecord(w, i)
                    assert rar == (oracles.quadruplet_counts(w, i)[4] == 0)


# Specialization coherence: sizes per source family.
SPEC_SIZES = {"perm": (0, 1, 2, 3, 4), "dperm": (0, 2, 4, 6), "cyclealt": (0, 2, 4, 6, 8)}
SPEC_CASES = [(name, n) for name, (src, dst, _) in SPECIALIZATIONS.items()
              for n in SPEC_SIZES[SCHEMES[src].family]
              if n % 2 == 0 or SCHEMES[dst].family == "perm"]
SPEC_CASES.append(("master-perm>master-cyclealt", 6))


@functools.lru_cache(maxsize=None)
def specialized(name, n):
    src, dst, _ = SPECIALIZATIONS[name]
    src_kind = SCHEMES[src].family
    dst_kind = SCHEMES[dst].family
    fam = Family(src_kind, n)
    return specialize(generating_polynomial(fam, src), name), Family(dst_kind, n), dst


@pytest.mark.parametrize("name, n", SPEC_CASES)
def test_specialization_coherence_symbolic(name, n):
    poly, fam, dst = specialized(name, n)
    assert poly == generating_polynomial(fam, dst)


@settings(max_examples=1000)
@given(st.sampled_from(SPEC_CASES), st.integers(0, 2**32))
def test_specialization_coherence_at_random_points(case, seed):
    poly, fam, dst = specialized(*case)
    a = modular_assignment(seed, 0)
    assert eval_mod(poly, a) == generating_value_mod(fam, dst, a)
