import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from cyclefrac.permstat import (
    CycleClass,
    IndexRefined,
    Permutation,
    RecordClass,
    RecordCycleClass,
    check_inv_formula,
    check_lemma_1_1,
    check_lemma_4_2,
    classify_cycle,
    classify_record,
    cycle_count,
    index_refined,
    inverse,
    inversions,
    is_cycle_alternating,
    is_dperm,
    profile,
    record_cycle_category,
)

FIG = Permutation.parse("9,3,7,4,6,11,2,8,10,1,5")


@st.composite
def permutations(draw, max_n=12):
    n = draw(st.integers(0, max_n))
    return Permutation(tuple(draw(st.permutations(range(1, n + 1)))))


def test_parse_and_print():
    assert str(FIG) == "9,3,7,4,6,11,2,8,10,1,5"
    assert FIG[1] == 9 and FIG[11] == 5
    assert Permutation.parse("") == Permutation(())
    with pytest.raises(IndexError):
        FIG[12]


@pytest.mark.parametrize("text, message", [
    ("2,2,1", "duplicate value 2"),
    ("1,4", "value 4 outside"),
    ("1,x", "bad token 'x'"),
])
def test_parse_errors(text, message):
    with pytest.raises(ValueError, match=message):
        Permutation.parse(text)


def test_inverse():
    assert inverse(Permutation((1, 2, 3))) == Permutation((1, 2, 3))
    assert inverse(Permutation((2, 3, 1))) == Permutation((3, 1, 2))
    assert inverse(FIG).word == (10, 7, 2, 4, 11, 5, 3, 8, 1, 9, 6)
    assert list(inverse(FIG).word) == oracles.inverse_word(FIG.word)


def test_cycles():
    assert cycle_count(Permutation.identity(4)) == 4
    assert cycle_count(Permutation((2, 1))) == 1
    assert cycle_count(FIG) == 5
    assert FIG.cycle_notation() == "(1,9,10)(2,3,7)(4)(5,6,11)(8)"


def test_cycle_classes_of_example():
    assert classify_cycle(FIG, 7) is CycleClass.CPEAK
    assert classify_cycle(FIG, 4) is CycleClass.FIX
    assert classify_cycle(FIG, 9) is CycleClass.CDRISE


def test_record_classes():
    assert classify_record(Permutation.identity(3), 2) is RecordClass.RAR
    assert classify_record(Permutation((2, 1)), 1) is RecordClass.EREC
    assert classify_record(FIG, 1) is RecordClass.EREC


def test_record_cycle_categories():
    assert record_cycle_category(Permutation.identity(5), 3) is RecordCycleClass.RAR
    assert record_cycle_category(Permutation((2, 1)), 1) is RecordCycleClass.ERECCVAL
    assert record_cycle_category(FIG, 8) is RecordCycleClass.NRFIX


def test_index_refined():
    assert all(index_refined(Permutation.identity(5), i) == IndexRefined(0, 0, 0, 0, 0)
               for i in range(1, 6))
    assert index_refined(FIG, 4).psnest == 2
    assert index_refined(FIG, 6).ucross == 2


def test_profile_of_example():
    s = profile(FIG)
    expected = dict(cyc=5, fix=2, cpeak=3, cval=3, cdrise=3, cdfall=0, ucross=2, lcross=2,
                    unest=5, lnest=1, psnest=4, inv=30)
    assert {k: getattr(s, k) for k in expected} == expected


def test_small_profiles():
    s = profile(Permutation.identity(4))
    assert (s.cyc, s.fix, s.ucross, s.unest, s.lcross, s.lnest, s.psnest) == (4, 4, 0, 0, 0, 0, 0)
    s = profile(Permutation((2, 1)))
    assert (s.cyc, s.cpeak, s.cval, s.inv) == (1, 1, 1, 1)
    assert s.ucross + s.unest + s.lcross + s.lnest == 0


def test_inversions():
    assert inversions(Permutation.identity(6)) == 0
    assert inversions(Permutation((3, 2, 1))) == 3
    assert inversions(FIG) == 30


def test_checks_on_examples():
    for p in (Permutation.identity(7), FIG):
        assert check_inv_formula(p)
        assert check_lemma_1_1(p)
    assert check_lemma_4_2(Permutation((2, 1)))
    assert check_lemma_4_2(Permutation((2, 1, 4, 3)))


def test_peak_valley_parity_needs_cycle_alternating():
    with pytest.raises(ValueError, match="not cycle-alternating"):
        check_lemma_4_2(Permutation((1, 2)))


def test_checks_exhaustive_small():
    for w in itertools.permutations(range(1, 7)):
        p = Permutation(w)
        assert check_lemma_1_1(p)
        if len(w) <= 5:
            assert check_inv_formula(p)
    for w in oracles.filter_family("cyclealt", 6):
        assert check_lemma_4_2(Permutation(w))


def test_family_membership_matches_filters():
    for w in itertools.permutations(range(1, 7)):
        p = Permutation(w)
        assert is_dperm(p) == oracles.is_dperm_word(w)
        assert is_cycle_alternating(p) == oracles.is_cyclealt_word(w)


def test_profile_matches_definition_scan_exhaustively():
    for n in range(7):
        for w in itertools.permutations(range(1, n + 1)):
            got = profile(Permutation(w)).as_dict()
            want = oracles.brute_profile(w)
            assert {k: got[k] for k in want} == want, w


PROPS = settings(max_examples=1000)


@PROPS
@given(permutations(max_n=9))
def test_profile_matches_definition_scan(p):
    got = profile(p).as_dict()
    want = oracles.brute_profile(p.word)
    assert {k: got[k] for k in want} == want


@PROPS
@given(permutations())
def test_partitions_of_the_index_set(p):
    s = profile(p)
    n = p.n
    assert s.fix + s.cpeak + s.cval + s.cdrise + s.cdfall == n
    assert s.erec + s.earec + s.rar + s.nrar == n
    categories = [c.value for c in RecordCycleClass]
    assert sum(getattr(s, c) for c in categories) == n
    assert s.exc + s.aexc + s.fix == n
    assert s.evenfix + s.oddfix == s.fix
    assert s.evenrar + s.oddrar == s.rar
    assert s.evennrfix + s.oddnrfix == s.nrfix
    assert s.epsnest + s.opsnest == s.psnest
    assert s.ucrosscval + s.ucrosscdrise == s.ucross
    assert s.lcrosscpeak + s.lcrosscdfall == s.lcross
    assert s.unestcval + s.unestcdrise == s.unest
    assert s.lnestcpeak + s.lnestcdfall == s.lnest
    assert s.rec == s.erec + s.rar and s.arec == s.earec + s.rar


@PROPS
@given(permutations())
def test_records_and_fixed_points(p):
    for i in range(1, p.n + 1):
        r = classify_record(p, i)
        c = classify_cycle(p, i)
        # a record-antirecord is always a fixed point, and a fixed point is
        # a record-antirecord exactly when nothing jumps over it
        if r is RecordClass.RAR:
            assert c is CycleClass.FIX
        if c is CycleClass.FIX:
            assert (r is RecordClass.RAR) == (index_refined(p, i).psnest == 0)
        assert (r in (RecordClass.EREC, RecordClass.RAR)) == oracles.is_record(p.word, i)
        assert (r in (RecordClass.EAREC, RecordClass.RAR)) == oracles.is_antirecord(p.word, i)
        if r is RecordClass.EREC:
            assert c in (CycleClass.CVAL, CycleClass.CDRISE)
        if r is RecordClass.EAREC:
            assert c in (CycleClass.CPEAK, CycleClass.CDFALL)


@PROPS
@given(permutations())
def test_parity_and_inversion_identities(p):
    assert check_lemma_1_1(p)
    assert check_inv_formula(p)
    s = profile(p)
    assert s.inv == oracles.inversions(p.word)
    assert (s.inv - (p.n - s.cyc)) % 2 == 0


@PROPS
@given(permutations())
def test_inverse_is_involutive(p):
    assert inverse(inverse(p)) == p
    assert cycle_count(inverse(p)) == cycle_count(p)
    assert profile(inverse(p)).inv == profile(p).inv


@PROPS
@given(permutations())
def test_text_round_trip(p):
    assert Permutation.parse(str(p)) == p
