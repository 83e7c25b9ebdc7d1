import math
from fractions import Fraction

import pytest
import sympy

from sigma235.factoring import repunit
from sigma235.sieve import (
    EXCLUDED_NOT_PRIME_POWER, EXCLUDED_OMEGA3, PRIME, PRIME_POWER, SEMIPRIME, Survivor, UnexpectedSurvivor,
    brute_box, classify, classify_survivor, eliminate, exponent_cap, families_in_box, family_iv_members,
    family_of, log_below, make_tables, sanity_known_results, sigma_support, solve, survey_base,
)

LOOSE = Fraction(2495, 10)


def test_log_below_and_caps():
    assert log_below(2, 360, LOOSE) is False
    assert log_below(2, 359, LOOSE) is True
    assert exponent_cap(2, LOOSE) == 359
    assert exponent_cap(3, LOOSE) == 227
    assert exponent_cap(5, LOOSE) == 155


def test_classify_small():
    assert classify(2, 5, LOOSE, None).cls == PRIME
    assert classify(3, 5, LOOSE, None).cls == PRIME_POWER
    assert classify(2, 11, LOOSE, None).cls == SEMIPRIME
    c = classify(2, 29, LOOSE, None)
    assert c.cls == EXCLUDED_OMEGA3 and len(c.witnesses) == 3


def test_classify_between_bounds_checks_prime_power_only():
    # above the two-prime bound only a prime power can survive
    c = classify(2, 11, Fraction(5), None)
    assert c.cls == EXCLUDED_NOT_PRIME_POWER
    assert classify(2, 13, Fraction(5), None).cls == PRIME


def test_two_prime_elimination_small_cases():
    el = eliminate(classify(5, 2, LOOSE, None))      # x = 6
    assert [s.exponents for s in el.survivors] == [(2, 2, 2)]
    assert eliminate(classify(2, 11, LOOSE, None)).eliminated
    assert eliminate(classify(3, 4, LOOSE, None)).eliminated


def test_prime_power_elimination_small_cases():
    assert [s.exponents for s in eliminate(classify(2, 2, LOOSE, None)).survivors] == [(2, 2, 2)]
    assert [s.exponents for s in eliminate(classify(3, 5, LOOSE, None)).survivors] == [(5, 5, 3)]
    el = eliminate(classify(2, 5, LOOSE, None))
    assert [s.exponents for s in el.survivors] == [(5, None, 3)]
    assert eliminate(classify(2, 3, LOOSE, None)).eliminated
    assert eliminate(classify(2, 7, LOOSE, None)).eliminated
    assert [s.exponents for s in eliminate(classify(3, 7, LOOSE, None)).survivors] == [(5, 7, 3)]


def test_elimination_reasons_are_recorded():
    el = eliminate(classify(2, 11, LOOSE, None))
    assert el.reasons and all(isinstance(r, str) for r in el.reasons)
    d = el.to_dict()
    assert d["eliminated"] is True and d["exponent"] == 11


def test_families():
    assert family_of((1, 1, 1)) == "i"
    assert family_of((4, 1, 2)) == "ii"
    assert family_of((4, 4, 2)) == "iii"
    assert family_of((4, 6, 2)) == "iv"
    assert family_of((4, 3, 2)) is None
    assert family_of((2, 1, 1)) is None


def test_family_iv_members():
    assert family_iv_members(1000) == (2, 6, 12, 70, 102, 540)


def test_classify_survivor():
    assert classify_survivor(Survivor((5, 3, 3), (31, 13))) == "iv"
    assert classify_survivor(Survivor((5, None, 3), (31,))) == "ii/iii/iv"
    with pytest.raises(UnexpectedSurvivor):
        classify_survivor(Survivor((3, 3, 3), (7, 13)))
    with pytest.raises(UnexpectedSurvivor):
        classify_survivor(Survivor((None, 2, 2), (2,)))


def test_sigma_support():
    assert sigma_support(4, 4, 2) == {11, 31}
    assert sigma_support(1, 1, 1) == {2, 3}


def test_brute_box_matches_families():
    assert brute_box(20) == families_in_box(20)
    assert brute_box(6) == [(1, 1, 1), (4, 1, 2), (4, 2, 2), (4, 4, 2), (4, 6, 2)]


def test_sanity():
    r = sanity_known_results(200)
    assert r.ok, {k: v for k, v in r.checks.items() if not v["ok"]}
    assert r.checks["2^n - 5^m = 3"]["found"] == [(2, 0), (3, 1), (7, 3)]


def test_survey_partition(surveys):
    for s in surveys.values():
        assert s.partition_ok()


def test_surveys_base_5(surveys):
    assert surveys[5].prime_power == [3, 7, 11, 13, 47, 127, 149, 181]
    # 49 is present: repunit(5, 49) = 19531 * P30, checked independently below
    assert surveys[5].two_prime == [2, 5, 17, 23, 31, 41, 43, 49, 59, 71]


def test_base_5_e49_is_two_prime():
    x = repunit(5, 49)
    f = sympy.factorint(x)
    assert sorted(f) == [19531, 227376585863531112677002031251]
    assert set(f.values()) == {1}


def test_survey_base_3_includes_e4(surveys):
    # 40 = 2^3 * 5 has exactly two prime factors
    assert 4 in surveys[3].two_prime


def test_tables_shape(surveys):
    rows = make_tables(surveys)
    assert {r.table for r in rows} == {1, 2, 3, 4, 5, 6}
    for r in rows:
        assert len(r.cells) == (4 if r.table % 2 == 0 else 2)
        for c in r.cells:
            assert c.fact is None or c.fact.verify()


def test_solve(db, chain, surveys):
    rep = solve(db, (chain.prime_power_bound, chain.two_prime_bound), surveys=surveys)
    assert rep.matches_theorem
    labels = {fam for _, fam in rep.survivor_map}
    assert "ii/iii/iv" in labels
    d = rep.to_dict()
    assert d["matches_theorem"] is True


def _checked_display(db, a, e):
    # the record is re-verified here with sympy: product and primality
    rec = db.get(a, e)
    assert rec.cofactor is None
    assert math.prod(f.prime**f.exponent for f in rec.factors) == repunit(a, e)
    parts = []
    for f in rec.factors:
        assert sympy.isprime(f.prime)
        sh = str(f.prime) if f.prime < 10**11 else f"P{len(str(f.prime))}"
        parts.append(sh if f.exponent == 1 else f"{sh}^{f.exponent}")
    return " x ".join(parts)


# printed digit counts that disagree with the actual factors
DISPLAY_ERRATA = {
    (2, 101): "P13 x P18",
    (2, 227): "P17 x P52",
    (2, 347): "P23 x P83",
    (4, 37): "13097927 x 17189128703",
}


def test_table_factor_displays(surveys):
    from published import TABLE_FACTORS

    rows = {(r.table, r.exponent): r.display for r in make_tables(surveys)}
    for t, table in TABLE_FACTORS.items():
        for e, shown in table.items():
            assert rows[(t, e)] == DISPLAY_ERRATA.get((t, e), shown), (t, e)


@pytest.mark.parametrize("key", sorted(DISPLAY_ERRATA))
def test_display_errata_against_sympy(key, db):
    t, e = key
    base = {1: 2, 2: 2, 3: 3, 4: 3, 5: 5, 6: 5}[t]
    assert _checked_display(db, base, e) == DISPLAY_ERRATA[key]


def test_exact_table_cells_against_sympy(surveys):
    n = 0
    for r in make_tables(surveys):
        for c in r.cells:
            if c.fact is not None and c.fact.kind == "exact" and c.modulus < 10**12:
                assert c.fact.value == sympy.n_order(c.base, c.modulus), (r.table, r.exponent)
                n += 1
    assert n > 40

