import random

import pytest
import sympy

from sigma235.factoring import (
    COMPOSITE, PRIME, PROBABLE_PRIME, OMEGA_GE_3, OMEGA_LE_2, Effort, FactorDb, FactorizationRecord, ParseError, PrimeFactor,
    VerificationError, cyclotomic_value, divisors, dump_factor_db, factor, factor_repunit, integer_root,
    is_prime, load_factor_db, parse_factor_line, perfect_power, primes_below, repunit, screen_omega,
)


def test_is_prime_small_range_matches_sympy():
    for n in range(-5, 20000):
        assert bool(is_prime(n)) == sympy.isprime(n), n


def test_is_prime_strong_pseudoprimes():
    # composites that fool Miller-Rabin to several small bases
    for n in (2047, 1373653, 25326001, 3215031751, 2152302898747, 3474749660383,
              341550071728321, 3825123056546413051, 318665857834031151167461):
        assert not is_prime(n)
    for p in (2**61 - 1, 2**89 - 1, 2**127 - 1, 10**25 + 13):
        assert bool(is_prime(p)) == sympy.isprime(p)


def test_probable_prime_reports_confidence():
    t = is_prime(2**127 - 1)
    assert t and t.status == PROBABLE_PRIME and t.rounds >= 40
    assert is_prime(97).status == PRIME


def test_repunit():
    assert repunit(2, 5) == 31
    assert repunit(5, 3) == 31
    assert repunit(3, 5) == 121
    assert repunit(7, 1) == 1
    with pytest.raises(ValueError):
        repunit(1, 3)


def test_integer_root_and_perfect_power():
    assert integer_root(10**30, 3) == (10**10, True)
    assert integer_root(10**30 + 1, 3) == (10**10, False)
    assert perfect_power(121) == (11, 2)
    assert perfect_power(2**60) == (2, 60)
    assert perfect_power(3**5 * 2**5) == (6, 5)
    assert perfect_power(7) is None


def test_primes_and_divisors():
    assert primes_below(30) == (2, 3, 5, 7, 11, 13, 17, 19, 23, 29)
    assert divisors(36) == [1, 2, 3, 4, 6, 9, 12, 18, 36]


def test_factor_matches_sympy_random():
    rng = random.Random(11)
    for _ in range(300):
        n = rng.randrange(2, 10**18)
        rec = factor(n)
        assert rec.status == "complete"
        assert {f.prime: f.exponent for f in rec.factors} == sympy.factorint(n)


def test_factor_up_to_a_million_against_sieve():
    N = 10**6
    spf = list(range(N + 1))
    for p in range(2, int(N**0.5) + 1):
        if spf[p] == p:
            for k in range(p * p, N + 1, p):
                if spf[k] == k:
                    spf[k] = p
    bad = []
    for n in range(2, N + 1):
        rec = factor(n)
        m, want = n, {}
        while m > 1:
            p = spf[m]
            want[p] = want.get(p, 0) + 1
            m //= p
        if rec.status != "complete" or {f.prime: f.exponent for f in rec.factors} != want:
            bad.append(n)
    assert not bad


def test_factor_partial_with_small_budget():
    n = (2**61 - 1) * (2**89 - 1) * (10**25 + 13)
    rec = factor(n, Effort(trial_bound=100, rho_steps=10))
    assert rec.verify() is None


def test_cyclotomic_values():
    for a in (2, 3, 5):
        for d in range(1, 40):
            x = sympy.Symbol("x")
            assert cyclotomic_value(a, d) == sympy.cyclotomic_poly(d, x).subs(x, a)


def test_factor_repunit_known():
    assert factor_repunit(2, 11).primes == (23, 89)
    assert factor_repunit(3, 5).primes == (11,) and factor_repunit(3, 5).exponent_of(11) == 2
    rec = factor_repunit(5, 23)
    assert rec.status == "complete" and set(rec.primes) == {8971, 332207361361}
    assert factor_repunit(5, 13).primes == (305175781,)


def test_record_verify_catches_errors():
    good = FactorizationRecord(63, (PrimeFactor(3, 2), PrimeFactor(7, 1)))
    assert good.verify() is None
    assert FactorizationRecord(63, (PrimeFactor(3, 1), PrimeFactor(21, 1))).verify()
    assert FactorizationRecord(64, (PrimeFactor(3, 2), PrimeFactor(7, 1))).verify()
    assert FactorizationRecord(21 * 13, (PrimeFactor(13, 1),), 21, COMPOSITE).verify() is None
    assert FactorizationRecord(7 * 13, (PrimeFactor(13, 1),), 7, COMPOSITE).verify()


def test_display_uses_digit_counts():
    rec = factor_repunit(2, 49)
    assert rec.display() == "127 x P13"


def test_parse_line_and_errors():
    base, e, rec, prov = parse_factor_line("2 11: 23 89", 1)
    assert (base, e, rec.primes, prov) == (2, 11, (23, 89), "table")
    assert parse_factor_line("   # comment", 2) is None
    for bad in ("2 11 23 89", "x 11: 23", "2 11: C5 23", "2 11: 23 23", "2 11: 2^x", "1 3: 1"):
        with pytest.raises(ParseError):
            parse_factor_line(bad, 3)


def test_load_rejects_wrong_record(tmp_path):
    p = tmp_path / "db.txt"
    p.write_text("2 11: 23 87\n", encoding="utf-8")
    with pytest.raises(VerificationError):
        load_factor_db(p)
    p.write_text("2 11: 23 89\n2 11: 23 89\n", encoding="utf-8")
    with pytest.raises(ParseError):
        load_factor_db(p)


def test_db_round_trip(tmp_path, db):
    text = dump_factor_db(db)
    p = tmp_path / "copy.txt"
    p.write_text(text, encoding="utf-8")
    again = load_factor_db(p)
    assert list(again) == list(db)
    for key in db:
        assert again.get(*key) == db.get(*key)
    assert dump_factor_db(again) == text


def test_bundled_db_has_the_big_tables(db):
    rec = db.get(2, 347)
    assert rec is not None and rec.status == "complete" and len(rec.factors) == 2
    assert db.get(5, 71).display().startswith("569 x P")


def test_screen_omega_small():
    assert screen_omega(2, 11).kind == OMEGA_LE_2
    s = screen_omega(2, 29)      # 233 x 1103 x 2089
    assert s.kind == OMEGA_GE_3 and len(s.witnesses) == 3
    for w in s.witnesses:
        assert repunit(2, 29) % w == 0 and is_prime(w)
    with pytest.raises(ValueError):
        screen_omega(2, 1)


def test_screen_omega_composite_cofactor(db):
    s = screen_omega(2, 277, db)
    assert s.kind == OMEGA_GE_3
    assert len(s.witnesses) + (2 if s.cofactor else 0) >= 3
    if s.cofactor:
        assert not is_prime(s.cofactor) and perfect_power(s.cofactor) is None
