from fractions import Fraction
import math

import pytest

from sigma235.lattice import (
    CASE_C, DIV, EXACT, FIRST, GS_BOUND, LLL_BOUND, NODIV, CriterionFailed, IntLattice, SingularBasis,
    criterion_factor, deweger_step, exponent_caps, gram_schmidt, is_reduced, lattice_at_precision, lll,
    shortest_lower_bound, shortest_lower_bound_sq, shortest_vector_sq, unimodular_transform,
)


def test_small_example_reduces():
    M = IntLattice.from_rows([[1, 0, 0], [0, 1, 0], [138, 219, 321]])
    R = lll(M)
    assert is_reduced(R)
    assert abs(R.determinant()) == abs(M.determinant())
    assert unimodular_transform(M, R) is not None
    assert shortest_vector_sq(R) == 41      # brute force over |x_i| <= 30


def test_textbook_basis():
    M = IntLattice(((1, 1, 1), (-1, 0, 2), (3, 5, 6)))
    R = lll(M)
    assert is_reduced(R)
    assert sorted(sum(x * x for x in c) for c in R.columns)[0] == 1
    assert shortest_vector_sq(R) == 1


def test_singular_and_bad_input():
    with pytest.raises(SingularBasis):
        lll(IntLattice(((1, 2), (2, 4))))
    with pytest.raises(ValueError):
        IntLattice(((1, 2),))
    with pytest.raises(ValueError):
        lll(IntLattice(((1, 0), (0, 1))), Fraction(1, 5))


def test_lower_bounds_are_ordered():
    M = IntLattice.from_rows([[2, 0, 0], [0, 2, 0], [13862, 21972, 32188]])
    R = lll(M)
    exact = shortest_lower_bound_sq(R, EXACT)
    assert shortest_lower_bound_sq(R, LLL_BOUND) <= exact
    assert shortest_lower_bound_sq(R, GS_BOUND) <= exact
    v = shortest_lower_bound(R, EXACT)
    assert v.to_fraction() ** 2 <= exact


def test_gram_schmidt_orthogonal():
    M = IntLattice(((3, 1, 4), (1, 5, 9), (2, 6, 5)))
    mu, B = gram_schmidt(M)
    assert math.prod(B) == M.determinant() ** 2


def test_lattice_entries():
    M = lattice_at_precision(100, 2, 40)
    assert M.rows()[2] == [138, 219, 321]
    assert M.rows()[0] == [2, 0, 0]


def test_criterion_factor():
    assert criterion_factor(2) == 24
    assert criterion_factor(1) == 20
    assert criterion_factor(4) == 48


def test_caps_formula():
    caps = exponent_caps(Fraction(72794, 100))
    assert caps == {2: 1051, 3: 663, 5: 453}
    # every e above the cap gives a repunit exceeding exp(727.94)
    for a, cap in caps.items():
        # repunit(a, cap + 1) >= a^cap already exceeds the bound
        assert cap * math.log(a) > 727.94
        assert (cap - 1) * math.log(a) < 727.94


def test_published_reduction_bounds(chain):
    assert float(chain.first.bound) < 728.0
    assert float(chain.nodiv.bound) < 355.0
    assert float(chain.div.bound) < 250.0
    for o in chain.outcomes():
        assert o.l_lower_sq > criterion_factor(o.gamma) * o.X1 ** 2
        assert o.derivation


def test_frozen_reduction_values(chain):
    # values of this implementation, frozen
    assert float(chain.first.bound) == 727.94
    assert float(chain.div.bound) == 249.5
    assert float(chain.nodiv.bound) == 354.74
    assert chain.caps == {2: 1051, 3: 663, 5: 453}


def test_failed_criterion_retries_then_raises():
    with pytest.raises(CriterionFailed):
        deweger_step(Fraction(10) ** 80, 10**20, 2, Fraction(10) ** 60, retries=0)
    out = deweger_step(Fraction(10) ** 12, 10**50, 2, Fraction(10) ** 10)
    assert out.attempts == 1 and out.bound > 0
    again = deweger_step(Fraction(10) ** 20, 10**50, 2, Fraction(10) ** 18)
    assert again.attempts > 1 and again.C > 10**50


def test_outcome_is_serialisable(chain):
    d = chain.div.to_dict()
    assert d["C"] == "10^111" and d["gamma"] == 2
    assert len(d["reduced_basis"]["columns"]) == 3
