import pytest

from fglcalc.ring import theory_ring
from fglcalc.series import Poly, partitions_in_box
from fglcalc.symfun import (
    complete_h,
    elementary_e,
    grothendieck_svt,
    quadratic_schur_det,
    schur,
    schur_bialternant,
    squared,
)

A = theory_ring("additive")
X = ("x1", "x2")


def p(terms, cap, variables=X, ring=A):
    return Poly(ring, variables, cap, terms)


def test_complete_and_elementary():
    assert complete_h(2, 2) == p({(2, 0): 1, (1, 1): 1, (0, 2): 1}, 2)
    assert complete_h(-3, 2).is_zero()
    assert elementary_e(2, 2) == p({(1, 1): 1}, 2)


def test_schur_examples():
    assert schur((1,), 2) == p({(1, 0): 1, (0, 1): 1}, 1)
    assert schur((2, 1), 2) == p({(2, 1): 1, (1, 2): 1}, 3)
    assert schur((), 3) == Poly.constant(A, ("x1", "x2", "x3"), 0, 1)
    assert schur((1, 1, 1), 2).is_zero()


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_jacobi_trudi_matches_bialternant(n):
    for lam in partitions_in_box(3, 4):
        if len(lam) <= n:
            assert schur(lam, n) == schur_bialternant(lam, n)


def test_grothendieck_tableaux():
    M = theory_ring("multiplicative")
    b = M.gen("beta")
    assert grothendieck_svt((), 2, 3) == Poly.constant(M, X, 3, 1)
    assert grothendieck_svt((1,), 2, 5) == p({(1, 0): 1, (0, 1): 1, (1, 1): -b}, 5, ring=M)
    assert grothendieck_svt((1,), 1, 5) == Poly.var(M, ("x1",), 5, "x1")


def test_quadratic_determinant():
    assert quadratic_schur_det((2,), 1) == Poly(A, ("x1",), 2, {(2,): 1})
    assert quadratic_schur_det((2,), 2) == p({(2, 0): 1, (0, 2): 1}, 2)
    assert quadratic_schur_det((1,), 2).is_zero()
    assert quadratic_schur_det((2, 1), 2).is_zero()
    # I = 2J gives s_J(y^2)
    for J in ((1,), (1, 1), (2, 1), (2, 2)):
        doubled = tuple(2 * x for x in J)
        assert quadratic_schur_det(doubled, 2) == squared(schur(J, 2)).lift_cap(2 * sum(J))
