import pytest

from fglcalc.cobordism import (
    ChernRootContext,
    CobordismError,
    grothendieck_hook,
    k_quadratic_det,
    new_universal_schur,
    new_universal_schur_closed,
    quadratic_universal_schur,
    quadratic_via_gf,
    segre_class,
    segre_relative,
    segre_table,
    universal_schur,
)
from fglcalc.fgl import fgl_make
from fglcalc.ring import theory_ring
from fglcalc.series import Poly
from fglcalc.symfun import complete_h, grothendieck_svt, quadratic_schur_det, schur

X2 = ("x1", "x2")


def ctx(theory, cap=6, roots=X2, kind="A", **kw):
    return ChernRootContext(theory, cap, roots, kind, **kw)


def test_context_shapes():
    assert ctx("additive").rank == 2
    assert ctx("additive", kind="C").rank == 4
    b = ctx("additive", roots=("x1", "x2", "x3"), kind="B")
    assert b.n == 2 and b.rank == 5 and len(b.dual_roots()) == 5
    with pytest.raises(CobordismError):
        ctx("additive", roots=("x1", "x1"))
    with pytest.raises(CobordismError):
        ctx("additive", kind="E")


def test_universal_schur_examples():
    assert universal_schur(ctx("additive"), (2, 1)) == schur((2, 1), 2, X2, 6)
    assert universal_schur(ctx("multiplicative"), (1,)) == grothendieck_svt((1,), 2, 6)
    s = universal_schur(ctx("universal", 4), ())
    R = s.ring
    a12 = R.gen("m1") * R.gen("m1") * 4 - R.gen("m2") * 3
    assert s.truncate(2) == Poly(R, X2, 2, {(0, 0): 1, (1, 1): a12})
    with pytest.raises(CobordismError):
        universal_schur(ctx("additive"), (1, 1, 1))
    with pytest.raises(CobordismError):
        universal_schur(ctx("additive"), (-1,))


def test_segre_additive_is_complete_symmetric():
    c = ctx("additive")
    for m in range(0, 6):
        assert segre_class(c, m) == complete_h(m, 2, X2, 6)
    assert segre_class(c, -2).is_zero()


def test_segre_table_matches_single_classes():
    c = ctx("hyperbolic", 5)
    table = segre_table(c, range(-3, 6))
    for m in range(-3, 6):
        assert table[m] == segre_class(c, m)


def test_relative_segre():
    E = ctx("universal", 5)
    pinv = fgl_make("universal", 9).derived().Pinv
    same = segre_relative(E, E, range(-4, 4))
    for m in range(-4, 4):
        want = E.one() * pinv.coefficient((-m,)) if m <= 0 else E.zero()
        assert same[m] == want
    single = ChernRootContext("additive", 6, ("x",))
    table = segre_relative(single, None, range(0, 7))
    x = single.var("x")
    for m in range(7):
        assert table[m] == x**m
    with pytest.raises(CobordismError):
        segre_relative(E, ChernRootContext("universal", 5, ("w",)), range(2))


def test_new_universal_schur():
    for theory in ("additive", "multiplicative", "hyperbolic", "universal"):
        c = ctx(theory, 5)
        for m in range(-2, 5):
            assert new_universal_schur(c, m) == new_universal_schur_closed(c, m)
    m = ctx("multiplicative")
    for a in (1, 2, 3):
        assert new_universal_schur(m, a) == grothendieck_hook(m, a)
    add = ctx("additive")
    assert new_universal_schur(add, 3) == complete_h(3, 2, X2, 6)


def test_quadratic_examples():
    add = ctx("additive", kind="C")
    assert quadratic_universal_schur(add, (2,)) == Poly(add.ring, X2, 6, {(2, 0): 1, (0, 2): 1})
    assert quadratic_universal_schur(add, (1,)).is_zero()
    assert quadratic_universal_schur(add, ()) == add.one()
    assert quadratic_via_gf(add, ()) == add.one()
    assert quadratic_via_gf(add, (2,)) == quadratic_universal_schur(add, (2,))
    mult = ctx("multiplicative", kind="C")
    assert quadratic_universal_schur(mult, (2,)) == k_quadratic_det((2,), 2, 6, X2)
    with pytest.raises(CobordismError):
        quadratic_universal_schur(add, (1, 1, 1))
    with pytest.raises(CobordismError):
        quadratic_universal_schur(ctx("additive"), (2,))


def test_k_quadratic_det_limits():
    mult = ctx("multiplicative", kind="C")
    # q = 1: the single entry is a Segre class of the doubled root set
    assert k_quadratic_det((3,), 2, 6, X2) == segre_class(mult, 3)
    # the beta-free part is the cohomological determinant
    A = theory_ring("additive")
    k = k_quadratic_det((2, 1), 2, 6, X2).homogeneous_part(3)
    plain = Poly(A, X2, 6, {e: c.constant() for e, c in k.terms()})
    assert plain == quadratic_schur_det((2, 1), 2, X2, 6)
