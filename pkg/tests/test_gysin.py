import pytest

from fglcalc.cobordism import ChernRootContext, quadratic_universal_schur, universal_schur
from fglcalc.gysin import (
    FlagSpec,
    GysinError,
    SymmetryError,
    dp_pushforward,
    k_theory_pushforward,
    pragacz_ratajski,
    pushforward_projective,
    pushforward_quadric,
    symmetrizer_gysin,
)
from fglcalc.series import Poly, substitute
from fglcalc.symfun import complete_h, quadratic_schur_det, root_names

X3 = root_names(3)


def mono(c, fiber, e):
    return Poly.monomial(c.ring, fiber, max(sum(e), 1), e)


def test_flag_spec():
    spec = FlagSpec("A", 4, (1, 3))
    assert spec.blocks == (1, 2) and spec.fiber == ("y1", "y2", "y3")
    assert spec.targets() == (3, 2, 3)
    assert spec.relative_dimension() == 5  # dim Fl(1, 3; 4)
    assert FlagSpec("C", 4, (2,)).relative_dimension() == 3  # Lagrangian Grassmannian LG(2, 4)
    assert FlagSpec("BD", 5, (1,)).relative_dimension() == 3  # quadric in P^4
    with pytest.raises(GysinError):
        FlagSpec("A", 3, (2, 1))
    with pytest.raises(GysinError):
        FlagSpec("C", 5, (1,))


def test_projective_additive():
    for n in (1, 2, 3):
        c = ChernRootContext("additive", 6, root_names(n))
        assert pushforward_projective(c, mono(c, ("y1",), (n - 1,))) == c.one()
        f = mono(c, ("y1",), (n + 2,))
        assert pushforward_projective(c, f) == complete_h(3, n, c.roots, 6)


def _h_of_dual_roots(c, m):
    roots = c.dual_roots()
    names = tuple(f"a{i}" for i in range(len(roots)))
    h = complete_h(m, len(roots), names, None, c.ring).lift_cap(c.cap)
    return substitute(h, dict(zip(names, roots)), variables=c.variables, cap=c.cap)


@pytest.mark.parametrize("N", [4, 5])
def test_quadric_additive(N):
    n = N // 2
    c = ChernRootContext("additive", 6, root_names(n + N % 2), "B" if N % 2 else "D")
    for k in range(0, 8):
        out = pushforward_quadric(c, mono(c, ("y1",), (k,)))
        if k < N - 2:
            assert out.is_zero()
        else:
            assert out == _h_of_dual_roots(c, k - N + 2) * 2


def test_type_a_one_step_is_projective():
    c = ChernRootContext("universal", 5, X3)
    spec = FlagSpec("A", 3, (1,))
    for k in range(5):
        f = mono(c, ("y1",), (k,))
        assert dp_pushforward(spec, f, c) == pushforward_projective(c, f)


def test_full_flag_gives_empty_schur():
    c = ChernRootContext("hyperbolic", 5, X3)
    spec = FlagSpec("A", 3, (1, 2, 3))
    f = mono(c, spec.fiber, (2, 1, 0))
    assert dp_pushforward(spec, f, c) == universal_schur(c, ())


def test_lagrangian_additive():
    names = root_names(2)
    c = ChernRootContext("additive", 6, names, "C")
    spec = FlagSpec("C", 4, (1, 2))
    for lam in ((1,), (2,), (2, 1), (3, 1)):
        lam2 = lam + (0,) * (2 - len(lam))
        e = (lam2[0] + 3, lam2[1] + 1)
        assert dp_pushforward(spec, mono(c, spec.fiber, e), c) == quadratic_schur_det(lam, 2, names, 6)


def test_symmetry_precondition():
    c = ChernRootContext("additive", 6, X3)
    with pytest.raises(SymmetryError):
        dp_pushforward(FlagSpec("A", 3, (2,)), mono(c, ("y1", "y2"), (2, 1)), c)
    with pytest.raises(GysinError):
        dp_pushforward(FlagSpec("A", 4, (1,)), mono(c, ("y1",), (2,)), c)


def test_c_full_flag_symmetrizer_is_quadratic_schur():
    c = ChernRootContext("multiplicative", 6, root_names(2), "C")
    spec = FlagSpec("C", 4, (1, 2))
    for lam in ((1,), (2,), (2, 1)):
        lam2 = lam + (0,) * (2 - len(lam))
        f = mono(c, spec.fiber, (lam2[0] + 3, lam2[1] + 1))
        assert symmetrizer_gysin(spec, f, c) == quadratic_universal_schur(c, lam)


def test_k_theory_grassmann_power():
    c = ChernRootContext("multiplicative", 6, root_names(2), "C")
    spec = FlagSpec("C", 4, (1,))
    for a in (3, 4, 5):
        f = mono(c, ("y1",), (a,))
        want = quadratic_universal_schur(c, (a - 3,)) if a > 3 else c.one()
        assert symmetrizer_gysin(spec, f, c) == want
        assert k_theory_pushforward(spec, f, c) == want


def test_pragacz_ratajski():
    c = ChernRootContext("universal", 6, root_names(2), "C")
    left, right = pragacz_ratajski(c, (3, 2), 2)
    assert left == right == quadratic_universal_schur(c, (1, 1))
    add = ChernRootContext("additive", 6, root_names(2), "C")
    left, right = pragacz_ratajski(add, (4, 2), 2)
    assert left.is_zero() and right.is_zero()
    with pytest.raises(GysinError):
        pragacz_ratajski(c, (2, 2), 2)
