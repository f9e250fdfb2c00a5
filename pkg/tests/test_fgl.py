from fractions import Fraction

import pytest

from fglcalc.fgl import (
    FGLError,
    FormalGroupLaw,
    derived_series,
    fgl_make,
    formal_inverse,
    formal_sum,
    logarithm,
    n_series,
    specialize,
)
from fglcalc.series import Poly, substitute

UV = ("u", "v")


def uv(law, cap):
    return Poly.var(law.ring, UV, cap, "u"), Poly.var(law.ring, UV, cap, "v")


def test_concrete_laws():
    m = fgl_make("multiplicative", 4)
    u, v = uv(m, 4)
    assert m.F == u + v - u * v * m.ring.gen("beta")
    a = fgl_make("additive", 4)
    u, v = uv(a, 4)
    assert a.F == u + v
    h = fgl_make("hyperbolic", 4)
    u, v = uv(h, 4)
    b, c = h.ring.gen("b"), h.ring.gen("c")
    assert h.F == u + v + u * v * b + u * u * v * c + u * v * v * c + u * u * v * v * b * c


def test_universal_low_terms():
    law = fgl_make("universal", 3)
    u, v = uv(law, 3)
    m1, m2 = law.ring.gen("m1"), law.ring.gen("m2")
    a12 = m1 * m1 * 4 - m2 * 3
    assert law.F == u + v - u * v * m1 * 2 + (u * u * v + u * v * v) * a12


def test_unknown_theory_and_cap_limits():
    with pytest.raises(FGLError):
        FormalGroupLaw("elliptic", 3)
    with pytest.raises(FGLError):
        FormalGroupLaw("universal", 40)


def test_formal_sum_examples():
    m = fgl_make("multiplicative", 3)
    Y = ("y", "z")
    y, z = Poly.var(m.ring, Y, 3, "y"), Poly.var(m.ring, Y, 3, "z")
    assert formal_sum(m, y, z) == y + z - y * z * m.ring.gen("beta")
    a = fgl_make("additive", 3)
    x1, x2 = Poly.var(a.ring, Y, 3, "y"), Poly.var(a.ring, Y, 3, "z")
    assert formal_sum(a, x1, x2) == x1 + x2


def test_inverse_and_n_series():
    for theory in ("additive", "multiplicative", "hyperbolic", "universal"):
        law = fgl_make(theory, 5)
        u = Poly.var(law.ring, ("u",), 5, "u")
        assert formal_sum(law, u, formal_inverse(law, u)).is_zero()
        assert n_series(law, 0, u).is_zero()
        assert n_series(law, 1, u) == u
        assert n_series(law, -1, u) == formal_inverse(law, u)
        assert n_series(law, 3, u) == formal_sum(law, n_series(law, 2, u), u)
    m = fgl_make("multiplicative", 4)
    u = Poly.var(m.ring, ("u",), 4, "u")
    assert n_series(m, 2, u) == u * 2 - u * u * m.ring.gen("beta")
    a = fgl_make("additive", 4)
    ua = Poly.var(a.ring, ("u",), 4, "u")
    assert n_series(a, 5, ua) == ua * 5


def test_derived_series_universal():
    law = fgl_make("universal", 5)
    d = derived_series(law)
    z = ("u",)
    want = Poly(law.ring, z, 5, {(0,): 1, **{(k,): law.ring.gen(f"m{k}") * (k + 1) for k in range(1, 6)}})
    assert d.Pinv == want
    assert d.P * d.Pinv == d.P.one_like()


def test_logarithm_inverts_exponential():
    law = fgl_make("multiplicative", 6)
    log = logarithm(law, extend=True)
    beta = log.ring.gen("beta")
    assert log.coefficient((3,)) == beta * beta * Fraction(1, 3)
    s = Poly.var(log.ring, ("u",), 6, "u")
    assert substitute(log, {"u": law.exponential(extend=True)}) == s
    with pytest.raises(FGLError):
        logarithm(law)


def test_specialization():
    uni = fgl_make("universal", 5)
    assert specialize(uni.F, "additive") == fgl_make("additive", 5).F
    assert specialize(uni.F, "multiplicative") == fgl_make("multiplicative", 5).F
    assert specialize(uni.F, "hyperbolic") == fgl_make("hyperbolic", 5).F
    # [CP^k] -> beta^k in K-theory
    pinv = specialize(uni.derived().Pinv, "multiplicative")
    beta = pinv.ring.gen("beta")
    assert all(pinv.coefficient((k,)) == beta**k for k in range(6))


def test_laws_are_cached():
    assert fgl_make("hyperbolic", 4) is fgl_make("hyperbolic", 4)
