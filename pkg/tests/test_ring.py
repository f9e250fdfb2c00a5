import pytest

from fglcalc.ring import (
    INTEGERS,
    RATIONALS,
    GeneratorSpec,
    MixedRingError,
    Ring,
    RingError,
    RingSpec,
    ring_make,
    theory_ring,
)


def test_theory_rings():
    m = theory_ring("multiplicative")
    assert m.names == ("beta",) and m.grades == (-1,)
    assert theory_ring("additive").ngens == 0
    assert theory_ring("additive").base == INTEGERS
    u = theory_ring("universal", 4)
    assert u.names == ("m1", "m2", "m3", "m4") and u.base == RATIONALS


def test_ring_errors():
    with pytest.raises(RingError):
        ring_make(RingSpec(INTEGERS, (), "universal"))
    with pytest.raises(RingError):
        ring_make(RingSpec(INTEGERS, (GeneratorSpec("a", -1), GeneratorSpec("a", -2))))
    with pytest.raises(RingError):
        theory_ring("elliptic")


def test_coefficient_arithmetic():
    R = theory_ring("multiplicative")
    b = R.gen("beta")
    assert b * b == b**2
    assert (R.one() + b) + (-1) == b
    assert (b - b).is_zero() and -(-b) == b
    with pytest.raises(MixedRingError):
        b + theory_ring("universal", 2).gen("m1")


def test_grade_decomposition():
    U = theory_ring("universal", 4)
    c = U.gen("m1") * 2 + U.gen("m2") * 6
    parts = c.grades()
    assert parts == {-1: U.gen("m1") * 2, -2: U.gen("m2") * 6}


def test_integer_base_rejects_fractions():
    from fractions import Fraction

    R = theory_ring("additive")
    with pytest.raises(RingError):
        R.const(Fraction(1, 2))
    assert R.with_rationals().const(Fraction(1, 2)).constant() == Fraction(1, 2)


def test_ring_equality_ignores_theory_tag():
    a = Ring(RingSpec(INTEGERS, (GeneratorSpec("beta", -1),), "multiplicative"))
    b = Ring(RingSpec(INTEGERS, (GeneratorSpec("beta", -1),)))
    assert a == b and hash(a) == hash(b)


def test_natural_generator_order_in_text():
    U = theory_ring("universal", 12)
    c = U.gen("m10") * U.gen("m2")
    assert str(c) == "m2*m10"
