import random

import pytest

from fglcalc.fgl import fgl_make, formal_inverse
from fglcalc.series import Poly
from fglcalc.weyl import (
    SignedPermutation,
    WeylError,
    act,
    enumerate_cosets,
    group_elements,
    subgroup_elements,
)


def test_coset_counts():
    assert len(enumerate_cosets(3, "S", (1, 2))) == 3
    assert len(enumerate_cosets(2, "C", (1,))) == 4
    assert len(enumerate_cosets(2, "C", (2,))) == 4
    assert len(enumerate_cosets(3, "C", (1, 1, 1))) == 48
    assert len(enumerate_cosets(4, "S", (1, 1, 1, 1))) == 24


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("group,blocks", [("S", None), ("C", (1,)), ("C", "n")])
def test_cosets_tile_the_group(n, group, blocks):
    blocks = (1,) * n if blocks is None else (n,) if blocks == "n" else blocks
    reps = enumerate_cosets(n, group, blocks)
    H = subgroup_elements(n, group, blocks)
    products = sorted((r * h).one_line() for r in reps for h in H)
    assert products == sorted(w.one_line() for w in group_elements(n, group))


def test_minimal_representatives():
    reps = enumerate_cosets(3, "S", (1, 2))
    assert reps[0] == SignedPermutation.identity(3)
    assert [w.length() for w in reps] == [0, 1, 2]


def test_invalid_composition():
    with pytest.raises(WeylError):
        enumerate_cosets(3, "S", (1, 1))
    with pytest.raises(WeylError):
        SignedPermutation((0, 0), (False, False))


def test_transposition_and_sign_flip():
    law = fgl_make("multiplicative", 4)
    X = ("x1", "x2")
    p = Poly(law.ring, X, 3, {(2, 1): 1})
    swap = SignedPermutation.unsigned((1, 0))
    assert act(swap, p, X) == Poly(law.ring, X, 3, {(1, 2): 1})
    flip = SignedPermutation((0,), (True,))
    y = Poly.var(law.ring, ("y1",), 4, "y1")
    assert act(flip, y, ("y1",), law) == formal_inverse(law, y)
    add = fgl_make("additive", 4)
    ya = Poly.var(add.ring, ("y1",), 4, "y1")
    assert act(flip, ya, ("y1",), add) == -ya
    with pytest.raises(WeylError):
        act(flip, y, ("y1",))


def test_action_is_a_group_action():
    rng = random.Random(3)
    law = fgl_make("hyperbolic", 4)
    X = ("y1", "y2", "y3")
    p = Poly(law.ring, X, 4, {(2, 1, 0): 1, (0, 1, 1): law.ring.gen("b"), (1, 0, 0): 3})
    G = group_elements(3, "C")
    for _ in range(10):
        a, b = rng.choice(G), rng.choice(G)
        assert act(a, act(b, p, X, law), X, law) == act(a * b, p, X, law)
