"""Classical symmetric polynomials, independent of any formal group law.

These are the oracles the cobordism routes are checked against.
"""

from __future__ import annotations

from itertools import combinations, combinations_with_replacement, permutations
from typing import Sequence

from .ring import Ring, theory_ring
from .series import Poly, exact_divide, is_partition
from .weyl import SignedPermutation


def root_names(n: int, prefix: str = "x") -> tuple[str, ...]:
    return tuple(f"{prefix}{i}" for i in range(1, n + 1))


def _space(n: int, variables, cap, ring, default_cap: int):
    variables = root_names(n) if variables is None else tuple(variables)
    if len(variables) != n:
        raise ValueError("variable count does not match n")
    ring = theory_ring("additive") if ring is None else ring
    return ring, variables, default_cap if cap is None else cap


def complete_h(m: int, n: int, variables=None, cap: int | None = None, ring: Ring | None = None) -> Poly:
    ring, variables, cap = _space(n, variables, cap, ring, max(m, 0))
    if m < 0:
        return Poly.zero(ring, variables, cap)
    terms = {}
    for combo in combinations_with_replacement(range(n), m):
        e = [0] * n
        for i in combo:
            e[i] += 1
        terms[tuple(e)] = 1
    return Poly(ring, variables, cap, terms)


def elementary_e(i: int, n: int, variables=None, cap: int | None = None, ring: Ring | None = None) -> Poly:
    ring, variables, cap = _space(n, variables, cap, ring, max(i, 0))
    if i < 0 or i > n:
        return Poly.zero(ring, variables, cap)
    terms = {}
    for combo in combinations(range(n), i):
        terms[tuple(1 if j in combo else 0 for j in range(n))] = 1
    return Poly(ring, variables, cap, terms)


def determinant(matrix: Sequence[Sequence[Poly]], one: Poly) -> Poly:
    """Leibniz expansion; the matrices here are at most 4x4."""
    k = len(matrix)
    if k == 0:
        return one
    acc = one.zero_like()
    for perm in permutations(range(k)):
        sign = SignedPermutation.unsigned(perm).sign()
        term = one
        for i, j in enumerate(perm):
            entry = matrix[i][j]
            if entry.is_zero():
                term = None
                break
            term = term * entry
        if term is not None:
            acc = acc + term if sign > 0 else acc - term
    return acc


def schur(I: Sequence[int], n: int, variables=None, cap: int | None = None, ring: Ring | None = None) -> Poly:
    """Jacobi-Trudi determinant det(h_(I_i + j - i)); straightens non-partitions."""
    I = tuple(I)
    if sum(1 for x in I if x) > n:
        return Poly.zero(*_space(n, variables, cap, ring, sum(I)))
    ring, variables, cap = _space(n, variables, cap, ring, sum(I))
    k = len(I)
    one = Poly.constant(ring, variables, cap, 1)
    hs = {}

    def h(m):
        if m not in hs:
            hs[m] = complete_h(m, n, variables, None, ring).lift_cap(cap)
        return hs[m]

    return determinant([[h(I[i] + j - i) for j in range(k)] for i in range(k)], one)


def schur_bialternant(lam: Sequence[int], n: int, variables=None, cap: int | None = None, ring: Ring | None = None) -> Poly:
    """sum_w sgn(w) x^(w(lam + delta)) divided by the Vandermonde product."""
    lam = tuple(lam) + (0,) * (n - len(lam))
    if not is_partition(lam) or len(lam) > n:
        raise ValueError("the bialternant route takes partitions of length <= n")
    ring, variables, cap = _space(n, variables, cap, ring, sum(lam))
    delta = n * (n - 1) // 2
    big = cap + delta
    top = tuple(lam[i] + n - 1 - i for i in range(n))
    terms = {}
    for perm in permutations(range(n)):
        e = [0] * n
        for i, j in enumerate(perm):
            e[j] = top[i]
        terms[tuple(e)] = SignedPermutation.unsigned(perm).sign()
    num = Poly(ring, variables, big, terms)
    xs = [Poly.var(ring, variables, big, v) for v in variables]
    vander = Poly.constant(ring, variables, big, 1)
    for i in range(n):
        for j in range(i + 1, n):
            vander = vander * (xs[i] - xs[j])
    return exact_divide(num, vander)


def _set_valued_fillings(lam: tuple[int, ...], n: int, budget: int):
    """Yield (content vector, extra entries) of set-valued tableaux of shape lam."""
    cells = [(r, c) for r, row in enumerate(lam) for c in range(row)]
    subsets = [
        tuple(s) for size in range(1, n + 1) for s in combinations(range(1, n + 1), size)
    ]
    filling: dict[tuple[int, int], tuple[int, ...]] = {}

    def rec(idx: int, used: int):
        if idx == len(cells):
            content = [0] * n
            for s in filling.values():
                for a in s:
                    content[a - 1] += 1
            yield tuple(content), used - len(cells)
            return
        r, c = cells[idx]
        for s in subsets:
            if used + len(s) + (len(cells) - idx - 1) > budget:
                continue
            if c > 0 and max(filling[(r, c - 1)]) > min(s):
                continue
            if r > 0 and max(filling[(r - 1, c)]) >= min(s):
                continue
            filling[(r, c)] = s
            yield from rec(idx + 1, used + len(s))
            del filling[(r, c)]

    yield from rec(0, 0)


def grothendieck_svt(lam: Sequence[int], n: int, cap: int, variables=None) -> Poly:
    """Sum over set-valued tableaux of (-beta)^(|T|-|lam|) x^T, truncated at cap."""
    lam = tuple(x for x in lam if x)
    if not is_partition(lam):
        raise ValueError("shape must be a partition")
    ring = theory_ring("multiplicative")
    variables = root_names(n) if variables is None else tuple(variables)
    if len(lam) > n:
        return Poly.zero(ring, variables, cap)
    beta = ring.gen("beta")
    terms: dict = {}
    for content, extra in _set_valued_fillings(lam, n, cap):
        c = (-beta) ** extra
        terms[content] = terms[content] + c if content in terms else c
    return Poly(ring, variables, cap, terms)


def even_segre(k: int, n: int, variables=None, cap: int | None = None, ring: Ring | None = None) -> Poly:
    """s_k of the doubled root set in cohomology: 0 for odd k, h_(k/2)(y^2) for even k."""
    ring, variables, cap = _space(n, variables, cap, ring, max(k, 0))
    if k < 0 or k % 2:
        return Poly.zero(ring, variables, cap)
    h = complete_h(k // 2, n, variables, None, ring)
    return squared(h).lift_cap(cap)


def squared(p: Poly) -> Poly:
    """Substitute y_i -> y_i^2 in an exact polynomial."""
    terms = {tuple(2 * e for e in exps): c for exps, c in p.terms()}
    return Poly(p.ring, p.variables, 2 * p.cap, terms)


def quadratic_schur_det(I: Sequence[int], n: int, variables=None, cap: int | None = None) -> Poly:
    """det(s_(I_i + 2(j - i))) with s_odd = 0 and s_2k = h_k(y^2)."""
    I = tuple(I)
    ring, variables, cap = _space(n, variables, cap, None, sum(I))
    k = len(I)
    one = Poly.constant(ring, variables, cap, 1)
    cache = {}

    def s(m):
        if m not in cache:
            cache[m] = even_segre(m, n, variables, None, ring).lift_cap(cap)
        return cache[m]

    return determinant([[s(I[i] + 2 * (j - i)) for j in range(k)] for i in range(k)], one)
