"""Identity suites behind `fglcalc verify`.

Every check compares two independent routes exactly.  Checks are tagged
with the acceptance criteria they cover so the acceptance test can reuse
them.  ``cap`` is the base cap; checks specified at a deeper cap use
``cap + 2``.
"""

from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import permutations
from typing import Callable

from .cobordism import (
    ChernRootContext,
    grothendieck_hook,
    grothendieck_one_row,
    hyperbolic_one_row,
    k_quadratic_det,
    new_universal_schur_closed,
    quadratic_universal_schur,
    quadratic_via_gf,
    segre_class,
    segre_relative,
    segre_table,
    universal_schur,
)
from .fgl import fgl_make, formal_inverse, formal_sum, specialize
from .gysin import (
    FlagSpec,
    dp_pushforward,
    iterated_projective,
    iterated_quadric,
    k_theory_pushforward,
    pragacz_ratajski,
    projective_closed_form,
    pushforward_projective,
    pushforward_quadric,
    symmetrized_grassmann,
    symmetrized_lagrangian,
    symmetrizer_gysin,
)
from .ring import THEORIES, theory_ring
from .series import Poly, exact_divide, monomials, partitions_in_box, series_invert, substitute
from .symfun import (
    complete_h,
    even_segre,
    grothendieck_svt,
    quadratic_schur_det,
    root_names,
    schur,
    schur_bialternant,
    squared,
)
from .weyl import act, enumerate_cosets, group_elements, subgroup_elements

SUITE_NAMES = ("fgl", "schur", "segre", "gysin", "quadratic", "appendix")
SUITES = SUITE_NAMES + ("all",)


@dataclass(frozen=True)
class Check:
    suite: str
    name: str
    criteria: tuple[int, ...]
    fn: Callable[[int, random.Random], None]


@dataclass(frozen=True)
class Result:
    name: str
    ok: bool
    detail: str


REGISTRY: list[Check] = []


def check(suite: str, *criteria: int):
    def deco(fn):
        REGISTRY.append(Check(suite, fn.__name__.removeprefix("check_").replace("_", " "), criteria, fn))
        return fn

    return deco


def expect(a, b, what: str) -> None:
    if a != b:
        raise AssertionError(what)


def homogeneous(p: Poly, grade: int, what: str) -> None:
    """Term-by-term grade check: variable degree plus coefficient grade."""
    ring = p.ring
    for exps, c in p.terms():
        for mono in c.terms:
            g = sum(exps) + ring.monomial_grade(mono)
            if g != grade:
                raise AssertionError(f"{what}: term of grade {g}, expected {grade}")


def _orbit_sum(ring, fiber, cap, e, blocks) -> Poly:
    """Sum of the distinct images of y^e under permutations inside each block."""
    seen = set()
    start = 0
    images = [tuple(e)]
    for b in blocks:
        nxt = []
        for img in images:
            for p in permutations(range(b)):
                new = list(img)
                for i in range(b):
                    new[start + i] = img[start + p[i]]
                nxt.append(tuple(new))
        images = nxt
        start += b
    acc = Poly.zero(ring, fiber, cap)
    for img in images:
        if img not in seen:
            seen.add(img)
            acc = acc + Poly.monomial(ring, fiber, cap, img)
    return acc


def _inputs(spec: FlagSpec, ring, max_degree: int):
    """Block-symmetric inputs: orbit sums of every monomial of degree <= max_degree."""
    done = set()
    for d in range(max_degree + 1):
        for e in monomials(spec.q, d):
            key = []
            start = 0
            for b in spec.blocks:
                key.append(tuple(sorted(e[start:start + b])))
                start += b
            key = tuple(key)
            if key in done:
                continue
            done.add(key)
            yield e, _orbit_sum(ring, spec.fiber, max(d, 1), e, spec.blocks)


# ---------------------------------------------------------------------------
# fgl


@check("fgl", 1)
def check_universal_law_axioms(cap, rng):
    D = cap + 2
    law = fgl_make("universal", D)
    R, F = law.ring, law.F
    V3 = ("u", "v", "w")
    u, v, w = (Poly.var(R, V3, D, x) for x in V3)
    expect(substitute(F, {"u": u, "v": u.zero_like()}, variables=V3, cap=D), u, "F(u,0) = u")
    Fuv = substitute(F, {"u": u, "v": v}, variables=V3, cap=D)
    expect(Fuv, substitute(F, {"u": v, "v": u}, variables=V3, cap=D), "commutativity")
    left = substitute(F, {"u": Fuv, "v": w}, variables=V3, cap=D)
    right = substitute(F, {"u": u, "v": substitute(F, {"u": v, "v": w}, variables=V3, cap=D)}, variables=V3, cap=D)
    expect(left, right, "associativity")


@check("fgl", 2)
def check_specialization_coherence(cap, rng):
    uni = fgl_make("universal", cap)
    for target in ("additive", "multiplicative", "hyperbolic"):
        law = fgl_make(target, cap)
        expect(specialize(uni.F, target), law.F, f"F in {target}")
        expect(specialize(uni.chi(), target), law.chi(), f"chi in {target}")
        for n in range(-3, 4):
            expect(specialize(uni.n_series_u(n), target), law.n_series_u(n), f"[{n}] in {target}")
        expect(specialize(uni.derived().P, target), law.derived().P, f"P in {target}")


@check("fgl")
def check_formal_inverse(cap, rng):
    for theory in THEORIES:
        law = fgl_make(theory, cap)
        u = Poly.var(law.ring, ("u",), cap, "u")
        expect(formal_sum(law, u, law.chi()).is_zero(), True, f"u + chi(u) in {theory}")


@check("fgl")
def check_logarithm_additivity(cap, rng):
    for theory in THEORIES:
        law = fgl_make(theory, cap)
        log = law.logarithm(extend=True)
        UV = ("u", "v")
        Q = log.ring
        u, v = Poly.var(Q, UV, cap, "u"), Poly.var(Q, UV, cap, "v")
        lu = substitute(log, {"u": u}, variables=UV, cap=cap)
        lv = substitute(log, {"u": v}, variables=UV, cap=cap)
        F = law.F.change_ring(Q)
        expect(substitute(log, {"u": F}, variables=UV, cap=cap), lu + lv, f"log(F(u,v)) in {theory}")


@check("fgl")
def check_two_variable_series(cap, rng):
    for theory in THEORIES:
        law = fgl_make(theory, cap)
        TY = ("t", "y")
        t, y = Poly.var(law.ring, TY, cap, "t"), Poly.var(law.ring, TY, cap, "y")
        d = formal_sum(law, t, formal_inverse(law, y))
        expect(d * law.derived().Ptwo, t - y, f"(t - y) / Ptwo in {theory}")
        expect(law.derived().P * law.derived().Pinv, law.derived().P.one_like(), f"P * (1/P) in {theory}")


def _random_poly(rng, ring, variables, cap, unit=False) -> Poly:
    terms = {}
    for d in range(cap + 1):
        for e in monomials(len(variables), d):
            if rng.random() < 0.4:
                terms[e] = rng.randint(-3, 3)
    if unit:
        terms[(0,) * len(variables)] = rng.choice((1, -1))
    return Poly(ring, variables, cap, terms)


@check("fgl")
def check_series_division_and_inverse(cap, rng):
    R = theory_ring("multiplicative")
    V = ("a", "b")
    for _ in range(5):
        a = _random_poly(rng, R, V, cap)
        b = _random_poly(rng, R, V, cap, unit=True)
        expect(exact_divide(a * b, b), a, "exact_divide(a * b, b) = a")
        expect(b * series_invert(b), b.one_like(), "b * (1/b) = 1")


@check("fgl")
def check_weyl_group_action(cap, rng):
    law = fgl_make("multiplicative", cap)
    X = ("y1", "y2", "y3")
    p = _random_poly(rng, law.ring, X, min(cap, 3))
    G = group_elements(3, "C")
    for _ in range(8):
        a, b = rng.choice(G), rng.choice(G)
        expect(act(a, act(b, p, X, law), X, law), act(a * b, p, X, law), "action composes")
    for n in (1, 2, 3):
        for group, blocks in (("S", (1,) * n), ("C", (1,)), ("C", (n,)), ("C", (1,) * n)):
            reps = enumerate_cosets(n, group, blocks)
            H = subgroup_elements(n, group, blocks)
            products = sorted((r * h).one_line() for r in reps for h in H)
            expect(products, sorted(w.one_line() for w in group_elements(n, group)), f"cosets {group}{n} {blocks}")


# ---------------------------------------------------------------------------
# schur


@check("schur")
def check_jacobi_trudi_equals_bialternant(cap, rng):
    for n in (1, 2, 3, 4):
        for lam in partitions_in_box(3, 3):
            if len(lam) <= n:
                expect(schur(lam, n), schur_bialternant(lam, n), f"s_{lam} in {n} variables")


@check("schur", 3, 12)
def check_universal_schur_additive(cap, rng):
    for n in (1, 2, 3):
        names = root_names(n)
        for lam in partitions_in_box(3, 3):
            if len(lam) > n:
                continue
            D = max(cap, sum(lam))
            out = universal_schur(ChernRootContext("additive", D, names), lam)
            homogeneous(out, sum(lam), f"additive s_{lam}")
            expect(out, schur(lam, n, names, D), f"additive s_{lam}, n={n}")


@check("schur", 3, 12)
def check_universal_schur_multiplicative(cap, rng):
    D = cap + 2
    for n in (1, 2, 3):
        names = root_names(n)
        for lam in partitions_in_box(2, 2):
            if len(lam) > n:
                continue
            out = universal_schur(ChernRootContext("multiplicative", D, names), lam)
            homogeneous(out, sum(lam), f"multiplicative s_{lam}")
            expect(out, grothendieck_svt(lam, n, D, names), f"G_{lam}, n={n}")


@check("schur", 2, 3)
def check_universal_schur_specializes(cap, rng):
    names = root_names(2)
    for lam in partitions_in_box(2, 2):
        uni = universal_schur(ChernRootContext("universal", cap, names), lam)
        for target in ("additive", "multiplicative", "hyperbolic"):
            direct = universal_schur(ChernRootContext(target, cap, names), lam)
            expect(specialize(uni, target), direct, f"s_{lam} specialized to {target}")


@check("schur", 4, 12)
def check_empty_universal_schur(cap, rng):
    D = max(cap, 4)
    law = fgl_make("universal", D)
    R = law.ring
    m1, m2 = R.gen("m1"), R.gen("m2")
    # ell(u) = u + m1 u^2 + m2 u^3 and exp(s) = s - m1 s^2 + (2 m1^2 - m2) s^3 + ...;
    # the u v^2 coefficient of exp(ell(u) + ell(v)) is -2 m1^2 + 3 (2 m1^2 - m2).
    a12 = m1 * m1 * 4 - m2 * 3
    expect(law.F.coefficient((1, 2)), a12, "a_12 of the universal law")
    s = universal_schur(ChernRootContext("universal", D, root_names(2)), ())
    homogeneous(s, 0, "s_empty")
    low = s.truncate(2)
    expected = Poly(R, root_names(2), 2, {(0, 0): 1, (1, 1): a12})
    expect(low, expected, "s_empty(x1, x2) = 1 + a_12 x1 x2 + O(3)")


# ---------------------------------------------------------------------------
# segre


@check("segre", 12)
def check_additive_segre_classes(cap, rng):
    for n in (1, 2, 3):
        ctx = ChernRootContext("additive", cap, root_names(n))
        table = segre_table(ctx, range(-3, cap + 1))
        for m in range(-3, cap + 1):
            want = complete_h(m, n, ctx.roots, cap) if m >= 0 else ctx.zero()
            homogeneous(table[m], m, f"S_{m}")
            expect(table[m], want, f"additive S_{m}, n={n}")


@check("segre", 12)
def check_segre_grades(cap, rng):
    for theory in THEORIES:
        ctx = ChernRootContext(theory, cap, root_names(2))
        table = segre_table(ctx, range(-3, cap + 1))
        for m in range(-3, cap + 1):
            homogeneous(table[m], m, f"{theory} S_{m}")


@check("segre")
def check_relative_segre(cap, rng):
    for theory in ("multiplicative", "universal"):
        D = min(cap, 5)
        E = ChernRootContext(theory, D, root_names(2))
        ms = range(-4, D + 1)
        pinv = fgl_make(theory, D + 4).derived().Pinv
        same = segre_relative(E, E, ms)
        for m in ms:
            want = E.one() * pinv.coefficient((-m,)) if m <= 0 else E.zero()
            expect(same[m], want, f"{theory} relative S_{m}(E, E)")
        empty = segre_relative(E, None, ms)
        plain = segre_table(E, ms)
        for m in ms:
            expect(empty[m], plain[m], f"{theory} relative S_{m}(E, 0)")
        # E = F + G with F spanned by x1: S(E)/S(F) leaves the Segre series of G
        F = ChernRootContext(theory, D, ("x1",), passive=("x2",))
        rel = segre_relative(E, F, ms)
        G = ChernRootContext(theory, D, ("x2",), passive=("x1",))
        single = segre_table(G, ms)
        for m in ms:
            expect(rel[m], single[m].embed(E.variables), f"{theory} relative S_{m}(x1 + x2, x1)")


# ---------------------------------------------------------------------------
# appendix one-row formulas


@check("appendix", 11, 12)
def check_one_row_closed_forms(cap, rng):
    for theory in THEORIES:
        for n in (1, 2, 3):
            ctx = ChernRootContext(theory, cap, root_names(n))
            table = segre_table(ctx, range(-4, 7))
            for m in range(-4, 7):
                closed = new_universal_schur_closed(ctx, m)
                homogeneous(table[m], m, f"{theory} S_{m}")
                expect(table[m], closed, f"{theory} S_{m}, n={n}")


@check("appendix", 11)
def check_grothendieck_one_row(cap, rng):
    for n in (1, 2, 3):
        ctx = ChernRootContext("multiplicative", cap, root_names(n))
        beta = ctx.ring.gen("beta")
        for a in range(1, 4):
            G = segre_class(ctx, a)
            expect(G, grothendieck_hook(ctx, a), f"G_{a} hook formula, n={n}")
            expect(G, grothendieck_one_row(ctx, a), f"G_{a} row formula, n={n}")
            expect(G, grothendieck_svt((a,), n, cap, ctx.roots), f"G_{a} tableaux, n={n}")
        for a in range(0, 5):
            expect(segre_class(ctx, -a), ctx.one() * beta**a, f"G_-{a} = beta^{a}, n={n}")


@check("appendix", 11)
def check_hyperbolic_one_row(cap, rng):
    for n in (1, 2, 3):
        ctx = ChernRootContext("hyperbolic", cap, root_names(n))
        for a in range(1, 3):
            expect(segre_class(ctx, a), hyperbolic_one_row(ctx, a), f"hyperbolic S_{a}, n={n}")
        mctx = ChernRootContext("multiplicative", cap, root_names(n))
        beta = mctx.ring.gen("beta")
        for a in range(1, 3):
            reduced = hyperbolic_one_row(mctx, a, b=-beta, c=mctx.ring.zero())
            expect(reduced, grothendieck_hook(mctx, a), f"(b, c) = (-beta, 0) reduction, a={a}, n={n}")


# ---------------------------------------------------------------------------
# gysin


@check("gysin", 5)
def check_projective_additive(cap, rng):
    for n in (1, 2, 3, 4):
        for N in range(9):
            D = max(cap, N - n + 1)
            ctx = ChernRootContext("additive", D, root_names(n))
            f = Poly.monomial(ctx.ring, ("y1",), N, (N,))
            want = complete_h(N - n + 1, n, ctx.roots, D) if N >= n - 1 else ctx.zero()
            expect(pushforward_projective(ctx, f), want, f"pi_*(y^{N}), n={n}")


@check("gysin", 5, 12)
def check_projective_closed_form(cap, rng):
    for n in (1, 2, 3):
        ctx = ChernRootContext("universal", cap, root_names(n))
        for N in range(6):
            f = Poly.monomial(ctx.ring, ("y1",), N, (N,))
            out = pushforward_projective(ctx, f)
            homogeneous(out, N - n + 1, f"pi_*(y^{N})")
            expect(out, projective_closed_form(ctx, N), f"universal pi_*(y^{N}), n={n}")


@check("gysin", 6, 12)
def check_type_a_extraction_vs_symmetrizer(cap, rng):
    ctx = ChernRootContext("universal", cap, root_names(3))
    for q_seq in ((1,), (2,), (1, 2)):
        spec = FlagSpec("A", 3, q_seq)
        for e, f in _inputs(spec, ctx.ring, 4):
            a = dp_pushforward(spec, f, ctx)
            homogeneous(a, sum(e) - spec.relative_dimension(), f"type A {q_seq} y^{e}")
            expect(a, symmetrizer_gysin(spec, f, ctx), f"type A {q_seq} y^{e}")


@check("gysin", 6)
def check_full_flag_gives_empty_schur(cap, rng):
    for n in (1, 2, 3):
        ctx = ChernRootContext("universal", cap, root_names(n))
        spec = FlagSpec("A", n, tuple(range(1, n + 1)))
        f = Poly.monomial(ctx.ring, spec.fiber, cap, tuple(n - 1 - i for i in range(n)))
        expect(dp_pushforward(spec, f, ctx), universal_schur(ctx, ()), f"full flag, n={n}")


@check("gysin")
def check_iterated_projective(cap, rng):
    for theory in ("universal", "hyperbolic"):
        ctx = ChernRootContext(theory, cap, root_names(3))
        spec = FlagSpec("A", 3, (1, 2))
        for e in ((0, 0), (2, 1), (1, 3), (4, 0)):
            f = Poly.monomial(ctx.ring, spec.fiber, cap, e)
            expect(iterated_projective(ctx, f, spec.fiber), dp_pushforward(spec, f, ctx), f"{theory} y^{e}")


@check("gysin", 7)
def check_lagrangian_quadratic_determinant(cap, rng):
    for n in (1, 2, 3):
        names = root_names(n, "x")
        ctx = ChernRootContext("additive", cap, names, "C")
        full = FlagSpec("C", 2 * n, tuple(range(1, n + 1)))
        grass = FlagSpec("C", 2 * n, (n,))
        for lam in partitions_in_box(2, 4):
            if len(lam) > n or sum(lam) > cap:
                continue
            lam_n = lam + (0,) * (n - len(lam))
            e = tuple(lam_n[i] + 2 * n - 2 * i - 1 for i in range(n))
            det = quadratic_schur_det(lam, n, names, cap)
            f = Poly.monomial(ctx.ring, full.fiber, sum(e), e)
            expect(dp_pushforward(full, f, ctx), det, f"full isotropic flag, s2_{lam}, n={n}")
            g = _orbit_sum(ctx.ring, grass.fiber, sum(e), e, (n,))
            expect(symmetrized_lagrangian(ctx, g), dp_pushforward(grass, g, ctx), f"Lagrangian forms, {lam}, n={n}")


@check("gysin", 7, 12)
def check_type_c_extraction_vs_symmetrizer(cap, rng):
    ctx = ChernRootContext("universal", cap, root_names(2), "C")
    for q_seq in ((1,), (2,), (1, 2)):
        spec = FlagSpec("C", 4, q_seq)
        for e, f in _inputs(spec, ctx.ring, 4):
            a = dp_pushforward(spec, f, ctx)
            homogeneous(a, sum(e) - spec.relative_dimension(), f"type C {q_seq} y^{e}")
            expect(a, symmetrizer_gysin(spec, f, ctx), f"type C {q_seq} y^{e}")


def _orthogonal(theory: str, N: int, cap: int) -> ChernRootContext:
    n = N // 2
    return ChernRootContext(theory, cap, root_names(n + N % 2), "B" if N % 2 else "D")


@check("gysin", 8, 12)
def check_quadric_extraction(cap, rng):
    for theory in THEORIES:
        for N in (4, 5):
            ctx = _orthogonal(theory, N, cap)
            spec = FlagSpec("BD", N, (1,))
            for k in range(5):
                f = Poly.monomial(ctx.ring, spec.fiber, k, (k,))
                a = dp_pushforward(spec, f, ctx)
                homogeneous(a, k - spec.relative_dimension(), f"{theory} quadric y^{k}")
                expect(a, pushforward_quadric(ctx, f), f"{theory} N={N} y^{k}")


@check("gysin", 8)
def check_iterated_quadric(cap, rng):
    ctx = _orthogonal("additive", 5, cap)
    spec = FlagSpec("BD", 5, (1, 2))
    for d in range(9):
        for e in monomials(2, d):
            f = Poly.monomial(ctx.ring, spec.fiber, d, e)
            expect(iterated_quadric(ctx, f, spec.fiber), dp_pushforward(spec, f, ctx), f"N=5 y^{e}")


@check("gysin")
def check_k_theory_forms(cap, rng):
    for typ, n, kind in (("A", 3, "A"), ("C", 2, "C")):
        ctx = ChernRootContext("multiplicative", cap, root_names(n), kind)
        rank = n if typ == "A" else 2 * n
        for q_seq in ((1,), (2,), (1, 2)):
            spec = FlagSpec(typ, rank, q_seq)
            for e, f in _inputs(spec, ctx.ring, 3):
                expect(k_theory_pushforward(spec, f, ctx), dp_pushforward(spec, f, ctx), f"K-theory {typ} {q_seq} y^{e}")
    ctx = ChernRootContext("multiplicative", cap, root_names(2), "C", twist="z")
    spec = FlagSpec("C", 4, (1, 2))
    f = Poly.monomial(ctx.ring, spec.fiber, 5, (3, 2))
    expect(k_theory_pushforward(spec, f, ctx), dp_pushforward(spec, f, ctx), "twisted K-theory C")


@check("gysin")
def check_grassmann_residue_form(cap, rng):
    for n in (2, 3, 4):
        ctx = ChernRootContext("additive", cap, root_names(n))
        for q in (1, 2):
            if q >= n:
                continue
            spec = FlagSpec("A", n, (q,))
            for e, f in _inputs(spec, ctx.ring, 4):
                expect(symmetrized_grassmann(ctx, f, q), dp_pushforward(spec, f, ctx), f"n={n} q={q} y^{e}")


@check("gysin")
def check_pushforward_is_base_linear(cap, rng):
    ctx = ChernRootContext("universal", cap, root_names(3))
    R = ctx.ring
    V = ("y1", "y2", "c")
    spec = FlagSpec("A", 3, (1, 2))
    f = Poly.monomial(R, V, 5, (2, 1, 0))
    g = Poly.monomial(R, V, 5, (0, 1, 0))
    c = Poly.var(R, V, 5, "c")
    whole = dp_pushforward(spec, f + c * c * g, ctx)
    a = dp_pushforward(spec, f, ctx).embed(whole.variables)
    b = dp_pushforward(spec, g, ctx).embed(whole.variables)
    cc = Poly.var(R, whole.variables, cap, "c")
    expect(whole, a + cc * cc * b, "pi_*(f + c^2 g) = pi_*(f) + c^2 pi_*(g)")
    expect(symmetrizer_gysin(spec, f + c * c * g, ctx), whole, "symmetrizer with a base variable")


# ---------------------------------------------------------------------------
# quadratic functions


@check("quadratic", 9)
def check_odd_segre_vanishing(cap, rng):
    for n in (1, 2, 3):
        ctx = ChernRootContext("additive", cap, root_names(n), "C")
        table = segre_table(ctx, range(0, cap + 1))
        for k in range(cap + 1):
            expect(table[k], even_segre(k, n, ctx.roots, cap), f"doubled-root Segre class {k}, n={n}")


@check("quadratic", 9, 12)
def check_quadratic_additive(cap, rng):
    for n in (1, 2, 3):
        names = root_names(n)
        ctx = ChernRootContext("additive", cap, names, "C")
        for lam in partitions_in_box(3, 3):
            if len(lam) > n or sum(lam) > cap:
                continue
            out = quadratic_universal_schur(ctx, lam)
            homogeneous(out, sum(lam), f"s2_{lam}")
            expect(out, quadratic_schur_det(lam, n, names, cap), f"s2_{lam} determinant, n={n}")
        for J in partitions_in_box(2, 2):
            if len(J) > n or 2 * sum(J) > cap:
                continue
            doubled = tuple(2 * x for x in J)
            want = squared(schur(J, n, names)).lift_cap(cap) if J else ctx.one()
            expect(quadratic_universal_schur(ctx, doubled), want, f"s2_{doubled} = s_{J}(y^2), n={n}")


@check("quadratic", 9, 12)
def check_quadratic_generating_function(cap, rng):
    ctx = ChernRootContext("universal", cap, root_names(2), "C")
    for lam in ((1,), (2,), (1, 1), (2, 1)):
        a = quadratic_universal_schur(ctx, lam)
        homogeneous(a, sum(lam), f"universal s2_{lam}")
        expect(quadratic_via_gf(ctx, lam), a, f"generating function s2_{lam}")


@check("quadratic", 9)
def check_quadratic_k_determinant(cap, rng):
    D = cap + 2
    for n in (2, 3):
        ctx = ChernRootContext("multiplicative", D, root_names(n), "C")
        for lam in partitions_in_box(2, 2):
            if len(lam) > n:
                continue
            expect(k_quadratic_det(lam, n, D, ctx.roots), quadratic_universal_schur(ctx, lam), f"K determinant {lam}, n={n}")


@check("quadratic", 10, 12)
def check_pragacz_ratajski(cap, rng):
    ctx = ChernRootContext("universal", cap, root_names(2), "C")
    for I in ((3, 2), (4, 2)):
        left, right = pragacz_ratajski(ctx, I, 2)
        homogeneous(right, sum(I) - 3, f"s2 for I={I}")
        expect(left, right, f"both routes for I={I}")
    add = ChernRootContext("additive", cap, root_names(2), "C")
    # I_i > rho_i forces every part of J to be positive
    for J in ((1, 1), (2, 1), (2, 2), (3, 1)):
        I = (2 * J[0] + 2, 2 * J[1] + 1)
        if sum(I) - 3 > cap:
            continue
        left, right = pragacz_ratajski(add, I, 2)
        want = squared(schur(J, 2, add.roots)).lift_cap(cap)
        expect(left, right, f"additive routes for I={I}")
        expect(right, want, f"I = 2J + rho recovers s_{J}(y^2)")


# ---------------------------------------------------------------------------
# running


def checks_for(suite: str) -> list[Check]:
    if suite == "all":
        return list(REGISTRY)
    return [c for c in REGISTRY if c.suite == suite]


def run_check(c: Check, cap: int, seed: int) -> Result:
    rng = random.Random(f"{seed}:{c.name}")
    try:
        c.fn(cap, rng)
    except AssertionError as exc:
        return Result(f"{c.suite}/{c.name}", False, str(exc))
    except (ValueError, ArithmeticError) as exc:
        return Result(f"{c.suite}/{c.name}", False, f"{type(exc).__name__}: {exc}")
    return Result(f"{c.suite}/{c.name}", True, "")


def _run_by_index(args) -> Result:
    i, cap, seed = args
    return run_check(REGISTRY[i], cap, seed)


def run_suite(suite: str, cap: int, seed: int, jobs: int = 1) -> list[Result]:
    """Run a suite; results come back in registry order whatever ``jobs`` is."""
    chosen = checks_for(suite)
    if jobs <= 1:
        return [run_check(c, cap, seed) for c in chosen]
    tasks = [(REGISTRY.index(c), cap, seed) for c in chosen]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_run_by_index, tasks))
