"""Universal Schur functions, Segre classes and quadratic Schur functions."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from math import comb
from typing import Iterable, Sequence

from .fgl import fgl_make, formal_inverse, formal_sum
from .ring import Ring
from .series import (
    IN_INV_T,
    IN_T,
    _lmul,
    ExpansionPlan,
    Factor,
    MultiExpansionPlan,
    Poly,
    split_by,
    substitute,
)
from .symfun import complete_h, determinant, elementary_e, schur
from .symmetrize import type_a_symmetrizer, type_c_symmetrizer

KINDS = ("A", "C", "B", "D")


class CobordismError(ValueError):
    pass


class GradeError(CobordismError):
    """A computed class is not graded-homogeneous of the predicted grade."""


@dataclass(frozen=True)
class ChernRootContext:
    """Chern roots of E^v for one theory at one cap.

    ``kind`` "A" uses the roots as given.  "C" and "D" adjoin
    chi(y_i) +_L chi(z) for every root; "B" does the same for all roots but
    the last, which stays single (rank 2n+1).  ``twist`` names z; None
    binds it to 0.  ``passive`` lists further base variables that pass
    through every operation untouched.
    """

    theory: str
    cap: int
    roots: tuple[str, ...]
    kind: str = "A"
    twist: str | None = None
    passive: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "roots", tuple(self.roots))
        object.__setattr__(self, "passive", tuple(self.passive))
        if self.kind not in KINDS:
            raise CobordismError(f"unknown context kind {self.kind!r}")
        if len(self.roots) < (2 if self.kind == "B" else 1):
            raise CobordismError("a context needs at least one root")
        if self.cap < 0:
            raise CobordismError("cap must be nonnegative")
        names = self.variables
        if len(set(names)) != len(names):
            raise CobordismError(f"repeated variable names in {names}")

    @property
    def variables(self) -> tuple[str, ...]:
        return self.roots + ((self.twist,) if self.twist else ()) + self.passive

    @property
    def n(self) -> int:
        return len(self.roots) - 1 if self.kind == "B" else len(self.roots)

    @property
    def rank(self) -> int:
        if self.kind == "A":
            return self.n
        return 2 * self.n + (1 if self.kind == "B" else 0)

    @property
    def ring(self) -> Ring:
        return fgl_make(self.theory, max(self.cap, 1)).ring

    @property
    def space(self):
        return (self.ring, self.variables, self.cap)

    def with_cap(self, cap: int) -> "ChernRootContext":
        return ChernRootContext(self.theory, cap, self.roots, self.kind, self.twist, self.passive)

    def with_passive(self, names: Iterable[str]) -> "ChernRootContext":
        extra = tuple(v for v in names if v not in self.variables)
        return ChernRootContext(self.theory, self.cap, self.roots, self.kind, self.twist, self.passive + extra)

    def zero(self) -> Poly:
        return Poly.zero(self.ring, self.variables, self.cap)

    def one(self) -> Poly:
        return Poly.constant(self.ring, self.variables, self.cap, 1)

    def var(self, name: str) -> Poly:
        return Poly.var(self.ring, self.variables, self.cap, name)

    def dual_roots(self, cap: int | None = None, variables: Sequence[str] | None = None) -> list[Poly]:
        """Chern roots of E^v as series in ``variables`` (default: the context's)."""
        cap = self.cap if cap is None else cap
        variables = self.variables if variables is None else tuple(variables)
        return list(_dual_roots(self, cap, variables))


@lru_cache(maxsize=256)
def _dual_roots(ctx: ChernRootContext, cap: int, variables: tuple[str, ...]) -> tuple[Poly, ...]:
    law = fgl_make(ctx.theory, max(cap, 1))
    R = law.ring
    ys = [Poly.var(R, variables, cap, r) for r in ctx.roots]
    if ctx.kind == "A" or cap == 0:
        doubled = ys if ctx.kind == "A" else ys + ys[: ctx.n]
        return tuple(doubled)
    out = list(ys)
    zbar = formal_inverse(law, Poly.var(R, variables, cap, ctx.twist)) if ctx.twist else None
    for y in ys[: ctx.n]:
        r = formal_inverse(law, y)
        out.append(formal_sum(law, r, zbar) if zbar is not None else r)
    return tuple(out)


def _check_grade(p: Poly, grade: int, what: str) -> Poly:
    if not p.is_homogeneous(grade):
        raise GradeError(f"{what} is not graded-homogeneous of grade {grade}")
    return p


# ---------------------------------------------------------------------------
# universal Schur functions


def universal_schur_in(theory: str, names: Sequence[str], I: Sequence[int], cap: int, variables=None) -> Poly:
    """s^L_I in the given root names; ``variables`` defaults to ``names``."""
    names = tuple(names)
    variables = names if variables is None else tuple(variables)
    n = len(names)
    I = tuple(I)
    if len(I) > n:
        raise CobordismError(f"index {I} longer than {n} variables")
    if any(x < 0 for x in I):
        raise CobordismError(f"index {I} has negative entries")
    I = I + (0,) * (n - len(I))
    R = fgl_make(theory, max(cap, 1)).ring
    exps = [0] * len(variables)
    for i, name in enumerate(names):
        exps[variables.index(name)] = I[i] + n - 1 - i
    f = Poly.monomial(R, variables, cap + n * (n - 1) // 2, exps)
    out = type_a_symmetrizer(theory, names, (1,) * n, f, cap)
    return _check_grade(out, sum(I), f"universal Schur {I}")


def universal_schur(ctx: ChernRootContext, I: Sequence[int]) -> Poly:
    """s^L_I(y_1..y_n) over the context's (plain) roots."""
    names = ctx.roots[: ctx.n]
    return universal_schur_in(ctx.theory, names, I, ctx.cap, ctx.variables)


# ---------------------------------------------------------------------------
# Segre classes


@dataclass
class SegreTable:
    context: ChernRootContext
    values: dict[int, Poly] = field(default_factory=dict)

    def __getitem__(self, m: int) -> Poly:
        return self.values[m]


def _aux_space(ctx: ChernRootContext, aux: Sequence[str], cap: int) -> tuple[str, ...]:
    aux = tuple(aux)
    clash = set(aux) & set(ctx.variables)
    if clash:
        raise CobordismError(f"auxiliary names {sorted(clash)} collide with the root space")
    return aux + ctx.variables


def _root_products(ctx: ChernRootContext, roots: Sequence[Poly], aux: str, cap: int) -> Poly:
    """prod_j Ptwo(aux, rho_j) in (aux,) + root space at ``cap``."""
    law = fgl_make(ctx.theory, max(cap, 1))
    Ptwo = law.derived().Ptwo
    tv = (aux,) + ctx.variables
    t = Poly.var(law.ring, tv, cap, aux)
    acc = Poly.constant(law.ring, tv, cap, 1)
    for rho in roots:
        acc = acc * substitute(Ptwo, {"t": t, "y": rho}, variables=tv, cap=cap)
    return acc


def _pinv(ctx: ChernRootContext, aux: str, cap: int) -> Poly:
    law = fgl_make(ctx.theory, max(cap, 1))
    return law.derived().Pinv.embed((aux,) + ctx.variables, rename={"u": aux})


@lru_cache(maxsize=32)
def _ptwo_split(theory: str, K: int) -> dict[int, Poly]:
    """Ptwo(t, y) = sum_a t^a c_a(y), with c_a known to y-degree K - a."""
    law = fgl_make(theory, max(K, 1))
    return split_by(law.derived().Ptwo, "t", (law.ring, ("y",), K))


def _keep(D: int, K: int):
    return lambda a: min(D, K - a) if 0 <= a <= K else None


def _split_root_products(ctx: ChernRootContext, roots: Sequence[Poly], K: int) -> dict[int, Poly]:
    """prod_j Ptwo(t, rho_j) as {a: root-space coefficient of t^a}, a <= K.

    The coefficient of t^a is exact to root degree min(cap, K - a), which is
    all a coefficient extraction at total depth K can see.
    """
    D = ctx.cap
    keep = _keep(D, K)
    split = _ptwo_split(ctx.theory, K)
    acc = {0: ctx.one()}
    for rho in roots:
        fac = {}
        for a, c in split.items():
            kc = keep(a)
            if kc is None:
                continue
            v = substitute(c, {"y": rho}, exact=True)
            if not v.is_zero():
                fac[a] = v
        acc = _lmul(acc, fac, keep)
    return acc


def _split_pinv(ctx: ChernRootContext, K: int) -> dict[int, Poly]:
    pinv = fgl_make(ctx.theory, max(K, 1)).derived().Pinv
    one = ctx.one()
    out = {}
    for a in range(K + 1):
        c = pinv.coefficient((a,))
        if not c.is_zero():
            out[a] = one * c
    return out


def _linear_factors(ctx: ChernRootContext, roots: Sequence[Poly], invert: bool) -> list[Factor]:
    """(t - rho_j) written in 1/t, in the root space at the context cap."""
    one = ctx.one()
    return [Factor({1: one, 0: -rho}, IN_INV_T, invert) for rho in roots]


@lru_cache(maxsize=128)
def segre_plan(ctx: ChernRootContext, depth: int, aux: str = "t") -> ExpansionPlan:
    """Plan whose coefficient of t^e is S_(-e)(E^v), valid for e <= depth."""
    K = ctx.cap + max(depth, 0)
    A = _lmul(_split_pinv(ctx, K), _split_root_products(ctx, ctx.dual_roots(), K), _keep(ctx.cap, K))
    factors = _linear_factors(ctx, ctx.dual_roots(), invert=True)
    return ExpansionPlan(aux, ctx.space, A, factors, shift=ctx.rank)


def segre_class(ctx: ChernRootContext, m: int) -> Poly:
    out = segre_plan(ctx, max(-m, 0)).coeff(-m)
    md = out.min_degree()
    if md is not None and md < max(0, m):
        raise CobordismError(f"Segre class {m} has a term of degree {md}")
    return _check_grade(out, m, f"Segre class {m}")


def segre_table(ctx: ChernRootContext, m_range: Iterable[int]) -> SegreTable:
    ms = list(m_range)
    if not ms:
        return SegreTable(ctx, {})
    plan = segre_plan(ctx, max(max(-m for m in ms), 0))
    vals = plan.coeffs([-m for m in ms])
    table = SegreTable(ctx)
    for m in ms:
        v = vals[-m]
        md = v.min_degree()
        if md is not None and md < max(0, m):
            raise CobordismError(f"Segre class {m} has a term of degree {md}")
        table.values[m] = _check_grade(v, m, f"Segre class {m}")
    return table


def segre_relative(ctxE: ChernRootContext, ctxF: ChernRootContext | None, m_range: Iterable[int]) -> SegreTable:
    """Coefficients of (1/P(1/u)) * S(E; u) / S(F; u), indexed like segre_table.

    Each Segre series carries its own 1/P factor, so F = E leaves 1/P(1/u)
    and an empty F gives back S(E; u).  The roots of F are evaluated in the
    space of E, so every variable of F must appear there.  ``ctxF=None``
    is the zero bundle.
    """
    if ctxF is not None and ctxF.theory != ctxE.theory:
        raise CobordismError("both bundles must use the same formal group law")
    missing = set(ctxF.variables) - set(ctxE.variables) if ctxF is not None else ()
    if missing:
        raise CobordismError(f"variables {sorted(missing)} of F are not in the space of E")
    ms = list(m_range)
    table = SegreTable(ctxE)
    if not ms:
        return table
    K = ctxE.cap + max(max(-m for m in ms), 0)
    keep = _keep(ctxE.cap, K)
    pinv = _split_pinv(ctxE, K)
    rootsE = ctxE.dual_roots()
    rootsF = ctxF.dual_roots(ctxE.cap, ctxE.variables) if ctxF is not None else []
    rankF = ctxF.rank if ctxF is not None else 0
    A = _lmul(pinv, _split_root_products(ctxE, rootsE, K), keep)
    inverse = Factor(_split_root_products(ctxE, rootsF, K), IN_T, invert=True)
    factors = [inverse] + _linear_factors(ctxE, rootsE, True) + _linear_factors(ctxE, rootsF, False)
    aux = "t"
    plan = ExpansionPlan(aux, ctxE.space, A, factors, shift=ctxE.rank - rankF)
    vals = plan.coeffs([-m for m in ms])
    for m in ms:
        table.values[m] = _check_grade(vals[-m], m, f"relative Segre class {m}")
    return table


# ---------------------------------------------------------------------------
# new universal Schur functions (one-row)


def new_universal_schur(ctx: ChernRootContext, m: int) -> Poly:
    """S^L_m(y): the Segre class of E^v for a plain context."""
    if ctx.kind != "A":
        raise CobordismError("new universal Schur functions use a plain context")
    return segre_class(ctx, m)


def _h_in(ctx: ChernRootContext, k: int) -> Poly:
    names = ctx.roots[: ctx.n]
    h = complete_h(k, len(names), names, None, ctx.ring) if k >= 0 else None
    if h is None or k > ctx.cap:
        return ctx.zero()
    return h.lift_cap(ctx.cap).embed(ctx.variables)


def p_ell_table(ctx: ChernRootContext, top: int) -> dict[int, Poly]:
    """P_l(y) = [t^l] prod_j Ptwo(t, y_j) for l <= top, in the root space."""
    ys = [ctx.var(r) for r in ctx.roots[: ctx.n]]
    prod = _split_root_products(ctx, ys, ctx.cap + top)
    return {l: prod.get(l, ctx.zero()) for l in range(top + 1)}


def new_universal_schur_closed(ctx: ChernRootContext, m: int) -> Poly:
    """sum_(k, l) [CP^k] P_l(y) h_(k+l+m)(y), the closed form of S^L_m."""
    if ctx.kind != "A":
        raise CobordismError("new universal Schur functions use a plain context")
    D = ctx.cap
    top = D + max(-m, 0)
    law = fgl_make(ctx.theory, max(top, 1))
    pinv = law.derived().Pinv
    P = p_ell_table(ctx, top)
    acc = ctx.zero()
    for k in range(top + 1):
        ck = pinv.coefficient((k,))
        if ck.is_zero():
            continue
        for l in range(top + 1 - k):
            j = k + l + m
            if j < 0 or j > D:
                continue
            acc = acc + (P[l] * _h_in(ctx, j)) * ck
    return _check_grade(acc, m, f"closed-form Segre class {m}")


def _schur_in(ctx: ChernRootContext, lam: Sequence[int]) -> Poly:
    names = ctx.roots[: ctx.n]
    if sum(lam) > ctx.cap:
        return ctx.zero()
    s = schur(lam, len(names), names, ctx.cap, ctx.ring)
    return s.embed(ctx.variables)


def grothendieck_hook(ctx: ChernRootContext, a: int) -> Poly:
    """sum_(k<n) (-beta)^k s_(a, 1^k)(y), a >= 1."""
    if ctx.theory != "multiplicative":
        raise CobordismError("the hook formula lives in multiplicative theory")
    if a < 1:
        raise CobordismError("the hook formula needs a >= 1")
    beta = ctx.ring.gen("beta")
    acc = ctx.zero()
    for k in range(ctx.n):
        acc = acc + _schur_in(ctx, (a,) + (1,) * k) * ((-beta) ** k)
    return acc


def grothendieck_one_row(ctx: ChernRootContext, a: int) -> Poly:
    """G_a = sum_(k<n) beta^k sum_(i<=k) (-1)^i e_i h_(a+k-i); G_(-a) = beta^a."""
    if ctx.theory != "multiplicative":
        raise CobordismError("the one-row Grothendieck formula lives in multiplicative theory")
    beta = ctx.ring.gen("beta")
    if a <= 0:
        return ctx.one() * beta ** (-a)
    names = ctx.roots[: ctx.n]
    n = len(names)
    acc = ctx.zero()
    for k in range(n):
        inner = ctx.zero()
        for i in range(k + 1):
            if a + k - i < 0 or i > ctx.cap:
                continue
            e = elementary_e(i, n, names, None, ctx.ring).lift_cap(ctx.cap).embed(ctx.variables)
            term = e * _h_in(ctx, a + k - i)
            inner = inner + term if i % 2 == 0 else inner - term
        acc = acc + inner * beta**k
    return acc


def hyperbolic_one_row(ctx: ChernRootContext, a: int, b=None, c=None) -> Poly:
    """sum_(j, k) C(k+j, j) b^k c^j s_(a+j, 1^(k+j))(y) over j + k <= n - 1.

    ``b`` and ``c`` default to the hyperbolic generators; passing scalars or
    coefficients of another ring specializes the formula.
    """
    R = ctx.ring
    b = R.gen("b") if b is None else b
    c = R.gen("c") if c is None else c
    acc = ctx.zero()
    for j in range(ctx.n):
        for k in range(ctx.n - j):
            lam = (a + j,) + (1,) * (k + j)
            coeff = comb(k + j, j)
            term = _schur_in(ctx, lam) * coeff
            if k:
                term = term * (b**k)
            if j:
                term = term * (c**j)
            acc = acc + term
    return acc


# ---------------------------------------------------------------------------
# quadratic Schur functions


def _symplectic_names(ctx: ChernRootContext) -> tuple[str, ...]:
    if ctx.kind != "C":
        raise CobordismError("quadratic Schur functions need a symplectic context")
    if ctx.twist is not None:
        raise CobordismError("quadratic Schur functions take the twist bound to 0")
    return ctx.roots


def _quadratic_index(I: Sequence[int], n: int) -> tuple[int, ...]:
    I = tuple(I)
    while I and I[-1] == 0:
        I = I[:-1]
    if any(x < 0 for x in I):
        raise CobordismError(f"index {I} has negative entries")
    if len(I) > n:
        raise CobordismError(f"index {I} longer than n={n}")
    return I


def quadratic_universal_schur(ctx: ChernRootContext, I: Sequence[int]) -> Poly:
    """s^(L,(2))_I(E^v) by the C_n / C_(n-q) symmetrizer."""
    names = _symplectic_names(ctx)
    n = len(names)
    I = _quadratic_index(I, n)
    if not I:
        return ctx.one()
    q = len(I)
    exps = [0] * len(ctx.variables)
    for i in range(q):
        exps[ctx.variables.index(names[i])] = I[i] + 2 * n - 2 * i - 1
    f = Poly.monomial(ctx.ring, ctx.variables, ctx.cap + n * n, exps)
    out = type_c_symmetrizer(ctx.theory, names, q, f, ctx.cap, "full")
    return _check_grade(out, sum(I), f"quadratic Schur {I}")


def quadratic_via_gf(ctx: ChernRootContext, lam: Sequence[int]) -> Poly:
    """Coefficient of prod t_i^(-lam_i) in
    prod_(i<j) (t_j +_L chi(t_i))(t_j +_L t_i) / t_j^2 * prod_i S(E^v; 1/t_i)."""
    _symplectic_names(ctx)
    lam = _quadratic_index(lam, ctx.n)
    q = len(lam)
    if q == 0:
        return ctx.one()
    D = ctx.cap
    aux = tuple(f"t{i}" for i in range(1, q + 1))
    target = tuple(-lam[j] + 2 * j for j in range(q))
    big = D + sum(max(x, 0) for x in target)
    law = fgl_make(ctx.theory, max(big, 1))
    tv = _aux_space(ctx, aux, big)
    ts = [Poly.var(law.ring, tv, big, a) for a in aux]
    G = Poly.constant(law.ring, tv, big, 1)
    for j in range(q):
        for i in range(j):
            G = G * formal_sum(law, ts[j], formal_inverse(law, ts[i])) * formal_sum(law, ts[j], ts[i])
    kernel = segre_plan(ctx, max(max(target), 0))
    plan = MultiExpansionPlan(aux, ctx.space, G, [kernel] * q)
    out = plan.coeff(target)
    return _check_grade(out, sum(lam), f"quadratic Schur {lam} (generating function)")


def _gen_binomial(r: int, k: int) -> int:
    """C(r, k) for any integer r and k >= 0."""
    if r >= 0:
        return comb(r, k)
    return (-1) ** k * comb(-r + k - 1, k)


def k_quadratic_det(lam: Sequence[int], n: int, cap: int, names: Sequence[str] | None = None) -> Poly:
    """det(sum_k C(i-j, k) (-beta)^k G_(lam_i + 2(j-i) + k)(E^v)), doubled roots."""
    names = tuple(names) if names is not None else tuple(f"y{i}" for i in range(1, n + 1))
    ctx = ChernRootContext("multiplicative", cap, names, "C")
    lam = _quadratic_index(lam, n)
    q = len(lam)
    if q == 0:
        return ctx.one()
    beta = ctx.ring.gen("beta")
    needed = set()
    for i in range(q):
        for j in range(q):
            base = lam[i] + 2 * (j - i)
            for k in range(0, max(cap - base, 0) + 1):
                needed.add(base + k)
    G = segre_table(ctx, sorted(needed))
    matrix = []
    for i in range(q):
        row = []
        for j in range(q):
            base = lam[i] + 2 * (j - i)
            entry = ctx.zero()
            for k in range(0, max(cap - base, 0) + 1):
                c = _gen_binomial(i - j, k)
                if c:
                    entry = entry + G[base + k] * ((-beta) ** k) * c
            row.append(entry)
        matrix.append(row)
    out = determinant(matrix, ctx.one())
    return _check_grade(out, sum(lam), f"K-theoretic quadratic Schur {lam}")
