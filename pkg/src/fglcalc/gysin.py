"""Pushforwards along projective, quadric and flag bundles."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import factorial
from typing import Sequence

from .cobordism import (
    ChernRootContext,
    _aux_space,
    _check_grade,
    _linear_factors,
    _pinv,
    _h_in,
    _root_products,
    p_ell_table,
    quadratic_universal_schur,
    segre_plan,
    universal_schur_in,
)
from .fgl import fgl_make, formal_inverse, formal_sum, n_series
from .series import ExpansionPlan, MultiExpansionPlan, Poly, series_invert
from .symmetrize import type_a_symmetrizer, type_c_symmetrizer

TYPES = ("A", "C", "BD")


class GysinError(ValueError):
    pass


class SymmetryError(GysinError):
    pass


@dataclass(frozen=True)
class FlagSpec:
    """Flag bundle data: type A (rank n), C (rank 2n) or BD (rank N).

    ``q_seq`` lists the subspace dimensions q_1 < ... < q_m.  ``fiber``
    names the tautological roots y_1..y_q that the input polynomial uses;
    they are replaced by auxiliary variables during extraction, so they may
    coincide with the root names of the base.
    """

    type: str
    rank: int
    q_seq: tuple[int, ...]
    fiber: tuple[str, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "q_seq", tuple(self.q_seq))
        if self.type not in TYPES:
            raise GysinError(f"unknown flag type {self.type!r}")
        qs = self.q_seq
        if not qs or any(b <= a for a, b in zip(qs, qs[1:])) or qs[0] < 1:
            raise GysinError(f"q_seq {qs} must be strictly increasing positive integers")
        if self.type == "C" and self.rank % 2:
            raise GysinError("type C needs even rank")
        if qs[-1] > self.n:
            raise GysinError(f"q_seq {qs} exceeds n={self.n}")
        if self.fiber is None:
            object.__setattr__(self, "fiber", tuple(f"y{i}" for i in range(1, qs[-1] + 1)))
        else:
            object.__setattr__(self, "fiber", tuple(self.fiber))
            if len(self.fiber) != qs[-1]:
                raise GysinError("one fiber name per tautological root")

    @property
    def n(self) -> int:
        return self.rank if self.type == "A" else self.rank // 2

    @property
    def q(self) -> int:
        return self.q_seq[-1]

    @property
    def blocks(self) -> tuple[int, ...]:
        prev, out = 0, []
        for qk in self.q_seq:
            out.append(qk - prev)
            prev = qk
        return tuple(out)

    def targets(self) -> tuple[int, ...]:
        top = {"A": self.n, "C": self.rank, "BD": self.rank}[self.type] - 1
        out, prev = [], 0
        for qk in self.q_seq:
            for i in range(prev + 1, qk + 1):
                out.append(top - (qk - i))
            prev = qk
        return tuple(out)

    def kernel_grade(self) -> int:
        q = self.q
        pairs = q * (q - 1) // 2
        return {"A": pairs, "C": 2 * pairs, "BD": 2 * pairs + q}[self.type]

    def relative_dimension(self) -> int:
        return sum(self.targets()) - self.kernel_grade()


def _expected_kind(spec: FlagSpec, ctx: ChernRootContext) -> None:
    if spec.type == "A":
        ok = ctx.kind == "A" and ctx.n == spec.n
    elif spec.type == "C":
        ok = ctx.kind == "C" and ctx.n == spec.n
    else:
        ok = ctx.kind == ("B" if spec.rank % 2 else "D") and ctx.rank == spec.rank
    if not ok:
        raise GysinError(f"context of kind {ctx.kind} with {len(ctx.roots)} roots does not fit {spec}")


def _prepare_input(f: Poly, fiber: Sequence[str], ctx: ChernRootContext) -> ChernRootContext:
    """Check the ring and extend the context by the base variables of f."""
    if f.ring.generators != ctx.ring.generators:
        raise GysinError("input polynomial is over a different ring")
    fiber = set(fiber)
    extra = [v for v in f.variables if v not in fiber and v not in ctx.variables and f.exponents_in(v) - {0}]
    return ctx.with_passive(extra) if extra else ctx


def check_block_symmetry(f: Poly, fiber: Sequence[str], blocks: Sequence[int]) -> None:
    """Raise SymmetryError unless f is invariant under S_b1 x S_b2 x ... on the fiber names."""
    fiber = tuple(fiber)
    g = f.embed(f.variables + tuple(v for v in fiber if v not in f.variables))
    start = 0
    for b in blocks:
        for i in range(start, start + b - 1):
            perm = list(range(len(g.variables)))
            ia, ic = g.variables.index(fiber[i]), g.variables.index(fiber[i + 1])
            perm[ia], perm[ic] = ic, ia
            if g.permute_variables(perm) != g:
                raise SymmetryError(f"input is not symmetric in {fiber[i]}, {fiber[i + 1]}")
        start += b


def _lift_input(f: Poly, fiber: Sequence[str], aux: Sequence[str], tv: tuple[str, ...], cap: int) -> Poly:
    rename = dict(zip(fiber, aux))
    return f.lift_cap(max(cap, f.cap)).embed(tv, cap, rename=rename)


# ---------------------------------------------------------------------------
# one-step pushforwards


def _relative_factor(ctx: ChernRootContext, law, t: Poly, names: Sequence[str], tv, cap, quadric: bool) -> Poly:
    acc = Poly.constant(law.ring, tv, cap, 1)
    z = Poly.var(law.ring, tv, cap, ctx.twist) if ctx.twist else None
    for r in names:
        y = Poly.var(law.ring, tv, cap, r)
        acc = acc * formal_sum(law, t, formal_inverse(law, y))
        if quadric:
            s = formal_sum(law, t, y)
            acc = acc * (formal_sum(law, s, z) if z is not None else s)
    return acc


def pushforward_projective(ctx: ChernRootContext, f: Poly, fiber: str = "y1", relative: Sequence[str] = ()) -> Poly:
    """Res' f(t) / (P(t) prod_j (t +_L chi(y_j))), i.e. [t^(n-1)] f(t) S(E^v; 1/t).

    ``relative`` names roots y_1..y_(k) of an earlier flag step; the bundle is
    then E / U_k and the factor prod_i (t +_L chi(y_i)) is inserted.
    """
    if ctx.kind != "A":
        raise GysinError("projective pushforward uses a plain context")
    return _one_step(ctx, f, fiber, relative, quadric=False)


def pushforward_quadric(ctx: ChernRootContext, f: Poly, fiber: str = "y1", relative: Sequence[str] = ()) -> Poly:
    """[t^(N-1)] f(t) ([2](t) +_L z) S(E^v; 1/t) for an orthogonal context.

    ``relative`` names isotropic roots of an earlier step; the bundle is then
    U^perp / U and prod_i (t +_L chi(y_i))(t +_L y_i +_L z) is inserted.
    """
    if ctx.kind not in ("B", "D"):
        raise GysinError("quadric pushforward needs an orthogonal context")
    return _one_step(ctx, f, fiber, relative, quadric=True)


def _one_step(ctx: ChernRootContext, f: Poly, fiber: str, relative: Sequence[str], quadric: bool) -> Poly:
    relative = tuple(relative)
    ctx = _prepare_input(f, (fiber,), ctx)
    ctx = ctx.with_passive(relative)
    D = ctx.cap
    roots = ctx.dual_roots()
    rank = ctx.rank
    big = D + rank - 1
    aux = "t"
    tv = _aux_space(ctx, (aux,), big)
    law = fgl_make(ctx.theory, max(big, 1))
    t = Poly.var(law.ring, tv, big, aux)
    num = _lift_input(f, (fiber,), (aux,), tv, big)
    num = num * _pinv(ctx, aux, big) * _root_products(ctx, ctx.dual_roots(big, tv), aux, big)
    if quadric:
        q = n_series(law, 2, t)
        if ctx.twist:
            q = formal_sum(law, q, Poly.var(law.ring, tv, big, ctx.twist))
        num = num * q
    if relative:
        num = num * _relative_factor(ctx, law, t, relative, tv, big, quadric)
    plan = ExpansionPlan(aux, ctx.space, num, _linear_factors(ctx, roots, True))
    return plan.coeff(-1)


def projective_closed_form(ctx: ChernRootContext, N: int) -> Poly:
    """pi_*(y^N) as sum_(k, l) [CP^k] P_l(y) h_(k+l+N-n+1)(y).

    For N >= n every (k, l) contributes; for 0 <= N < n only l >= n-N-1-k.
    """
    if ctx.kind != "A":
        raise GysinError("projective pushforward uses a plain context")
    if N < 0:
        raise GysinError("N must be nonnegative")
    n, D = ctx.n, ctx.cap
    shift = N - n + 1
    top = D + max(-shift, 0)
    pinv = fgl_make(ctx.theory, max(top, 1)).derived().Pinv
    P = p_ell_table(ctx, top)
    acc = ctx.zero()
    for k in range(top + 1):
        ck = pinv.coefficient((k,))
        if ck.is_zero():
            continue
        lo = 0 if N >= n else max(n - N - 1 - k, 0)
        for l in range(lo, top + 1 - k):
            j = k + l + shift
            if j > D:
                continue
            acc = acc + (P[l] * _h_in(ctx, j)) * ck
    return acc


def iterated_projective(ctx: ChernRootContext, f: Poly, fiber: Sequence[str]) -> Poly:
    """Full-flag pushforward as a composition of projective pushforwards, last root first."""
    return _iterate(ctx, f, tuple(fiber), pushforward_projective)


def iterated_quadric(ctx: ChernRootContext, f: Poly, fiber: Sequence[str]) -> Poly:
    """Isotropic full-flag pushforward as a composition of quadric pushforwards."""
    return _iterate(ctx, f, tuple(fiber), pushforward_quadric)


def _iterate(ctx, f, fiber, step) -> Poly:
    # each later step reads its input up to rank - 1 degrees above its own cap
    for k in range(len(fiber) - 1, -1, -1):
        f = step(ctx.with_cap(ctx.cap + k * (ctx.rank - 1)), f, fiber[k], fiber[:k])
    return f


# ---------------------------------------------------------------------------
# Darondeau-Pragacz extraction


def _aux_names(q: int) -> tuple[str, ...]:
    return tuple(f"t{i}" for i in range(1, q + 1))


@lru_cache(maxsize=64)
def _dp_kernel(spec: FlagSpec, ctx: ChernRootContext, cap: int) -> Poly:
    """The f-independent part of the integrand, in (t_1..t_q) + root space."""
    q = spec.q
    aux = _aux_names(q)
    tv = _aux_space(ctx, aux, cap)
    law = fgl_make(ctx.theory, max(cap, 1))
    R = law.ring
    ts = [Poly.var(R, tv, cap, a) for a in aux]
    z = Poly.var(R, tv, cap, ctx.twist) if ctx.twist else None
    K = Poly.constant(R, tv, cap, 1)
    start = 0
    for b in spec.blocks:
        if b > 1:
            names = aux[start:start + b]
            K = K * series_invert(universal_schur_in(ctx.theory, names, (), cap, tv))
        start += b
    for j in range(q):
        for i in range(j):
            K = K * formal_sum(law, ts[j], formal_inverse(law, ts[i]))
            if spec.type in ("C", "BD"):
                s = formal_sum(law, ts[j], ts[i])
                K = K * (formal_sum(law, s, z) if z is not None else s)
    if spec.type == "BD":
        for i in range(q):
            d = n_series(law, 2, ts[i])
            K = K * (formal_sum(law, d, z) if z is not None else d)
    return K


def dp_pushforward(spec: FlagSpec, f: Poly, ctx: ChernRootContext) -> Poly:
    """Coefficient extraction for the flag-bundle pushforward of f(y_1..y_q)."""
    _expected_kind(spec, ctx)
    check_block_symmetry(f, spec.fiber, spec.blocks)
    ctx = _prepare_input(f, spec.fiber, ctx)
    targets = spec.targets()
    aux = _aux_names(spec.q)
    big = ctx.cap + sum(max(e, 0) for e in targets)
    tv = _aux_space(ctx, aux, big)
    A = _lift_input(f, spec.fiber, aux, tv, big) * _dp_kernel(spec, ctx, big)
    kernel = segre_plan(ctx, max(targets))
    out = MultiExpansionPlan(aux, ctx.space, A, [kernel] * spec.q).coeff(targets)
    grades = f.total_grades()
    if len(grades) == 1:
        _check_grade(out, grades.pop() - spec.relative_dimension(), "pushforward")
    return out


def k_theory_pushforward(spec: FlagSpec, f: Poly, ctx: ChernRootContext) -> Poly:
    """The K-theory forms of the type A and C formulas, built from closed forms:
    t_j (-) t_i = (t_j - t_i) / (1 - beta t_i), and
    G(E^v; 1/t) = t^r / ((1 - beta t) prod_j (t (+) chi(rho_j))) with
    1 / (t (+) chi(rho)) = (1 - beta rho) / (t - rho)."""
    if ctx.theory != "multiplicative":
        raise GysinError("the K-theory forms need the multiplicative theory")
    if spec.type not in ("A", "C"):
        raise GysinError("K-theory forms exist for types A and C")
    _expected_kind(spec, ctx)
    check_block_symmetry(f, spec.fiber, spec.blocks)
    ctx = _prepare_input(f, spec.fiber, ctx)
    targets = spec.targets()
    q = spec.q
    aux = _aux_names(q)
    big = ctx.cap + sum(max(e, 0) for e in targets)
    tv = _aux_space(ctx, aux, big)
    R = ctx.ring
    beta = R.gen("beta")
    ts = [Poly.var(R, tv, big, a) for a in aux]
    z = Poly.var(R, tv, big, ctx.twist) if ctx.twist else None
    A = _lift_input(f, spec.fiber, aux, tv, big)
    for j in range(q):
        for i in range(j):
            A = A * (ts[j] - ts[i]) * series_invert(1 - ts[i] * beta)
            if spec.type == "C":
                s = ts[j] + ts[i] - ts[j] * ts[i] * beta
                if z is not None:
                    s = s + z - s * z * beta
                A = A * s
    # kernel G(E^v; 1/t)
    depth = max(targets)
    kbig = ctx.cap + depth
    kv = _aux_space(ctx, ("t",), kbig)
    t = Poly.var(R, kv, kbig, "t")
    num = series_invert(1 - t * beta)
    for rho in ctx.dual_roots(kbig, kv):
        num = num * (1 - rho * beta)
    plan = ExpansionPlan("t", ctx.space, num, _linear_factors(ctx, ctx.dual_roots(), True), shift=ctx.rank)
    return MultiExpansionPlan(aux, ctx.space, A, [plan] * q).coeff(targets)


# ---------------------------------------------------------------------------
# cohomology residue forms


def _residue_kernel(ctx: ChernRootContext, roots: Sequence[Poly]) -> ExpansionPlan:
    """t^r / prod_j (t - rho_j) expanded in 1/t."""
    return ExpansionPlan("t", ctx.space, None, _linear_factors(ctx, roots, True), shift=len(roots))


def symmetrized_grassmann(ctx: ChernRootContext, f: Poly, q: int, fiber: Sequence[str] | None = None) -> Poly:
    """[prod t_i^(-1)] (1/q!) f(t) prod_(i != j)(t_j - t_i) / prod_(i, j)(t_i - y_j), additive theory."""
    if ctx.theory != "additive" or ctx.kind != "A":
        raise GysinError("the symmetrized Grassmann form is a cohomology formula over a plain context")
    fiber = tuple(fiber) if fiber else tuple(f"y{i}" for i in range(1, q + 1))
    check_block_symmetry(f, fiber, (q,))
    ctx = _prepare_input(f, fiber, ctx)
    n = ctx.n
    return _symmetrized(ctx, f, fiber, q, ctx.dual_roots(), n, lagrangian=False)


def symmetrized_lagrangian(ctx: ChernRootContext, f: Poly, fiber: Sequence[str] | None = None) -> Poly:
    """[prod t_i^(-1)] (1/n!) f(t) prod_(i != j)(t_j - t_i) prod_(i<j)(t_j + t_i) / prod_(i, j)(t_i^2 - y_j^2)."""
    if ctx.theory != "additive" or ctx.kind != "C" or ctx.twist:
        raise GysinError("the symmetrized Lagrangian form is a cohomology formula with z = 0")
    n = ctx.n
    fiber = tuple(fiber) if fiber else tuple(f"y{i}" for i in range(1, n + 1))
    check_block_symmetry(f, fiber, (n,))
    ctx = _prepare_input(f, fiber, ctx)
    return _symmetrized(ctx, f, fiber, n, ctx.dual_roots(), 2 * n, lagrangian=True)


def _symmetrized(ctx, f, fiber, q, roots, r, lagrangian) -> Poly:
    aux = _aux_names(q)
    targets = (r - 1,) * q
    big = ctx.cap + q * (r - 1)
    tv = _aux_space(ctx, aux, big)
    R = ctx.ring
    ts = [Poly.var(R, tv, big, a) for a in aux]
    A = _lift_input(f, fiber, aux, tv, big)
    for i in range(q):
        for j in range(q):
            if i != j:
                A = A * (ts[j] - ts[i])
    if lagrangian:
        for j in range(q):
            for i in range(j):
                A = A * (ts[j] + ts[i])
    out = MultiExpansionPlan(aux, ctx.space, A, [_residue_kernel(ctx, roots)] * q).coeff(targets)
    k = factorial(q)
    terms = {}
    for exps, c in out.terms():
        scaled = {}
        for mono, v in c.terms.items():
            if v % k:
                raise GysinError("symmetrized form is not divisible by q!")
            scaled[mono] = v // k
        terms[exps] = type(c)(c.ring, scaled)
    return Poly(out.ring, out.variables, out.cap, terms)


# ---------------------------------------------------------------------------
# symmetrizing operators


def symmetrizer_form(spec: FlagSpec) -> str:
    """'A', 'C-full' or 'C-grassmann'; raises for specs without a symmetrizer."""
    if spec.type == "A":
        return "A"
    if spec.type == "C":
        if spec.q_seq == tuple(range(1, spec.q + 1)):
            return "C-full"
        if len(spec.q_seq) == 1:
            return "C-grassmann"
    raise GysinError(f"no symmetrizer form for {spec.type} with q_seq {spec.q_seq}")


def symmetrizer_gysin(spec: FlagSpec, f: Poly, ctx: ChernRootContext) -> Poly:
    """Coset-sum form of the pushforward (type A parabolic, C full flag, C Grassmann)."""
    form = symmetrizer_form(spec)
    _expected_kind(spec, ctx)
    check_block_symmetry(f, spec.fiber, spec.blocks)
    ctx = _prepare_input(f, spec.fiber, ctx)
    names = ctx.roots[: ctx.n]
    n = len(names)
    rename = dict(zip(spec.fiber, names[: spec.q]))
    clash = [v for v in f.variables if v in names and v not in rename and f.exponents_in(v) - {0}]
    if clash:
        raise GysinError(f"input uses root names {clash} outside the fiber")
    if form == "A":
        blocks = spec.blocks + ((n - spec.q,) if spec.q < n else ())
        work = ctx.cap + n * (n - 1) // 2
        g = f.lift_cap(max(work, f.cap)).embed(ctx.variables, work, rename=rename)
        out = type_a_symmetrizer(ctx.theory, names, blocks, g, ctx.cap)
    else:
        if ctx.twist:
            raise GysinError("type C symmetrizers take the twist bound to 0")
        work = ctx.cap + n * n
        g = f.lift_cap(max(work, f.cap)).embed(ctx.variables, work, rename=rename)
        kind = "full" if form == "C-full" else "grassmann"
        out = type_c_symmetrizer(ctx.theory, names, spec.q, g, ctx.cap, kind)
    grades = f.total_grades()
    if len(grades) == 1:
        _check_grade(out, grades.pop() - spec.relative_dimension(), "symmetrizer pushforward")
    return out


def pragacz_ratajski(ctx: ChernRootContext, I: Sequence[int], q: int) -> tuple[Poly, Poly]:
    """(pushforward of s^L_I(U_q^v) from the isotropic Grassmannian, s^(L,(2))_(I - rho_q)(E^v))."""
    if ctx.kind != "C" or ctx.twist:
        raise GysinError("the Pragacz-Ratajski formula uses a symplectic context with z = 0")
    n = ctx.n
    I = tuple(I)
    if len(I) != q or not 1 <= q <= n:
        raise GysinError(f"index {I} must have length q={q} <= n={n}")
    rho = tuple(2 * n - q - i for i in range(q))
    for i in range(q):
        if I[i] <= rho[i]:
            raise GysinError(f"condition I_{i + 1} > {rho[i]} fails for I={I}")
    names = ctx.roots[:q]
    work = ctx.cap + n * n
    left_in = universal_schur_in(ctx.theory, names, I, work, ctx.variables)
    left = type_c_symmetrizer(ctx.theory, ctx.roots, q, left_in, ctx.cap, "grassmann", f_exact=False)
    right = quadratic_universal_schur(ctx, tuple(a - b for a, b in zip(I, rho)))
    return left, right
