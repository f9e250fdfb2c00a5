"""Formal group laws and the series derived from them."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .ring import RATIONALS, GradedCoefficient, Ring, RingError, theory_ring
from .series import Poly, SeriesError, exact_divide, series_invert, substitute

# Generator budget of the universal ring.  Every universal computation uses
# the same ring so results from different routes compare directly.
UNIVERSAL_GENERATORS = 16

U, V = ("u", "v")
UV = (U, V)
Z = ("u",)


class FGLError(ValueError):
    pass


class SpecializationError(FGLError):
    pass


@dataclass(frozen=True)
class DerivedSeries:
    P: Poly
    Pinv: Poly
    Ptwo: Poly


def _universal_log_inverse(ring: Ring, cap: int) -> tuple[Poly, Poly]:
    """ell(u) = u + sum m_k u^(k+1) and its compositional inverse, one variable."""
    log = Poly.var(ring, Z, cap, U)
    terms = {(k + 1,): ring.gen(f"m{k}") for k in range(1, cap)}
    log = log + Poly(ring, Z, cap, terms)
    s = Poly.var(ring, Z, cap, U)
    e = s
    tail = log - s
    for _ in range(cap):
        e = s - substitute(tail, {U: e})
    return log, e


def _solve_inverse(F: Poly, cap: int) -> Poly:
    """chi(u) with F(u, chi(u)) = 0; each pass fixes one more degree."""
    x = -Poly.var(F.ring, Z, 1, U)
    for k in range(2, cap + 1):
        u = Poly.var(F.ring, Z, k, U)
        x = x.lift_cap(k)
        x = x - substitute(F.truncate(k), {U: u, V: x}, variables=Z, cap=k)
    return x if cap >= 1 else x.truncate(cap)


class FormalGroupLaw:
    """F(u, v) truncated at ``cap`` together with its derived series.

    Derived series are computed from a copy of F one degree deeper so that
    P and the two-variable series are exact to ``cap`` as well.
    """

    def __init__(self, theory: str, cap: int, ngens: int | None = None):
        if cap < 1:
            raise FGLError("cap must be at least 1")
        if theory not in ("additive", "multiplicative", "hyperbolic", "universal"):
            raise FGLError(f"unknown theory {theory!r}")
        if theory == "universal":
            ngens = UNIVERSAL_GENERATORS if ngens is None else ngens
            if cap > ngens + 1:
                raise FGLError(f"cap {cap} needs more than {ngens} universal generators")
            self.ring = theory_ring("universal", ngens)
        else:
            self.ring = theory_ring(theory)
        self.theory = theory
        self.cap = cap
        self.exact = theory in ("additive", "multiplicative")
        self._ext = self._build(cap + 1)
        self.F = self._ext.truncate(cap)
        self._chi: dict[int, Poly] = {}
        self._derived: DerivedSeries | None = None
        self._log: Poly | None = None

    def _build(self, cap: int) -> Poly:
        R = self.ring
        u = Poly.var(R, UV, cap, U)
        v = Poly.var(R, UV, cap, V)
        if self.theory == "additive":
            return u + v
        if self.theory == "multiplicative":
            return u + v - u * v * R.gen("beta")
        if self.theory == "hyperbolic":
            uv = u * v
            return (u + v + uv * R.gen("b")) * series_invert(1 - uv * R.gen("c"))
        log, inv = _universal_log_inverse(R, cap)
        lu = log.embed(UV, rename={U: U})
        lv = log.embed(UV, rename={U: V})
        return substitute(inv, {U: lu + lv}, variables=UV, cap=cap)

    def __repr__(self):
        return f"FormalGroupLaw({self.theory}, cap={self.cap})"

    # one-variable series
    def chi(self, cap: int | None = None) -> Poly:
        """Formal inverse chi(u), solved degree by degree from F(u, chi(u)) = 0."""
        cap = self.cap if cap is None else cap
        if cap > self.cap:
            raise FGLError(f"cap {cap} exceeds the law's cap {self.cap}")
        if cap not in self._chi:
            self._chi[cap] = _solve_inverse(self.F, cap)
        return self._chi[cap]

    def derived(self) -> DerivedSeries:
        if self._derived is None:
            R, cap = self.ring, self.cap
            ext = self._ext
            P = Poly(R, Z, cap, {(i,): c for (i, j), c in ext.terms() if j == 1})
            Pinv = series_invert(P)
            # (t - y)/(t +_L chi(y)) from the deeper copy of F
            TY = ("t", "y")
            t = Poly.var(R, TY, cap + 1, "t")
            y = Poly.var(R, TY, cap + 1, "y")
            chi_y = self._chi_ext().embed(TY, rename={U: "y"})
            G = substitute(ext, {U: t, V: chi_y}, variables=TY, cap=cap + 1)
            Ptwo = series_invert(exact_divide(G, t - y))
            self._derived = DerivedSeries(P, Pinv, Ptwo)
        return self._derived

    def _chi_ext(self) -> Poly:
        return _solve_inverse(self._ext, self.cap + 1)

    def logarithm(self, extend: bool = False) -> Poly:
        """ell with ell' = 1/P, over the rationals."""
        if self.ring.base != RATIONALS and not extend:
            raise FGLError("logarithm needs rational coefficients; pass extend=True")
        if self._log is None:
            Q = self.ring.with_rationals()
            Pinv = self.derived().Pinv.change_ring(Q)
            terms = {}
            for (k,), c in Pinv.terms():
                if k + 1 <= self.cap:
                    terms[(k + 1,)] = c * Fraction(1, k + 1)
            self._log = Poly(Q, Z, self.cap, terms)
        return self._log

    def exponential(self, extend: bool = False) -> Poly:
        """Compositional inverse of the logarithm."""
        log = self.logarithm(extend)
        s = Poly.var(log.ring, Z, self.cap, U)
        e = s
        tail = log - s
        for _ in range(self.cap):
            e = s - substitute(tail, {U: e})
        return e

    def n_series_u(self, n: int, cap: int | None = None) -> Poly:
        cap = self.cap if cap is None else cap
        F = self.F.truncate(cap)
        u = Poly.var(self.ring, Z, cap, U)
        acc = u.zero_like()
        for _ in range(abs(n)):
            acc = substitute(F, {U: acc, V: u}, variables=Z, cap=cap, exact=self.exact)
        if n < 0:
            acc = substitute(acc, {U: self.chi(cap)}, exact=True)
        return acc


@lru_cache(maxsize=64)
def fgl_make(theory: str, cap: int, ngens: int | None = None) -> FormalGroupLaw:
    return FormalGroupLaw(theory, cap, ngens)


def _check_space(F: FormalGroupLaw, p: Poly) -> None:
    if p.ring.generators != F.ring.generators:
        raise RingError(f"series over {p.ring} with law over {F.ring}")
    if p.cap > F.cap:
        raise FGLError(f"series cap {p.cap} exceeds the law's cap {F.cap}")
    if not p.constant_term().is_zero():
        raise SeriesError("formal operations need zero constant term")


def _law_at(F: FormalGroupLaw, cap: int, ring: Ring) -> Poly:
    law = F.F.truncate(cap)
    return law if ring == F.ring else law.change_ring(ring)


def formal_sum(F: FormalGroupLaw, p: Poly, q: Poly) -> Poly:
    _check_space(F, p)
    _check_space(F, q)
    p.same_space(q)
    law = _law_at(F, p.cap, p.ring)
    return substitute(law, {U: p, V: q}, exact=True)


def formal_inverse(F: FormalGroupLaw, p: Poly) -> Poly:
    _check_space(F, p)
    chi = F.chi(p.cap)
    if p.ring != chi.ring:
        chi = chi.change_ring(p.ring)
    return substitute(chi, {U: p}, exact=True)


def formal_difference(F: FormalGroupLaw, p: Poly, q: Poly) -> Poly:
    return formal_sum(F, p, formal_inverse(F, q))


def n_series(F: FormalGroupLaw, n: int, p: Poly) -> Poly:
    _check_space(F, p)
    s = F.n_series_u(n, p.cap)
    if p.ring != s.ring:
        s = s.change_ring(p.ring)
    return substitute(s, {U: p}, exact=True)


def derived_series(F: FormalGroupLaw) -> DerivedSeries:
    return F.derived()


def logarithm(F: FormalGroupLaw, extend: bool = False) -> Poly:
    return F.logarithm(extend)


@lru_cache(maxsize=None)
def _m_images(target: str, count: int) -> tuple[GradedCoefficient, ...]:
    """Images of m_1..m_count: the coefficient of z^k in 1/P_target(z), over k+1."""
    law = fgl_make(target, count + 1)
    Q = law.ring.with_rationals()
    Pinv = law.derived().Pinv
    out = []
    for k in range(1, count + 1):
        c = Pinv.coefficient((k,))
        out.append(GradedCoefficient(Q, {m: Fraction(v) / (k + 1) for m, v in c.terms.items()}))
    return tuple(out)


def specialize(p: Poly, target: str) -> Poly:
    """Apply the ring map m_k -> (target logarithm coefficient of degree k+1)."""
    src = p.ring
    if src.theory != "universal" and not all(n.startswith("m") for n in src.names):
        raise SpecializationError("specialize expects a series over the universal ring")
    if target == "universal":
        return p
    tring = theory_ring(target)
    Q = tring.with_rationals()
    images = _m_images(target, src.ngens) if src.ngens else ()
    cache: dict[tuple[int, ...], GradedCoefficient] = {}

    def image(mono: tuple[int, ...]) -> GradedCoefficient:
        if mono not in cache:
            acc = Q.one()
            for k, e in enumerate(mono):
                if e:
                    acc = acc * images[k] ** e
            cache[mono] = acc
        return cache[mono]

    terms: dict[tuple[int, ...], GradedCoefficient] = {}
    for exps, c in p.terms():
        acc = Q.zero()
        for mono, v in c.terms.items():
            acc = acc + image(mono) * v
        if acc:
            terms[exps] = acc
    out: dict = {}
    for exps, c in terms.items():
        for mono, v in c.terms.items():
            if type(v) is Fraction and v.denominator != 1:
                raise SpecializationError(f"non-integral coefficient {v} after specialization")
        out[exps] = GradedCoefficient(tring, c.terms)
    return Poly(tring, p.variables, p.cap, out)
