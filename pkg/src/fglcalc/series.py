"""Truncated multivariate polynomials with graded coefficients.

Terms are stored in a flat dict keyed by a packed integer that holds the
variable exponents, the generator exponents of the coefficient ring and the
total variable degree.  Multiplying two monomials is then a single integer
addition, and the total degree is a shift away.  Field layout, from the most
significant end::

    | degree | e_1 | e_2 | ... | e_n | g_1 | ... | g_k |

so comparing the integers ``key >> gen_bits`` orders variable monomials
graded-lexicographically.
"""

from __future__ import annotations

import heapq
from bisect import bisect_right
from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement
from typing import Iterable, Mapping, Sequence

from .ring import GradedCoefficient, MixedRingError, Ring, Scalar, normalize

FIELD = 10
FIELD_MASK = (1 << FIELD) - 1
MAX_EXPONENT = (1 << (FIELD - 1)) - 1


class SeriesError(ValueError):
    pass


class SpaceMismatch(SeriesError):
    pass


class NotUnit(SeriesError):
    pass


class NotDivisible(SeriesError):
    pass


class CapExhausted(SeriesError):
    pass


class MalformedPlan(SeriesError):
    pass


class _Layout:
    __slots__ = ("nv", "ng", "gen_bits", "gen_mask", "deg_shift", "var_shift", "gen_shift", "unit")

    def __init__(self, nv: int, ng: int):
        self.nv = nv
        self.ng = ng
        self.gen_bits = FIELD * ng
        self.gen_mask = (1 << self.gen_bits) - 1
        self.var_shift = tuple(FIELD * (ng + nv - 1 - i) for i in range(nv))
        self.gen_shift = tuple(FIELD * (ng - 1 - j) for j in range(ng))
        self.deg_shift = FIELD * (ng + nv)
        self.unit = tuple((1 << s) + (1 << self.deg_shift) for s in self.var_shift)

    def encode(self, vexps: Sequence[int], gexps: Sequence[int] = ()) -> int:
        key = 0
        deg = 0
        for e, s in zip(vexps, self.var_shift):
            if e < 0 or e > MAX_EXPONENT:
                raise SeriesError(f"exponent {e} out of range")
            key |= e << s
            deg += e
        for e, s in zip(gexps, self.gen_shift):
            if e < 0 or e > MAX_EXPONENT:
                raise SeriesError(f"generator exponent {e} out of range")
            key |= e << s
        return key | (deg << self.deg_shift)

    def vexps(self, key: int) -> tuple[int, ...]:
        return tuple((key >> s) & FIELD_MASK for s in self.var_shift)

    def gexps(self, key: int) -> tuple[int, ...]:
        return tuple((key >> s) & FIELD_MASK for s in self.gen_shift)


@lru_cache(maxsize=None)
def _layout(nv: int, ng: int) -> _Layout:
    return _Layout(nv, ng)


def _clean(d: dict) -> dict:
    out = {}
    for k, v in d.items():
        if v:
            if type(v) is Fraction and v.denominator == 1:
                v = v.numerator
            out[k] = v
    return out


def _mul_raw(a: dict, b: dict, ds: int, cap: int) -> dict:
    if len(a) > len(b):
        a, b = b, a
    if not a:
        return {}
    items = sorted(b.items())
    degs = [k >> ds for k, _ in items]
    cut = [bisect_right(degs, d) for d in range(cap + 1)]
    out: dict = {}
    get = out.get
    for ka, ca in a.items():
        room = cap - (ka >> ds)
        if room < 0:
            continue
        for kb, cb in items[: cut[room]]:
            k = ka + kb
            out[k] = get(k, 0) + ca * cb
    return _clean(out)


class TruncatedPolynomial:
    """A polynomial in named variables, truncated above total degree ``cap``."""

    __slots__ = ("ring", "variables", "cap", "_t", "_lay")

    def __init__(
        self,
        ring: Ring,
        variables: Sequence[str],
        cap: int,
        terms: Mapping[Sequence[int], GradedCoefficient | Scalar] | None = None,
    ):
        variables = tuple(variables)
        if len(set(variables)) != len(variables):
            raise SeriesError("duplicate variable name")
        if cap < 0:
            raise SeriesError("cap must be nonnegative")
        self.ring = ring
        self.variables = variables
        self.cap = cap
        self._lay = _layout(len(variables), ring.ngens)
        t: dict = {}
        zero_g = (0,) * ring.ngens
        for exps, c in (terms or {}).items():
            exps = tuple(exps)
            if len(exps) != len(variables):
                raise SeriesError("exponent vector length does not match variables")
            if sum(exps) > cap:
                continue
            if isinstance(c, GradedCoefficient):
                if c.ring != ring:
                    raise MixedRingError(f"{c.ring} vs {ring}")
                for g, v in c.terms.items():
                    k = self._lay.encode(exps, g)
                    t[k] = t.get(k, 0) + v
            else:
                c = ring.check_scalar(c)
                k = self._lay.encode(exps, zero_g)
                t[k] = t.get(k, 0) + c
        self._t = _clean(t)

    # construction helpers
    @classmethod
    def _raw(cls, ring: Ring, variables: tuple[str, ...], cap: int, t: dict) -> "TruncatedPolynomial":
        p = object.__new__(cls)
        p.ring = ring
        p.variables = variables
        p.cap = cap
        p._lay = _layout(len(variables), ring.ngens)
        p._t = t
        return p

    def _new(self, t: dict, cap: int | None = None) -> "TruncatedPolynomial":
        return TruncatedPolynomial._raw(self.ring, self.variables, self.cap if cap is None else cap, t)

    @classmethod
    def zero(cls, ring: Ring, variables: Sequence[str], cap: int) -> "TruncatedPolynomial":
        return cls._raw(ring, tuple(variables), cap, {})

    @classmethod
    def constant(cls, ring: Ring, variables: Sequence[str], cap: int, c: GradedCoefficient | Scalar = 1):
        return cls(ring, variables, cap, {(0,) * len(variables): c})

    @classmethod
    def var(cls, ring: Ring, variables: Sequence[str], cap: int, name: str) -> "TruncatedPolynomial":
        variables = tuple(variables)
        e = [0] * len(variables)
        e[variables.index(name)] = 1
        return cls(ring, variables, cap, {tuple(e): 1})

    @classmethod
    def monomial(cls, ring: Ring, variables: Sequence[str], cap: int, exps: Sequence[int], c=1):
        return cls(ring, variables, cap, {tuple(exps): c})

    def zero_like(self) -> "TruncatedPolynomial":
        return self._new({})

    def one_like(self) -> "TruncatedPolynomial":
        return self._new({0: 1})

    def scalar_like(self, c: GradedCoefficient | Scalar) -> "TruncatedPolynomial":
        return TruncatedPolynomial.constant(self.ring, self.variables, self.cap, c)

    def var_like(self, name: str) -> "TruncatedPolynomial":
        return TruncatedPolynomial.var(self.ring, self.variables, self.cap, name)

    # inspection
    @property
    def space(self):
        return (self.ring, self.variables, self.cap)

    def same_space(self, other: "TruncatedPolynomial") -> None:
        if not isinstance(other, TruncatedPolynomial):
            raise TypeError("expected a TruncatedPolynomial")
        if other.ring != self.ring:
            raise MixedRingError(f"{self.ring} vs {other.ring}")
        if other.variables != self.variables:
            raise SpaceMismatch(f"variables {self.variables} vs {other.variables}")
        if other.cap != self.cap:
            raise SpaceMismatch(f"cap {self.cap} vs {other.cap}")

    def __len__(self):
        return len(self._t)

    def is_zero(self) -> bool:
        return not self._t

    def __bool__(self):
        return bool(self._t)

    def raw_items(self):
        return self._t.items()

    def terms(self) -> list[tuple[tuple[int, ...], GradedCoefficient]]:
        """Terms in canonical order: ascending degree, then lex-descending exponents."""
        lay = self._lay
        groups: dict[int, dict] = {}
        for k, c in self._t.items():
            groups.setdefault(k >> lay.gen_bits, {})[lay.gexps(k)] = c
        out = []
        for vk in sorted(groups, key=lambda v: (v >> (lay.deg_shift - lay.gen_bits), -v)):
            exps = lay.vexps(vk << lay.gen_bits)
            out.append((exps, GradedCoefficient(self.ring, groups[vk])))
        return out

    def coefficient(self, exps: Sequence[int]) -> GradedCoefficient:
        lay = self._lay
        base = lay.encode(exps) >> lay.gen_bits
        found = {lay.gexps(k): c for k, c in self._t.items() if k >> lay.gen_bits == base}
        return GradedCoefficient(self.ring, found)

    def constant_term(self) -> GradedCoefficient:
        return self.coefficient((0,) * len(self.variables))

    def degrees(self) -> list[int]:
        ds = self._lay.deg_shift
        return sorted({k >> ds for k in self._t})

    def min_degree(self) -> int | None:
        ds = self._lay.deg_shift
        return min((k >> ds for k in self._t), default=None)

    def max_degree(self) -> int | None:
        ds = self._lay.deg_shift
        return max((k >> ds for k in self._t), default=None)

    def homogeneous_part(self, d: int) -> "TruncatedPolynomial":
        ds = self._lay.deg_shift
        return self._new({k: c for k, c in self._t.items() if k >> ds == d})

    def total_grades(self) -> set[int]:
        """Set of (variable degree + coefficient grade) over all terms."""
        lay = self._lay
        out = set()
        for k in self._t:
            out.add((k >> lay.deg_shift) + self.ring.monomial_grade(lay.gexps(k)))
        return out

    def is_homogeneous(self, grade: int) -> bool:
        return self.total_grades() <= {grade}

    def exponents_in(self, name: str) -> set[int]:
        i = self.variables.index(name)
        s = self._lay.var_shift[i]
        return {(k >> s) & FIELD_MASK for k in self._t}

    # arithmetic
    def _coerce(self, other) -> "TruncatedPolynomial":
        if isinstance(other, TruncatedPolynomial):
            self.same_space(other)
            return other
        if isinstance(other, (int, Fraction, GradedCoefficient)):
            return self.scalar_like(other)
        raise TypeError(f"cannot combine with {type(other).__name__}")

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self._t)
        get = out.get
        for k, c in other._t.items():
            out[k] = get(k, 0) + c
        return self._new(_clean(out))

    __radd__ = __add__

    def __neg__(self):
        return self._new({k: -c for k, c in self._t.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        out = dict(self._t)
        get = out.get
        for k, c in other._t.items():
            out[k] = get(k, 0) - c
        return self._new(_clean(out))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.check_scalar(other)
            if not other:
                return self.zero_like()
            return self._new(_clean({k: c * other for k, c in self._t.items()}))
        other = self._coerce(other)
        return self._new(_mul_raw(self._t, other._t, self._lay.deg_shift, self.cap))

    __rmul__ = __mul__

    def mul_capped(self, other: "TruncatedPolynomial", cap: int) -> "TruncatedPolynomial":
        """Product keeping only terms of degree <= cap (cap may be below self.cap)."""
        self.same_space(other)
        return self._new(_mul_raw(self._t, other._t, self._lay.deg_shift, min(cap, self.cap)))

    def __pow__(self, k: int):
        if k < 0:
            raise SeriesError("negative power; use series_invert")
        result = self.one_like()
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def scale(self, c: Scalar) -> "TruncatedPolynomial":
        """Multiply by a rational, promoting nothing; the caller owns ring validity."""
        return self._new(_clean({k: v * c for k, v in self._t.items()}))

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, GradedCoefficient)):
            other = self.scalar_like(other)
        if not isinstance(other, TruncatedPolynomial):
            return NotImplemented
        self.same_space(other)
        return self._t == other._t

    def __hash__(self):
        return hash((self.variables, self.cap, frozenset(self._t.items())))

    # truncation and change of space
    def truncate(self, cap: int) -> "TruncatedPolynomial":
        if cap > self.cap:
            raise SeriesError(f"cannot raise cap {self.cap} to {cap} without lift_cap")
        ds = self._lay.deg_shift
        return self._new({k: c for k, c in self._t.items() if k >> ds <= cap}, cap)

    def lift_cap(self, cap: int) -> "TruncatedPolynomial":
        """Reinterpret an exact polynomial at another cap (terms above cap are dropped)."""
        if cap >= self.cap:
            return self._new(dict(self._t), cap)
        return self.truncate(cap)

    def change_ring(self, ring: Ring) -> "TruncatedPolynomial":
        """Move to a ring with the same generators (e.g. the rational extension)."""
        if ring.generators != self.ring.generators:
            raise MixedRingError("change_ring needs identical generators")
        t = {k: ring.check_scalar(c) for k, c in self._t.items()}
        return TruncatedPolynomial._raw(ring, self.variables, self.cap, t)

    def embed(self, variables: Sequence[str], cap: int | None = None, rename: Mapping[str, str] | None = None):
        """Re-express in another variable list, matching by (renamed) name.

        Variables of ``self`` with a nonzero exponent somewhere must exist in
        the target list.  The target cap may not exceed ``self.cap``.
        """
        variables = tuple(variables)
        cap = self.cap if cap is None else cap
        if cap > self.cap:
            raise SeriesError(f"cannot raise cap {self.cap} to {cap}; use lift_cap first")
        rename = dict(rename or {})
        src = self._lay
        dst = _layout(len(variables), self.ring.ngens)
        pos = {}
        for i, v in enumerate(self.variables):
            name = rename.get(v, v)
            if name in variables:
                pos[i] = variables.index(name)
        out: dict = {}
        gm = src.gen_mask
        for k, c in self._t.items():
            ve = src.vexps(k)
            if sum(ve) > cap:
                continue
            new = [0] * len(variables)
            for i, e in enumerate(ve):
                if e:
                    if i not in pos:
                        raise SeriesError(f"variable {self.variables[i]!r} missing from target")
                    new[pos[i]] += e
            nk = dst.encode(new) | (k & gm)
            out[nk] = out.get(nk, 0) + c
        return TruncatedPolynomial._raw(self.ring, variables, cap, _clean(out))

    def permute_variables(self, perm: Sequence[int], signs: Sequence[int] | None = None):
        """x_i -> s_i * x_{perm[i]} (0-based), a linear signed substitution."""
        lay = self._lay
        n = len(self.variables)
        out: dict = {}
        gm = lay.gen_mask
        for k, c in self._t.items():
            ve = lay.vexps(k)
            new = [0] * n
            sign = 1
            for i, e in enumerate(ve):
                if e:
                    new[perm[i]] = e
                    if signs is not None and signs[i] < 0 and e & 1:
                        sign = -sign
            nk = lay.encode(new) | (k & gm)
            out[nk] = c if sign > 0 else -c
        return self._new(out)

    # rendering
    def __str__(self):
        if not self._t:
            return "0"
        parts = []
        for exps, c in self.terms():
            mono = "*".join(
                v if e == 1 else f"{v}^{e}" for v, e in zip(self.variables, exps) if e
            )
            cs = str(c)
            if not mono:
                parts.append(cs)
            elif len(c.terms) > 1:
                parts.append(f"({cs})*{mono}")
            elif cs == "1":
                parts.append(mono)
            elif cs == "-1":
                parts.append("-" + mono)
            else:
                parts.append(f"{cs}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self):
        return f"TruncatedPolynomial[{','.join(self.variables)}; cap {self.cap}]({self})"


Poly = TruncatedPolynomial


def poly_from_scalar(ring: Ring, variables: Sequence[str], cap: int, c) -> Poly:
    return Poly.constant(ring, variables, cap, c)


def series_invert(p: Poly) -> Poly:
    """Multiplicative inverse up to cap; the constant term must be a unit."""
    lay = p._lay
    ds = lay.deg_shift
    const = {k: c for k, c in p._t.items() if k >> ds == 0}
    if list(const) != [0]:
        raise NotUnit("constant term is zero or involves generators")
    c0 = const[0]
    if p.ring.base == "integers" and c0 not in (1, -1):
        raise NotUnit(f"constant term {c0} is not a unit over the integers")
    inv0 = normalize(Fraction(1) / c0) if c0 not in (1, -1) else c0
    # p = c0 (1 - x);  1/p = inv0 * sum x^k
    x = {k: -c * inv0 for k, c in p._t.items() if k >> ds}
    x = _clean(x)
    g: dict = {0: 1}
    for prec in range(1, p.cap + 1):
        g = _mul_raw(x, g, ds, prec)
        g[0] = g.get(0, 0) + 1
        g = _clean(g)
    return p._new(_clean({k: c * inv0 for k, c in g.items()}))


def exact_divide(p: Poly, d: Poly) -> Poly:
    """Quotient q with q*d = p on all retained terms.

    Works degree by degree on the lowest homogeneous part of ``d``; its
    graded-lex leading coefficient must be a nonzero rational.  The result
    has cap ``p.cap - mindeg(d)``.
    """
    p.same_space(d)
    if d.is_zero():
        raise ZeroDivisionError("division by zero polynomial")
    lay = p._lay
    gb, ds = lay.gen_bits, lay.deg_shift
    gm = lay.gen_mask
    delta = d.min_degree()
    qcap = p.cap - delta
    if qcap < 0:
        return TruncatedPolynomial._raw(p.ring, p.variables, 0, {})

    def grouped(t):
        g: dict[int, dict] = {}
        for k, c in t.items():
            g.setdefault(k >> gb, {})[k & gm] = c
        return g

    dg = grouped(d._t)
    low = [vk for vk in dg if vk >> (ds - gb) == delta]
    lead = max(low)
    lead_c = dg[lead]
    if list(lead_c) != [0]:
        raise NotDivisible("leading coefficient of divisor involves generators")
    lc = lead_c[0]
    lead_exps = lay.vexps(lead << gb)
    rem = grouped(p._t)
    heap = [((vk >> (ds - gb)), -vk) for vk in rem]
    heapq.heapify(heap)
    q: dict = {}
    while heap:
        deg, nvk = heapq.heappop(heap)
        vk = -nvk
        coeffs = rem.get(vk)
        if not coeffs:
            rem.pop(vk, None)
            continue
        if deg > p.cap:
            break
        exps = lay.vexps(vk << gb)
        diff = [a - b for a, b in zip(exps, lead_exps)]
        if min(diff) < 0:
            raise NotDivisible(f"remainder term at exponents {exps}")
        qvk = lay.encode(diff) >> gb
        qc = {g: normalize(Fraction(c) / lc) if type(c) is Fraction or c % lc else c // lc for g, c in coeffs.items()}
        for g, c in qc.items():
            q[(qvk << gb) | g] = c
        # subtract qterm * d
        for dvk, dcs in dg.items():
            nvk2 = qvk + dvk
            if nvk2 >> (ds - gb) > p.cap:
                continue
            tgt = rem.get(nvk2)
            if tgt is None:
                tgt = rem[nvk2] = {}
                heapq.heappush(heap, (nvk2 >> (ds - gb), -nvk2))
            for g1, c1 in qc.items():
                for g2, c2 in dcs.items():
                    g = g1 + g2
                    v = tgt.get(g, 0) - c1 * c2
                    if v:
                        tgt[g] = v
                    else:
                        tgt.pop(g, None)
        if rem.get(vk):
            raise NotDivisible("leading term did not cancel")
        rem.pop(vk, None)
    for vk, cs in rem.items():
        if cs and vk >> (ds - gb) <= p.cap:
            raise NotDivisible("nonzero remainder")
    out = p.ring.base == "integers"
    if out:
        for c in q.values():
            if type(c) is Fraction:
                raise NotDivisible("quotient is not integral")
    return TruncatedPolynomial._raw(p.ring, p.variables, qcap, _clean(q))


def substitute(
    p: Poly,
    bindings: Mapping[str, Poly],
    variables: Sequence[str] | None = None,
    cap: int | None = None,
    exact: bool = False,
    ring: Ring | None = None,
) -> Poly:
    """Compose: replace each bound variable of ``p`` by a polynomial.

    All bindings live in one target space (``variables``, ``cap``); unbound
    variables of ``p`` are carried over by name.  Unless ``exact`` is set,
    ``p`` is treated as a truncated series: bindings must have zero constant
    term and the target cap must not see the terms ``p`` dropped.
    """
    if bindings:
        first = next(iter(bindings.values()))
        tvars = first.variables if variables is None else tuple(variables)
        tcap = first.cap if cap is None else cap
        tring = first.ring
    else:
        tvars = p.variables if variables is None else tuple(variables)
        tcap = p.cap if cap is None else cap
        tring = p.ring
    if ring is not None:
        tring = ring
    if tring.generators != p.ring.generators:
        raise MixedRingError(f"{p.ring} vs {tring}")
    for name, b in bindings.items():
        if name not in p.variables:
            raise SeriesError(f"unknown variable {name!r}")
        if b.ring.generators != tring.generators or b.variables != tvars or b.cap != tcap:
            raise SpaceMismatch("bindings must share the target space")
        if b.ring != tring:
            bindings = {**bindings, name: b.change_ring(tring)}
    if not exact:
        # terms p dropped (degree > p.cap) must land above the target cap
        mu = None
        for b in bindings.values():
            md = b.min_degree()
            if md == 0:
                raise SeriesError("binding with nonzero constant term into a truncated series")
            if md is not None:
                mu = md if mu is None else min(mu, md)
        if len(bindings) < len(p.variables) or mu is None:
            mu = 1 if mu is None else min(mu, 1)
        if tcap >= (p.cap + 1) * mu:
            raise CapExhausted(f"target cap {tcap} exceeds what source cap {p.cap} determines")
    bound = [i for i, v in enumerate(p.variables) if v in bindings]
    free = [i for i, v in enumerate(p.variables) if v not in bindings]
    for i in free:
        v = p.variables[i]
        if v not in tvars and p.exponents_in(v) - {0}:
            raise SeriesError(f"variable {v!r} missing from target space")
    src = p._lay
    dst = _layout(len(tvars), tring.ngens)
    gm = src.gen_mask
    fpos = {i: tvars.index(p.variables[i]) for i in free if p.variables[i] in tvars}

    # nested grouping by exponents of the bound variables, in order
    tree: dict = {}
    for k, c in p._t.items():
        ve = src.vexps(k)
        node = tree
        for i in bound[:-1]:
            node = node.setdefault(ve[i], {})
        leaf = node.setdefault(ve[bound[-1]] if bound else 0, {})
        new = [0] * len(tvars)
        for i in free:
            if ve[i]:
                new[fpos[i]] += ve[i]
        if sum(new) > tcap:
            continue
        nk = dst.encode(new) | (k & gm)
        leaf[nk] = leaf.get(nk, 0) + c

    powers: dict[int, list] = {}

    def power(level: int, e: int) -> Poly:
        b = bindings[p.variables[bound[level]]]
        lst = powers.setdefault(level, [b.one_like(), b])
        while len(lst) <= e:
            lst.append(lst[-1] * b)
        return lst[e]

    def combine(node, level: int) -> dict:
        acc: dict = {}
        last = level == len(bound) - 1 or not bound
        for e in sorted(node):
            child = node[e]
            part = child if last else combine(child, level + 1)
            if not part:
                continue
            if bound and e:
                pw = power(level, e)
                if pw.is_zero():
                    continue
                part = _mul_raw(part, pw._t, dst.deg_shift, tcap)
            for k, c in part.items():
                acc[k] = acc.get(k, 0) + c
        return _clean(acc)

    t = combine(tree, 0) if p._t else {}
    return TruncatedPolynomial._raw(tring, tvars, tcap, _clean(t))


# ---------------------------------------------------------------------------
# Laurent coefficient extraction

IN_T = "in-t"
IN_INV_T = "in-1/t"


def split_by(p: Poly, aux: str, space: tuple[Ring, tuple[str, ...], int]) -> dict[int, Poly]:
    """Split ``p`` into {exponent of aux: coefficient embedded in ``space``}."""
    ring, variables, cap = space
    i = p.variables.index(aux)
    lay = p._lay
    dst = _layout(len(variables), ring.ngens)
    pos = {}
    for j, v in enumerate(p.variables):
        if j != i:
            if v in variables:
                pos[j] = variables.index(v)
    gm = lay.gen_mask
    out: dict[int, dict] = {}
    for k, c in p._t.items():
        ve = lay.vexps(k)
        a = ve[i]
        new = [0] * len(variables)
        for j, e in enumerate(ve):
            if j != i and e:
                if j not in pos:
                    raise SeriesError(f"variable {p.variables[j]!r} missing from root space")
                new[pos[j]] += e
        if sum(new) > cap:
            continue
        nk = dst.encode(new) | (k & gm)
        d = out.setdefault(a, {})
        d[nk] = d.get(nk, 0) + c
    return {
        a: TruncatedPolynomial._raw(ring, variables, cap, _clean(t)) for a, t in out.items() if _clean(t)
    }


class Factor:
    """One factor of an integrand in the auxiliary variable.

    ``coeffs`` maps t-exponents (all >= 0) to root-space polynomials.  The
    factor contributes ``g`` or ``1/g`` where ``g = sum coeffs[a] t^a``,
    expanded in t or in 1/t according to ``direction``.  ``known`` bounds the
    terms of ``g`` that are reliable: t^a c with a + deg(c) <= known.  It is
    None for exact polynomials.
    """

    __slots__ = ("coeffs", "direction", "invert", "known")

    def __init__(self, coeffs: Mapping[int, Poly], direction: str, invert: bool = False, known: int | None = None):
        if direction not in (IN_T, IN_INV_T):
            raise MalformedPlan(f"unknown direction {direction!r}")
        if any(a < 0 for a in coeffs):
            raise MalformedPlan("factor exponents must be nonnegative")
        self.coeffs = {a: c for a, c in coeffs.items() if not c.is_zero()}
        self.direction = direction
        self.invert = invert
        self.known = known

    @classmethod
    def from_series(cls, p: Poly, aux: str, space, direction: str, invert: bool = False, exact: bool = False):
        return cls(split_by(p, aux, space), direction, invert, None if exact else p.cap)


def _lmul(a: dict[int, Poly], b: dict[int, Poly], keep) -> dict[int, Poly]:
    """Product of Laurent dicts; ``keep(e)`` gives the degree cap at exponent e or None to drop."""
    out: dict[int, Poly] = {}
    for ea, pa in a.items():
        for eb, pb in b.items():
            e = ea + eb
            kc = keep(e)
            if kc is None or kc < 0:
                continue
            prod = pa.mul_capped(pb, kc)
            if prod.is_zero():
                continue
            out[e] = out[e] + prod if e in out else prod
    return {e: p for e, p in out.items() if not p.is_zero()}


class ExpansionPlan:
    """Integrand in one auxiliary variable t, expanded per factor direction.

    The in-t factors (and the numerator) multiply to a power series A in t,
    the in-1/t factors to a Laurent series B in 1/t.  The coefficient of t^e
    is sum_a A_a * B_(e-a) times t^shift.  Both A and B have root-space
    polynomial coefficients truncated at the root cap.
    """

    def __init__(
        self,
        aux: str,
        space: tuple[Ring, tuple[str, ...], int],
        numerator: Poly | Mapping[int, Poly] | None,
        factors: Sequence[Factor | tuple],
        window: tuple[int, int] | None = None,
        shift: int = 0,
        numerator_exact: bool = False,
    ):
        self.aux = aux
        self.space = (space[0], tuple(space[1]), space[2])
        ring, variables, cap = self.space
        self.cap = cap
        self.one = TruncatedPolynomial._raw(ring, self.space[1], cap, {0: 1})
        if numerator is None:
            num = {0: self.one}
            num_known = None
        elif isinstance(numerator, TruncatedPolynomial):
            num = split_by(numerator, aux, self.space)
            num_known = None if numerator_exact else numerator.cap
        else:
            num = dict(numerator)
            num_known = None
        facs: list[Factor] = [Factor(num, IN_T, False, num_known)]
        for f in factors:
            if isinstance(f, Factor):
                facs.append(f)
            else:
                series, direction = f[0], f[1]
                invert = f[2] if len(f) > 2 else False
                facs.append(Factor.from_series(series, aux, self.space, direction, invert))
        self.factors = facs
        self.window = window
        self.shift = shift
        self._B: dict[int, Poly] | None = None
        self._B_finite = True
        self._cache: dict[int, Poly] = {}

    # in-1/t part
    def _expand_inverse_direction(self, f: Factor, lowest: int | None) -> tuple[dict[int, Poly], bool]:
        if not f.coeffs:
            raise MalformedPlan("zero factor")
        if not f.invert:
            # a plain polynomial in t written as a 1/t factor contributes as is
            return dict(f.coeffs), True
        d = max(f.coeffs)
        gd = f.coeffs[d]
        inv_gd = series_invert(gd)
        rest = {d - a: c * inv_gd for a, c in f.coeffs.items() if a != d}
        nilpotent = all((c.min_degree() or 0) >= 1 for c in rest.values())
        out: dict[int, Poly] = {-d: inv_gd}
        k = 1
        while True:
            b = -d - k
            if lowest is not None and b < lowest:
                break
            acc = None
            for j, c in rest.items():
                if j <= k and (-d - k + j) in out:
                    term = c * out[-d - k + j]
                    acc = term if acc is None else acc + term
            if acc is not None and not acc.is_zero():
                out[b] = -acc
            if nilpotent:
                # each step down costs at least one root degree
                if k > self.cap:
                    break
            elif lowest is None:
                return out, False
            k += 1
        return out, nilpotent

    def _in_t_expand(self, f: Factor, amax: int, keep) -> dict[int, Poly]:
        if not f.invert:
            if f.known is not None:
                for a in range(0, amax + 1):
                    kc = keep(a)
                    if kc is not None and kc >= 0 and a + kc > f.known:
                        raise CapExhausted(f"factor known to degree {f.known}, need {a + kc}")
            return {a: c for a, c in f.coeffs.items() if a <= amax}
        g0 = f.coeffs.get(0)
        if g0 is None:
            raise MalformedPlan("in-t factor to invert has no constant term in t")
        inv0 = series_invert(g0)
        out: dict[int, Poly] = {0: inv0}
        for a in range(1, amax + 1):
            kc = keep(a)
            if kc is None or kc < 0:
                continue
            if f.known is not None and a + kc > f.known:
                raise CapExhausted(f"factor known to degree {f.known}, need {a + kc}")
            acc = None
            for j in range(1, a + 1):
                if j in f.coeffs and (a - j) in out:
                    term = f.coeffs[j].mul_capped(out[a - j], kc)
                    acc = term if acc is None else acc + term
            if acc is not None and not acc.is_zero():
                out[a] = -(acc.mul_capped(inv0, kc))
        return out

    def _prepare(self, targets: Sequence[int]):
        cap = self.cap
        inv = [f for f in self.factors if f.direction == IN_INV_T]
        fwd = [f for f in self.factors if f.direction == IN_T]
        fwd_finite = all(not f.invert for f in fwd)
        B: dict[int, Poly] = {0: self.one}
        finite = True
        expansions = []
        for f in inv:
            ex, fin = self._expand_inverse_direction(f, None if finite else None)
            finite = finite and fin
            expansions.append((f, ex, fin))
        if not finite:
            if not fwd_finite:
                raise MalformedPlan("both directions are infinite; no finite window")
            amax = sum(max(f.coeffs, default=0) for f in fwd)
            lowest = min(targets) - self.shift - amax
            expansions = []
            for f in inv:
                ex, _ = self._expand_inverse_direction(f, lowest - 0)
                expansions.append((f, ex, True))
            for _, ex, _ in expansions:
                B = _lmul(B, ex, lambda e: cap if e >= lowest else None)
        else:
            for _, ex, _ in expansions:
                B = _lmul(B, ex, lambda e: cap)
        self._B = B
        # required A exponents and degree budgets
        rho = {b: B[b].min_degree() for b in B}
        need: dict[int, int] = {}
        for e in targets:
            e0 = e - self.shift
            for b, r in rho.items():
                a = e0 - b
                if a < 0:
                    continue
                budget = cap - r
                if budget >= 0:
                    need[a] = max(need.get(a, -1), budget)
        if not need:
            return {}
        amax = max(need)
        # a prefix product of in-t factors at exponent a can still grow to any a' >= a
        suffix_budget: dict[int, int] = {}
        best = -1
        for a in range(amax, -1, -1):
            best = max(best, need.get(a, -1) + a)
            suffix_budget[a] = best

        def keep(a):
            if a > amax or a < 0:
                return None
            return min(cap, suffix_budget[a] - a)

        A: dict[int, Poly] = {0: self.one}
        for f in fwd:
            ex = self._in_t_expand(f, amax, keep)
            A = _lmul(A, ex, keep)
        return A

    def coeff(self, e: int) -> Poly:
        return self.coeffs([e])[e]

    def coeffs(self, targets: Iterable[int]) -> dict[int, Poly]:
        targets = list(targets)
        if self.window is not None:
            lo, hi = self.window
            for e in targets:
                if e < lo or e > hi:
                    raise SeriesError(f"target {e} outside window [{lo}, {hi}]")
        todo = [e for e in targets if e not in self._cache]
        if todo:
            A = self._prepare(todo)
            B = self._B
            for e in todo:
                e0 = e - self.shift
                acc = self.one.zero_like()
                for a, pa in A.items():
                    pb = B.get(e0 - a)
                    if pb is not None:
                        acc = acc + pa * pb
                self._cache[e] = acc
        return {e: self._cache[e] for e in targets}


class MultiExpansionPlan:
    """Integrand A(t_1..t_q) * prod_i K_i(t_i) with per-auxiliary kernels.

    ``integrand`` is a power series in the auxiliaries (and base variables
    that pass through); each kernel is a single-auxiliary plan whose
    coefficients are root-space polynomials.  Extraction contracts t_q first,
    then t_(q-1), and so on.
    """

    def __init__(self, auxes: Sequence[str], space, integrand: Poly, kernels: Sequence[ExpansionPlan]):
        self.auxes = tuple(auxes)
        self.space = (space[0], tuple(space[1]), space[2])
        if len(kernels) != len(self.auxes):
            raise MalformedPlan("one kernel per auxiliary")
        self.integrand = integrand
        self.kernels = list(kernels)
        for a in self.auxes:
            if a not in integrand.variables:
                raise MalformedPlan(f"integrand lacks auxiliary {a!r}")

    def coeff(self, target: Sequence[int]) -> Poly:
        ring, variables, cap = self.space
        q = len(self.auxes)
        target = tuple(target)
        if len(target) != q:
            raise SeriesError("target length does not match auxiliaries")
        A = self.integrand
        need_cap = sum(max(t, 0) for t in target) + cap
        if A.cap < need_cap:
            raise CapExhausted(f"integrand cap {A.cap} below required {need_cap}")
        # kernels: t_i^x coefficients for x in [-cap, target_i]
        kern = []
        for i, K in enumerate(self.kernels):
            xs = list(range(-cap, target[i] + 1))
            kern.append(K.coeffs(xs))
        lay = A._lay
        idx = [A.variables.index(a) for a in self.auxes]
        base_vars = [v for v in A.variables if v not in self.auxes]
        for v in base_vars:
            if v not in variables and A.exponents_in(v) - {0}:
                raise SeriesError(f"base variable {v!r} missing from root space")
        dst = _layout(len(variables), ring.ngens)
        bpos = {j: variables.index(v) for j, v in enumerate(A.variables) if v in variables and j not in idx}
        gm = lay.gen_mask
        groups: dict[tuple[int, ...], dict] = {}
        for k, c in A._t.items():
            ve = lay.vexps(k)
            a = tuple(ve[j] for j in idx)
            over = sum(max(0, ai - ti) for ai, ti in zip(a, target))
            new = [0] * len(variables)
            for j, e in enumerate(ve):
                if e and j not in idx:
                    new[bpos[j]] += e
            if over + sum(new) > cap:
                continue
            nk = dst.encode(new) | (k & gm)
            d = groups.setdefault(a, {})
            d[nk] = d.get(nk, 0) + c
        level: dict[tuple[int, ...], Poly] = {
            a: TruncatedPolynomial._raw(ring, variables, cap, _clean(t)) for a, t in groups.items()
        }
        for i in range(q - 1, -1, -1):
            nxt: dict[tuple[int, ...], Poly] = {}
            for a, val in level.items():
                if val.is_zero():
                    continue
                x = target[i] - a[i]
                kx = kern[i].get(x)
                if kx is None or kx.is_zero():
                    continue
                prod = val * kx
                key = a[:i]
                nxt[key] = nxt[key] + prod if key in nxt else prod
            level = nxt
        return level.get((), TruncatedPolynomial._raw(ring, variables, cap, {}))


def laurent_coeff(plan: ExpansionPlan | MultiExpansionPlan, target) -> Poly:
    if isinstance(plan, MultiExpansionPlan):
        return plan.coeff(tuple(target))
    if not isinstance(target, int):
        raise SeriesError("single-auxiliary plan needs an integer target")
    return plan.coeff(target)


# ---------------------------------------------------------------------------
# partitions and index vectors


def is_partition(lam: Sequence[int]) -> bool:
    return all(x >= 0 for x in lam) and all(lam[i] >= lam[i + 1] for i in range(len(lam) - 1))


def partition_length(lam: Sequence[int]) -> int:
    return sum(1 for x in lam if x)


def partitions_in_box(rows: int, cols: int) -> list[tuple[int, ...]]:
    """Partitions with at most ``rows`` parts, each at most ``cols``, trailing zeros stripped."""
    out = []
    for combo in combinations_with_replacement(range(cols, -1, -1), rows):
        lam = tuple(x for x in combo if x)
        out.append(lam)
    return sorted(set(out), key=lambda l: (sum(l), l))


def monomials(nvars: int, degree: int) -> list[tuple[int, ...]]:
    """All exponent vectors of total degree exactly ``degree``."""
    if nvars == 0:
        return [()] if degree == 0 else []
    out = []
    for first in range(degree, -1, -1):
        for rest in monomials(nvars - 1, degree - first):
            out.append((first,) + rest)
    return out
