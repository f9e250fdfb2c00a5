"""Graded coefficient rings with named generators.

A ring is a polynomial ring over the integers or the rationals in finitely
many named generators, each carrying an integer grade.  Coefficients are
exact: Python ints, or ``fractions.Fraction`` when the value is not integral.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Union

Scalar = Union[int, Fraction]

INTEGERS = "integers"
RATIONALS = "rationals"

THEORIES = ("additive", "multiplicative", "hyperbolic", "universal")


class RingError(ValueError):
    pass


class MixedRingError(RingError):
    pass


def normalize(c: Scalar) -> Scalar:
    """Collapse a Fraction with denominator 1 to an int."""
    if type(c) is Fraction and c.denominator == 1:
        return c.numerator
    return c


def _natural_key(name: str):
    # m2 sorts before m10
    return [int(p) if p.isdigit() else p for p in re.split(r"(\d+)", name)]


@dataclass(frozen=True)
class GeneratorSpec:
    name: str
    grade: int


@dataclass(frozen=True)
class RingSpec:
    base: str
    generators: tuple[GeneratorSpec, ...] = ()
    theory: str | None = None


class Ring:
    """Handle for a graded ring.  Two handles are equal when base and generators agree."""

    __slots__ = ("base", "generators", "names", "grades", "theory", "_index", "_order")

    def __init__(self, spec: RingSpec):
        if spec.base not in (INTEGERS, RATIONALS):
            raise RingError(f"unknown base {spec.base!r}")
        names = [g.name for g in spec.generators]
        if len(set(names)) != len(names):
            raise RingError("duplicate generator name")
        if spec.theory == "universal" and spec.base != RATIONALS:
            raise RingError("the universal theory requires rational coefficients")
        self.base = spec.base
        self.generators = tuple(spec.generators)
        self.names = tuple(names)
        self.grades = tuple(g.grade for g in spec.generators)
        self.theory = spec.theory
        self._index = {n: i for i, n in enumerate(names)}
        # canonical rendering order of generators
        self._order = sorted(range(len(names)), key=lambda i: _natural_key(names[i]))

    def __eq__(self, other):
        return (
            isinstance(other, Ring)
            and self.base == other.base
            and self.generators == other.generators
        )

    def __hash__(self):
        return hash((self.base, self.generators))

    def __repr__(self):
        gens = ",".join(self.names)
        return f"Ring({self.base}[{gens}])"

    @property
    def ngens(self) -> int:
        return len(self.generators)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise RingError(f"ring has no generator {name!r}") from None

    def check_scalar(self, c: Scalar) -> Scalar:
        c = normalize(c)
        if self.base == INTEGERS and type(c) is Fraction:
            raise RingError(f"{c} is not an integer")
        return c

    def with_rationals(self) -> "Ring":
        if self.base == RATIONALS:
            return self
        return Ring(RingSpec(RATIONALS, self.generators, None))

    def with_integers(self) -> "Ring":
        return Ring(RingSpec(INTEGERS, self.generators, None))

    # values
    def zero(self) -> "GradedCoefficient":
        return GradedCoefficient(self, {})

    def one(self) -> "GradedCoefficient":
        return GradedCoefficient(self, {(0,) * self.ngens: 1})

    def const(self, c: Scalar) -> "GradedCoefficient":
        return GradedCoefficient(self, {(0,) * self.ngens: c})

    def gen(self, name: str) -> "GradedCoefficient":
        e = [0] * self.ngens
        e[self.index(name)] = 1
        return GradedCoefficient(self, {tuple(e): 1})

    def monomial_grade(self, exps: Iterable[int]) -> int:
        return sum(e * g for e, g in zip(exps, self.grades))

    def render_monomial(self, exps: tuple[int, ...]) -> str:
        parts = []
        for i in self._order:
            e = exps[i]
            if e == 1:
                parts.append(self.names[i])
            elif e:
                parts.append(f"{self.names[i]}^{e}")
        return "*".join(parts)

    def monomial_sort_key(self, exps: tuple[int, ...]):
        return tuple(exps[i] for i in self._order)


def ring_make(spec: RingSpec) -> Ring:
    return Ring(spec)


def theory_ring(theory: str, ngens: int | None = None) -> Ring:
    """The coefficient ring of a built-in theory.

    ``ngens`` is the number of m-generators for the universal theory.
    """
    if theory == "additive":
        return Ring(RingSpec(INTEGERS, (), "additive"))
    if theory == "multiplicative":
        return Ring(RingSpec(INTEGERS, (GeneratorSpec("beta", -1),), "multiplicative"))
    if theory == "hyperbolic":
        return Ring(
            RingSpec(INTEGERS, (GeneratorSpec("b", -1), GeneratorSpec("c", -2)), "hyperbolic")
        )
    if theory == "universal":
        if ngens is None or ngens < 0:
            raise RingError("universal ring needs a generator count")
        gens = tuple(GeneratorSpec(f"m{k}", -k) for k in range(1, ngens + 1))
        return Ring(RingSpec(RATIONALS, gens, "universal"))
    raise RingError(f"unknown theory {theory!r}")


class GradedCoefficient:
    """An exact ring element: generator-exponent monomials mapped to nonzero rationals."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: Ring, terms: Mapping[tuple[int, ...], Scalar]):
        self.ring = ring
        clean = {}
        for mono, c in terms.items():
            mono = tuple(mono)
            if len(mono) != ring.ngens:
                raise RingError("monomial length does not match the ring")
            c = ring.check_scalar(c)
            if c:
                clean[mono] = c
        self.terms = clean

    def _same(self, other: "GradedCoefficient"):
        if not isinstance(other, GradedCoefficient):
            raise TypeError("expected a GradedCoefficient")
        if other.ring != self.ring:
            raise MixedRingError(f"{self.ring} vs {other.ring}")

    def _lift(self, other) -> "GradedCoefficient":
        if isinstance(other, (int, Fraction)):
            return self.ring.const(other)
        self._same(other)
        return other

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return GradedCoefficient(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return GradedCoefficient(self.ring, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        other = self._lift(other)
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                out[m] = out.get(m, 0) + c1 * c2
        return GradedCoefficient(self.ring, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise RingError("negative power")
        out = self.ring.one()
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.const(other)
        if not isinstance(other, GradedCoefficient):
            return NotImplemented
        self._same(other)
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def constant(self) -> Scalar:
        return self.terms.get((0,) * self.ring.ngens, 0)

    def grades(self) -> dict[int, "GradedCoefficient"]:
        """Split into graded-homogeneous components."""
        parts: dict[int, dict] = {}
        for m, c in self.terms.items():
            parts.setdefault(self.ring.monomial_grade(m), {})[m] = c
        return {g: GradedCoefficient(self.ring, t) for g, t in sorted(parts.items())}

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda mc: self.ring.monomial_sort_key(mc[0]))

    def __str__(self):
        if not self.terms:
            return "0"
        out = []
        for m, c in self.sorted_terms():
            mono = self.ring.render_monomial(m)
            if not mono:
                out.append(str(c))
            elif c == 1:
                out.append(mono)
            elif c == -1:
                out.append("-" + mono)
            else:
                out.append(f"{c}*{mono}")
        return " + ".join(out).replace("+ -", "- ")

    def __repr__(self):
        return f"GradedCoefficient({self})"
