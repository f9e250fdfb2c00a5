"""Weyl-group symmetrizers evaluated with a single exact division.

Type A works directly in the root variables: every denominator
y_i +_L chi(y_j) equals (y_i - y_j) / Ptwo(y_i, y_j), so clearing the full
Vandermonde product leaves a polynomial numerator.

Type C needs more care.  The factor y_i +_L y_j vanishes on y_j = chi(y_i),
not on y_j = -y_i, so it is not a linear form times a unit in the root
variables.  In logarithm coordinates Y = log(y) every factor is exp(L) for a
linear form L in Y, the hyperoctahedral group acts by signed permutations of
the Y's, and exp(L) = L * unit(L).  The symmetrizer is evaluated there and
the result is mapped back with Y_i -> log(y_i).
"""

from __future__ import annotations

from functools import lru_cache
from typing import Sequence

from .fgl import fgl_make
from .ring import Ring, RingError
from .series import NotDivisible, Poly, exact_divide, series_invert, substitute
from .weyl import enumerate_cosets


class SymmetrizerError(ValueError):
    pass


def _vars(ring: Ring, variables: tuple[str, ...], cap: int) -> dict[str, Poly]:
    return {v: Poly.var(ring, variables, cap, v) for v in variables}


def two_variable_series(theory: str, cap: int) -> Poly:
    """Ptwo(t, y) at ``cap`` over the theory ring, variables (t, y)."""
    return fgl_make(theory, cap).derived().Ptwo


def ptwo_in(theory: str, variables: tuple[str, ...], cap: int, a: str, b: str) -> Poly:
    """Ptwo(a, b) embedded in the given space."""
    return two_variable_series(theory, cap).embed(variables, rename={"t": a, "y": b})


def to_theory_ring(p: Poly, ring: Ring) -> Poly:
    """Move a rational-extended result back to ``ring``, checking integrality."""
    if p.ring == ring:
        return p
    try:
        return p.change_ring(ring)
    except RingError as exc:
        raise SymmetrizerError(f"symmetrized result is not integral: {exc}") from None


# ---------------------------------------------------------------------------
# type A


def _block_ranges(blocks: Sequence[int]) -> list[range]:
    out, start = [], 0
    for b in blocks:
        out.append(range(start, start + b))
        start += b
    return out


@lru_cache(maxsize=64)
def _type_a_kernel(theory: str, variables: tuple[str, ...], names: tuple[str, ...], blocks: tuple[int, ...], cap: int):
    law = fgl_make(theory, cap)
    R = law.ring
    xs = _vars(R, variables, cap)
    ranges = _block_ranges(blocks)
    K = Poly.constant(R, variables, cap, 1)
    for k, rng in enumerate(ranges):
        later = [j for r in ranges[k + 1:] for j in r]
        for i in rng:
            for j in later:
                K = K * ptwo_in(theory, variables, cap, names[i], names[j])
        for i in rng:
            for j in rng:
                if i < j:
                    K = K * (xs[names[i]] - xs[names[j]])
    V = Poly.constant(R, variables, cap, 1)
    n = len(names)
    for i in range(n):
        for j in range(i + 1, n):
            V = V * (xs[names[i]] - xs[names[j]])
    return K, V


def type_a_symmetrizer(theory: str, names: Sequence[str], blocks: Sequence[int], f: Poly, cap: int) -> Poly:
    """sum over S_n / (S_b1 x S_b2 x ...) of w[f / prod (y_i +_L chi(y_j))].

    The product runs over i in a block and j in any later block.  ``f`` is an
    exact polynomial whose variables contain ``names``.
    """
    names = tuple(names)
    blocks = tuple(blocks)
    n = len(names)
    if sum(blocks) != n or any(b <= 0 for b in blocks):
        raise SymmetrizerError(f"blocks {blocks} do not cover {n} roots")
    delta = n * (n - 1) // 2
    work = cap + delta
    variables = f.variables
    law = fgl_make(theory, work)
    if f.ring != law.ring:
        raise SymmetrizerError("polynomial ring does not match the theory")
    K, V = _type_a_kernel(theory, variables, names, blocks, work)
    N = f.lift_cap(work) * K
    pos = [variables.index(v) for v in names]
    total = N.zero_like()
    for w in enumerate_cosets(n, "S", blocks):
        perm = list(range(len(variables)))
        for i, j in enumerate(w.perm):
            perm[pos[i]] = pos[j]
        image = N.permute_variables(perm)
        total = total + image if w.sign() > 0 else total - image
    try:
        return exact_divide(total, V)
    except NotDivisible as exc:
        raise SymmetrizerError(f"type A symmetrizer left a remainder: {exc}") from None


# ---------------------------------------------------------------------------
# type C in logarithm coordinates


@lru_cache(maxsize=32)
def _log_data(theory: str, cap: int):
    """(log, exp, s/exp(s)) over the rational extension, one variable u, at ``cap``."""
    law = fgl_make(theory, cap + 1)
    log = law.logarithm(extend=True).truncate(cap)
    exp1 = law.exponential(extend=True)
    s = Poly.var(exp1.ring, ("u",), cap + 1, "u")
    unit = exact_divide(exp1, s)
    return log, exp1.truncate(cap), series_invert(unit)


def _linear_forms(n: int, q: int, form: str) -> tuple[list[dict[int, int]], list[Poly] | None]:
    forms: list[dict[int, int]] = []
    for i in range(q):
        forms.append({i: 2})
    for i in range(q):
        for j in range(i + 1, n):
            forms.append({i: 1, j: 1})
            if form == "full" or j >= q:
                forms.append({i: 1, j: -1})
    return forms, None


def _form_poly(ring: Ring, variables, cap, names, coeffs: dict[int, int]) -> Poly:
    terms = {}
    for i, c in coeffs.items():
        e = [0] * len(variables)
        e[variables.index(names[i])] = 1
        terms[tuple(e)] = c
    return Poly(ring, variables, cap, terms)


def type_c_symmetrizer(
    theory: str,
    names: Sequence[str],
    q: int,
    f: Poly,
    cap: int,
    form: str = "full",
    f_exact: bool = True,
) -> Poly:
    """Hyperoctahedral symmetrizer with twist zero.

    ``form="full"``: sum over C_n / C_(n-q) of
        w[f / (prod_i<=q [2](y_i) * prod_(i<=q, i<j<=n) (y_i +_L y_j)(y_i +_L chi(y_j)))].
    ``form="grassmann"``: sum over C_n / (S_q x C_(n-q)) of
        w[f / (prod_i<=q [2](y_i) * prod_(i<=q<j) (y_i +_L chi(y_j)) * prod_(i<=q, i<j) (y_i +_L y_j))].
    """
    names = tuple(names)
    n = len(names)
    if not 1 <= q <= n:
        raise SymmetrizerError(f"q={q} out of range for n={n}")
    if form not in ("full", "grassmann"):
        raise SymmetrizerError(f"unknown form {form!r}")
    variables = f.variables
    base_ring = fgl_make(theory, 1).ring
    if f.ring.generators != base_ring.generators:
        raise SymmetrizerError("polynomial ring does not match the theory")
    work = cap + n * n
    log, exp, inv_unit = _log_data(theory, work)
    Q = log.ring
    if f_exact:
        f = f.lift_cap(work)
    elif f.cap < work:
        raise SymmetrizerError(f"input known to degree {f.cap}, need {work}")
    else:
        f = f.truncate(work)
    f = f.change_ring(Q)
    # f(exp(Y))
    bind = {v: exp.embed(variables, rename={"u": v}) for v in names}
    N = substitute(f, bind, exact=True)
    forms, _ = _linear_forms(n, q, form)
    for coeffs in forms:
        L = _form_poly(Q, variables, work, names, coeffs)
        N = N * substitute(inv_unit, {"u": L}, variables=variables, cap=work)
    Y = {i: Poly.var(Q, variables, work, names[i]) for i in range(n)}
    C = Poly.constant(Q, variables, work, 1)
    if form == "grassmann":
        for i in range(q):
            for j in range(i + 1, q):
                C = C * (Y[i] - Y[j])
    for i in range(q, n):
        C = C * Y[i] * 2
        for j in range(i + 1, n):
            C = C * (Y[i] * Y[i] - Y[j] * Y[j])
    N = N * C
    delta = Poly.constant(Q, variables, work, 1)
    for i in range(n):
        delta = delta * Y[i] * 2
        for j in range(i + 1, n):
            delta = delta * (Y[i] * Y[i] - Y[j] * Y[j])
    blocks = (q,) if form == "grassmann" else (1,) * q
    pos = [variables.index(v) for v in names]
    total = N.zero_like()
    for w in enumerate_cosets(n, "C", blocks):
        perm = list(range(len(variables)))
        signs = [1] * len(variables)
        for i, j in enumerate(w.perm):
            perm[pos[i]] = pos[j]
            if w.signs[i]:
                signs[pos[i]] = -1
        image = N.permute_variables(perm, signs)
        eps = w.sign() * (-1) ** sum(w.signs)
        total = total + image if eps > 0 else total - image
    try:
        R = exact_divide(total, delta)
    except NotDivisible as exc:
        raise SymmetrizerError(f"type C symmetrizer left a remainder: {exc}") from None
    back = {v: log.truncate(cap).embed(variables, cap, rename={"u": v}) for v in names}
    out = substitute(R, back, exact=False)
    return to_theory_ring(out, fgl_make(theory, 1).ring)
