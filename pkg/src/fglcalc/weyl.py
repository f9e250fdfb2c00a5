"""Symmetric and hyperoctahedral groups acting on root variables."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations, product
from typing import Sequence

from .fgl import FormalGroupLaw, formal_inverse
from .series import Poly, substitute


class WeylError(ValueError):
    pass


@dataclass(frozen=True)
class SignedPermutation:
    """y_i -> e_i(y_perm[i]), where e_i is the formal inverse when signs[i] is set.

    ``perm`` is 0-based.  Products compose as substitutions:
    act(w1, act(w2, p)) == act(w1 * w2, p).
    """

    perm: tuple[int, ...]
    signs: tuple[bool, ...]

    def __post_init__(self):
        if sorted(self.perm) != list(range(len(self.perm))):
            raise WeylError(f"{self.perm} is not a permutation")
        if len(self.signs) != len(self.perm):
            raise WeylError("signs and perm differ in length")

    @classmethod
    def identity(cls, n: int) -> "SignedPermutation":
        return cls(tuple(range(n)), (False,) * n)

    @classmethod
    def unsigned(cls, perm: Sequence[int]) -> "SignedPermutation":
        return cls(tuple(perm), (False,) * len(perm))

    @property
    def n(self) -> int:
        return len(self.perm)

    def __mul__(self, other: "SignedPermutation") -> "SignedPermutation":
        if other.n != self.n:
            raise WeylError("size mismatch")
        perm = tuple(self.perm[other.perm[j]] for j in range(self.n))
        signs = tuple(other.signs[j] ^ self.signs[other.perm[j]] for j in range(self.n))
        return SignedPermutation(perm, signs)

    def one_line(self) -> tuple[int, ...]:
        return tuple(-(p + 1) if s else p + 1 for p, s in zip(self.perm, self.signs))

    def length(self) -> int:
        """Coxeter length in the hyperoctahedral group."""
        w = self.one_line()
        inv = sum(1 for i in range(len(w)) for j in range(i + 1, len(w)) if w[i] > w[j])
        return inv - sum(x for x in w if x < 0)

    def sign(self) -> int:
        """Sign of the underlying permutation (the signs are not counted)."""
        seen = [False] * self.n
        s = 1
        for i in range(self.n):
            if not seen[i]:
                j, size = i, 0
                while not seen[j]:
                    seen[j] = True
                    j = self.perm[j]
                    size += 1
                if size % 2 == 0:
                    s = -s
        return s

    @property
    def is_unsigned(self) -> bool:
        return not any(self.signs)

    def __str__(self):
        return "[" + " ".join(str(x) for x in self.one_line()) + "]"


def _check_blocks(n: int, blocks: Sequence[int], total: int) -> tuple[int, ...]:
    blocks = tuple(blocks)
    if any(b <= 0 for b in blocks) or sum(blocks) != total or total > n:
        raise WeylError(f"invalid composition {blocks} for n={n}")
    return blocks


def _block_key(w: SignedPermutation, blocks: tuple[int, ...], signed: bool):
    key = []
    start = 0
    for b in blocks:
        cells = range(start, start + b)
        if signed:
            key.append(frozenset((w.perm[j], w.signs[j]) for j in cells))
        else:
            key.append(frozenset(w.perm[j] for j in cells))
        start += b
    return tuple(key)


@lru_cache(maxsize=None)
def group_elements(n: int, group: str) -> tuple[SignedPermutation, ...]:
    if group == "S":
        return tuple(SignedPermutation.unsigned(p) for p in permutations(range(n)))
    if group == "C":
        return tuple(
            SignedPermutation(p, s)
            for p in permutations(range(n))
            for s in product((False, True), repeat=n)
        )
    raise WeylError(f"unknown group {group!r}")


@lru_cache(maxsize=None)
def enumerate_cosets(n: int, group: str, blocks: tuple[int, ...]) -> tuple[SignedPermutation, ...]:
    """Minimal-length representatives of left cosets w*H.

    For group "S", ``blocks`` is a composition of n and H is the Young
    subgroup S_b1 x S_b2 x ...  For group "C", ``blocks`` is a composition of
    some q <= n and H = S_b1 x ... x S_bk x C_(n-q); a block of size 1 on each
    of the first q slots gives C_n / C_(n-q).
    """
    if group == "S":
        blocks = _check_blocks(n, blocks, n)
    elif group == "C":
        blocks = _check_blocks(n, blocks, sum(blocks)) if blocks else ()
    else:
        raise WeylError(f"unknown group {group!r}")
    best: dict = {}
    for w in group_elements(n, group):
        key = _block_key(w, blocks, group == "C")
        rank = (w.length(), w.one_line())
        if key not in best or rank < best[key][0]:
            best[key] = (rank, w)
    return tuple(w for _, w in sorted(best.values(), key=lambda rw: rw[0]))


def subgroup_elements(n: int, group: str, blocks: tuple[int, ...]) -> tuple[SignedPermutation, ...]:
    """Elements of the parabolic subgroup described as in ``enumerate_cosets``."""
    ident = SignedPermutation.identity(n)
    ref = _block_key(ident, tuple(blocks), group == "C")
    return tuple(w for w in group_elements(n, group) if _block_key(w, tuple(blocks), group == "C") == ref)


def act(w: SignedPermutation, p: Poly, roots: Sequence[str], F: FormalGroupLaw | None = None) -> Poly:
    """Apply w to the root variables of p; signed slots use the formal inverse."""
    roots = tuple(roots)
    if len(roots) != w.n:
        raise WeylError("number of roots does not match the permutation size")
    if w.is_unsigned:
        pos = [p.variables.index(r) for r in roots]
        perm = list(range(len(p.variables)))
        # variable roots[i] becomes roots[perm[i]]
        for i, j in enumerate(w.perm):
            perm[pos[i]] = pos[j]
        return p.permute_variables(perm)
    if F is None:
        raise WeylError("signed action needs a formal group law")
    bindings = {}
    for i, r in enumerate(roots):
        target = p.var_like(roots[w.perm[i]])
        bindings[r] = formal_inverse(F, target) if w.signs[i] else target
    return substitute(p, bindings, exact=True)
