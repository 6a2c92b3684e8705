"""
Generalized Cartan matrices, the invariant bilinear form on the root lattice,
simple reflections and the finite root subsystems Phi_X used by Satake data.

Weights are plain tuples of integers (coordinates in the basis of simple
roots).  Node indices are 0-based internally; the CLI shows them 1-based.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, reduce
from math import gcd
from typing import Iterable, Sequence

from .errors import InvalidRootDatum, NonFiniteType

Weight = tuple[int, ...]
WeylWord = tuple[int, ...]

__all__ = [
    "Weight", "WeylWord", "RootDatum", "FiniteTypeData", "cartan_matrix",
    "height", "wadd", "wsub", "wscale", "is_nonnegative", "weights_of_height",
]


def height(beta: Weight) -> int:
    return sum(beta)


def wadd(a: Weight, b: Weight) -> Weight:
    return tuple(x + y for x, y in zip(a, b))


def wsub(a: Weight, b: Weight) -> Weight:
    return tuple(x - y for x, y in zip(a, b))


def wscale(k: int, a: Weight) -> Weight:
    return tuple(k * x for x in a)


def is_nonnegative(a: Weight) -> bool:
    return all(x >= 0 for x in a)


def weights_of_height(n: int, h: int) -> list[Weight]:
    """All weights in Q^+ of rank n and height h, in lexicographic order."""
    if n == 0:
        return [()] if h == 0 else []
    out = []
    for first in range(h, -1, -1):
        for rest in weights_of_height(n - 1, h - first):
            out.append((first,) + rest)
    return sorted(out)


# -- named Cartan matrices ------------------------------------------------------

def _type_a(n):
    return [[2 if i == j else (-1 if abs(i - j) == 1 else 0) for j in range(n)]
            for i in range(n)]


def _named_block(letter: str, n: int) -> list[list[int]]:
    if n < 1:
        raise InvalidRootDatum(f"rank must be positive in {letter}{n}")
    a = _type_a(n)
    if letter == "A":
        return a
    if letter == "B" and n >= 2:
        # alpha_n short
        a[n - 1][n - 2] = -2
        return a
    if letter == "C" and n >= 2:
        a[n - 2][n - 1] = -2
        return a
    if letter == "D" and n >= 3:
        a = _type_a(n)
        a[n - 1][n - 2] = a[n - 2][n - 1] = 0
        a[n - 1][n - 3] = a[n - 3][n - 1] = -1
        return a
    if letter == "G" and n == 2:
        return [[2, -1], [-3, 2]]
    if letter == "F" and n == 4:
        return [[2, -1, 0, 0], [-1, 2, -1, 0], [0, -2, 2, -1], [0, 0, -1, 2]]
    if letter == "E" and n in (6, 7, 8):
        # Bourbaki labelling: 1-3-4-5-6(-7-8), node 2 attached to 4
        a = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
        for i, j in [(0, 2), (2, 3), (3, 4), (1, 3)] + [(k, k + 1) for k in range(4, n - 1)]:
            a[i][j] = a[j][i] = -1
        return a
    raise InvalidRootDatum(f"unknown Cartan type {letter}{n}")


def cartan_matrix(name: str) -> list[list[int]]:
    """Cartan matrix for a name like ``"A3"``, ``"B2"``, ``"A1xA1"``.

    Affine rank-2 ``"A1~"`` (entries -2) is accepted as well.
    """
    blocks = []
    for part in re.split(r"[x×]", name.replace(" ", "")):
        if part in ("A1~", "A1^(1)"):
            blocks.append([[2, -2], [-2, 2]])
            continue
        m = re.fullmatch(r"([A-G])(\d+)", part)
        if m is None:
            raise InvalidRootDatum(f"cannot parse Cartan type {part!r}")
        blocks.append(_named_block(m.group(1), int(m.group(2))))
    size = sum(len(b) for b in blocks)
    out = [[0] * size for _ in range(size)]
    off = 0
    for b in blocks:
        for i, row in enumerate(b):
            for j, v in enumerate(row):
                out[off + i][off + j] = v
        off += len(b)
    return out


def _symmetrizer(a: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """Smallest positive integers d with d_i a_ij symmetric, per component."""
    n = len(a)
    if any(len(row) != n for row in a):
        raise InvalidRootDatum("Cartan matrix must be square")
    if any((a[i][j] == 0) != (a[j][i] == 0) for i in range(n) for j in range(n)):
        raise InvalidRootDatum("a_ij = 0 must imply a_ji = 0")
    d: list[Fraction | None] = [None] * n
    for start in range(n):
        if d[start] is not None:
            continue
        d[start] = Fraction(1)
        stack = [start]
        while stack:
            i = stack.pop()
            for j in range(n):
                if j == i or a[i][j] == 0:
                    continue
                # d_i a_ij = d_j a_ji
                val = d[i] * a[i][j] / a[j][i]
                if val <= 0:
                    raise InvalidRootDatum("off-diagonal entries must be <= 0")
                if d[j] is None:
                    d[j] = val
                    stack.append(j)
                elif d[j] != val:
                    raise InvalidRootDatum("Cartan matrix is not symmetrizable")
    lcm = reduce(lambda x, y: x * y // gcd(x, y), (x.denominator for x in d), 1)
    ints = [int(x * lcm) for x in d]
    g = reduce(gcd, ints)
    return tuple(x // g for x in ints)


@dataclass(frozen=True)
class RootDatum:
    """A symmetrizable generalized Cartan matrix with its symmetrizers."""
    cartan: tuple[tuple[int, ...], ...]
    d: tuple[int, ...]

    def __post_init__(self):
        a, n = self.cartan, len(self.cartan)
        if any(len(row) != n for row in a):
            raise InvalidRootDatum("Cartan matrix must be square")
        if len(self.d) != n or any(x <= 0 for x in self.d):
            raise InvalidRootDatum("symmetrizers must be positive, one per node")
        for i in range(n):
            if a[i][i] != 2:
                raise InvalidRootDatum(f"a_{i}{i} must be 2")
            for j in range(n):
                if i == j:
                    continue
                if a[i][j] > 0:
                    raise InvalidRootDatum("off-diagonal entries must be <= 0")
                if (a[i][j] == 0) != (a[j][i] == 0):
                    raise InvalidRootDatum("a_ij = 0 must imply a_ji = 0")
                if self.d[i] * a[i][j] != self.d[j] * a[j][i]:
                    raise InvalidRootDatum("(d_i a_ij) is not symmetric")
        if n and reduce(gcd, self.d) != 1:
            raise InvalidRootDatum("symmetrizers must be relatively prime")

    @classmethod
    def from_matrix(cls, a: Sequence[Sequence[int]], d: Sequence[int] | None = None):
        a = tuple(tuple(int(x) for x in row) for row in a)
        if d is None:
            d = _symmetrizer(a)
        return cls(a, tuple(int(x) for x in d))

    @classmethod
    def from_name(cls, name: str):
        return cls.from_matrix(cartan_matrix(name))

    @property
    def rank(self) -> int:
        return len(self.cartan)

    @property
    def nodes(self) -> range:
        return range(self.rank)

    @cached_property
    def _form(self) -> tuple[tuple[int, ...], ...]:
        n = self.rank
        return tuple(tuple(self.d[i] * self.cartan[i][j] for j in range(n))
                     for i in range(n))

    def simple(self, i: int) -> Weight:
        return tuple(1 if k == i else 0 for k in range(self.rank))

    @cached_property
    def zero(self) -> Weight:
        return (0,) * self.rank

    def bilinear(self, beta: Weight, gamma: Weight) -> int:
        f = self._form
        return sum(b * f[i][j] * g
                   for i, b in enumerate(beta) if b
                   for j, g in enumerate(gamma) if g)

    def pair_simple(self, i: int, beta: Weight) -> int:
        """(alpha_i, beta)."""
        row = self._form[i]
        return sum(row[j] * b for j, b in enumerate(beta) if b)

    def coroot_pairing(self, beta: Weight, i: int) -> int:
        """beta(alpha_i^vee) = 2 (beta, alpha_i) / (alpha_i, alpha_i)."""
        row = self.cartan[i]
        return sum(row[j] * b for j, b in enumerate(beta) if b)

    def reflect(self, i: int, beta: Weight) -> Weight:
        c = self.coroot_pairing(beta, i)
        if c == 0:
            return beta
        out = list(beta)
        out[i] -= c
        return tuple(out)

    def weyl_apply(self, word: WeylWord, beta: Weight) -> Weight:
        """Apply s_{i_1} ... s_{i_l} (rightmost reflection first)."""
        for i in reversed(word):
            beta = self.reflect(i, beta)
        return beta

    def is_finite_type(self, X: Iterable[int]) -> bool:
        """Positive definiteness of (d_i a_ij)_{i,j in X} via leading minors."""
        X = list(X)
        f = self._form
        m = [[Fraction(f[i][j]) for j in X] for i in X]
        # Gaussian elimination without pivoting: the k-th pivot is the ratio
        # of consecutive leading principal minors.
        for k in range(len(X)):
            if m[k][k] <= 0:
                return False
            for r in range(k + 1, len(X)):
                if m[r][k]:
                    t = m[r][k] / m[k][k]
                    for c in range(k, len(X)):
                        m[r][c] -= t * m[k][c]
        return True

    def finite_type_data(self, X: Iterable[int]) -> "FiniteTypeData":
        X = tuple(sorted(set(X)))
        if not self.is_finite_type(X):
            raise NonFiniteType(f"subset {X} is not of finite type")
        return FiniteTypeData.build(self, X)


@dataclass(frozen=True)
class FiniteTypeData:
    """Root subsystem data for a finite-type subset X of the nodes."""
    X: tuple[int, ...]
    positive_roots: tuple[Weight, ...]
    longest_word: WeylWord
    sum2rho: Weight
    # i -> 2 alpha_i(rho_X^vee), for every node i
    copairings: tuple[int, ...] = field(repr=False)

    @classmethod
    def build(cls, datum: RootDatum, X: tuple[int, ...]) -> "FiniteTypeData":
        roots = _positive_roots(datum, X)
        word = _longest_word(datum, X)
        sum2rho = datum.zero
        for beta in roots:
            sum2rho = wadd(sum2rho, beta)
        cop = []
        for i in datum.nodes:
            total = Fraction(0)
            for beta in roots:
                total += Fraction(2 * datum.pair_simple(i, beta), datum.bilinear(beta, beta))
            if total.denominator != 1:
                raise AssertionError(f"2 alpha_{i}(rho_X^vee) = {total} is not an integer")
            cop.append(int(total))
        if len(word) != len(roots):
            raise AssertionError("length of w_X does not match |Phi_X^+|")
        return cls(X, tuple(roots), word, sum2rho, tuple(cop))


def _positive_roots(datum: RootDatum, X: tuple[int, ...]) -> list[Weight]:
    found = {datum.simple(j) for j in X}
    frontier = list(found)
    while frontier:
        new = []
        for beta in frontier:
            for j in X:
                gamma = datum.reflect(j, beta)
                if is_nonnegative(gamma) and gamma not in found:
                    found.add(gamma)
                    new.append(gamma)
        frontier = new
    return sorted(found, key=lambda b: (height(b), b))


def _longest_word(datum: RootDatum, X: tuple[int, ...]) -> WeylWord:
    # Track the pairings of a strictly X-dominant vector against the simple
    # coroots; reflect at the smallest positive one until all are negative.
    a = datum.cartan
    pair = {j: 1 for j in X}
    record = []
    while True:
        k = next((j for j in X if pair[j] > 0), None)
        if k is None:
            break
        pk = pair[k]
        for j in X:
            pair[j] -= a[j][k] * pk
        record.append(k)
    # the vector reached is s_{k_l} ... s_{k_1}(v) = w_X(v)
    return tuple(reversed(record))
