"""
The positive part U^+ as the free algebra on letters E_i modulo its radical.

A word ``(i1, ..., il)`` stands for E_{i1} ... E_{il}.  For a word ``w`` let
phi_w be the functional x -> {}_{w_l}r( ... {}_{w_1}r(x)) on the weight space
of w.  The radical of the free algebra in weight mu is the joint kernel of all
phi_w, and U^+_mu is the quotient.

Every weight space gets a complement basis of words, chosen greedily in a
fixed total order ("lex" or "revlex") on words of the same weight.  Normal
words for such a multiplicative order are closed under taking factors, so the
complement of mu lies among the candidates ``(i,) + c`` with ``c`` in the
complement of ``mu - alpha_i``, and the functionals ``phi_{(i,) + r}`` with
``r`` a row word of ``mu - alpha_i`` separate U^+_mu.  Both facts keep the
Gram systems small.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import permutations
from typing import Iterable, Mapping

from .linalg import greedy_independent, inverse, matvec
from .rootdata import RootDatum, Weight, height, is_nonnegative, wsub
from .scalars import ONE, ZERO, RatFuncQ, q_pow

Word = tuple[int, ...]

__all__ = ["Word", "UPlusAlgebra", "UPlusElt", "WeightSpaceBasis", "kostant_dim_oracle"]


@dataclass
class WeightSpaceBasis:
    """Coordinates for U^+_mu."""
    algebra: "UPlusAlgebra" = field(repr=False)
    weight: Weight
    complement: list[Word]
    rows: list[Word]
    gram: list[list[RatFuncQ]] = field(repr=False)
    gram_inv: list[list[RatFuncQ]] = field(repr=False)
    # coordinates of every candidate word over the complement
    candidate_coords: dict[Word, list[RatFuncQ]] = field(repr=False)

    @property
    def dim(self) -> int:
        return len(self.complement)

    @cached_property
    def words(self) -> list[Word]:
        return self.algebra.words(self.weight)

    @cached_property
    def projection(self) -> list[list[RatFuncQ]]:
        """Matrix (dim x len(words)) from free coordinates to complement ones."""
        cols = [self.algebra.coords(w) for w in self.words]
        return [[col[k] for col in cols] for k in range(self.dim)]

    @cached_property
    def radical(self) -> list[list[RatFuncQ]]:
        """Basis of R_mu as vectors over ``self.words``."""
        pos = {w: n for n, w in enumerate(self.words)}
        comp = set(self.complement)
        out = []
        for w in self.words:
            if w in comp:
                continue
            v = [ZERO] * len(self.words)
            v[pos[w]] = ONE
            for c, x in zip(self.complement, self.algebra.coords(w)):
                if x:
                    v[pos[c]] = v[pos[c]] - x
            out.append(v)
        return out


class UPlusAlgebra:
    """Weight-space bookkeeping and the skew derivations for one root datum."""

    def __init__(self, datum: RootDatum, order: str = "lex"):
        if order not in ("lex", "revlex"):
            raise ValueError("order must be 'lex' or 'revlex'")
        self.datum = datum
        self.order = order
        self._bases: dict[Weight, WeightSpaceBasis] = {}
        self._coords: dict[Word, list[RatFuncQ]] = {(): [ONE]}
        self._phi: dict[tuple[Word, Word], RatFuncQ] = {}
        self._form = [[datum.d[i] * datum.cartan[i][j] for j in datum.nodes]
                      for i in datum.nodes]

    # -- words ----------------------------------------------------------------

    def weight_of(self, word: Iterable[int]) -> Weight:
        out = [0] * self.datum.rank
        for i in word:
            out[i] += 1
        return tuple(out)

    def sort_words(self, words: Iterable[Word]) -> list[Word]:
        return sorted(words, reverse=(self.order == "revlex"))

    def words(self, mu: Weight) -> list[Word]:
        letters = [i for i, n in enumerate(mu) for _ in range(n)]
        return self.sort_words(set(permutations(letters)))

    # -- the pairing functionals ---------------------------------------------------

    def phi(self, w: Word, v: Word) -> RatFuncQ:
        """phi_w(E_v) for words of equal weight: apply {}_{w_1}r first."""
        key = (w, v)
        val = self._phi.get(key)
        if val is not None:
            return val
        if not w:
            val = ONE if not v else ZERO
        else:
            i, rest = w[0], w[1:]
            row = self._form[i]
            val = ZERO
            e = 0
            for k, letter in enumerate(v):
                if letter == i:
                    sub = self.phi(rest, v[:k] + v[k + 1:])
                    if sub:
                        val = val + q_pow(e) * sub
                e += row[letter]
        self._phi[key] = val
        return val

    # -- bases ----------------------------------------------------------------

    def basis(self, mu: Weight) -> WeightSpaceBasis:
        b = self._bases.get(mu)
        if b is None:
            b = self._build_basis(mu)
            self._bases[mu] = b
        return b

    def dim(self, mu: Weight) -> int:
        if not is_nonnegative(mu):
            return 0
        return self.basis(mu).dim

    def _build_basis(self, mu: Weight) -> WeightSpaceBasis:
        if not is_nonnegative(mu):
            raise ValueError(f"{mu} is not in Q^+")
        if height(mu) == 0:
            return WeightSpaceBasis(self, mu, [()], [()], [[ONE]], [[ONE]], {(): [ONE]})
        cols, rows = set(), []
        for i in self.datum.nodes:
            nu = self._drop(mu, i)
            if nu is None:
                continue
            sub = self.basis(nu)
            cols.update((i,) + c for c in sub.complement)
            rows.extend((i,) + r for r in sub.rows)
        cols = self.sort_words(cols)
        rows = self.sort_words(rows)
        gram_full = [[self.phi(r, c) for c in cols] for r in rows]
        col_vectors = [[gram_full[r][c] for r in range(len(rows))] for c in range(len(cols))]
        comp_idx = greedy_independent(col_vectors, len(rows))
        d = len(comp_idx)
        row_vectors = [[gram_full[r][c] for c in comp_idx] for r in range(len(rows))]
        row_idx = greedy_independent(row_vectors, d, limit=d)
        gram = [[gram_full[r][c] for c in comp_idx] for r in row_idx]
        gram_inv = inverse(gram)
        cand = {}
        for c, word in enumerate(cols):
            cand[word] = matvec(gram_inv, [gram_full[r][c] for r in row_idx])
        return WeightSpaceBasis(
            self, mu, [cols[c] for c in comp_idx], [rows[r] for r in row_idx],
            gram, gram_inv, cand)

    def _drop(self, mu: Weight, i: int) -> Weight | None:
        if mu[i] == 0:
            return None
        out = list(mu)
        out[i] -= 1
        return tuple(out)

    def radical_basis(self, mu: Weight) -> WeightSpaceBasis:
        b = self.basis(mu)
        b.radical  # noqa: B018 - force the lazy radical computation
        return b

    # -- coordinates ----------------------------------------------------------

    def coords(self, word: Word) -> list[RatFuncQ]:
        """Coordinates of E_word over the complement basis of its weight."""
        out = self._coords.get(word)
        if out is not None:
            return out
        i, tail = word[0], word[1:]
        sub = self.coords(tail)
        sub_basis = self.basis(self.weight_of(tail))
        b = self.basis(self.weight_of(word))
        out = [ZERO] * b.dim
        for y, c in zip(sub, sub_basis.complement):
            if not y:
                continue
            vec = b.candidate_coords[(i,) + c]
            for k, x in enumerate(vec):
                if x:
                    out[k] = out[k] + y * x
        self._coords[word] = out
        return out

    def project(self, terms: Mapping[Word, RatFuncQ]) -> dict[Weight, list[RatFuncQ]]:
        """Complement coordinates of a free-word combination, per weight."""
        out: dict[Weight, list[RatFuncQ]] = {}
        for word, c in terms.items():
            if not c:
                continue
            mu = self.weight_of(word)
            vec = out.get(mu)
            if vec is None:
                vec = out[mu] = [ZERO] * self.basis(mu).dim
            for k, x in enumerate(self.coords(word)):
                if x:
                    vec[k] = vec[k] + c * x
        return {mu: v for mu, v in out.items() if any(v)}

    def from_coords(self, mu: Weight, vec: Iterable[RatFuncQ]) -> "UPlusElt":
        comp = self.basis(mu).complement
        return UPlusElt(self, {w: c for w, c in zip(comp, vec) if c})

    def reduce_terms(self, terms: Mapping[Word, RatFuncQ]) -> dict[Word, RatFuncQ]:
        out = {}
        for mu, vec in self.project(terms).items():
            for w, c in zip(self.basis(mu).complement, vec):
                if c:
                    out[w] = c
        return out

    # -- elements -------------------------------------------------------------

    def one(self) -> "UPlusElt":
        return UPlusElt(self, {(): ONE})

    def zero(self) -> "UPlusElt":
        return UPlusElt(self, {})

    def E(self, *letters: int) -> "UPlusElt":
        return UPlusElt(self, {tuple(letters): ONE})

    def element(self, terms: Mapping[Word, RatFuncQ | int]) -> "UPlusElt":
        return UPlusElt(self, {tuple(w): RatFuncQ(c) if isinstance(c, int) else c
                               for w, c in terms.items()})

    # -- skew derivations -----------------------------------------------------

    def ir_word(self, i: int, word: Word) -> dict[Word, RatFuncQ]:
        """{}_i r(E_word): the removed letter picks up q^(alpha_i, weight before it)."""
        out: dict[Word, RatFuncQ] = {}
        row = self._form[i]
        e = 0
        for k, letter in enumerate(word):
            if letter == i:
                w = word[:k] + word[k + 1:]
                out[w] = out.get(w, ZERO) + q_pow(e)
            e += row[letter]
        return out

    def r_word(self, i: int, word: Word) -> dict[Word, RatFuncQ]:
        """r_i(E_word): the removed letter picks up q^(alpha_i, weight after it)."""
        out: dict[Word, RatFuncQ] = {}
        row = self._form[i]
        e = 0
        for k in range(len(word) - 1, -1, -1):
            letter = word[k]
            if letter == i:
                w = word[:k] + word[k + 1:]
                out[w] = out.get(w, ZERO) + q_pow(e)
            e += row[letter]
        return out

    def skew_r(self, i: int, x: "UPlusElt") -> "UPlusElt":
        return self._apply_linear(x, lambda w: self.r_word(i, w))

    def skew_ir(self, i: int, x: "UPlusElt") -> "UPlusElt":
        return self._apply_linear(x, lambda w: self.ir_word(i, w))

    def _apply_linear(self, x: "UPlusElt", fn) -> "UPlusElt":
        out: dict[Word, RatFuncQ] = {}
        for word, c in x.terms.items():
            for w, f in fn(word).items():
                out[w] = out.get(w, ZERO) + c * f
        return UPlusElt(self, out)

    def bar_plus(self, x: "UPlusElt") -> "UPlusElt":
        return UPlusElt(self, {w: c.bar() for w, c in x.terms.items()})

    def sigma_plus(self, x: "UPlusElt") -> "UPlusElt":
        out: dict[Word, RatFuncQ] = {}
        for w, c in x.terms.items():
            rw = w[::-1]
            out[rw] = out.get(rw, ZERO) + c
        return UPlusElt(self, out)

    def relabel(self, x: "UPlusElt", perm) -> "UPlusElt":
        """Apply the diagram automorphism E_i -> E_{perm[i]}."""
        out: dict[Word, RatFuncQ] = {}
        for w, c in x.terms.items():
            nw = tuple(perm[i] for i in w)
            out[nw] = out.get(nw, ZERO) + c
        return UPlusElt(self, out)

    def multiply(self, x: "UPlusElt", y: "UPlusElt") -> "UPlusElt":
        out: dict[Word, RatFuncQ] = {}
        for a, ca in x.terms.items():
            for b, cb in y.terms.items():
                w = a + b
                out[w] = out.get(w, ZERO) + ca * cb
        return UPlusElt(self, out)

    def equal(self, x: "UPlusElt", y: "UPlusElt") -> bool:
        return not self.project((x - y).terms)


class UPlusElt:
    """A finite combination of words; equality is taken modulo the radical."""

    __slots__ = ("algebra", "terms")
    __hash__ = None

    def __init__(self, algebra: UPlusAlgebra, terms: Mapping[Word, RatFuncQ]):
        self.algebra = algebra
        self.terms = {w: c for w, c in terms.items() if c}

    @property
    def weights(self) -> set[Weight]:
        return {self.algebra.weight_of(w) for w in self.terms}

    @property
    def weight(self) -> Weight | None:
        """The weight of a homogeneous element (None for zero)."""
        ws = self.weights
        if not ws:
            return None
        if len(ws) > 1:
            raise ValueError("element is not homogeneous")
        return ws.pop()

    def component(self, mu: Weight) -> "UPlusElt":
        wt = self.algebra.weight_of
        return UPlusElt(self.algebra, {w: c for w, c in self.terms.items() if wt(w) == mu})

    def reduced(self) -> "UPlusElt":
        return UPlusElt(self.algebra, self.algebra.reduce_terms(self.terms))

    def is_zero(self) -> bool:
        return not self.algebra.project(self.terms)

    def __add__(self, other: "UPlusElt") -> "UPlusElt":
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out.get(w, ZERO) + c
        return UPlusElt(self.algebra, out)

    def __neg__(self) -> "UPlusElt":
        return UPlusElt(self.algebra, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other: "UPlusElt") -> "UPlusElt":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, UPlusElt):
            return self.algebra.multiply(self, other)
        if isinstance(other, (RatFuncQ, int)):
            return UPlusElt(self.algebra, {w: c * other for w, c in self.terms.items()})
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (RatFuncQ, int)):
            return UPlusElt(self.algebra, {w: other * c for w, c in self.terms.items()})
        return NotImplemented

    def __eq__(self, other):
        if not isinstance(other, UPlusElt):
            return NotImplemented
        return self.algebra.equal(self, other)

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for w in sorted(self.terms, key=lambda w: (len(w), w)):
            mono = "".join(f"E{i + 1}" for i in w) or "1"
            parts.append(f"({self.terms[w]})*{mono}")
        return " + ".join(parts)


def kostant_dim_oracle(mu: Weight, positive_roots: Iterable[Weight]) -> int:
    """Number of multisets of positive roots summing to mu."""
    # coin-change count over the roots, one root at a time
    counts: dict[Weight, int] = {tuple(0 for _ in mu): 1}
    for beta in positive_roots:
        new = dict(counts)
        # process in increasing height so each root can be reused
        for nu in sorted(_sub_box(mu), key=height):
            prev = wsub(nu, beta)
            if is_nonnegative(prev) and prev in new:
                new[nu] = new.get(nu, 0) + new[prev]
        counts = new
    return counts.get(tuple(mu), 0)


def _sub_box(mu: Weight) -> list[Weight]:
    out = [()]
    for m in mu:
        out = [w + (k,) for w in out for k in range(m + 1)]
    return out
