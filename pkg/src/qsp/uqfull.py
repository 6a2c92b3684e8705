"""
Arithmetic in U_q(g) in triangular form F-word * K_beta * E-word.

Products are straightened with the defining relations only:
E_j F_i = F_i E_j + delta_ij (K_i - K_i^{-1}) / (q_i - q_i^{-1}) and
K_beta E_j = q^(beta, alpha_j) E_j K_beta, K_beta F_j = q^-(beta, alpha_j) F_j K_beta.
The skew derivations of :mod:`qsp.uqplus` are not used here, so the
commutator formula relating both stays an independent check.

F-words are compared modulo the mirror image of the U^+ radical (omega
maps E_w to F_w), so the same weight-space bases serve both sides.
"""

from __future__ import annotations

from typing import Mapping

from .errors import NotInUPlus
from .rootdata import RootDatum, Weight, WeylWord, is_nonnegative, wadd, wscale
from .scalars import ONE, ZERO, RatFuncQ, q_factorial, q_pow
from .uqplus import UPlusAlgebra, UPlusElt, Word

Key = tuple[Word, Weight, Word]

__all__ = ["Uq", "UElt"]


class Uq:
    """The quantized enveloping algebra of a root datum."""

    def __init__(self, datum: RootDatum, plus: UPlusAlgebra | None = None,
                 order: str = "lex"):
        self.datum = datum
        self.plus = plus if plus is not None else UPlusAlgebra(datum, order)
        self._form = self.plus._form
        self._eF1_cache: dict[tuple[Word, int], dict[Key, RatFuncQ]] = {}
        self._eF_cache: dict[tuple[Word, Word], dict[Key, RatFuncQ]] = {}
        self._T_cache: dict[tuple[int, str, Word], UElt] = {}
        self._inv_diff = [(q_pow(d) - q_pow(-d)).inv() for d in datum.d]

    # -- constructors -----------------------------------------------------------

    def element(self, terms: Mapping[Key, RatFuncQ | int]) -> "UElt":
        return UElt(self, {k: RatFuncQ(c) if isinstance(c, int) else c
                           for k, c in terms.items()})

    def scalar(self, c) -> "UElt":
        c = RatFuncQ(c) if isinstance(c, int) else c
        return UElt(self, {((), self.datum.zero, ()): c})

    def one(self) -> "UElt":
        return self.scalar(ONE)

    def zero(self) -> "UElt":
        return UElt(self, {})

    def E(self, *letters: int) -> "UElt":
        return UElt(self, {((), self.datum.zero, tuple(letters)): ONE})

    def F(self, *letters: int) -> "UElt":
        return UElt(self, {(tuple(letters), self.datum.zero, ()): ONE})

    def K(self, beta: Weight) -> "UElt":
        return UElt(self, {((), tuple(beta), ()): ONE})

    def K_i(self, i: int, power: int = 1) -> "UElt":
        return self.K(wscale(power, self.datum.simple(i)))

    def from_plus(self, x: UPlusElt) -> "UElt":
        z = self.datum.zero
        return UElt(self, {((), z, w): c for w, c in x.terms.items()})

    def to_plus(self, x: "UElt") -> UPlusElt:
        """Return x as an element of U^+; NotInUPlus if it has F or K parts."""
        red = x.reduced()
        z = self.datum.zero
        out = {}
        for (f, beta, e), c in red.terms.items():
            if f or beta != z:
                raise NotInUPlus(f"term F{f} K{beta} E{e} survives")
            out[e] = c
        return UPlusElt(self.plus, out)

    # -- straightening --------------------------------------------------------

    def _eF1(self, e: Word, i: int) -> dict[Key, RatFuncQ]:
        """E_e F_i in normal form."""
        key = (e, i)
        cached = self._eF1_cache.get(key)
        if cached is not None:
            return cached
        z = self.datum.zero
        if not e:
            out = {((i,), z, ()): ONE}
        else:
            head, j = e[:-1], e[-1]
            out = {}
            for (f, beta, y), c in self._eF1(head, i).items():
                k = (f, beta, y + (j,))
                out[k] = out.get(k, ZERO) + c
            if j == i:
                # E_head (K_i - K_i^{-1}) / (q_i - q_i^{-1}), K moved to the left
                e_pair = sum(self._form[i][l] for l in head)
                a = self.datum.simple(i)
                inv = self._inv_diff[i]
                k1 = ((), a, head)
                k2 = ((), wscale(-1, a), head)
                out[k1] = out.get(k1, ZERO) + q_pow(-e_pair) * inv
                out[k2] = out.get(k2, ZERO) - q_pow(e_pair) * inv
            out = {k: c for k, c in out.items() if c}
        self._eF1_cache[key] = out
        return out

    def _eF(self, e: Word, f: Word) -> dict[Key, RatFuncQ]:
        """E_e F_f in normal form."""
        key = (e, f)
        cached = self._eF_cache.get(key)
        if cached is not None:
            return cached
        z = self.datum.zero
        if not f:
            out = {((), z, e): ONE}
        elif not e:
            out = {(f, z, ()): ONE}
        else:
            first, rest = f[0], f[1:]
            out = {}
            for (x, beta, y), c in self._eF1(e, first).items():
                for (x2, delta, y2), c2 in self._eF(y, rest).items():
                    shift = -self._pair_word(beta, x2)
                    k = (x + x2, wadd(beta, delta), y2)
                    out[k] = out.get(k, ZERO) + c * c2 * q_pow(shift)
            out = {k: c for k, c in out.items() if c}
        self._eF_cache[key] = out
        return out

    def _pair_word(self, beta: Weight, word: Word) -> int:
        # (beta, weight(word))
        form = self._form
        return sum(b * form[n][l] for n, b in enumerate(beta) if b for l in word)

    def multiply(self, x: "UElt", y: "UElt", cutoff: int | None = None) -> "UElt":
        """Product in normal form; with a cutoff, drop E-height > cutoff."""
        out: dict[Key, RatFuncQ] = {}
        for (a, beta, b), c1 in x.terms.items():
            for (cc, gamma, d), c2 in y.terms.items():
                if cutoff is not None and len(d) > cutoff:
                    continue
                c12 = c1 * c2
                for (x2, delta, y2), s in self._eF(b, cc).items():
                    if cutoff is not None and len(y2) + len(d) > cutoff:
                        continue
                    shift = -self._pair_word(beta, x2) - self._pair_word(gamma, y2)
                    k = (a + x2, wadd(wadd(beta, delta), gamma), y2 + d)
                    out[k] = out.get(k, ZERO) + c12 * s * q_pow(shift)
        return UElt(self, out)

    # -- reduction modulo the radicals ------------------------------------------

    def reduce(self, x: "UElt") -> "UElt":
        plus = self.plus
        stage: dict[tuple[Word, Weight], dict[Word, RatFuncQ]] = {}
        for (f, beta, e), c in x.terms.items():
            bucket = stage.setdefault((f, beta), {})
            bucket[e] = bucket.get(e, ZERO) + c
        mid: dict[tuple[Weight, Word], dict[Word, RatFuncQ]] = {}
        for (f, beta), eterms in stage.items():
            for e, c in plus.reduce_terms(eterms).items():
                bucket = mid.setdefault((beta, e), {})
                bucket[f] = bucket.get(f, ZERO) + c
        out = {}
        for (beta, e), fterms in mid.items():
            for f, c in plus.reduce_terms(fterms).items():
                out[(f, beta, e)] = c
        return UElt(self, out)

    def equal(self, x: "UElt", y: "UElt") -> bool:
        return not (x - y).reduced().terms

    # -- involutions and automorphisms --------------------------------------------

    def bar(self, x: "UElt") -> "UElt":
        return UElt(self, {(f, wscale(-1, beta), e): c.bar()
                           for (f, beta, e), c in x.terms.items()})

    def _T_generator(self, i: int, kind: str, j: int) -> "UElt":
        """Images of E_j / F_j under T_i = T''_{i,1}."""
        di = self.datum.d[i]
        a_i = self.datum.simple(i)
        z = self.datum.zero
        if j == i:
            if kind == "E":
                return UElt(self, {((i,), a_i, ()): -ONE})
            return UElt(self, {((), wscale(-1, a_i), (i,)): -ONE})
        a = -self.datum.cartan[i][j]
        terms = {}
        for s in range(a + 1):
            sign = -ONE if s % 2 else ONE
            denom = q_factorial(a - s, di) * q_factorial(s, di)
            if kind == "E":
                # (-1)^s q_i^{-s} E_i^{(a-s)} E_j E_i^{(s)}
                word = (i,) * (a - s) + (j,) + (i,) * s
                terms[((), z, word)] = sign * q_pow(-di * s) / denom
            else:
                # (-1)^s q_i^{s} F_i^{(s)} F_j F_i^{(a-s)}
                word = (i,) * s + (j,) + (i,) * (a - s)
                terms[(word, z, ())] = sign * q_pow(di * s) / denom
        return UElt(self, terms)

    def _T_word(self, i: int, kind: str, word: Word) -> "UElt":
        key = (i, kind, word)
        hit = self._T_cache.get(key)
        if hit is not None:
            return hit
        if not word:
            val = self.one()
        elif len(word) == 1:
            val = self._T_generator(i, kind, word[0])
        else:
            val = self.multiply(self._T_word(i, kind, word[:-1]),
                                self._T_generator(i, kind, word[-1])).reduced()
        self._T_cache[key] = val
        return val

    def lusztig_T(self, i: int, x: "UElt") -> "UElt":
        """Apply the algebra automorphism T_i (Lusztig's T''_{i,1})."""
        out = self.zero()
        for (f, beta, e), c in x.terms.items():
            term = self.multiply(self._T_word(i, "F", f),
                                 self.K(self.datum.reflect(i, beta)))
            term = self.multiply(term, self._T_word(i, "E", e))
            out = out + term * c
        return out.reduced()

    def T_w(self, word: WeylWord, x: "UElt") -> "UElt":
        for i in reversed(word):
            x = self.lusztig_T(i, x)
        return x

    def T_w_on_E(self, word: WeylWord, j: int) -> UPlusElt:
        """T_{i_1} ... T_{i_l}(E_j), returned as an element of U^+."""
        beta = self.datum.simple(j)
        for i in reversed(word):
            beta = self.datum.reflect(i, beta)
            if not is_nonnegative(beta):
                raise NotInUPlus(f"w(alpha_{j}) leaves Q^+ along the word {word}")
        return self.to_plus(self.T_w(word, self.E(j)))

    def truncate(self, x: "UElt", cutoff: int) -> "UElt":
        return UElt(self, {k: c for k, c in x.terms.items() if len(k[2]) <= cutoff})


class UElt:
    """Finite sum of normal-ordered terms F_f K_beta E_e."""

    __slots__ = ("algebra", "terms")
    __hash__ = None

    def __init__(self, algebra: Uq, terms: Mapping[Key, RatFuncQ]):
        self.algebra = algebra
        self.terms = {k: c for k, c in terms.items() if c}

    def reduced(self) -> "UElt":
        return self.algebra.reduce(self)

    def is_zero(self) -> bool:
        return not self.reduced().terms

    def e_height(self) -> int:
        return max((len(k[2]) for k in self.terms), default=0)

    def restrict(self, max_e_height: int) -> "UElt":
        return UElt(self.algebra, {k: c for k, c in self.terms.items()
                                   if len(k[2]) <= max_e_height})

    def __add__(self, other: "UElt") -> "UElt":
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, ZERO) + c
        return UElt(self.algebra, out)

    def __neg__(self) -> "UElt":
        return UElt(self.algebra, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other: "UElt") -> "UElt":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, UElt):
            return self.algebra.multiply(self, other)
        if isinstance(other, (RatFuncQ, int)):
            return UElt(self.algebra, {k: c * other for k, c in self.terms.items()})
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (RatFuncQ, int)):
            return UElt(self.algebra, {k: other * c for k, c in self.terms.items()})
        return NotImplemented

    def __eq__(self, other):
        if not isinstance(other, UElt):
            return NotImplemented
        return self.algebra.equal(self, other)

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for (f, beta, e), c in sorted(self.terms.items(), key=lambda kv: (len(kv[0][2]), kv[0])):
            mono = "".join(f"F{i + 1}" for i in f)
            if any(beta):
                mono += f"K{list(beta)}"
            mono += "".join(f"E{i + 1}" for i in e)
            parts.append(f"({c})*{mono or '1'}")
        return " + ".join(parts)
