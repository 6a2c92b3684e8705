"""
Generalized Satake diagrams (X, tau), the involution Theta = -w_X o tau of the
root lattice, parameter families c and the coideal generators B_i.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Mapping, Sequence

from .errors import (
    CViolation, ConditionOneFailure, ConditionTwoPrimeFailure, InconsistentOrbit,
    NotDiagramInvolution, NotFiniteTypeX, OddExponent,
)
from .rootdata import FiniteTypeData, RootDatum, Weight, wscale, wsub
from .scalars import ONE, ZERO, Q, RatFuncQ, q_pow
from .uqfull import UElt, Uq
from .uqplus import UPlusElt

__all__ = [
    "SatakeDiagram", "ParameterFamily", "validate", "coideal_generator",
    "c_prime", "check_bar_admissible", "make_bar_admissible",
]


@dataclass(eq=False)
class SatakeDiagram:
    datum: RootDatum
    X: tuple[int, ...]
    tau: tuple[int, ...]
    derived: FiniteTypeData
    uq: Uq = field(repr=False)
    # i -> T_{w_X}(E_{tau(i)}) for i outside X
    twist: dict[int, UPlusElt] = field(repr=False)
    sign: dict[int, int]
    exp: dict[int, int]

    @property
    def non_X(self) -> list[int]:
        return [i for i in self.datum.nodes if i not in self.X]

    def tau_weight(self, beta: Weight) -> Weight:
        out = [0] * len(beta)
        for i, b in enumerate(beta):
            out[self.tau[i]] += b
        return tuple(out)

    def theta(self, beta: Weight) -> Weight:
        w = self.datum.weyl_apply(self.derived.longest_word, self.tau_weight(beta))
        return wscale(-1, w)

    def theta_simple(self, i: int) -> Weight:
        return self.theta(self.datum.simple(i))

    @property
    def satisfies_classical_condition(self) -> bool:
        """Condition (2) of the classical definition: alpha_i(rho_X^vee) in Z."""
        return all(self.derived.copairings[i] % 2 == 0
                   for i in self.non_X if self.tau[i] == i)

    def orbits(self) -> list[tuple[int, ...]]:
        """tau-orbits in I minus X."""
        seen, out = set(), []
        for i in self.non_X:
            if i not in seen:
                orb = tuple(sorted({i, self.tau[i]}))
                seen.update(orb)
                out.append(orb)
        return out

    def theta_fixed_lattice(self) -> list[Weight]:
        """Integer vectors spanning {beta : Theta(beta) = beta} over Q."""
        n = self.datum.rank
        cols = [self.theta_simple(j) for j in range(n)]
        m = [[Fraction(cols[j][i] - (1 if i == j else 0)) for j in range(n)]
             for i in range(n)]
        return _integer_nullspace(m, n)


def _integer_nullspace(m: list[list[Fraction]], n: int) -> list[Weight]:
    rows = [r[:] for r in m]
    pivots = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        piv = rows[r][c]
        rows[r] = [x / piv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    out = []
    for free in (c for c in range(n) if c not in pivots):
        v = [Fraction(0)] * n
        v[free] = Fraction(1)
        for k, pc in enumerate(pivots):
            v[pc] = -rows[k][free]
        den = lcm(*(x.denominator for x in v))
        out.append(tuple(int(x * den) for x in v))
    return out


def validate(datum: RootDatum, X: Sequence[int], tau: Sequence[int] | None = None,
             uq: Uq | None = None) -> SatakeDiagram:
    """Check conditions (1) and (2') and populate the derived data."""
    n = datum.rank
    X = tuple(sorted(set(X)))
    if any(j < 0 or j >= n for j in X):
        raise NotFiniteTypeX(f"X = {X} contains an invalid node")
    tau = tuple(range(n)) if tau is None else tuple(tau)
    if not datum.is_finite_type(X):
        raise NotFiniteTypeX(f"X = {X} is not of finite type")
    if sorted(tau) != list(range(n)) or any(tau[tau[i]] != i for i in range(n)):
        raise NotDiagramInvolution(f"tau = {tau} is not an involution of the nodes")
    a = datum.cartan
    for i in range(n):
        if datum.d[tau[i]] != datum.d[i]:
            raise NotDiagramInvolution("tau does not preserve the symmetrizers")
        for j in range(n):
            if a[tau[i]][tau[j]] != a[i][j]:
                raise NotDiagramInvolution("tau is not a diagram automorphism")
    if set(tau[j] for j in X) != set(X):
        raise NotDiagramInvolution("tau(X) != X")

    derived = datum.finite_type_data(X)
    uq = uq if uq is not None else Uq(datum)
    diagram = SatakeDiagram(datum, X, tau, derived, uq, {}, {}, {})

    for j in X:
        lhs = datum.simple(tau[j])
        rhs = wscale(-1, datum.weyl_apply(derived.longest_word, datum.simple(j)))
        if lhs != rhs:
            raise ConditionOneFailure(
                f"condition (1) fails at node {j + 1}: tau(alpha) = {lhs}, -w_X(alpha) = {rhs}")
    for i in range(n):
        if tau[i] != i:
            continue
        th = diagram.theta_simple(i)
        for j in range(n):
            if j != i and a[j][i] == -1:
                bad = tuple(-1 if k in (i, j) else 0 for k in range(n))
                if th == bad:
                    raise ConditionTwoPrimeFailure(
                        f"condition (2') fails at node {i + 1} with neighbour {j + 1}")

    for j in X:
        assert diagram.theta_simple(j) == datum.simple(j)
    for i in range(n):
        assert diagram.theta(diagram.theta_simple(i)) == datum.simple(i)

    for i in diagram.non_X:
        diagram.sign[i] = -1 if derived.copairings[i] % 2 else 1
        diagram.exp[i] = datum.bilinear(datum.simple(i),
                                        wsub(diagram.theta_simple(i), derived.sum2rho))
        diagram.twist[i] = uq.T_w_on_E(derived.longest_word, tau[i]).reduced()
    return diagram


@dataclass(frozen=True)
class ParameterFamily:
    """Values c_i for i outside X; c_i = 0 on X."""
    c: Mapping[int, RatFuncQ]

    def __getitem__(self, i: int) -> RatFuncQ:
        return self.c.get(i, ZERO)

    def __eq__(self, other):
        if not isinstance(other, ParameterFamily):
            return NotImplemented
        keys = set(self.c) | set(other.c)
        return all(self[i] == other[i] for i in keys)

    def in_C(self, diagram: SatakeDiagram) -> bool:
        dat = diagram.datum
        for i in diagram.non_X:
            if not self[i]:
                return False
            if dat.bilinear(dat.simple(i), diagram.theta_simple(i)) == 0:
                if self[i] != self[diagram.tau[i]]:
                    return False
        return True

    def as_strings(self) -> dict[int, str]:
        return {i: str(v) for i, v in sorted(self.c.items())}


def coideal_generator(diagram: SatakeDiagram, params: ParameterFamily, i: int) -> UElt:
    """B_i = F_i - c_i T_{w_X}(E_{tau(i)}) K_i^{-1}, and B_i = F_i on X."""
    uq = diagram.uq
    if i in diagram.X:
        return uq.F(i)
    second = uq.multiply(uq.from_plus(diagram.twist[i]), uq.K_i(i, -1))
    return uq.F(i) - second * params[i]


def c_prime(diagram: SatakeDiagram, params: ParameterFamily) -> ParameterFamily:
    """c'_i = sign_i q^{exp_i} bar(c_{tau(i)})."""
    out = {}
    for i in diagram.non_X:
        out[i] = q_pow(diagram.exp[i]) * params[diagram.tau[i]].bar() * diagram.sign[i]
    result = ParameterFamily(out)
    assert result.in_C(diagram) == params.in_C(diagram)
    return result


def check_bar_admissible(diagram: SatakeDiagram, params: ParameterFamily) -> bool:
    """bar(c_i) = sign_i q^{-exp_i} c_{tau(i)} for all i outside X."""
    ok = all(params[i].bar() == q_pow(-diagram.exp[i]) * params[diagram.tau[i]] * diagram.sign[i]
             for i in diagram.non_X)
    assert ok == (c_prime(diagram, params) == params)
    return ok


def make_bar_admissible(diagram: SatakeDiagram,
                        free_choices: Mapping[int, RatFuncQ] | None = None,
                        epsilon: int = 1) -> ParameterFamily:
    """Solve the bar-admissibility relation.

    Nodes fixed by tau get ``epsilon * q^(exp/2)`` (times ``q - q^-1`` when
    the sign is -1).  For a two-element orbit the value on the node present in
    ``free_choices`` is used (default 1 on the smaller node) and its partner
    is determined.
    """
    free_choices = dict(free_choices or {})
    if epsilon not in (1, -1):
        raise ValueError("epsilon must be +1 or -1")
    c: dict[int, RatFuncQ] = {}
    for orb in diagram.orbits():
        i = orb[0]
        e, s = diagram.exp[i], diagram.sign[i]
        if len(orb) == 1:
            if i in free_choices:
                c[i] = free_choices[i]
            else:
                if e % 2:
                    raise OddExponent(i + 1, e)
                val = q_pow(e // 2) * epsilon
                if s == -1:
                    val = val * (Q - q_pow(-1))
                c[i] = val
            if c[i].bar() != q_pow(-e) * c[i] * s:
                raise InconsistentOrbit(f"value at node {i + 1} violates bar-admissibility")
            continue
        j = orb[1]
        given = [k for k in orb if k in free_choices]
        rep = given[0] if given else i
        other = j if rep == i else i
        c[rep] = free_choices.get(rep, ONE)
        if not c[rep]:
            raise CViolation(f"parameter at node {rep + 1} is zero")
        # bar(c_other) = sign q^{-exp} c_rep
        c[other] = (q_pow(-diagram.exp[other]) * c[rep] * diagram.sign[other]).bar()
        if len(given) == 2 and free_choices[other] != c[other]:
            raise InconsistentOrbit(f"free choices on orbit {orb} contradict each other")
    params = ParameterFamily(c)
    for i in diagram.non_X:
        lhs = params[i].bar()
        rhs = q_pow(-diagram.exp[i]) * params[diagram.tau[i]] * diagram.sign[i]
        if lhs != rhs:
            raise InconsistentOrbit(f"orbit of node {i + 1} is inconsistent")
    if not params.in_C(diagram):
        raise CViolation("parameters are not in the admissible set C")
    return params
