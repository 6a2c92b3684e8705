"""
Degree-by-degree construction of the quasi K-matrix and its verification.

The component of weight mu is pinned down by the values of all r_i and
{}_i r on it, which are prescribed by lower components.  Each weight is
solved as one stacked exact linear system over the complement basis of
U^+_mu; full rank means uniqueness and consistency means existence.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from .errors import CViolation, InvalidArgument, NoSolution, VerificationFailure
from .linalg import solve
from .rootdata import Weight, height, is_nonnegative, wadd, weights_of_height, wscale, wsub
from .satake import (
    ParameterFamily, SatakeDiagram, c_prime, check_bar_admissible, coideal_generator,
)
from .scalars import ZERO, RatFuncQ, q_pow
from .uqfull import UElt
from .uqplus import UPlusElt

__all__ = [
    "QuasiK", "compute", "build_certificate", "build_rhs", "check_compat", "solve_weight",
    "verify_intertwining", "verify_centralizer", "verify_bar_involution",
    "verify_recursions", "invert", "intertwining_margin",
]

DEFAULT_COMPAT_HEIGHT = 6


@dataclass
class QuasiK:
    diagram: SatakeDiagram = field(repr=False)
    params: ParameterFamily
    cutoff: int
    table: dict[Weight, UPlusElt] = field(repr=False)
    dims: dict[Weight, int] = field(default_factory=dict)
    compat: dict[Weight, bool] = field(default_factory=dict)
    timing: dict[str, float] = field(default_factory=dict)
    certificate: dict = field(default_factory=dict)

    def __getitem__(self, mu: Weight) -> UPlusElt:
        return self.table.get(tuple(mu)) or self.diagram.uq.plus.zero()

    def support(self) -> list[Weight]:
        return sorted((mu for mu, x in self.table.items() if x.terms),
                      key=lambda m: (height(m), m))

    def as_uelt(self) -> UElt:
        uq = self.diagram.uq
        out = uq.zero()
        for x in self.table.values():
            out = out + uq.from_plus(x)
        return out


def _anti_fixed(diagram: SatakeDiagram, mu: Weight) -> bool:
    return diagram.theta(mu) == wscale(-1, mu)


def build_rhs(diagram: SatakeDiagram, params: ParameterFamily, i: int, mu: Weight,
              table: dict[Weight, UPlusElt]) -> tuple[UPlusElt, UPlusElt]:
    """The prescribed values (A_i, {}_i A) of r_i and {}_i r in weight mu."""
    plus = diagram.uq.plus
    if i in diagram.X:
        return plus.zero(), plus.zero()
    dat = diagram.datum
    th = diagram.theta_simple(i)
    nu = wsub(wadd(mu, th), dat.simple(i))
    if not is_nonnegative(nu):
        return plus.zero(), plus.zero()
    if height(nu) >= height(mu):
        raise AssertionError(f"recursion at {mu} requested {nu}")
    x_nu = table.get(nu)
    if x_nu is None or not x_nu.terms:
        return plus.zero(), plus.zero()
    d = dat.d[i]
    qdiff = q_pow(d) - q_pow(-d)
    t = diagram.twist[i]
    tau_i = diagram.tau[i]
    coeff_a = qdiff * q_pow(-diagram.exp[i]) * params[tau_i] * diagram.sign[i]
    coeff_ia = qdiff * q_pow(-dat.bilinear(th, dat.simple(i))) * params[i]
    A = (x_nu * plus.bar_plus(t)) * coeff_a
    iA = (t * x_nu) * coeff_ia
    return A.reduced(), iA.reduced()


def check_compat(diagram: SatakeDiagram, mu: Weight, A: dict[int, UPlusElt],
                 iA: dict[int, UPlusElt]) -> bool:
    """r_i({}_j A) = {}_j r(A_i) for all i, j, modulo the radical."""
    plus = diagram.uq.plus
    for i in diagram.datum.nodes:
        for j in diagram.datum.nodes:
            lhs = plus.skew_r(i, iA[j])
            rhs = plus.skew_ir(j, A[i])
            if not (lhs - rhs).is_zero():
                return False
    return True


def solve_weight(diagram: SatakeDiagram, mu: Weight, A: dict[int, UPlusElt],
                 iA: dict[int, UPlusElt]) -> UPlusElt:
    """The unique X in U^+_mu with r_i(X) = A_i and {}_i r(X) = {}_i A."""
    plus = diagram.uq.plus
    basis = plus.basis(mu)
    comp = basis.complement
    d = basis.dim
    rows: list[list[RatFuncQ]] = []
    rhs: list[RatFuncQ] = []
    for i in diagram.datum.nodes:
        nu = plus._drop(mu, i)
        if nu is None:
            if A[i].terms or iA[i].terms:
                raise NoSolution(f"nonzero prescribed derivative {i} at {mu}")
            continue
        dim_nu = plus.dim(nu)
        for deriv, target in ((plus.r_word, A[i]), (plus.ir_word, iA[i])):
            cols = []
            for c in comp:
                vec = plus.project(deriv(i, c)).get(nu, [ZERO] * dim_nu)
                cols.append(vec)
            tvec = plus.project(target.terms).get(nu, [ZERO] * dim_nu)
            for k in range(dim_nu):
                rows.append([col[k] for col in cols])
                rhs.append(tvec[k])
    sol = solve(rows, rhs, d)
    return plus.from_coords(mu, sol)


def compute(diagram: SatakeDiagram, params: ParameterFamily, cutoff: int, *,
            skip_support: bool = True, verify_support: bool = False,
            compat_height: int | None = DEFAULT_COMPAT_HEIGHT,
            require_C: bool = True) -> QuasiK:
    """Build the table mu -> X_mu for all mu of height <= cutoff.

    With ``skip_support`` weights with Theta(mu) != -mu are set to zero
    without solving; ``verify_support`` solves them anyway and fails if the
    result is nonzero.  ``compat_height`` bounds the heights where the
    compatibility r_i({}_j A) = {}_j r(A_i) is checked (None: everywhere).
    ``require_C=False`` admits parameters outside C, for which the
    recursion is expected to break down with NoSolution.
    """
    if cutoff < 1:
        raise InvalidArgument("cutoff must be at least 1")
    if require_C and not params.in_C(diagram):
        raise CViolation("parameters are not in C")
    plus = diagram.uq.plus
    dat = diagram.datum
    start = time.perf_counter()
    table: dict[Weight, UPlusElt] = {dat.zero: plus.one()}
    qk = QuasiK(diagram, params, cutoff, table)
    qk.dims[dat.zero] = 1
    for h in range(1, cutoff + 1):
        # weights of one height only read lower heights
        for mu in weights_of_height(dat.rank, h):
            qk.dims[mu] = plus.dim(mu)
            anti = _anti_fixed(diagram, mu)
            if not anti and skip_support and not verify_support:
                table[mu] = plus.zero()
                continue
            A, iA = {}, {}
            for i in dat.nodes:
                A[i], iA[i] = build_rhs(diagram, params, i, mu, table)
            if compat_height is None or h <= compat_height:
                qk.compat[mu] = check_compat(diagram, mu, A, iA)
            x = solve_weight(diagram, mu, A, iA)
            if not anti and x.terms:
                raise VerificationFailure(
                    f"X_{list(mu)} is nonzero although Theta(mu) != -mu", residual=x)
            table[mu] = x
    qk.timing["compute"] = time.perf_counter() - start
    return qk


def intertwining_margin(diagram: SatakeDiagram) -> int:
    """max over i outside X of ht(alpha_i - Theta(alpha_i)) (at least 1)."""
    dat = diagram.datum
    m = [height(wsub(dat.simple(i), diagram.theta_simple(i))) for i in diagram.non_X]
    return max(m + [1])


def _residual_entry(diff: UElt, upto: int) -> dict:
    red = diff.restrict(upto).reduced()
    entry = {"passed": not red.terms, "checked_up_to_height": upto,
             "residual_terms": len(red.terms)}
    if red.terms:
        (f, beta, e), c = min(red.terms.items(), key=lambda kv: (len(kv[0][2]), kv[0]))
        entry["first_residual"] = {
            "F": [k + 1 for k in f], "K": list(beta), "E": [k + 1 for k in e], "coeff": str(c)}
    return entry


def verify_intertwining(qk: QuasiK, params: ParameterFamily | None = None,
                        raise_on_failure: bool = False) -> dict[int, dict]:
    """B_i X = X (F_i - sign q^-exp c_{tau(i)} bar(T_{w_X}(E_{tau(i)})) K_i).

    Terms of E-height above ``cutoff - margin`` are not compared, since the
    truncated table cannot determine them.  ``params`` overrides the family
    used on both sides (negative controls).
    """
    diagram = qk.diagram
    params = qk.params if params is None else params
    uq = diagram.uq
    N = qk.cutoff
    upto = N - intertwining_margin(diagram)
    X = qk.as_uelt()
    start = time.perf_counter()
    out = {}
    for i in diagram.datum.nodes:
        b = coideal_generator(diagram, params, i)
        factor = uq.F(i)
        if i not in diagram.X:
            t_bar = uq.from_plus(uq.plus.bar_plus(diagram.twist[i]))
            scal = q_pow(-diagram.exp[i]) * params[diagram.tau[i]] * diagram.sign[i]
            factor = factor - uq.multiply(t_bar, uq.K_i(i)) * scal
        lhs = uq.multiply(b, X, cutoff=N)
        rhs = uq.multiply(X, factor, cutoff=N)
        entry = _residual_entry(lhs - rhs, upto)
        out[i] = entry
        if raise_on_failure and not entry["passed"]:
            raise VerificationFailure(f"intertwining fails for i = {i + 1}",
                                      generator=i, residual=entry.get("first_residual"))
    qk.timing["verify_intertwining"] = time.perf_counter() - start
    return out


def centralizer_generators(diagram: SatakeDiagram) -> list[tuple[str, UElt]]:
    uq = diagram.uq
    gens = []
    for j in diagram.X:
        gens += [(f"E{j + 1}", uq.E(j)), (f"F{j + 1}", uq.F(j)),
                 (f"K{j + 1}", uq.K_i(j)), (f"K{j + 1}^-1", uq.K_i(j, -1))]
    for beta in diagram.theta_fixed_lattice():
        gens.append((f"K{list(beta)}", uq.K(beta)))
    return gens


def verify_centralizer(qk: QuasiK, raise_on_failure: bool = False) -> dict[str, dict]:
    """x X = X x for x in M_X and K_beta with Theta(beta) = beta."""
    diagram = qk.diagram
    uq = diagram.uq
    N = qk.cutoff
    X = qk.as_uelt()
    start = time.perf_counter()
    out = {}
    for name, x in centralizer_generators(diagram):
        diff = uq.multiply(x, X, cutoff=N) - uq.multiply(X, x, cutoff=N)
        entry = _residual_entry(diff, N - 1)
        out[name] = entry
        if raise_on_failure and not entry["passed"]:
            raise VerificationFailure(f"X does not commute with {name}", generator=name,
                                      residual=entry.get("first_residual"))
    qk.timing["verify_centralizer"] = time.perf_counter() - start
    return out


def verify_bar_involution(qk: QuasiK) -> dict:
    """Check B_i X = X bar(B_i') with B_i' built from c'.

    If c' = c this certifies the bar involution of B_c; otherwise it
    certifies the isomorphism Psi: B_{c'} -> B_c.
    """
    diagram = qk.diagram
    uq = diagram.uq
    cp = c_prime(diagram, qk.params)
    admissible = check_bar_admissible(diagram, qk.params)
    N = qk.cutoff
    upto = N - intertwining_margin(diagram)
    X = qk.as_uelt()
    entries = {}
    for i in diagram.datum.nodes:
        b = coideal_generator(diagram, qk.params, i)
        b_prime = coideal_generator(diagram, cp, i)
        diff = uq.multiply(b, X, cutoff=N) - uq.multiply(X, uq.bar(b_prime), cutoff=N)
        entries[i] = _residual_entry(diff, upto)
    passed = all(e["passed"] for e in entries.values())
    status = "BarInvolutionExists" if admissible else "Isomorphism"
    return {
        "status": status,
        "c_prime": {i + 1: s for i, s in cp.as_strings().items()},
        "c_equals_c_prime": cp == qk.params,
        "passed": passed,
        "entries": entries,
        # Psi(b) = X bar(b) X^{-1}; its scalar part is q -> q^-1 by construction
        "psi_on_q": "q -> q^-1",
    }


def verify_recursions(qk: QuasiK) -> dict[Weight, bool]:
    """Re-check r_i(X_mu) = A_i and {}_i r(X_mu) = {}_i A on the final table."""
    diagram = qk.diagram
    plus = diagram.uq.plus
    out = {}
    for mu, x in qk.table.items():
        if height(mu) == 0:
            continue
        ok = True
        for i in diagram.datum.nodes:
            A, iA = build_rhs(diagram, qk.params, i, mu, qk.table)
            if not (plus.skew_r(i, x) - A).is_zero() or not (plus.skew_ir(i, x) - iA).is_zero():
                ok = False
        out[mu] = ok
    return out


def invert(qk: QuasiK) -> dict[Weight, UPlusElt]:
    """Components of X^{-1} up to the cutoff (geometric series)."""
    plus = qk.diagram.uq.plus
    dat = qk.diagram.datum
    inv: dict[Weight, UPlusElt] = {dat.zero: plus.one()}
    support = [mu for mu in qk.support() if height(mu) > 0]
    for h in range(1, qk.cutoff + 1):
        for mu in weights_of_height(dat.rank, h):
            acc = plus.zero()
            for nu in support:
                rest = wsub(mu, nu)
                if is_nonnegative(rest) and rest in inv and inv[rest].terms:
                    acc = acc - qk.table[nu] * inv[rest]
            inv[mu] = acc.reduced()
    for mu in inv:
        if height(mu) == 0:
            continue
        left = plus.zero()
        right = plus.zero()
        for nu in inv:
            rest = wsub(mu, nu)
            if is_nonnegative(rest):
                left = left + qk[rest] * inv[nu]
                right = right + inv[nu] * qk[rest]
        if not left.is_zero() or not right.is_zero():
            raise VerificationFailure(f"X * X^-1 != 1 in weight {list(mu)}")
    return inv


def _elt_json(x: UPlusElt) -> list[dict]:
    return [{"word": [k + 1 for k in w], "coeff": str(c)}
            for w, c in sorted(x.terms.items())]


def build_certificate(qk: QuasiK, intertwining: dict | None = None,
                      centralizer: dict | None = None, bar: dict | None = None,
                      inverse: dict[Weight, UPlusElt] | None = None,
                      emit_basis: bool = False) -> dict:
    """Machine-readable summary.  Node indices and word letters are 1-based."""
    d = qk.diagram
    plus = d.uq.plus
    weights = sorted(qk.table, key=lambda m: (height(m), m))
    cert: dict = {
        "cartan": [list(r) for r in d.datum.cartan],
        "symmetrizer": list(d.datum.d),
        "X": [j + 1 for j in d.X],
        "tau": [t + 1 for t in d.tau],
        "classical_satake": d.satisfies_classical_condition,
        "sign": {str(i + 1): s for i, s in sorted(d.sign.items())},
        "exp": {str(i + 1): e for i, e in sorted(d.exp.items())},
        "c": {str(i + 1): s for i, s in qk.params.as_strings().items()},
        "cutoff": qk.cutoff,
        "complement_order": plus.order,
        "margin": intertwining_margin(d),
        "dims": [{"weight": list(m), "dim": qk.dims.get(m, plus.dim(m))} for m in weights],
        "compat": [{"weight": list(m), "ok": ok} for m, ok in sorted(qk.compat.items())],
        "table": [{"weight": list(m), "terms": _elt_json(qk.table[m])}
                  for m in weights if qk.table[m].terms],
    }
    if emit_basis:
        cert["basis"] = [{"weight": list(m),
                          "words": [[k + 1 for k in w] for w in plus.basis(m).complement]}
                         for m in weights]
    if intertwining is not None:
        cert["intertwining"] = {str(i + 1): e for i, e in sorted(intertwining.items())}
    if centralizer is not None:
        cert["centralizer"] = centralizer
    if bar is not None:
        cert["bar_involution"] = {
            **{k: v for k, v in bar.items() if k != "entries"},
            "c_prime": {str(i): s for i, s in bar["c_prime"].items()},
            "entries": {str(i + 1): e for i, e in sorted(bar["entries"].items())},
        }
    if inverse is not None:
        cert["inverse"] = [{"weight": list(m), "terms": _elt_json(x)}
                           for m, x in sorted(inverse.items(), key=lambda kv: (height(kv[0]), kv[0]))
                           if x.terms]
    cert["timing_seconds"] = {k: round(v, 4) for k, v in qk.timing.items()}
    qk.certificate = cert
    return cert
