"""
Command line entry point.

    qsp CONFIG.json [--cutoff N] [--verify-support] [--no-check-compat]
        [--emit-basis] [--emit-inverse] [--require-bar] [--output PATH]

Config keys (node indices are 1-based):

    cartan        type name such as "A3", "B2", "A1xA1", or an integer matrix
    d             optional symmetrizer
    X             list of nodes
    tau           list of swapped pairs, e.g. [[1, 3]]; identity if omitted
    c             explicit parameters {node: expression in q}
    free_choices  otherwise: values on one node per tau-orbit, completed to a
                  bar-admissible family
    epsilon       sign for tau-fixed nodes in the completed family (+1 / -1)
    cutoff        maximal height N
    order         "lex" (default) or "revlex" complement selection
    flags         {verify_support, check_compat, emit_basis, emit_inverse,
                   require_bar}
    verify_c      parameters substituted in the verification step only
                  (negative control)

Exit codes: 0 success, 1 configuration or Satake validation error,
2 parameter error, 3 failed verification.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from typing import Any

from .errors import (
    InvalidArgument, NoSolution, NonUniqueSolution, ParameterError, ParseError, QSPError,
    SatakeError, VerificationFailure,
)
from .quasik import (
    DEFAULT_COMPAT_HEIGHT, build_certificate, compute, invert, verify_bar_involution,
    verify_centralizer, verify_intertwining, verify_recursions,
)
from .rootdata import RootDatum
from .satake import ParameterFamily, make_bar_admissible, validate
from .scalars import RatFuncQ
from .uqfull import Uq

EXIT_OK, EXIT_CONFIG, EXIT_PARAM, EXIT_VERIFY = 0, 1, 2, 3

FLAG_NAMES = ("verify_support", "check_compat", "emit_basis", "emit_inverse", "require_bar")


class ConfigError(QSPError, ValueError):
    pass


@dataclass
class JobConfig:
    datum: RootDatum
    X: list[int]
    tau: list[int]
    c: dict[int, RatFuncQ] | None
    free_choices: dict[int, RatFuncQ]
    epsilon: int
    cutoff: int
    order: str = "lex"
    verify_c: dict[int, RatFuncQ] | None = None
    flags: dict[str, bool] = field(default_factory=dict)

    @classmethod
    def from_dict(cls, raw: dict[str, Any]) -> "JobConfig":
        if not isinstance(raw, dict):
            raise ConfigError("config must be a JSON object")
        unknown = set(raw) - {"cartan", "d", "X", "tau", "c", "free_choices", "epsilon",
                              "cutoff", "order", "flags", "verify_c"}
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        if "cartan" not in raw:
            raise ConfigError("missing key 'cartan'")
        cartan = raw["cartan"]
        if isinstance(cartan, str):
            datum = RootDatum.from_name(cartan)
            if raw.get("d") is not None:
                datum = RootDatum.from_matrix(datum.cartan, raw["d"])
        else:
            datum = RootDatum.from_matrix(cartan, raw.get("d"))
        n = datum.rank

        def node(k) -> int:
            try:
                k = int(k)
            except (TypeError, ValueError):
                raise ConfigError(f"node index {k!r} is not an integer") from None
            if not 1 <= k <= n:
                raise ConfigError(f"node index {k} out of range 1..{n}")
            return k - 1

        X = [node(k) for k in raw.get("X", [])]
        tau = list(range(n))
        for pair in raw.get("tau", []):
            if len(pair) != 2:
                raise ConfigError(f"tau entry {pair} is not a pair")
            a, b = node(pair[0]), node(pair[1])
            if (tau[a] != a and tau[a] != b) or (tau[b] != b and tau[b] != a):
                raise ConfigError(f"tau pair {pair} overlaps another pair")
            tau[a], tau[b] = b, a

        def scalars(m, key) -> dict[int, RatFuncQ]:
            if not isinstance(m, dict):
                raise ConfigError(f"'{key}' must map nodes to expressions")
            out = {}
            for k, v in m.items():
                val = RatFuncQ.parse(str(v))
                if not val:
                    raise ConfigError(f"{key}[{k}] is zero")
                out[node(k)] = val
            return out

        c = scalars(raw["c"], "c") if "c" in raw else None
        free = scalars(raw.get("free_choices", {}), "free_choices")
        verify_c = scalars(raw["verify_c"], "verify_c") if "verify_c" in raw else None
        epsilon = raw.get("epsilon", 1)
        if epsilon not in (1, -1):
            raise ConfigError("epsilon must be 1 or -1")
        cutoff = raw.get("cutoff", 4)
        if not isinstance(cutoff, int) or cutoff < 1:
            raise ConfigError("cutoff must be a positive integer")
        order = raw.get("order", "lex")
        if order not in ("lex", "revlex"):
            raise ConfigError("order must be 'lex' or 'revlex'")
        flags = raw.get("flags", {})
        if not isinstance(flags, dict) or set(flags) - set(FLAG_NAMES):
            raise ConfigError(f"flags must be a map with keys among {FLAG_NAMES}")
        return cls(datum, X, tau, c, free, epsilon, cutoff, order, verify_c,
                   {k: bool(v) for k, v in flags.items()})


def _fmt_weight(mu) -> str:
    parts = []
    for i, m in enumerate(mu):
        if m:
            parts.append(f"a{i + 1}" if m == 1 else f"{m}a{i + 1}")
    return " + ".join(parts) or "0"


def _fmt_elt(terms: list[dict]) -> str:
    out = []
    for t in terms:
        word = "".join(f"E{k}" for k in t["word"]) or "1"
        out.append(f"({t['coeff']})*{word}")
    return " + ".join(out)


def summary(cert: dict, exit_code: int) -> str:
    lines = [
        f"Cartan matrix {cert['cartan']}, X = {cert['X']}, tau = {cert['tau']}",
        f"classical Satake diagram: {cert['classical_satake']}",
        "parameters: " + ", ".join(f"c{i} = {v}" for i, v in cert["c"].items()),
        f"cutoff N = {cert['cutoff']}, margin M = {cert['margin']}",
        "quasi K-matrix components:",
    ]
    for entry in cert["table"]:
        lines.append(f"  X[{_fmt_weight(entry['weight'])}] = {_fmt_elt(entry['terms'])}")
    for name in ("intertwining", "centralizer"):
        for key, e in cert.get(name, {}).items():
            state = "pass" if e["passed"] else f"FAIL ({e['residual_terms']} residual terms)"
            lines.append(f"{name} {key}: {state} (E-height <= {e['checked_up_to_height']})")
    bar = cert.get("bar_involution")
    if bar:
        cp = ", ".join(f"c'{i} = {v}" for i, v in bar["c_prime"].items())
        lines.append(f"bar involution: {bar['status']} ({cp}); "
                     f"certificate {'pass' if bar['passed'] else 'FAIL'}")
    if "inverse" in cert:
        lines.append("inverse components:")
        for entry in cert["inverse"]:
            lines.append(f"  Xinv[{_fmt_weight(entry['weight'])}] = {_fmt_elt(entry['terms'])}")
    lines.append(f"exit code {exit_code}")
    return "\n".join(lines)


def run(cfg: JobConfig, flags: dict[str, bool] | None = None) -> tuple[int, dict]:
    """Validate, compute and verify.  Returns (exit code, report)."""
    flags = {"check_compat": True, **cfg.flags, **(flags or {})}
    uq = Uq(cfg.datum, order=cfg.order)
    try:
        diagram = validate(cfg.datum, cfg.X, cfg.tau, uq=uq)
    except SatakeError as e:
        return EXIT_CONFIG, {"error": type(e).__name__, "message": str(e)}
    try:
        if cfg.c is not None:
            params = ParameterFamily(cfg.c)
        else:
            params = make_bar_admissible(diagram, cfg.free_choices, cfg.epsilon)
        qk = compute(diagram, params, cfg.cutoff,
                     verify_support=flags.get("verify_support", False),
                     compat_height=DEFAULT_COMPAT_HEIGHT if flags["check_compat"] else 0)
    except ParameterError as e:
        return EXIT_PARAM, {"error": type(e).__name__, "message": str(e)}
    except (NoSolution, NonUniqueSolution, VerificationFailure) as e:
        return EXIT_VERIFY, {"error": type(e).__name__, "message": str(e)}

    check_params = ParameterFamily(cfg.verify_c) if cfg.verify_c is not None else None
    inter = verify_intertwining(qk, check_params)
    cent = verify_centralizer(qk)
    bar = verify_bar_involution(qk)
    recursions = verify_recursions(qk)
    inverse = invert(qk) if flags.get("emit_inverse") else None
    cert = build_certificate(qk, inter, cent, bar, inverse, flags.get("emit_basis", False))
    cert["recursions_recheck"] = all(recursions.values())

    failed = (not all(e["passed"] for e in inter.values())
              or not all(e["passed"] for e in cent.values())
              or not bar["passed"]
              or not cert["recursions_recheck"]
              or not all(qk.compat.values()))
    if failed:
        code = EXIT_VERIFY
    elif flags.get("require_bar") and not bar["c_equals_c_prime"]:
        code = EXIT_PARAM
        cert["error"] = "NotBarAdmissible"
        cert["message"] = "c' != c; only the isomorphism certificate is available"
    else:
        code = EXIT_OK
    cert["exit_code"] = code
    return code, cert


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qsp", description=(
        "Compute and verify the quasi K-matrix of a quantum symmetric pair."))
    p.add_argument("config", help="JSON job description")
    p.add_argument("--cutoff", type=int, help="maximal height N (overrides config)")
    p.add_argument("--verify-support", action="store_true",
                   help="solve weights with Theta(mu) != -mu and check they vanish")
    p.add_argument("--no-check-compat", action="store_true",
                   help="skip the compatibility diagnostic")
    p.add_argument("--emit-basis", action="store_true", help="include complement bases")
    p.add_argument("--emit-inverse", action="store_true", help="include X^-1")
    p.add_argument("--require-bar", action="store_true",
                   help="exit 2 unless c is bar-admissible (c' = c)")
    p.add_argument("--output", help="write the JSON report to this path")
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        with open(args.config, encoding="utf-8") as fh:
            raw = json.load(fh)
        if args.cutoff is not None:
            raw["cutoff"] = args.cutoff
        cfg = JobConfig.from_dict(raw)
    except (OSError, json.JSONDecodeError, ConfigError, ParseError, InvalidArgument,
            QSPError, ValueError, TypeError) as e:
        print(f"configuration error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    cli_flags = {}
    if args.verify_support:
        cli_flags["verify_support"] = True
    if args.no_check_compat:
        cli_flags["check_compat"] = False
    if args.emit_basis:
        cli_flags["emit_basis"] = True
    if args.emit_inverse:
        cli_flags["emit_inverse"] = True
    if args.require_bar:
        cli_flags["require_bar"] = True
    code, report = run(cfg, cli_flags)
    if "table" in report:
        print(summary(report, code))
    else:
        print(f"{report['error']}: {report['message']}", file=sys.stderr)
    if args.output:
        report.setdefault("exit_code", code)
        with open(args.output, "w", encoding="utf-8") as fh:
            json.dump(report, fh, indent=2, sort_keys=True)
            fh.write("\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
