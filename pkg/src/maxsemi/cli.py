"""Command-line surface.

Subcommands: certify, classify, genpair, rho, bfin, maxtn, selftest.
Output is JSON by default (stable key order, so identical invocations
print identical bytes); --pretty renders a small human-readable table.
Exit codes: 0 for decided results, 2 for unknown verdicts, 1 for errors.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import fintrans, genpairs, relcalc
from .classify import (
    FilterOracle,
    InvalidParameters,
    PartitionSpec,
    RhoUndecidable,
    S_FAMILIES,
    in_A,
    in_F,
    in_S,
    in_U,
    rho,
)
from .core import Threshold, Tri
from .mapexpr import (
    AffinePeriodic,
    CantorProj,
    Compose,
    MapExpr,
    affine,
    certify,
    divfloor,
    identity,
    perm,
    shift_by,
    times,
)


class ParseError(ValueError):
    def __init__(self, message: str, position: int):
        self.position = position
        super().__init__(f"{message} at position {position}")


class ArityError(ValueError):
    pass


# ---------------------------------------------------------------------------
# expression grammar


class _Scanner:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str) -> None:
        if self.peek() != ch:
            raise ParseError(f"expected {ch!r}", self.pos)
        self.pos += 1

    def name(self) -> str:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and (
            self.text[self.pos].isalnum() or self.text[self.pos] == "_"
        ):
            self.pos += 1
        if start == self.pos:
            raise ParseError("expected a name", self.pos)
        return self.text[start : self.pos]

    def number(self) -> int:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            raise ParseError("expected a number", self.pos)
        return int(self.text[start : self.pos])

    def int_list(self) -> list[int]:
        self.expect("[")
        out = []
        if self.peek() != "]":
            out.append(self.number())
            while self.peek() == ",":
                self.expect(",")
                out.append(self.number())
        self.expect("]")
        return out


def _parse(scanner: _Scanner) -> MapExpr:
    name = scanner.name()
    if name == "cantor_proj":
        return CantorProj()
    if name == "id":
        return identity()
    if name == "affine":
        scanner.expect("(")
        n = scanner.number()
        scanner.expect(",")
        p = scanner.number()
        scanner.expect(",")
        s = scanner.number()
        scanner.expect(",")
        table = scanner.int_list()
        scanner.expect(")")
        if len(table) != n + p:
            raise ArityError(
                f"affine table needs {n + p} entries, got {len(table)}"
            )
        return affine(n, p, s, table)
    if name in ("shift", "times", "divfloor"):
        scanner.expect("(")
        k = scanner.number()
        scanner.expect(")")
        if name == "shift":
            return shift_by(k)
        if name == "times":
            return times(k)
        if k < 1:
            raise ArityError("divfloor needs k >= 1")
        return divfloor(k)
    if name == "perm":
        scanner.expect("(")
        images = scanner.int_list()
        scanner.expect(")")
        if sorted(images) != list(range(len(images))):
            raise ArityError("perm needs a permutation of 0..m-1")
        return perm(images)
    if name == "compose":
        scanner.expect("(")
        first = _parse(scanner)
        scanner.expect(",")
        second = _parse(scanner)
        scanner.expect(")")
        return Compose(first, second)
    raise ParseError(f"unknown expression head {name!r}", scanner.pos)


def parse_expr(text: str) -> MapExpr:
    """Parse the expression grammar: affine(N,p,s,[...]), cantor_proj,
    compose(e1,e2) and the sugar id, shift(k), times(k), divfloor(k),
    perm([...])."""
    scanner = _Scanner(text)
    e = _parse(scanner)
    scanner.skip_ws()
    if scanner.pos != len(scanner.text):
        raise ParseError("trailing input", scanner.pos)
    return e


def print_expr(e: MapExpr) -> str:
    if isinstance(e, CantorProj):
        return "cantor_proj"
    if isinstance(e, AffinePeriodic):
        table = ",".join(map(str, e.table))
        return f"affine({e.threshold},{e.period},{e.shift},[{table}])"
    return f"compose({print_expr(e.first)},{print_expr(e.second)})"


# ---------------------------------------------------------------------------
# command handlers, each returning (exit_code, payload)


def _parse_mu(text: str) -> Threshold:
    try:
        return Threshold(text)
    except ValueError:
        raise InvalidParameters(f"mu must be aleph0 or aleph0plus, got {text!r}")


def _parse_gamma(text: str) -> frozenset[int]:
    try:
        return frozenset(int(x) for x in text.split(",") if x != "")
    except ValueError:
        raise InvalidParameters(f"gamma must be a comma list of naturals: {text!r}")


def _verdict_result(v) -> tuple[int, dict]:
    return (2 if v.answer is Tri.UNKNOWN else 0), v.to_json()


def _cmd_certify(args) -> tuple[int, dict]:
    e = parse_expr(args.expr)
    cert = certify(e)
    out = cert.to_json()
    out["expr"] = print_expr(e)
    return 0, out


def _cmd_classify(args) -> tuple[int, dict]:
    e = parse_expr(args.expr)
    family = args.family
    if family in S_FAMILIES:
        return _verdict_result(in_S(family, certify(e)))
    if family in ("F1", "F2"):
        if not args.gamma:
            raise InvalidParameters("F families need --gamma")
        return _verdict_result(
            in_F(family, _parse_gamma(args.gamma), _parse_mu(args.mu), e)
        )
    if family in ("U1", "U2"):
        if args.filter == "frechet":
            oracle = FilterOracle.frechet()
        else:
            if not args.gamma:
                raise InvalidParameters("principal filters need --gamma")
            oracle = FilterOracle.principal(_parse_gamma(args.gamma))
        return _verdict_result(in_U(family, oracle, _parse_mu(args.mu), e))
    if family in ("A1", "A2"):
        return _verdict_result(in_A(family, PartitionSpec(args.n), e))
    raise InvalidParameters(f"unknown family {family!r}")


def _cmd_genpair(args) -> tuple[int, dict]:
    f = parse_expr(args.expr_f)
    g = parse_expr(args.expr_g)
    if args.context == "sym":
        decision = genpairs.decide_sym_pair(f, g)
    elif args.context == "stab":
        if not args.gamma:
            raise InvalidParameters("stab needs --gamma")
        decision = genpairs.decide_pointwise_stab_pair(_parse_gamma(args.gamma), f, g)
    elif args.context == "filter":
        if args.filter == "frechet":
            oracle = FilterOracle.frechet()
        else:
            if not args.gamma:
                raise InvalidParameters("principal filters need --gamma")
            oracle = FilterOracle.principal(_parse_gamma(args.gamma))
        decision = genpairs.decide_filter_pair(oracle, f, g)
    elif args.context == "partition":
        decision = genpairs.decide_partition_pair(PartitionSpec(args.n), f, g)
    else:
        raise InvalidParameters(f"unknown context {args.context!r}")
    code = 2 if decision.answer == genpairs.UNKNOWN else 0
    return code, decision.to_json()


def _cmd_rho(args) -> tuple[int, dict]:
    e = parse_expr(args.expr)
    rel = rho(e, PartitionSpec(args.n))
    return 0, {"n": args.n, "relation": str(rel)}


def _cmd_bfin(args) -> tuple[int, dict]:
    r = relcalc.parse_relation(args.rho, args.n)
    s = relcalc.parse_relation(args.sigma, args.n)
    word = (
        relcalc.bfin_witness(r, s)
        if args.algorithm == "bfs"
        else relcalc.bfin_greedy(r, s)
    )
    value = relcalc.evaluate_word(word, r, s)
    return 0, {
        "algorithm": args.algorithm,
        "word": word.to_json(),
        "evaluatesTo": str(value),
        "isFull": value.is_full,
    }


def _cmd_maxtn(args) -> tuple[int, dict]:
    reports = fintrans.maximal_subsemigroups_Tn(args.n)
    return 0, {
        "n": args.n,
        "count": len(reports),
        "reports": [r.to_json() for r in reports],
    }


def _selftest_cases() -> list[tuple[str, bool]]:
    from .core import ALEPH0, Card, CardInterval

    halve, double = divfloor(2), times(2)
    cantor = CantorProj()
    results = []
    cert = certify(double)
    results.append(("double certificate", cert.d.lo == ALEPH0 and cert.c.hi == Card(0)))
    results.append(
        ("sym pair decides", genpairs.decide_sym_pair(double, cantor).answer == "generates")
    )
    results.append(
        (
            "refusal witness",
            genpairs.decide_sym_pair(double, halve).witness.family == "S5",
        )
    )
    rel = relcalc.Relation.from_pairs(2, [(0, 0), (0, 1), (1, 0)])
    w = relcalc.bfin_witness(rel, rel)
    results.append(("bfin witness", relcalc.evaluate_word(w, rel, rel).is_full))
    results.append(
        ("T3 count", len(fintrans.maximal_subsemigroups_Tn(3)) == 5)
    )
    results.append(
        (
            "interval soundness probe",
            certify(Compose(cantor, double)).kinf.contains(ALEPH0),
        )
    )
    return results


def _cmd_selftest(args) -> tuple[int, dict]:
    cases = _selftest_cases()
    if args.suite == "full":
        cases.append(("T4 count", len(fintrans.maximal_subsemigroups_Tn(4)) == 9))
    ok = all(passed for _, passed in cases)
    return (0 if ok else 1), {
        "suite": args.suite,
        "results": [{"name": name, "pass": passed} for name, passed in cases],
        "ok": ok,
    }


# ---------------------------------------------------------------------------
# argument parsing and rendering


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="maxsemi",
        description="exact toolkit for maximal subsemigroups of self-maps of the naturals",
    )
    parser.add_argument("--pretty", action="store_true", help="human-readable output")
    parser.add_argument("--json", action="store_true", help="JSON output (default)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("certify", help="certificate of one expression")
    p.add_argument("expr")
    p.add_argument("--window", type=int, default=1000)
    p.set_defaults(handler=_cmd_certify)

    p = sub.add_parser("classify", help="family membership verdict")
    p.add_argument("family")
    p.add_argument("expr")
    p.add_argument("--gamma", default="")
    p.add_argument("--mu", default="aleph0plus")
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--filter", choices=["principal", "frechet"], default="principal")
    p.add_argument("--window", type=int, default=1000)
    p.set_defaults(handler=_cmd_classify)

    p = sub.add_parser("genpair", help="generating-pair decision")
    p.add_argument("context", choices=["sym", "stab", "filter", "partition"])
    p.add_argument("expr_f")
    p.add_argument("expr_g")
    p.add_argument("--gamma", default="")
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--filter", choices=["principal", "frechet"], default="principal")
    p.add_argument("--window", type=int, default=1000)
    p.set_defaults(handler=_cmd_genpair)

    p = sub.add_parser("rho", help="class transition relation of an expression")
    p.add_argument("expr")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(handler=_cmd_rho)

    p = sub.add_parser("bfin", help="full-relation witness word")
    p.add_argument("rho")
    p.add_argument("sigma")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--algorithm", choices=["bfs", "greedy"], default="bfs")
    p.set_defaults(handler=_cmd_bfin)

    p = sub.add_parser("maxtn", help="maximal subsemigroups of all maps on n points")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(handler=_cmd_maxtn)

    p = sub.add_parser("selftest", help="run the embedded consistency suite")
    p.add_argument("--suite", choices=["quick", "full"], default="quick")
    p.set_defaults(handler=_cmd_selftest)
    return parser


def _render_pretty(payload: dict, out) -> None:
    def walk(obj, indent=0):
        pad = " " * indent
        if isinstance(obj, dict):
            for k, v in obj.items():
                if isinstance(v, (dict, list)):
                    print(f"{pad}{k}:", file=out)
                    walk(v, indent + 2)
                else:
                    print(f"{pad}{k:<14} {v}", file=out)
        elif isinstance(obj, list):
            for v in obj:
                if isinstance(v, (dict, list)):
                    walk(v, indent + 2)
                    print(f"{pad}--", file=out)
                else:
                    print(f"{pad}{v}", file=out)

    walk(payload)


def main(argv: list[str] | None = None, out=None) -> int:
    out = out if out is not None else sys.stdout
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        code, payload = args.handler(args)
    except (
        ParseError,
        ArityError,
        InvalidParameters,
        RhoUndecidable,
        genpairs.UnsupportedFilter,
        relcalc.DimensionMismatch,
        relcalc.HypothesisViolated,
        fintrans.CompletenessFailure,
        ValueError,
    ) as exc:
        error = {"error": type(exc).__name__, "message": str(exc)}
        print(json.dumps(error, sort_keys=True), file=out)
        return 1
    if args.pretty:
        _render_pretty(payload, out)
    else:
        print(json.dumps(payload, sort_keys=True), file=out)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
