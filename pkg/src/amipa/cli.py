"""Command line: scenario runs, worked-example reproduction and sweeps.

Exit codes: 0 certified or expectation met, 1 refuted or expectation missed,
2 configuration error.
"""
from __future__ import annotations

import argparse
import sys
from concurrent.futures import ProcessPoolExecutor

from .cases import CASES, reproduce
from .information import ConfigurationError, InfoPolicy, PolicyKind
from .market import DomainError, Regime, TieBreak
from .mechanism import Outcome, evaluate_misreport, verify_ic
from .report import case_record, format_record, two_sided_record, verification_record
from .rules import Announcer, Market, MechanismSpec
from .scenario import ALIASES, Scenario, ScenarioError, load_scenario
from .twosided import GeneralAssignment, evaluate_two_sided, verify_two_sided

MAX_N, MAX_L = 5, 8
EXIT_OK, EXIT_REFUTED, EXIT_CONFIG = 0, 1, 2


def _emit(rec: dict, out) -> None:
    print(format_record(rec), file=out)


def _code(observed: str, pair, sc: Scenario, refuted: bool) -> int:
    if sc.expect is None:
        return EXIT_REFUTED if refuted else EXIT_OK
    if observed != sc.expect.word:
        return EXIT_REFUTED
    if sc.expect.pair is not None and pair != sc.expect.pair:
        return EXIT_REFUTED
    return EXIT_OK


def run_scenario(sc: Scenario) -> tuple[list, int]:
    """Records and exit code for one scenario."""
    if sc.kind == "two_sided":
        return _run_two_sided(sc)
    mech = MechanismSpec(sc.mechanism, sc.tau, sc.regime)
    if sc.single_case:
        v = evaluate_misreport(mech, sc.policy, sc.assignment, sc.deviator, sc.misreport, sc.L)
        rec = case_record(v, mech, sc.policy, sc.L)
        refuted = v.outcome is Outcome.SUCCESSFUL
        return [rec], _code(v.outcome.name.lower(), v.pair, sc, refuted)
    res = verify_ic(mech, sc.policy, sc.market, sc.quantify_over_positions)
    rec = verification_record(res)
    pair = res.witness.pair if res.witness else None
    return [rec], _code(res.verdict, pair, sc, not res.certified)


def _run_two_sided(sc: Scenario) -> tuple[list, int]:
    if sc.single_case:
        g = GeneralAssignment(sc.firm_assignment, sc.assignment)
        v = evaluate_two_sided(g, sc.deviator_side, sc.deviator, sc.misreport, sc.S, sc.L)
        refuted = v.outcome is Outcome.SUCCESSFUL
        return [two_sided_record(v, sc.S, sc.L)], _code(v.outcome.name.lower(), v.pair, sc, refuted)
    wit = verify_two_sided(sc.n, sc.S, sc.L)
    rec = {"record": "two_sided_verify", "n": sc.n, "S": sc.S, "L": sc.L,
           "verdict": "certified" if wit is None else "refuted"}
    records = [rec] + ([two_sided_record(wit, sc.S, sc.L)] if wit else [])
    return records, _code(rec["verdict"], None, sc, wit is not None)


def _sweep_cell(args) -> dict:
    n, L, mechanism, policy_kind, regime, quantify, reverse = args
    tau = TieBreak.reversal(n) if reverse else TieBreak.identity(n)
    mech = MechanismSpec.make(mechanism, n, regime, tau)
    res = verify_ic(mech, InfoPolicy(policy_kind), Market(n, L), quantify)
    rec = verification_record(res)
    rec["record"] = "sweep"
    return rec


def sweep(ns, Ls, mechanisms, policy_kind=PolicyKind.RATIONALIZABLE, regime=Regime.INJECTIVE,
          quantify=False, jobs: int = 1, reverse_tau: bool = False) -> list:
    cells = [(n, L, m, policy_kind, regime, quantify, reverse_tau)
             for n in ns for L in Ls if L > n for m in mechanisms]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_sweep_cell, cells))
    return [_sweep_cell(c) for c in cells]


def _mechanism(text: str) -> Announcer:
    return Announcer(ALIASES.get(text.lower(), text.lower()))


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="amipa", description=__doc__.splitlines()[0])
    mode = p.add_mutually_exclusive_group(required=True)
    mode.add_argument("--scenario", metavar="PATH", help="run a key = value scenario file")
    mode.add_argument("--reproduce", metavar="ID", help=f"one of {', '.join(CASES)} or all")
    mode.add_argument("--sweep", action="store_true", help="verify every (n, L, mechanism) cell")
    p.add_argument("--min-n", type=int, default=2)
    p.add_argument("--max-n", type=int, default=3)
    p.add_argument("--min-l", type=int, default=None, help="default n + 1")
    p.add_argument("--max-l", type=int, default=5)
    p.add_argument("--mechanism", action="append", default=None,
                   help="repeatable; default informative_public and lower_contour")
    p.add_argument("--policy", default="rationalizable",
                   choices=[k.value for k in PolicyKind if k is not PolicyKind.PATHOLOGICAL])
    p.add_argument("--regime", default="injective", choices=[r.value for r in Regime])
    p.add_argument("--tie-break", default="identity", choices=["identity", "reversal"])
    p.add_argument("--quantify-over-positions", action="store_true",
                   help="count a success only if the same worker, type and report is never blocked")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--allow-large", action="store_true",
                   help=f"lift the n <= {MAX_N}, L <= {MAX_L} guardrail")
    return p


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        if args.scenario:
            sc = load_scenario(args.scenario)
            if args.quantify_over_positions:
                sc.quantify_over_positions = True
            if not args.allow_large and (sc.n > MAX_N or sc.L > MAX_L):
                raise ConfigurationError(f"n={sc.n}, L={sc.L} exceeds the guardrail; use --allow-large")
            records, code = run_scenario(sc)
            for rec in records:
                _emit(rec, out)
            if sc.expect is not None:
                _emit({"record": "expect", "wanted": str(sc.expect),
                       "status": "match" if code == EXIT_OK else "mismatch"}, out)
            return code
        if args.reproduce:
            ids = list(CASES) if args.reproduce == "all" else [args.reproduce]
            if any(i not in CASES for i in ids):
                raise ConfigurationError(f"unknown example id {args.reproduce!r}; "
                                         f"expected one of {', '.join(CASES)} or all")
            code = EXIT_OK
            for case in ids:
                result = reproduce(case)
                for rec in result.records:
                    _emit(rec, out)
                _emit(result.summary(), out)
                code = max(code, EXIT_OK if result.ok else EXIT_REFUTED)
            return code
        min_l = args.min_l if args.min_l is not None else args.min_n + 1
        if not args.allow_large and (args.max_n > MAX_N or args.max_l > MAX_L):
            raise ConfigurationError(
                f"sweep up to n={args.max_n}, L={args.max_l} exceeds n <= {MAX_N}, L <= {MAX_L}; "
                "use --allow-large")
        if args.min_n < 1 or args.max_n < args.min_n or args.max_l < min_l:
            raise ConfigurationError("empty or invalid sweep range")
        mechanisms = [_mechanism(m) for m in (args.mechanism or ["informative_public", "lower_contour"])]
        rows = sweep(range(args.min_n, args.max_n + 1), range(min_l, args.max_l + 1), mechanisms,
                     PolicyKind(args.policy), Regime(args.regime), args.quantify_over_positions,
                     args.jobs, args.tie_break == "reversal")
        for rec in rows:
            _emit(rec, out)
        return EXIT_OK
    except (ScenarioError, ConfigurationError, DomainError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
