"""Hard-coded worked examples with their expected conclusions.

Concrete assignments use the smallest type scale that leaves room for the
required misreports; only the order of types matters.
"""
from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field

from .information import InfoPolicy, build_information_set, check_assumption_nt
from .market import fmt_types, position, universe
from .matching import Matching
from .mechanism import Outcome, evaluate_misreport, swap_k, verify_ic
from .report import case_record, two_sided_record, verification_record
from .rules import Announcer, Market, MechanismSpec
from .stability import is_stable, minimal_state, prop1_characterization
from .twosided import verify_example6


@dataclass
class CaseResult:
    case: str
    ok: bool
    records: list = field(default_factory=list)
    seconds: float = 0.0

    def summary(self) -> dict:
        return {"record": "reproduce", "case": self.case, "status": "match" if self.ok else "mismatch",
                "seconds": f"{self.seconds:.3f}"}


def _amipa(n: int) -> MechanismSpec:
    return MechanismSpec.make(Announcer.INFORMATIVE_PUBLIC, n)


def ex1() -> tuple[bool, list]:
    mech = MechanismSpec.make(Announcer.EMPTY, 3)
    policy = InfoPolicy.minimal()
    res = verify_ic(mech, policy, Market(3, 4))
    v = evaluate_misreport(mech, policy, (1, 2, 3), 1, 0, 4)
    wit = res.witness
    ok = (not res.certified and position(wit.w, wit.deviator) == 2
          and swap_k(wit.w, wit.deviator, wit.misreport) == 1
          and all(wit.misreport < x for k, x in enumerate(wit.w) if k != wit.deviator)
          and v.outcome is Outcome.SUCCESSFUL)
    return ok, [verification_record(res), case_record(v, mech, policy, 4)]


def ex2() -> tuple[bool, list]:
    mech, policy = _amipa(3), InfoPolicy.rationalizable()
    v = evaluate_misreport(mech, policy, (1, 2, 3), 1, 0, 4)
    return v.outcome is Outcome.BLOCKED and v.pair == (0, 0), [case_record(v, mech, policy, 4)]


def ex3() -> tuple[bool, list]:
    mech = _amipa(2)
    policy = InfoPolicy.pathological({0: "partner_top", 1: "consistency"})
    market = Market(2, 4)
    v = evaluate_misreport(mech, policy, (1, 2), 1, 0, 4)
    holds, where = check_assumption_nt(policy, mech, market)
    rec = {"record": "assumption_nt", "holds": str(holds).lower()}
    if where is not None:
        w, r, i = where
        rec.update({"w": fmt_types(w), "reports": fmt_types(r), "firm": f"i{i + 1}"})
    ok = v.outcome is Outcome.SUCCESSFUL and not holds
    return ok, [case_record(v, mech, policy, 4), rec]


EX4_CASES = (
    # (deviator, report, expected blocking pair)
    (1, 0, (0, 0)),  # second-ranked worker above the top
    (2, 2, (1, 1)),  # third-ranked worker between the top two
    (2, 0, (0, 0)),  # third-ranked worker above the top
)


def ex4() -> tuple[bool, list]:
    mech, policy, L = _amipa(3), InfoPolicy.rationalizable(), 7
    w = (1, 3, 5)
    ok, records = True, []
    for j, t, pair in EX4_CASES:
        v = evaluate_misreport(mech, policy, w, j, t, L)
        ok &= v.outcome is Outcome.BLOCKED and v.pair == pair
        records.append(case_record(v, mech, policy, L))
    return ok, records


def prop1() -> tuple[bool, list]:
    records, ok = [], True
    for n in (2, 3):
        for L in (n + 1, n + 2):
            checked = mismatches = 0
            for w in universe(n, L).assignments:
                for perm in itertools.permutations(range(n)):
                    mu = Matching(perm, n)
                    checked += 1
                    mismatches += is_stable(minimal_state(w, mu, L))[0] != prop1_characterization(w, mu, L)
            ok &= mismatches == 0
            records.append({"record": "prop1", "n": n, "L": L, "pairs": checked,
                            "mismatches": mismatches})
    return ok, records


MATCHED_REPORT_WITNESS = ((1, 3, 4), 1, 0)
MATCHED_REPORT_CONFOUND = (4, 3, 2)


def prop3() -> tuple[bool, list]:
    mech = MechanismSpec.make(Announcer.MATCHED_REPORT, 3)
    policy, market = InfoPolicy.rationalizable(), Market(3, 7)
    res = verify_ic(mech, policy, market)
    w, j, t = MATCHED_REPORT_WITNESS
    v = evaluate_misreport(mech, policy, w, j, t, market.L)
    r = tuple(t if k == j else x for k, x in enumerate(w))
    info = build_information_set(policy, mech, market, w, r, 0, res.table)
    confound = MATCHED_REPORT_CONFOUND in info
    ok = not res.certified and v.outcome is Outcome.SUCCESSFUL and confound
    return ok, [verification_record(res), case_record(v, mech, policy, market.L),
                {"record": "confound", "firm": "i1", "w": fmt_types(MATCHED_REPORT_CONFOUND),
                 "present": str(confound).lower(), "candidates": len(info)}]


def ex6() -> tuple[bool, list]:
    v = verify_example6()
    collapsed = verify_example6(collapse_worker_view=True)
    ok = v.outcome is Outcome.SUCCESSFUL and collapsed.outcome is Outcome.BLOCKED and collapsed.pair == (0, 0)
    return ok, [two_sided_record(v, 4, 4), two_sided_record(collapsed, 4, 4)]


CASES = {"ex1": ex1, "ex2": ex2, "ex3": ex3, "ex4": ex4, "prop1": prop1, "prop3": prop3, "ex6": ex6}


def reproduce(case: str) -> CaseResult:
    if case not in CASES:
        raise KeyError(case)
    start = time.perf_counter()
    ok, records = CASES[case]()
    return CaseResult(case, bool(ok), records, time.perf_counter() - start)
