"""Line-oriented ``key=value`` report records.

Field order is fixed per record type so that two runs of the same scenario
differ only in the ``seconds`` field.
"""
from __future__ import annotations

from .market import fmt_types
from .mechanism import ManipulationVerdict, VerificationResult

def _pair(pair) -> str:
    return "-" if pair is None else f"i{pair[0] + 1}:j{pair[1] + 1}"


def _tau(tau) -> str:
    return ",".join(str(x) for x in tau.tau)


def format_record(rec: dict) -> str:
    return " ".join(f"{k}={v}" for k, v in rec.items())


def verdict_fields(v: ManipulationVerdict) -> dict:
    return {
        "w": fmt_types(v.w), "deviator": f"j{v.deviator + 1}", "misreport": f"t{v.misreport + 1}",
        "outcome": v.outcome.name.lower(), "matching": str(v.matching) if v.matching else "-",
        "blocking": _pair(v.pair),
    }


def verification_record(result: VerificationResult) -> dict:
    mech = result.mechanism
    rec = {
        "record": "verify", "mechanism": mech.name, "policy": result.policy.kind.value,
        "regime": mech.regime.value, "tau": _tau(mech.tau), "n": result.market.n,
        "L": result.market.L, "verdict": result.verdict, "states": result.states,
        "deviations": result.deviations, "induced": result.induced_states,
        "tie_cases": result.tie_cases, "tie_mismatches": result.tie_mismatches,
    }
    if result.witness is not None:
        rec.update(verdict_fields(result.witness))
    rec["seconds"] = f"{result.seconds:.3f}"
    return rec


def case_record(v: ManipulationVerdict, mech, policy, L: int) -> dict:
    rec = {"record": "case", "mechanism": mech.name, "policy": policy.kind.value,
           "regime": mech.regime.value, "n": len(v.w), "L": L}
    rec.update(verdict_fields(v))
    return rec


def two_sided_record(v, S: int, L: int) -> dict:
    who = f"{'i' if v.side == 'firm' else 'j'}{v.agent + 1}"
    rep = f"s{v.report + 1}" if v.side == "firm" else f"t{v.report + 1}"
    return {
        "record": "two_sided", "n": len(v.g.w), "S": S, "L": L,
        "f": ",".join(f"s{x + 1}" for x in v.g.f), "w": fmt_types(v.g.w), "deviator": who,
        "misreport": rep, "outcome": v.outcome.name.lower(),
        "matching": str(v.matching) if v.matching else "-", "blocking": _pair(v.pair),
    }
