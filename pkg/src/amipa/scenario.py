"""Scenario files: ``key = value`` lines with ``#`` comments.

Example::

    n = 3
    L = 5
    mechanism = informative_public
    policy = rationalizable
    regime = injective
    expect = certified
"""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from .information import ConfigurationError, InfoPolicy, PolicyKind
from .market import DomainError, Regime, TieBreak, parse_agent, parse_type
from .rules import Announcer, Market

OUTCOME_WORDS = ("certified", "refuted", "successful", "blocked", "not_improving", "invalid")
KINDS = ("one_sided", "two_sided")
ALIASES = {"amipa": "informative_public", "lower": "lower_contour", "triangle": "matched_report",
           "none": "empty"}


class ScenarioError(ConfigurationError):
    def __init__(self, message: str, line: int | None = None, key: str | None = None,
                 source: str = "<scenario>"):
        where = source + (f":{line}" if line is not None else "")
        if key is not None:
            where += f" [{key}]"
        super().__init__(f"{where}: {message}")
        self.line, self.key = line, key


@dataclass(frozen=True)
class Expectation:
    word: str
    pair: tuple | None = None

    @classmethod
    def parse(cls, text: str) -> "Expectation":
        parts = text.split()
        word = parts[0].lower()
        if word not in OUTCOME_WORDS:
            raise ValueError(f"expect must start with one of {', '.join(OUTCOME_WORDS)}")
        pair = None
        if len(parts) > 1:
            if word != "blocked" or len(parts) != 2 or ":" not in parts[1]:
                raise ValueError("only 'blocked iK:jM' takes a pair")
            a, b = parts[1].split(":")
            pair = (parse_agent(a, "i"), parse_agent(b, "j"))
        return cls(word, pair)

    def __str__(self) -> str:
        if self.pair is None:
            return self.word
        return f"{self.word} i{self.pair[0] + 1}:j{self.pair[1] + 1}"


@dataclass
class Scenario:
    n: int
    L: int
    mechanism: Announcer = Announcer.INFORMATIVE_PUBLIC
    regime: Regime = Regime.INJECTIVE
    policy: InfoPolicy = field(default_factory=InfoPolicy.rationalizable)
    tie_break: TieBreak | None = None
    kind: str = "one_sided"
    assignment: tuple | None = None
    deviator: int | None = None
    deviator_side: str = "worker"
    misreport: int | None = None
    expect: Expectation | None = None
    quantify_over_positions: bool = False
    S: int | None = None
    firm_assignment: tuple | None = None

    @property
    def market(self) -> Market:
        return Market(self.n, self.L)

    @property
    def tau(self) -> TieBreak:
        return self.tie_break or TieBreak.identity(self.n)

    @property
    def single_case(self) -> bool:
        return self.assignment is not None


def _split_list(value: str) -> list[str]:
    return [x for x in value.replace(",", " ").split() if x]


def _bool(value: str) -> bool:
    v = value.lower()
    if v in ("true", "yes", "1", "on"):
        return True
    if v in ("false", "no", "0", "off"):
        return False
    raise ValueError(f"expected a boolean, got {value!r}")


def _firm_type(token: str) -> int:
    token = token.strip()
    if not token.startswith("s") or not token[1:].isdigit() or int(token[1:]) < 1:
        raise DomainError(f"bad firm type token {token!r}; expected s1, s2, ...")
    return int(token[1:]) - 1


def parse_scenario(text: str, source: str = "<scenario>") -> Scenario:
    raw: dict[str, tuple[str, int]] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise ScenarioError("expected 'key = value'", lineno, None, source)
        key, value = (s.strip() for s in body.split("=", 1))
        if not key:
            raise ScenarioError("empty key", lineno, None, source)
        if key in raw:
            raise ScenarioError("duplicate key", lineno, key, source)
        raw[key] = (value, lineno)

    def fail(msg, key):
        line = raw[key][1] if key in raw else None
        raise ScenarioError(msg, line, key, source)

    kw: dict = {}
    script: dict[int, str] = {}
    for key, (value, lineno) in raw.items():
        try:
            if key in ("n", "L", "S"):
                kw[key] = int(value)
            elif key == "mechanism":
                kw["mechanism"] = Announcer(ALIASES.get(value.lower(), value.lower()))
            elif key == "regime":
                kw["regime"] = Regime(value.lower())
            elif key == "policy":
                kw["policy_kind"] = PolicyKind(value.lower())
            elif key == "tie_break":
                kw["tie_break"] = TieBreak(tuple(int(x) for x in _split_list(value)))
            elif key == "kind":
                if value not in KINDS:
                    raise ValueError(f"kind must be one of {', '.join(KINDS)}")
                kw["kind"] = value
            elif key.startswith("pathological."):
                script[parse_agent(key.split(".", 1)[1], "i")] = value
            elif key == "assignment":
                kw["assignment"] = tuple(parse_type(x) for x in _split_list(value))
            elif key == "firm_assignment":
                kw["firm_assignment"] = tuple(_firm_type(x) for x in _split_list(value))
            elif key == "deviator":
                side = "firm" if value.strip().startswith("i") else "worker"
                kw["deviator_side"] = side
                kw["deviator"] = parse_agent(value, "i" if side == "firm" else "j")
            elif key == "misreport":
                kw["misreport_token"] = value
            elif key == "expect":
                kw["expect"] = Expectation.parse(value)
            elif key == "quantify_over_positions":
                kw["quantify_over_positions"] = _bool(value)
            else:
                raise ScenarioError("unknown key", lineno, key, source)
        except ScenarioError:
            raise
        except (ValueError, DomainError) as exc:
            raise ScenarioError(str(exc), lineno, key, source) from None

    for key in ("n", "L"):
        if key not in kw:
            raise ScenarioError("missing required key", None, key, source)
    n, L = kw["n"], kw["L"]
    try:
        Market(n, L)
    except DomainError as exc:
        fail(str(exc), "L")

    kind = kw.pop("policy_kind", PolicyKind.RATIONALIZABLE)
    if kind is PolicyKind.PATHOLOGICAL:
        missing = [i for i in range(n) if i not in script]
        if missing:
            fail(f"pathological policy needs pathological.i{missing[0] + 1}", "policy")
        try:
            kw["policy"] = InfoPolicy.pathological(script)
        except ConfigurationError as exc:
            fail(str(exc), "policy")
    elif script:
        fail("pathological.* keys given without policy = pathological", "policy")
    else:
        kw["policy"] = InfoPolicy(kind)

    if "tie_break" in kw and len(kw["tie_break"].tau) != n:
        fail(f"tie-break has {len(kw['tie_break'].tau)} entries for n={n}", "tie_break")

    token = kw.pop("misreport_token", None)
    if token is not None:
        try:
            kw["misreport"] = (_firm_type(token) if kw.get("deviator_side") == "firm"
                               else parse_type(token))
        except DomainError as exc:
            fail(str(exc), "misreport")

    single = [k for k in ("assignment", "deviator", "misreport") if k in kw]
    if single and len(single) != 3:
        absent = next(k for k in ("assignment", "deviator", "misreport") if k not in kw)
        raise ScenarioError("single-case runs need assignment, deviator and misreport",
                            None, absent, source)
    if "assignment" in kw:
        w = kw["assignment"]
        if len(w) != n:
            fail(f"assignment has {len(w)} entries for n={n}", "assignment")
        if len(set(w)) != n or max(w) >= L:
            fail(f"assignment must be distinct types among t1..t{L}", "assignment")
        if kw["deviator"] >= n:
            fail(f"no such agent for n={n}", "deviator")
        if kw.get("deviator_side") != "firm" and kw["misreport"] >= L:
            fail(f"misreport outside t1..t{L}", "misreport")

    if kw.get("kind") == "two_sided":
        if "S" not in kw:
            fail("two-sided scenarios need S", "kind")
        if kw["S"] <= n:
            fail(f"need S > n (got S={kw['S']})", "S")
        if "assignment" in kw:
            f = kw.get("firm_assignment")
            if f is None:
                fail("two-sided single case needs firm_assignment", "assignment")
            if len(f) != n or len(set(f)) != n or max(f) >= kw["S"]:
                fail(f"firm_assignment must be {n} distinct types among s1..s{kw['S']}",
                     "firm_assignment")
    elif kw.get("deviator_side") == "firm":
        fail("firms report only in two-sided scenarios", "deviator")

    exp = kw.get("expect")
    if exp is not None:
        verify_words = {"certified", "refuted"}
        if ("assignment" in kw) == (exp.word in verify_words):
            fail("single cases expect an outcome; sweeps expect certified or refuted", "expect")
    return Scenario(**kw)


def load_scenario(path: str | Path) -> Scenario:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ScenarioError(f"cannot read file: {exc.strerror}", None, None, str(path)) from None
    return parse_scenario(text, str(path))
