"""Assortative matching under one-sided incomplete information: mechanisms,
belief updating, blocking, and exhaustive incentive-compatibility checks."""
from .market import (DomainError, FirmRoster, Regime, ReportProfile, TieBreak, TypeSpace,
                     enumerate_assignments, position, substitute, universe)
from .matching import (ExpandedTypeSpace, Matching, assortative_match, augment_reports,
                       expand_assignment, is_assortative_at)
from .rules import Announcer, Market, MechanismSpec, announce, infer_reports
from .information import (ConfigurationError, InfoPolicy, InformationSet, PolicyKind,
                          build_information_set, check_assumption_nt, consistency_set,
                          payoff_relevant_set)
from .stability import (MatchingState, blocks, is_individually_rational, is_stable,
                        minimal_state, prop1_characterization)
from .mechanism import (ManipulationVerdict, Outcome, VerificationResult, Verifier,
                        evaluate_misreport, pk_report, swap_k, verify_ic, verify_lower_contour)
from .twosided import (GeneralAssignment, TwoSidedReport, evaluate_two_sided, two_sided_blocks,
                       two_sided_match, verify_example6, verify_two_sided)
from .scenario import Scenario, ScenarioError, load_scenario, parse_scenario

__version__ = "0.1.0"
