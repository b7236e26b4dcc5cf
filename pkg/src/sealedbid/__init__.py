"""Sealed-bid auctions on an integer tick lattice.

An executable model of single-good sealed-bid auctions with exchangeable
payment rules and tie-break policies, a bounded-exhaustive verifier that
checks truthful bidding is weakly dominant under the second-price rule
(with case coverage so a pass cannot be vacuous), a counterexample search
that pins the smallest profitable deviation under mutated rules, and a
deterministic Monte Carlo harness for comparing rules and strategies.
"""

from .core import (
    AuctionInstance,
    BidderId,
    BidProfile,
    BudgetExceededError,
    ExplicitChoice,
    FirstIndex,
    InvalidInstanceError,
    LastIndex,
    Money,
    Outcome,
    PaymentRule,
    Seeded,
    SignedMoney,
    TieBreakPolicy,
    ValuationProfile,
    argmax_set,
    bidder_utility,
    max_bid,
    max_excluding,
    outcome,
    policy_from_dict,
    profile_utility,
    select_winner,
    standard_policies,
    validate,
)
from .verify import (
    DEFAULT_BUDGET,
    CaseCoverage,
    CaseTag,
    Counterexample,
    DeviationCheckResult,
    VerificationReport,
    assert_case,
    check_dominance,
    check_truthfulness,
    classify_case,
    coverage_guard,
    critical_deviations,
    deviation_profile,
    dominance_sweep,
    efficiency_check,
    find_counterexample,
)
from .simulate import (
    ExperimentConfig,
    Overbid,
    PairedReport,
    RoundRecord,
    Shade,
    SimReport,
    Strategy,
    Truthful,
    apply_strategy,
    compare_rules,
    run_experiment,
    sample_valuations,
    strategy_from_dict,
    write_rounds_csv,
)
from .seeding import mix64, splitmix64

__all__ = [
    "AuctionInstance",
    "BidProfile",
    "BidderId",
    "BudgetExceededError",
    "CaseCoverage",
    "CaseTag",
    "Counterexample",
    "DEFAULT_BUDGET",
    "DeviationCheckResult",
    "ExperimentConfig",
    "ExplicitChoice",
    "FirstIndex",
    "InvalidInstanceError",
    "LastIndex",
    "Money",
    "Outcome",
    "Overbid",
    "PairedReport",
    "PaymentRule",
    "RoundRecord",
    "Seeded",
    "Shade",
    "SignedMoney",
    "SimReport",
    "Strategy",
    "TieBreakPolicy",
    "Truthful",
    "ValuationProfile",
    "VerificationReport",
    "apply_strategy",
    "argmax_set",
    "assert_case",
    "bidder_utility",
    "check_dominance",
    "check_truthfulness",
    "classify_case",
    "compare_rules",
    "coverage_guard",
    "critical_deviations",
    "deviation_profile",
    "dominance_sweep",
    "efficiency_check",
    "find_counterexample",
    "max_bid",
    "max_excluding",
    "mix64",
    "outcome",
    "policy_from_dict",
    "profile_utility",
    "run_experiment",
    "sample_valuations",
    "select_winner",
    "splitmix64",
    "standard_policies",
    "strategy_from_dict",
    "validate",
    "write_rounds_csv",
]
