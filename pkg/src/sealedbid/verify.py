"""Bounded exhaustive verification of truthful bidding.

The executable claim: under the second-price rule, bidding one's own
valuation is weakly dominant.  For each bidder the checker compares the
truthful bid against deviation bids over every opposing-bid vector
within a tick bound, under every supplied tie-break policy and under an
adversarial pairing that gives the tie-break maximal power to punish
truthfulness.  Every comparison is classified into one of four cases by
the bidder's win/lose status before and after the deviation, and each
case carries its own exact assertion.

Two guards keep the sweep honest.  Case coverage counts witnesses per
case and flags a sweep as vacuous when any case never occurred, so a
check cannot "pass" merely because its hypotheses were unsatisfiable.
And ``find_counterexample`` demonstrates that the machinery can falsify:
pointed at the first-price rule it returns the smallest failing instance.

All quantities are exact integers; a reported verdict never depends on
tolerance, traversal order, or parallel partitioning.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from itertools import product
from typing import Iterable, Sequence, Union

from .core import (
    AuctionInstance,
    BidderId,
    BidProfile,
    BudgetExceededError,
    InvalidInstanceError,
    Money,
    PaymentRule,
    SignedMoney,
    TieBreakPolicy,
    ValuationProfile,
    max_excluding,
    outcome,
    select_winner,
    standard_policies,
    validate,
)

DEFAULT_BUDGET = 10**7

DeviationSpec = Union[str, Iterable[Money]]


class CaseTag(Enum):
    """Win/lose status of the bidder under the original then deviated bids."""

    WIN_WIN = "win-win"
    LOSE_LOSE = "lose-lose"
    LOSE_WIN = "lose-win"
    WIN_LOSE = "win-lose"

    @property
    def won_original(self) -> bool:
        return self in (CaseTag.WIN_WIN, CaseTag.WIN_LOSE)

    @property
    def won_deviation(self) -> bool:
        return self in (CaseTag.WIN_WIN, CaseTag.LOSE_WIN)


def _case_of(won_original: bool, won_deviation: bool) -> CaseTag:
    if won_original:
        return CaseTag.WIN_WIN if won_deviation else CaseTag.WIN_LOSE
    return CaseTag.LOSE_WIN if won_deviation else CaseTag.LOSE_LOSE


@dataclass(frozen=True)
class DeviationCheckResult:
    """One truthful-vs-deviation comparison for one bidder."""

    bidder: BidderId
    truthful_bid: Money
    deviation_bid: Money
    truthful_utility: SignedMoney
    deviation_utility: SignedMoney
    case: CaseTag
    passed: bool
    pairing: str  # tie-break policy label, or the adversarial pairing label


@dataclass(frozen=True)
class Counterexample:
    """A recorded profitable deviation: evidence that a mechanism is not
    truthful.  ``bids`` is the truthful profile the deviation departs from."""

    valuations: ValuationProfile
    bids: BidProfile
    bidder: BidderId
    deviation_bid: Money
    policy: str
    truthful_utility: SignedMoney
    deviation_utility: SignedMoney

    def to_dict(self) -> dict:
        return {
            "valuations": list(self.valuations),
            "bids": list(self.bids),
            "bidder": self.bidder,
            "deviation_bid": self.deviation_bid,
            "policy": self.policy,
            "truthful_utility": self.truthful_utility,
            "deviation_utility": self.deviation_utility,
        }


@dataclass(frozen=True)
class CaseCoverage:
    """Witness counts per case; vacuous when any case never occurred."""

    counts: dict

    @classmethod
    def tally(cls, tags: Iterable[CaseTag]) -> "CaseCoverage":
        counts = {tag: 0 for tag in CaseTag}
        for tag in tags:
            counts[tag] += 1
        return cls(counts)

    @property
    def vacuous(self) -> bool:
        return any(self.counts[tag] == 0 for tag in CaseTag)

    def to_dict(self) -> dict:
        return {tag.value: self.counts[tag] for tag in CaseTag}


@dataclass(frozen=True)
class VerificationReport:
    """Aggregate verdict of a sweep, with coverage and the minimal failure."""

    pass_count: int
    fail_count: int
    coverage: CaseCoverage
    counterexample: "Counterexample | None"

    @property
    def evaluated(self) -> int:
        return self.pass_count + self.fail_count

    @property
    def passed(self) -> bool:
        return self.fail_count == 0

    def to_doc(self) -> dict:
        doc = {
            "verdict": "pass" if self.passed else "fail",
            "evaluated_count": self.evaluated,
            "case_counts": self.coverage.to_dict(),
            "vacuous": self.coverage.vacuous,
        }
        if self.counterexample is not None:
            doc["counterexample"] = self.counterexample.to_dict()
        return doc


def deviation_profile(bids: Sequence[Money], bidder: BidderId, new_bid: Money) -> BidProfile:
    """The profile equal to ``bids`` except that ``bidder`` bids ``new_bid``."""
    bids = tuple(bids)
    if not 0 <= bidder < len(bids):
        raise ValueError(f"bidder index {bidder} out of range for N={len(bids)}")
    return bids[:bidder] + (new_bid,) + bids[bidder + 1:]


def classify_case(
    bids: Sequence[Money],
    deviated: Sequence[Money],
    bidder: BidderId,
    policy: TieBreakPolicy,
    deviation_policy: "TieBreakPolicy | None" = None,
) -> CaseTag:
    """Classify a deviation pair by the bidder's win/lose status.

    The profiles may differ only at ``bidder``'s coordinate.  By default
    the same policy evaluates both profiles; a second policy may be given
    to classify a mixed pairing.
    """
    bids = tuple(bids)
    deviated = tuple(deviated)
    if len(bids) != len(deviated):
        raise ValueError("profiles differ in length")
    for j, (a, b) in enumerate(zip(bids, deviated)):
        if j != bidder and a != b:
            raise ValueError(f"profiles differ at index {j}, not only at bidder {bidder}")
    if deviation_policy is None:
        deviation_policy = policy
    return _case_of(
        select_winner(bids, policy) == bidder,
        select_winner(deviated, deviation_policy) == bidder,
    )


def assert_case(case: CaseTag, result: DeviationCheckResult) -> "str | None":
    """Check the exact per-case inequality for a truthful comparison.

    Assumes the original bid was truthful and the payment rule was
    second-price.  Returns None when the case's contract holds, otherwise
    a description of the violated clause.
    """
    u_truth = result.truthful_utility
    u_dev = result.deviation_utility
    if case in (CaseTag.WIN_WIN, CaseTag.LOSE_LOSE):
        if u_truth != u_dev:
            return (
                f"{case.value}: utilities must be equal "
                f"(truthful {u_truth} vs deviation {u_dev})"
            )
        return None
    if case is CaseTag.WIN_LOSE:
        if u_dev != 0:
            return f"win-lose: deviation utility must be zero (got {u_dev})"
        if u_truth < 0:
            return f"win-lose: truthful utility must be nonnegative (got {u_truth})"
        return None
    # LOSE_WIN: bidder only wins by outbidding a price at or above its value.
    if u_truth != 0:
        return f"lose-win: truthful utility must be zero (got {u_truth})"
    if u_dev > 0:
        return f"lose-win: deviation utility must be nonpositive (got {u_dev})"
    return None


def critical_deviations(bids: Sequence[Money], bidder: BidderId) -> tuple[Money, ...]:
    """A finite deviation set sufficient to decide truthfulness.

    Let M be the highest opposing bid.  Any deviation below M loses
    outright, any deviation above M wins outright, and a deviation of
    exactly M ties; under the second-price rule the utility of a winning
    deviation is value - M regardless of the bid.  So one representative
    per class decides the verdict: {0 (when M > 0), M, M + 1}.
    """
    top = max_excluding(bids, bidder)
    members = {top, top + 1}
    if top > 0:
        members.add(0)
    return tuple(sorted(members))


def _evaluate(
    v_i: Money,
    truthful_bids: BidProfile,
    bidder: BidderId,
    new_bid: Money,
    policy: TieBreakPolicy,
    rule: PaymentRule,
) -> DeviationCheckResult:
    deviated = deviation_profile(truthful_bids, bidder, new_bid)
    o_truth = outcome(truthful_bids, policy, rule)
    o_dev = outcome(deviated, policy, rule)
    u_truth = v_i - o_truth.price if o_truth.winner == bidder else 0
    u_dev = v_i - o_dev.price if o_dev.winner == bidder else 0
    return DeviationCheckResult(
        bidder=bidder,
        truthful_bid=truthful_bids[bidder],
        deviation_bid=new_bid,
        truthful_utility=u_truth,
        deviation_utility=u_dev,
        case=_case_of(o_truth.winner == bidder, o_dev.winner == bidder),
        passed=u_truth >= u_dev,
        pairing=policy.describe(),
    )


def _adversarial(per_policy: Sequence[DeviationCheckResult]) -> DeviationCheckResult:
    # The tie-break abstraction permits any argmax-respecting choice, so the
    # strongest reading lets it differ between the two evaluations: take the
    # policy minimizing the truthful utility against the one maximizing the
    # deviation utility.  min/max keep the first extremal row, so the pairing
    # label is deterministic for a fixed policy order.
    worst_truth = min(per_policy, key=lambda r: r.truthful_utility)
    best_dev = max(per_policy, key=lambda r: r.deviation_utility)
    sample = per_policy[0]
    return DeviationCheckResult(
        bidder=sample.bidder,
        truthful_bid=sample.truthful_bid,
        deviation_bid=sample.deviation_bid,
        truthful_utility=worst_truth.truthful_utility,
        deviation_utility=best_dev.deviation_utility,
        case=_case_of(worst_truth.case.won_original, best_dev.case.won_deviation),
        passed=worst_truth.truthful_utility >= best_dev.deviation_utility,
        pairing=f"adversarial({worst_truth.pairing}|{best_dev.pairing})",
    )


def pairing_count(policies: Sequence[TieBreakPolicy], adversarial: bool) -> int:
    """Comparisons generated per deviation bid."""
    return len(policies) + (1 if adversarial and len(policies) > 1 else 0)


def check_truthfulness(
    valuations: Sequence[Money],
    others: Sequence[Money],
    bidder: BidderId,
    policies: Sequence[TieBreakPolicy],
    rule: PaymentRule = PaymentRule.SECOND_PRICE,
    deviations: DeviationSpec = "critical",
    adversarial: bool = True,
) -> list[DeviationCheckResult]:
    """Compare the truthful bid of one bidder against deviation bids.

    ``others`` holds the opposing bids (length N - 1); the bidder's own
    truthful bid, equal to its valuation, is inserted at its index.
    ``deviations`` is either the string "critical" or an explicit
    iterable of deviation bids (a grid).  Results are ordered by
    deviation, then policy, with the adversarial pairing (when enabled)
    closing each deviation's block.
    """
    valuations = tuple(valuations)
    others = tuple(others)
    if not policies:
        raise ValueError("at least one tie-break policy is required")
    if not 0 <= bidder < len(valuations):
        raise ValueError(f"bidder index {bidder} out of range for N={len(valuations)}")
    if len(others) != len(valuations) - 1:
        raise ValueError(
            f"expected {len(valuations) - 1} opposing bids, got {len(others)}"
        )
    v_i = valuations[bidder]
    truthful_bids = others[:bidder] + (v_i,) + others[bidder:]
    violations = validate(AuctionInstance(valuations, truthful_bids))
    if violations:
        raise InvalidInstanceError(violations)

    if isinstance(deviations, str):
        if deviations != "critical":
            raise ValueError(f"unknown deviation mode {deviations!r}")
        grid: tuple[Money, ...] = critical_deviations(truthful_bids, bidder)
    else:
        grid = tuple(deviations)

    results = []
    for new_bid in grid:
        per_policy = [
            _evaluate(v_i, truthful_bids, bidder, new_bid, policy, rule)
            for policy in policies
        ]
        results.extend(per_policy)
        if adversarial and len(per_policy) > 1:
            results.append(_adversarial(per_policy))
    return results


class _SweepTally:
    """Order-independent aggregation: counts are summed and the reported
    counterexample is the minimum over an explicit sort key."""

    def __init__(self):
        self.pass_count = 0
        self.fail_count = 0
        self.case_counts = {tag: 0 for tag in CaseTag}
        self._best_key = None
        self._best: "Counterexample | None" = None

    def add(
        self,
        results: Sequence[DeviationCheckResult],
        key_prefix: tuple,
        valuations: ValuationProfile,
        truthful_bids: BidProfile,
        block: int,
    ):
        for index, result in enumerate(results):
            self.case_counts[result.case] += 1
            if result.passed:
                self.pass_count += 1
                continue
            self.fail_count += 1
            key = key_prefix + (result.deviation_bid, result.bidder, index % block)
            if self._best_key is None or key < self._best_key:
                self._best_key = key
                self._best = Counterexample(
                    valuations=valuations,
                    bids=truthful_bids,
                    bidder=result.bidder,
                    deviation_bid=result.deviation_bid,
                    policy=result.pairing,
                    truthful_utility=result.truthful_utility,
                    deviation_utility=result.deviation_utility,
                )

    def report(self) -> VerificationReport:
        return VerificationReport(
            pass_count=self.pass_count,
            fail_count=self.fail_count,
            coverage=CaseCoverage(dict(self.case_counts)),
            counterexample=self._best,
        )


def coverage_guard(results: Iterable[DeviationCheckResult]) -> CaseCoverage:
    """Count witnesses per case; callers treat a vacuous sweep as a failure."""
    return CaseCoverage.tally(result.case for result in results)


def check_dominance(
    v_i: Money,
    bidder: BidderId,
    n_bidders: int,
    tick_bound: Money,
    policies: Sequence[TieBreakPolicy],
    rule: PaymentRule = PaymentRule.SECOND_PRICE,
    deviations: DeviationSpec = "grid",
    adversarial: bool = True,
    budget: int = DEFAULT_BUDGET,
) -> VerificationReport:
    """Check one bidder's truthfulness against every opposing-bid vector.

    Enumerates all opposing bids in {0..tick_bound}^(N-1); the opposing
    bidders' valuations are taken equal to their bids.  ``deviations``
    may be "grid" (the full grid 0..tick_bound), "critical", or an
    explicit iterable.
    """
    if n_bidders < 2:
        raise ValueError(f"N >= 2 required (got {n_bidders})")
    if tick_bound < 0:
        raise ValueError(f"tick bound must be nonnegative (got {tick_bound})")
    if isinstance(deviations, str) and deviations == "grid":
        deviations = range(tick_bound + 1)

    block = pairing_count(policies, adversarial)
    tally = _SweepTally()
    spent = 0
    for others in product(range(tick_bound + 1), repeat=n_bidders - 1):
        valuations = others[:bidder] + (v_i,) + others[bidder:]
        results = check_truthfulness(
            valuations, others, bidder, policies, rule, deviations, adversarial
        )
        spent += len(results)
        if spent > budget:
            raise BudgetExceededError(
                f"state budget exceeded: {spent} > {budget} evaluated tuples"
            )
        tally.add(
            results,
            key_prefix=(others, v_i),
            valuations=valuations,
            truthful_bids=others[:bidder] + (v_i,) + others[bidder:],
            block=block,
        )
    return tally.report()


def dominance_sweep(
    n_bidders: int,
    tick_bound: Money,
    policies: "Sequence[TieBreakPolicy] | None" = None,
    rule: PaymentRule = PaymentRule.SECOND_PRICE,
    deviations: DeviationSpec = "grid",
    adversarial: bool = True,
    budget: int = DEFAULT_BUDGET,
) -> VerificationReport:
    """Full sweep: every bidder index, every valuation of that bidder,
    every opposing-bid vector, every deviation, every policy pairing.

    The reported counterexample is minimal under the ordering
    (opposing bids, bidder valuation, deviation bid, bidder index,
    pairing), independent of traversal order.
    """
    if policies is None:
        policies = standard_policies(n_bidders)
    if isinstance(deviations, str) and deviations == "grid":
        deviations = range(tick_bound + 1)

    block = pairing_count(policies, adversarial)
    tally = _SweepTally()
    spent = 0
    for others in product(range(tick_bound + 1), repeat=n_bidders - 1):
        for v_i in range(tick_bound + 1):
            for bidder in range(n_bidders):
                valuations = others[:bidder] + (v_i,) + others[bidder:]
                results = check_truthfulness(
                    valuations, others, bidder, policies, rule, deviations, adversarial
                )
                spent += len(results)
                if spent > budget:
                    raise BudgetExceededError(
                        f"state budget exceeded: {spent} > {budget} evaluated tuples"
                    )
                tally.add(
                    results,
                    key_prefix=(others, v_i),
                    valuations=valuations,
                    truthful_bids=valuations,
                    block=block,
                )
    return tally.report()


def find_counterexample(
    rule: PaymentRule,
    n_max: int,
    tick_bound: Money,
    policies: "Sequence[TieBreakPolicy] | None" = None,
    adversarial: bool = True,
    budget: int = DEFAULT_BUDGET,
) -> "Counterexample | None":
    """Smallest profitable deviation within bounds, or None.

    Enumerates instances in the order (N, opposing bids, bidder
    valuation, deviation bid, bidder index, pairing) and returns the
    first failure, which is therefore the lexicographic minimum under
    that ordering.  Deviations range over the full grid 0..tick_bound.
    Output is a pure function of the arguments.
    """
    if n_max < 2:
        raise ValueError(f"N >= 2 required (got {n_max})")
    spent = 0
    for n_bidders in range(2, n_max + 1):
        policy_set = policies if policies is not None else standard_policies(n_bidders)
        block = pairing_count(policy_set, adversarial)
        for others in product(range(tick_bound + 1), repeat=n_bidders - 1):
            for v_i in range(tick_bound + 1):
                for new_bid in range(tick_bound + 1):
                    for bidder in range(n_bidders):
                        truthful_bids = others[:bidder] + (v_i,) + others[bidder:]
                        per_policy = [
                            _evaluate(v_i, truthful_bids, bidder, new_bid, policy, rule)
                            for policy in policy_set
                        ]
                        rows = list(per_policy)
                        if adversarial and len(per_policy) > 1:
                            rows.append(_adversarial(per_policy))
                        spent += len(rows)
                        if spent > budget:
                            raise BudgetExceededError(
                                f"state budget exceeded: {spent} > {budget} evaluated tuples"
                            )
                        for result in rows:
                            if not result.passed:
                                return Counterexample(
                                    valuations=truthful_bids,
                                    bids=truthful_bids,
                                    bidder=bidder,
                                    deviation_bid=new_bid,
                                    policy=result.pairing,
                                    truthful_utility=result.truthful_utility,
                                    deviation_utility=result.deviation_utility,
                                )
    return None


def efficiency_check(valuations: Sequence[Money], policy: TieBreakPolicy) -> bool:
    """With truthful bids, does the good go to a maximum-valuation bidder?"""
    valuations = tuple(valuations)
    winner = select_winner(valuations, policy)
    return valuations[winner] == max(valuations)
