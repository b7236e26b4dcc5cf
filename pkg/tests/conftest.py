"""Shared fixtures and reference oracles.

The brute-force oracle here is intentionally naive: materialize every
tuple, filter the failures, sort.  The streaming search in the package
must agree with it exactly.
"""

from __future__ import annotations

from itertools import product

import pytest

from sealedbid.core import PaymentRule, outcome, standard_policies
from sealedbid.verify import Counterexample, check_truthfulness


def sweep_rows(n_values, tick_bound, rule=PaymentRule.SECOND_PRICE):
    """Every comparison row of the full-grid sweep: all bidder counts in
    ``n_values``, all valuations, all opposing-bid vectors, all deviation
    bids in 0..tick_bound, all four policy kinds plus the adversarial
    pairing."""
    rows = []
    for n_bidders in n_values:
        policies = standard_policies(n_bidders)
        for others in product(range(tick_bound + 1), repeat=n_bidders - 1):
            for v_i in range(tick_bound + 1):
                for bidder in range(n_bidders):
                    valuations = others[:bidder] + (v_i,) + others[bidder:]
                    rows.extend(
                        check_truthfulness(
                            valuations, others, bidder, policies, rule,
                            deviations=range(tick_bound + 1),
                        )
                    )
    return rows


@pytest.fixture(scope="session")
def vickrey_rows():
    """The standard second-price sweep: N in {2,3}, ticks 0..4."""
    return sweep_rows((2, 3), 4)


def bruteforce_minimal_counterexample(rule, n_max, tick_bound):
    """Reference implementation of the minimal-counterexample search.

    Enumerates every (N, opposing bids, valuation, deviation, bidder,
    pairing) tuple, recomputes both utilities from outcomes alone,
    collects every profitable deviation, and sorts by the ordering key.
    """
    failures = []
    for n_bidders in range(2, n_max + 1):
        policies = standard_policies(n_bidders)
        for others in product(range(tick_bound + 1), repeat=n_bidders - 1):
            for v_i in range(tick_bound + 1):
                for dev in range(tick_bound + 1):
                    for bidder in range(n_bidders):
                        bids = others[:bidder] + (v_i,) + others[bidder:]
                        deviated = bids[:bidder] + (dev,) + bids[bidder + 1:]
                        rows = []
                        for policy in policies:
                            o_truth = outcome(bids, policy, rule)
                            o_dev = outcome(deviated, policy, rule)
                            u_truth = v_i - o_truth.price if o_truth.winner == bidder else 0
                            u_dev = v_i - o_dev.price if o_dev.winner == bidder else 0
                            rows.append((u_truth, u_dev, policy.describe()))
                        if len(rows) > 1:
                            indices = range(len(rows))
                            worst = min(indices, key=lambda k: rows[k][0])
                            best = max(indices, key=lambda k: rows[k][1])
                            rows.append((
                                rows[worst][0],
                                rows[best][1],
                                f"adversarial({rows[worst][2]}|{rows[best][2]})",
                            ))
                        for rank, (u_truth, u_dev, label) in enumerate(rows):
                            if u_dev > u_truth:
                                key = (n_bidders, others, v_i, dev, bidder, rank)
                                failures.append((key, Counterexample(
                                    valuations=bids,
                                    bids=bids,
                                    bidder=bidder,
                                    deviation_bid=dev,
                                    policy=label,
                                    truthful_utility=u_truth,
                                    deviation_utility=u_dev,
                                )))
    if not failures:
        return None
    failures.sort(key=lambda pair: pair[0])
    return failures[0][1]
