"""
Contamination probability toolkit.

Models training-set overlap with an evaluation set: q is the probability
mass the training distribution puts on the evaluation items, N the number
of training draws.  All computations run in the log domain (log1p/expm1)
so they stay stable down to q < 1e-12.
"""

from __future__ import annotations

import math
from typing import Iterable


def collision_prob_exact(q: float, n_draws: int) -> float:
    """P(at least one evaluation item appears in N draws) = 1 - (1-q)^N."""
    if not 0.0 <= q <= 1.0:
        raise ValueError(f"q must be in [0,1], got {q}")
    if n_draws < 0:
        raise ValueError("N must be nonnegative")
    if q == 0.0 or n_draws == 0:
        return 0.0
    if q == 1.0:
        return 1.0
    # 1 - exp(N * log(1-q)), computed as -expm1(N * log1p(-q))
    return -math.expm1(n_draws * math.log1p(-q))


def collision_prob_approx(q: float, n_draws: int) -> float:
    """Exponential approximation 1 - exp(-qN); tight for small q."""
    if q < 0:
        raise ValueError("q must be nonnegative")
    if n_draws < 0:
        raise ValueError("N must be nonnegative")
    return -math.expm1(-q * n_draws)


def uniform_q(eval_size: int, universe_size: int) -> float:
    """Evaluation mass under a uniform training distribution: q = n / M."""
    if not 0 <= eval_size <= universe_size:
        raise ValueError("need 0 <= n <= M")
    return eval_size / universe_size


def expected_present(per_item_probs: Iterable[float], n_draws: int) -> float:
    """Expected number of evaluation items present: sum(1 - (1-p)^N)."""
    total = 0.0
    for p in per_item_probs:
        total += collision_prob_exact(p, n_draws)
    return total


def coverage_threshold(eval_size: int, universe_size: int) -> float:
    """
    Training draws needed before essentially all n evaluation items have
    appeared (coupon-collector scale): N = M * ln(n).
    """
    if eval_size < 1:
        raise ValueError("eval size must be >= 1")
    return universe_size * math.log(eval_size)
