"""
Token estimation, budget-constrained scaling, and token-status classification.

Only the Hanoi estimator is anchored by published numbers
((2^n - 1) * 12 tokens: 3060 at n=8, 12276 at n=10).  All other coefficients
are documented defaults, overridable through `set_coefficients` or the CLI
config file.

Status classification ships two named threshold profiles:
  "standard"    (default): valid <= 0.85*C < warning <= C < overflow
  "conservative"           : valid <= 0.95*C < warning <= C < overflow
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

from .core import TaskId


class BudgetInfeasible(RuntimeError):
    """The minimum-size instance still exceeds the generation cap."""


@dataclass
class TokenBudget:
    context_size: int
    buffer_fraction: float = 0.15
    generation_cap_fraction: float = 0.85
    warning_threshold: float = 0.95
    profile: str = "standard"

    @property
    def buffer(self) -> float:
        return self.buffer_fraction * self.context_size


# Documented default estimator coefficients.  Keys the formulas use:
#   alpha, beta, gamma  (family-shaped linear/log/exponential forms)
_DEFAULT_COEFFS: dict[str, dict[str, float]] = {
    "easy_arithmetic": {"alpha": 3.0, "beta": 2.0, "gamma": 50.0},
    "easy_sorting": {"alpha": 3.0, "beta": 0.0, "gamma": 50.0},
    "easy_counting": {"alpha": 2.0, "beta": 10.0, "gamma": 40.0},
    "fibonacci_sequence": {"alpha": 3.0, "beta": 2.0, "gamma": 50.0},
    "geometric_sequence": {"alpha": 2.0, "beta": 3.0, "gamma": 50.0},
    "prime_sequence": {"alpha": 3.0, "beta": 2.0, "gamma": 50.0},
    "complex_pattern": {"alpha": 3.0, "beta": 2.0, "gamma": 50.0},
    "algebraic_sequence": {"alpha": 3.0, "beta": 2.0, "gamma": 50.0},
    "tower_of_hanoi": {"alpha": 12.0, "beta": 0.0, "gamma": 0.0},
    "n_queens": {"alpha": 5.0, "beta": 0.0, "gamma": 20.0},
    "graph_coloring": {"alpha": 8.0, "beta": 0.0, "gamma": 0.0},
    "boolean_sat": {"alpha": 10.0, "beta": 3.0, "gamma": 30.0},
    "sudoku": {"alpha": 5.0, "beta": 5.0, "gamma": 0.0},
    "logic_grid": {"alpha": 15.0, "beta": 0.0, "gamma": 40.0},
    "cryptarithmetic": {"alpha": 30.0, "beta": 0.0, "gamma": 40.0},
    "matrix_chain": {"alpha": 12.0, "beta": 0.0, "gamma": 40.0},
    "modular_system": {"alpha": 20.0, "beta": 0.0, "gamma": 60.0},
    "constraint_optimization": {"alpha": 25.0, "beta": 0.0, "gamma": 60.0},
}

_COEFFS = {k: dict(v) for k, v in _DEFAULT_COEFFS.items()}

_EASY_SORTING = {"sorting"}
_EASY_COUNTING = {
    "odd_count",
    "even_count",
    "negative_count",
    "unique_count",
    "perfect_square_count",
    "palindrome_count",
    "multiples_of_k_count",
    "count_greater_than_previous",
    "local_maxima_count",
}


def set_coefficients(key: str, **updates: float) -> None:
    _COEFFS.setdefault(key, {}).update(updates)


def reset_coefficients() -> None:
    global _COEFFS
    _COEFFS = {k: dict(v) for k, v in _DEFAULT_COEFFS.items()}


def _magnitude(params: dict) -> float:
    if "magnitude" in params:
        return max(2.0, float(params["magnitude"]))
    lo = params.get("value_lo", -1000)
    hi = params.get("value_hi", 1000)
    return max(2.0, float(max(abs(lo), abs(hi))))


def estimate_tokens(task: TaskId, params: dict) -> int:
    """Estimated solution-token count for an instance with these parameters."""
    family = task.family
    n = int(params.get("size_n", 0))
    m_log = math.log10(_magnitude(params))

    if task.suite == "easy":
        if family in _EASY_SORTING:
            c = _COEFFS["easy_sorting"]
            return math.ceil(c["alpha"] * n * m_log + c["gamma"])
        if family in _EASY_COUNTING:
            c = _COEFFS["easy_counting"]
            return math.ceil(c["alpha"] * n + c["beta"] * m_log + c["gamma"])
        c = _COEFFS["easy_arithmetic"]
        if n == 0:
            n = 2  # pair tasks
        return math.ceil(c["alpha"] * n + c["beta"] * m_log + c["gamma"])

    if task.suite == "medium":
        c = _COEFFS.get(family, _COEFFS["fibonacci_sequence"])
        if family == "geometric_sequence":
            ratio = max(2.0, float(params.get("ratio", 3.0)))
            return math.ceil(
                c["alpha"] * n * math.log10(ratio) + c["beta"] * n + c["gamma"]
            )
        if family == "prime_sequence":
            return math.ceil(
                c["alpha"] * n * math.log(max(2, n))
                + c["beta"] * math.sqrt(max(1, n))
                + c["gamma"]
            )
        if family == "complex_pattern":
            d = int(params.get("degree", 3))
            return math.ceil(c["alpha"] * n * d + c["beta"] * (2**d) + c["gamma"])
        if family == "algebraic_sequence":
            k = int(params.get("nesting", 2))
            return math.ceil(
                c["alpha"] * n * (2**k) + c["beta"] * math.log(max(2, n)) + c["gamma"]
            )
        return math.ceil(c["alpha"] * n + c["beta"] * m_log + c["gamma"])

    c = _COEFFS.get(family, {"alpha": 10.0, "beta": 0.0, "gamma": 50.0})
    if family == "tower_of_hanoi":
        return int((2**n - 1) * c["alpha"])
    if family == "graph_coloring":
        return math.ceil(c["alpha"] * n)
    if family == "boolean_sat":
        clauses = int(params.get("num_clauses", round(4.5 * max(1, n))))
        return math.ceil(c["alpha"] * n + c["beta"] * clauses + c["gamma"])
    if family == "sudoku":
        givens = int(params.get("givens", max(0, n * n // 3)))
        return math.ceil(c["alpha"] * n * n + c["beta"] * givens)
    if family == "logic_grid":
        m = int(params.get("num_categories", 3))
        return math.ceil(c["alpha"] * n * m + c["gamma"])
    return math.ceil(c["alpha"] * n + c["gamma"])


# Minimum size per family; below it the magnitude parameter shrinks instead
# (easy suite), or the budget is infeasible.
_SIZE_FLOORS = {
    "tower_of_hanoi": 3,
    "n_queens": 4,
    "graph_coloring": 4,
    "boolean_sat": 4,
    "sudoku": 4,
    "logic_grid": 3,
    "cryptarithmetic": 4,
    "matrix_chain": 3,
    "modular_system": 3,
    "constraint_optimization": 4,
}
_EASY_SIZE_FLOOR = 8  # below this the magnitude shrinks instead
_PROMPT_BASELINE = 200  # flat prompt-token allowance used during scaling


def scale_to_budget(task: TaskId, params: dict, budget: TokenBudget) -> dict:
    """
    Shrink parameters until the estimate fits the generation cap.

    Applies n' = floor(0.8 * n) iteratively; for easy-suite tasks at the size
    floor the magnitude parameter shrinks by the same factor instead.  Raises
    BudgetInfeasible when the minimum instance still exceeds the cap.
    """
    params = dict(params)
    if task.suite == "easy":
        params.setdefault("magnitude", int(_magnitude(params)))
    floor = _SIZE_FLOORS.get(task.family, _EASY_SIZE_FLOOR if task.suite == "easy" else 2)
    cap = budget.generation_cap_fraction * budget.context_size
    while True:
        needed = estimate_tokens(task, params) + _PROMPT_BASELINE + budget.buffer
        if needed <= cap:
            return params
        n = int(params.get("size_n", 0))
        if n > floor:
            params["size_n"] = max(floor, min(n - 1, int(0.8 * n)))
            continue
        mag = int(params.get("magnitude", 0))
        if task.suite == "easy" and mag > 10:
            params["magnitude"] = max(10, min(mag - 1, int(0.8 * mag)))
            continue
        raise BudgetInfeasible(
            f"{task.key()}: minimum instance needs ~{needed:.0f} tokens, "
            f"cap is {cap:.0f}"
        )


def classify_tokens(response_count: int, budget: TokenBudget) -> str:
    """Classify a response token count as valid / warning / overflow."""
    c = budget.context_size
    if budget.profile == "conservative":
        valid_cut = budget.warning_threshold * c
    else:  # "standard"
        valid_cut = 0.85 * c
    if response_count <= valid_cut:
        return "valid"
    if response_count <= c:
        return "warning"
    return "overflow"


# ---------------------------------------------------------------------------
# Tokenizer interface and the documented default heuristic
# ---------------------------------------------------------------------------


@dataclass
class Tokenizer:
    """Pluggable tokenizer: deterministic count plus an identity string."""

    identity: str
    count_fn: "object" = None

    def count(self, text: str) -> int:
        return self.count_fn(text)


def default_token_count(text: str) -> int:
    """
    heuristic-v1: split on whitespace; within each piece, every punctuation
    character counts as one token and every alphanumeric run counts
    ceil(len/4) sub-word tokens.
    """
    total = 0
    for piece in text.split():
        run = 0
        for ch in piece:
            if ch.isalnum():
                run += 1
            else:
                if run:
                    total += math.ceil(run / 4)
                    run = 0
                total += 1
        if run:
            total += math.ceil(run / 4)
    return total


DEFAULT_TOKENIZER = Tokenizer(identity="heuristic-v1", count_fn=default_token_count)

_TOKENIZERS = {"heuristic-v1": DEFAULT_TOKENIZER}


def get_tokenizer(identity: str) -> Tokenizer:
    try:
        return _TOKENIZERS[identity]
    except KeyError:
        raise KeyError(f"unknown tokenizer {identity!r}") from None


def register_tokenizer(tok: Tokenizer) -> None:
    _TOKENIZERS[tok.identity] = tok


# Default sizes used when the CLI must estimate before generating.
def default_size(task: TaskId) -> int:
    if task.suite == "easy":
        return 15
    if task.suite == "medium":
        return 12
    v = task.variation
    table = {
        "tower_of_hanoi": 3 + v,
        "n_queens": (4, 5, 6, 8)[v] if v < 4 else 8,
        "graph_coloring": 28,
        "boolean_sat": 12,
        "sudoku": (4, 4, 6, 9, 9, 4, 6, 4)[v] if v < 8 else 9,
        "logic_grid": 5,
        "cryptarithmetic": 8,
        "matrix_chain": 10,
        "modular_system": 5,
        "constraint_optimization": 6,
    }
    return table.get(task.family, 8)
