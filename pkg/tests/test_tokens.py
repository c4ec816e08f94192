"""Token estimation, budget scaling, status classification, tokenizer."""

import pytest

from algobench.core import TaskId
from algobench.tokens import (
    BudgetInfeasible,
    TokenBudget,
    Tokenizer,
    classify_tokens,
    default_size,
    default_token_count,
    estimate_tokens,
    get_tokenizer,
    register_tokenizer,
    reset_coefficients,
    scale_to_budget,
    set_coefficients,
)

HANOI = TaskId("hard", "tower_of_hanoi", 0)


def test_hanoi_anchor_values():
    assert estimate_tokens(HANOI, {"size_n": 8}) == 3060
    assert estimate_tokens(HANOI, {"size_n": 10}) == 12276
    for n in range(1, 11):
        assert estimate_tokens(HANOI, {"size_n": n}) == (2**n - 1) * 12


def test_estimates_increase_with_size():
    for task in (
        TaskId("easy", "sum", 0),
        TaskId("medium", "prime_sequence", 0),
        TaskId("hard", "boolean_sat", 0),
        TaskId("hard", "sudoku", 0),
    ):
        small = estimate_tokens(task, {"size_n": 5})
        large = estimate_tokens(task, {"size_n": 20})
        assert large > small > 0


def test_classification_boundaries_default_profile():
    b = TokenBudget(context_size=1000)
    assert classify_tokens(0, b) == "valid"
    assert classify_tokens(850, b) == "valid"  # exactly 0.85 * C
    assert classify_tokens(851, b) == "warning"
    assert classify_tokens(1000, b) == "warning"  # exactly C
    assert classify_tokens(1001, b) == "overflow"


def test_classification_boundaries_alternate_profile():
    b = TokenBudget(context_size=1000, profile="conservative")
    assert classify_tokens(950, b) == "valid"  # exactly 0.95 * C
    assert classify_tokens(951, b) == "warning"
    assert classify_tokens(1000, b) == "warning"
    assert classify_tokens(1001, b) == "overflow"


def test_scale_to_budget_shrinks_until_fit():
    budget = TokenBudget(context_size=2000)
    params = scale_to_budget(HANOI, {"size_n": 10}, budget)
    assert params["size_n"] < 10
    est = estimate_tokens(HANOI, params)
    assert est + 200 + budget.buffer <= 0.85 * 2000


def test_scale_to_budget_noop_when_fitting():
    budget = TokenBudget(context_size=100_000)
    assert scale_to_budget(HANOI, {"size_n": 8}, budget)["size_n"] == 8


def test_scale_to_budget_infeasible():
    with pytest.raises(BudgetInfeasible):
        scale_to_budget(HANOI, {"size_n": 8}, TokenBudget(context_size=300))


def test_scale_easy_falls_back_to_magnitude():
    task = TaskId("easy", "sorting", 0)
    budget = TokenBudget(context_size=400)
    params = scale_to_budget(task, {"size_n": 15, "magnitude": 1000}, budget)
    assert params["size_n"] >= 8
    assert params["magnitude"] < 1000


def test_coefficient_overrides():
    base = estimate_tokens(HANOI, {"size_n": 5})
    set_coefficients("tower_of_hanoi", alpha=24.0)
    assert estimate_tokens(HANOI, {"size_n": 5}) == 2 * base
    reset_coefficients()
    assert estimate_tokens(HANOI, {"size_n": 5}) == base


def test_default_token_count_heuristic():
    assert default_token_count("") == 0
    assert default_token_count("word") == 1  # 4 chars -> 1 sub-word token
    assert default_token_count("hello") == 2  # ceil(5/4)
    assert default_token_count("a b") == 2
    assert default_token_count("x,y") == 3  # two runs + punctuation
    assert default_token_count("  spaced   out  ") == default_token_count(
        "spaced out"
    )


def test_tokenizer_registry():
    tok = get_tokenizer("heuristic-v1")
    assert tok.count("hello world") == default_token_count("hello world")
    register_tokenizer(Tokenizer(identity="len", count_fn=len))
    assert get_tokenizer("len").count("abc") == 3
    with pytest.raises(KeyError):
        get_tokenizer("no-such-tokenizer")


def test_default_sizes_cover_all_families():
    from algobench.core import all_tasks

    for td in all_tasks():
        for v in range(td.n_variations):
            assert default_size(TaskId(td.suite, td.family, v)) >= 2
