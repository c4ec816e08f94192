"""
The easy suite: 29 polynomial-time list/pair tasks with exact ground truth.

Each family samples its payload from a seeded stream (distinct integers for
list tasks; independent integer pairs for pair tasks), renders the family's
prompt template, and computes the full solution set by direct evaluation of
the family formula.

Tolerances: exact for integer operations and counts; |err| <= 1e-2 for
division; |err| <= 1e-6 for mean/median; multiset equality for sorting
(enforced by comparing against the unique sorted list); set equality for
mode.
"""

from __future__ import annotations

import math
from typing import Optional

from .core import (
    IllegalParams,
    ProblemInstance,
    SeedSpec,
    SolutionSet,
    TaskDef,
    TaskId,
    register,
)
from .rng import Rng
from . import tokens

DIVISION_EPS = 1e-2
STAT_EPS = 1e-6

# Default sampling space (within the legal space k in [2,100],
# [a,b] within [-1e6, 1e6], b - a >= k).
DEFAULT_K_RANGE = (5, 15)
DEFAULT_VALUE_RANGE = (-1000, 1000)
# The multiplication task is a list product; small lists over small values
# keep the product magnitude reasonable.
PRODUCT_K_RANGE = (2, 4)
PRODUCT_VALUE_RANGE = (-20, 20)

BOXED_TAIL = "Your final answer must be in the format \\boxed{answer} at the end."


def _fmt_list(values: list[int]) -> str:
    return "[" + ", ".join(str(v) for v in values) + "]"


def _digits_sum(x: int) -> int:
    return sum(int(d) for d in str(abs(x)))


def _is_perfect_square(x: int) -> bool:
    return x >= 0 and math.isqrt(x) ** 2 == x


def _is_palindrome(x: int) -> bool:
    s = str(abs(x))
    return s == s[::-1]


def lis_length(values: list[int]) -> int:
    """Longest strictly increasing subsequence length (patience sorting)."""
    import bisect

    tails: list[int] = []
    for v in values:
        i = bisect.bisect_left(tails, v)
        if i == len(tails):
            tails.append(v)
        else:
            tails[i] = v
    return len(tails)


# ---------------------------------------------------------------------------
# Prompt templates (one per family)
# ---------------------------------------------------------------------------

_P = {
    "sum": (
        "Add the following list of numbers:\n{data}\n\n"
        "Provide the sum. " + BOXED_TAIL
    ),
    "subtraction": (
        "Can you subtract {first} from {second} and provide your final answer "
        "in \\boxed{answer} format at the end of your response."
    ),
    "multiplication": (
        "Multiply the following list of numbers:\n{data}\n\n"
        "Provide the product. " + BOXED_TAIL
    ),
    "division": (
        "Divide {num} by {den}.\n\n"
        "Provide the answer as a floating point number. " + BOXED_TAIL
    ),
    "absolute_difference": (
        "Find the absolute difference between the following list of numbers:\n"
        "{data}\n\nProvide the result. " + BOXED_TAIL
    ),
    "alternating_sum": (
        "Calculate the alternating sum of the list {data}. Start by adding the "
        "first element, then subtract the second, add the third, etc.\n\n"
        "Your final answer must be in the format \\boxed{sum} at the end of your response."
    ),
    "sum_of_digits": (
        "Calculate the sum of all digits in all numbers in the list {data}.\n\n"
        "Your final answer must be in the format \\boxed{sum} at the end of your response."
    ),
    "comparison": (
        "Compare the following two numbers and determine their relationship:\n\n"
        "Number 1: {num1}\nNumber 2: {num2}\n\n"
        "Is Number 1 greater than, less than, or equal to Number 2? Your final "
        "answer must be in the format \\boxed{relation} at the end, where "
        "'relation' is one of: 'greater than', 'less than', or 'equal to'."
    ),
    "odd_count": (
        "Count the odd numbers from the following list of numbers:\n{data}\n\n"
        "Provide the final count of odd numbers. " + BOXED_TAIL
    ),
    "even_count": (
        "Count the even numbers from the following list of numbers:\n{data}\n\n"
        "Provide the final count of even numbers. " + BOXED_TAIL
    ),
    "negative_count": (
        "Count how many negative numbers are in the list {data}.\n\n"
        "Your final answer must be in the format \\boxed{count} at the end of your response."
    ),
    "unique_count": (
        "Count the number of unique (distinct) elements in the list {data}.\n\n"
        "Your final answer must be in the format \\boxed{count} at the end of your response."
    ),
    "perfect_square_count": (
        "Count how many perfect squares are in the list {data}. A perfect square "
        "is an integer that is the square of another integer.\n\n"
        "Your final answer must be in the format \\boxed{count} at the end of your response."
    ),
    "palindrome_count": (
        "Count how many palindromic numbers are in the list {data}. A palindromic "
        "number reads the same forwards and backwards.\n\n"
        "Your final answer must be in the format \\boxed{count} at the end of your response."
    ),
    "multiples_of_k_count": (
        "Count how many numbers in the list {data} are multiples of {k}.\n\n"
        "Your final answer must be in the format \\boxed{count} at the end of your response."
    ),
    "sorting": (
        "Sort the following list of numbers in ascending order:\n{data}\n\n"
        "Provide the sorted list. Your final answer must be in the format "
        "\\boxed{sorted list} at the end."
    ),
    "find_maximum": (
        "Find the maximum number from the given list of numbers. List = {data}.\n\n"
        "Your final answer must be in the format \\boxed{maximum} at the end of your response."
    ),
    "find_minimum": (
        "Find the minimum number from the given list of numbers. List = {data}.\n\n"
        "Your final answer must be in the format \\boxed{minimum} at the end of your response."
    ),
    "second_maximum": (
        "Find the second maximum number from the given list of numbers. List = {data}.\n\n"
        "Your final answer must be in the format \\boxed{second_maximum} at the end of your response."
    ),
    "range": (
        "Calculate the range (difference between maximum and minimum) of the "
        "following list of numbers: {data}.\n\n"
        "Your final answer must be in the format \\boxed{range} at the end of your response."
    ),
    "index_of_maximum": (
        "Find the index (0-based position) of the maximum element in the list "
        "{data}. If there are multiple maximum elements, return the index of the "
        "first occurrence.\n\n"
        "Your final answer must be in the format \\boxed{index} at the end of your response."
    ),
    "sum_of_max_indices": (
        "Find the sum of all indices (0-based) where the maximum value occurs in "
        "the list {data}.\n\n"
        "Your final answer must be in the format \\boxed{sum} at the end of your response."
    ),
    "max_adjacent_difference": (
        "Find the maximum absolute difference between any two adjacent elements "
        "in the list {data}.\n\n"
        "Your final answer must be in the format \\boxed{difference} at the end of your response."
    ),
    "count_greater_than_previous": (
        "Count how many elements in the list are greater than the element that "
        "comes immediately before them: {data}.\n\n"
        "Your final answer must be in the format \\boxed{count} at the end of your response."
    ),
    "local_maxima_count": (
        "Count how many local maxima exist in the list {data}. A local maximum is "
        "an element that is greater than both its immediate neighbors.\n\n"
        "Your final answer must be in the format \\boxed{count} at the end of your response."
    ),
    "longest_increasing_subsequence": (
        "Find the length of the longest increasing subsequence in {data}. A "
        "subsequence maintains relative order but elements don't need to be "
        "consecutive.\n\n"
        "Your final answer must be in the format \\boxed{length} at the end of your response."
    ),
    "mean": (
        "Calculate the mean (average) of the following list of numbers:\n{data}\n\n"
        "The mean is the sum of all numbers divided by the count of numbers. "
        "Calculate the exact mean value. Your final answer must be in the format "
        "\\boxed{mean value} at the end."
    ),
    "median": (
        "Find the median value of the following list of numbers:\n{data}\n\n"
        "The median is the middle value when the list is sorted. If there is an "
        "even number of elements, the median is the average of the two middle "
        "values. Your final answer must be in the format \\boxed{median value} at the end."
    ),
    "mode": (
        "Find the mode(s) of the following list of numbers:\n{data}\n\n"
        "The mode is the value that appears most frequently. If multiple values "
        "appear with the same highest frequency, return all of them. Your final "
        "answer must be in the format \\boxed{mode(s)} at the end. If there are "
        "multiple modes, list them separated by commas."
    ),
}

# family -> (payload_kind, answer_kind)
#   payload_kind: "list" | "pair" | "mode_list"
#   answer_kind: "int" | "float_div" | "float_stat" | "relation" | "list" | "modes"
_FAMILIES: dict[str, tuple[str, str]] = {
    "sum": ("list", "int"),
    "subtraction": ("pair", "int"),
    "multiplication": ("list", "int"),
    "division": ("pair", "float_div"),
    "absolute_difference": ("pair", "int"),
    "alternating_sum": ("list", "int"),
    "sum_of_digits": ("list", "int"),
    "comparison": ("pair", "relation"),
    "odd_count": ("list", "int"),
    "even_count": ("list", "int"),
    "negative_count": ("list", "int"),
    "unique_count": ("list", "int"),
    "perfect_square_count": ("list", "int"),
    "palindrome_count": ("list", "int"),
    "multiples_of_k_count": ("list", "int"),
    "sorting": ("list", "list"),
    "find_maximum": ("list", "int"),
    "find_minimum": ("list", "int"),
    "second_maximum": ("list", "int"),
    "range": ("list", "int"),
    "index_of_maximum": ("list", "int"),
    "sum_of_max_indices": ("list", "int"),
    "max_adjacent_difference": ("list", "int"),
    "count_greater_than_previous": ("list", "int"),
    "local_maxima_count": ("list", "int"),
    "longest_increasing_subsequence": ("list", "int"),
    "mean": ("list", "float_stat"),
    "median": ("list", "float_stat"),
    "mode": ("mode_list", "modes"),
}

EASY_FAMILIES = tuple(_FAMILIES)


def easy_ground_truth(family: str, payload: dict):
    """Evaluate the family formula; returns the canonical answer value."""
    if family in ("subtraction", "division", "absolute_difference", "comparison"):
        a, b = payload["a"], payload["b"]
        if family == "subtraction":
            return b - a  # "subtract a from b"
        if family == "division":
            return a / b
        if family == "absolute_difference":
            return abs(b - a)
        if a > b:
            return "greater than"
        if a < b:
            return "less than"
        return "equal to"

    xs = payload["values"]
    n = len(xs)
    if family == "sum":
        return sum(xs)
    if family == "multiplication":
        p = 1
        for v in xs:
            p *= v
        return p
    if family == "alternating_sum":
        return sum(v if i % 2 == 0 else -v for i, v in enumerate(xs))
    if family == "sum_of_digits":
        return sum(_digits_sum(v) for v in xs)
    if family == "odd_count":
        return sum(1 for v in xs if v % 2 != 0)
    if family == "even_count":
        return sum(1 for v in xs if v % 2 == 0)
    if family == "negative_count":
        return sum(1 for v in xs if v < 0)
    if family == "unique_count":
        return len(set(xs))
    if family == "perfect_square_count":
        return sum(1 for v in xs if _is_perfect_square(v))
    if family == "palindrome_count":
        return sum(1 for v in xs if _is_palindrome(v))
    if family == "multiples_of_k_count":
        k = payload["k"]
        return sum(1 for v in xs if v % k == 0)
    if family == "sorting":
        return sorted(xs)
    if family == "find_maximum":
        return max(xs)
    if family == "find_minimum":
        return min(xs)
    if family == "second_maximum":
        top = max(xs)
        return max(v for v in xs if v < top)
    if family == "range":
        return max(xs) - min(xs)
    if family == "index_of_maximum":
        return xs.index(max(xs))
    if family == "sum_of_max_indices":
        top = max(xs)
        return sum(i for i, v in enumerate(xs) if v == top)
    if family == "max_adjacent_difference":
        return max(abs(xs[i + 1] - xs[i]) for i in range(n - 1))
    if family == "count_greater_than_previous":
        return sum(1 for i in range(1, n) if xs[i] > xs[i - 1])
    if family == "local_maxima_count":
        return sum(
            1 for i in range(1, n - 1) if xs[i] > xs[i - 1] and xs[i] > xs[i + 1]
        )
    if family == "longest_increasing_subsequence":
        return lis_length(xs)
    if family == "mean":
        return sum(xs) / n
    if family == "median":
        s = sorted(xs)
        mid = n // 2
        if n % 2 == 1:
            return float(s[mid])
        return (s[mid - 1] + s[mid]) / 2
    if family == "mode":
        from collections import Counter

        counts = Counter(xs)
        best = max(counts.values())
        return sorted(v for v, c in counts.items() if c == best)
    raise IllegalParams(f"unknown easy family {family!r}")


def _render_prompt(family: str, payload: dict) -> str:
    t = _P[family]
    if family == "subtraction":
        return t.replace("{first}", str(payload["a"])).replace(
            "{second}", str(payload["b"])
        )
    if family == "division":
        return t.replace("{num}", str(payload["a"])).replace(
            "{den}", str(payload["b"])
        )
    if family == "comparison":
        return t.replace("{num1}", str(payload["a"])).replace(
            "{num2}", str(payload["b"])
        )
    if family == "absolute_difference":
        return t.replace("{data}", _fmt_list([payload["a"], payload["b"]]))
    out = t.replace("{data}", _fmt_list(payload["values"]))
    if family == "multiples_of_k_count":
        out = out.replace("{k}", str(payload["k"]))
    return out


def _sample_payload(family: str, rng: Rng, params: dict) -> dict:
    kind, _ = _FAMILIES[family]
    if kind == "pair":
        lo, hi = params["value_lo"], params["value_hi"]
        if family == "comparison":
            # Stratify the three relations to 1/3 each.
            relation = rng.randint(0, 2)
            a = rng.randint(lo, hi)
            if relation == 0:
                b = a
            elif relation == 1:
                b = rng.randint(lo, hi)
                while b == a:
                    b = rng.randint(lo, hi)
                a, b = max(a, b), min(a, b)  # a > b: "greater than"
            else:
                b = rng.randint(lo, hi)
                while b == a:
                    b = rng.randint(lo, hi)
                a, b = min(a, b), max(a, b)  # a < b: "less than"
            return {"a": a, "b": b}
        a = rng.randint(lo, hi)
        b = rng.randint(lo, hi)
        if family == "division":
            while b == 0:
                b = rng.randint(lo, hi)
        return {"a": a, "b": b}

    k = params["size_n"]
    lo, hi = params["value_lo"], params["value_hi"]
    if hi - lo < k:
        raise IllegalParams(f"range [{lo},{hi}] cannot supply {k} distinct values")
    values = rng.sample_range(lo, hi, k)
    if kind == "mode_list":
        n_dups = rng.randint(1, min(3, k))
        dups = rng.sample(values, n_dups)
        values = values + dups
        rng.shuffle(values)
    payload: dict = {"values": values}
    if family == "multiples_of_k_count":
        payload["k"] = rng.randint(2, 10)
    return payload


def _default_params(family: str, rng: Rng, override: Optional[dict]) -> dict:
    kind, _ = _FAMILIES[family]
    if family == "multiplication":
        k_range, v_range = PRODUCT_K_RANGE, PRODUCT_VALUE_RANGE
    else:
        k_range, v_range = DEFAULT_K_RANGE, DEFAULT_VALUE_RANGE
    params = {"value_lo": v_range[0], "value_hi": v_range[1]}
    if kind != "pair":
        params["size_n"] = rng.randint(*k_range)
    if override:
        params.update(override)
        if "magnitude" in params:
            m = int(params.pop("magnitude"))
            params["value_lo"], params["value_hi"] = -m, m
    return params


def _solution_set(family: str, payload: dict) -> SolutionSet:
    value = easy_ground_truth(family, payload)
    if family == "mode":
        return SolutionSet(kind="enumerated", values=list(value))
    return SolutionSet(kind="unique", values=[value])


def generate_easy(
    task: TaskId, seed: SeedSpec, params_override: Optional[dict] = None
) -> ProblemInstance:
    family = task.family
    rng = Rng(seed.child_seed(task))
    params = _default_params(family, rng, params_override)
    payload = _sample_payload(family, rng, params)
    prompt = _render_prompt(family, payload)
    return ProblemInstance(
        task=task,
        seed=seed,
        params=params,
        payload=payload,
        prompt_text=prompt,
        solutions=_solution_set(family, payload),
        estimated_tokens=tokens.estimate_tokens(task, params),
    )


def _num_close(x, target, eps) -> bool:
    try:
        return abs(float(x) - float(target)) <= eps
    except (TypeError, ValueError):
        return False


def verify_easy(instance: ProblemInstance, answer) -> bool:
    family = instance.task.family
    _, ans_kind = _FAMILIES[family]
    sol = instance.solutions
    if ans_kind == "int":
        return isinstance(answer, (int, float)) and _num_close(
            answer, sol.values[0], 1e-9
        )
    if ans_kind == "float_div":
        return isinstance(answer, (int, float)) and _num_close(
            answer, sol.values[0], DIVISION_EPS
        )
    if ans_kind == "float_stat":
        return isinstance(answer, (int, float)) and _num_close(
            answer, sol.values[0], STAT_EPS
        )
    if ans_kind == "relation":
        return isinstance(answer, str) and answer.strip() == sol.values[0]
    if ans_kind == "list":
        return isinstance(answer, list) and answer == sol.values[0]
    if ans_kind == "modes":
        if not isinstance(answer, (list, set)):
            return False
        try:
            return set(int(v) for v in answer) == set(sol.values)
        except (TypeError, ValueError):
            return False
    return False


def render_easy_answer(instance: ProblemInstance) -> str:
    """Ground-truth answer in the required \\boxed{...} format."""
    family = instance.task.family
    _, ans_kind = _FAMILIES[family]
    sol = instance.solutions
    if ans_kind == "list":
        inner = _fmt_list(sol.values[0])
    elif ans_kind == "modes":
        inner = ", ".join(str(v) for v in sol.values)
    elif ans_kind in ("float_div", "float_stat"):
        inner = repr(sol.values[0])
    else:
        inner = str(sol.values[0])
    return f"The answer is \\boxed{{{inner}}}"


def _format_kind_for(family: str):
    _, ans_kind = _FAMILIES[family]
    mapping = {
        "int": "boxed_scalar",
        "float_div": "boxed_scalar",
        "float_stat": "boxed_scalar",
        "relation": "boxed_relation",
        "list": "boxed_list",
        "modes": "boxed_modes",
    }
    kind = mapping[ans_kind]
    return lambda variation: kind


for _family in EASY_FAMILIES:
    register(
        TaskDef(
            suite="easy",
            family=_family,
            n_variations=1,
            generate=generate_easy,
            verify=verify_easy,
            render_oracle=render_easy_answer,
            format_kind=_format_kind_for(_family),
        )
    )
