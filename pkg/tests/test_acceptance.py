"""Acceptance gate: one test per release criterion.

Every numeric expectation here is either a published constant or comes from
the independent reference implementations in tests/oracles.py, never from
the code under test.
"""

import itertools
import json
import math
import random
import string
import sys

import numpy as np
import pytest

import oracles
from algobench import cli
from algobench.contamination import collision_prob_approx, collision_prob_exact
from algobench.core import (
    ProblemInstance,
    SeedSpec,
    SolutionSet,
    TaskId,
    generate_instance,
    registry_lookup,
    tasks_in_suite,
)
from algobench.easy import DIVISION_EPS, STAT_EPS, verify_easy
from algobench.hard_csp import (
    LOGIC_SHAPES,
    LOGIC_VALUES,
    SUDOKU_VARIATIONS,
    hanoi_optimal,
    nqueens_enumerate,
    verify_hanoi,
)
from algobench.hard_opt import (
    ALLOCATION_VARIATIONS,
    COLORING_VARIATIONS,
    CRYPT_TIERS,
    SAT_VARIATIONS,
    allocation_optimum,
    matrix_chain_min,
    modular_solve,
    verify_allocation,
    verify_sat,
)
from algobench.parsing import parse_response
from algobench.tokens import TokenBudget, classify_tokens, estimate_tokens

ORACLE_CMD = f"{sys.executable} -m algobench.oracle"


def gen(suite, family, variation, index, override=None):
    return generate_instance(
        TaskId(suite, family, variation), SeedSpec(42, index), override
    )


# ---------------------------------------------------------------------------
# Criterion 1: byte-identical regeneration with master seed 42
# ---------------------------------------------------------------------------


def test_criterion_01_determinism_byte_identical(tmp_path):
    total = 0
    for suite in ("easy", "medium", "hard"):
        a, b = tmp_path / f"{suite}_a.jsonl", tmp_path / f"{suite}_b.jsonl"
        for path in (a, b):
            assert cli.main([
                "generate", "--suite", suite, "--count", "7",
                "--seed", "42", "--out", str(path),
            ]) == 0
        assert a.read_bytes() == b.read_bytes(), f"{suite} regeneration differs"
        total += sum(1 for line in a.open(encoding="utf-8") if line.strip())
    assert total >= 1000  # sample size: every variation x 7 indices


# ---------------------------------------------------------------------------
# Criterion 2: solution-set kind and cardinality vs independent oracles,
# 200 instances per problem class
# ---------------------------------------------------------------------------


def test_criterion_02_sudoku_uniqueness_200():
    small = ["four_easy", "four_hard", "six_medium"]  # 4x4 and 6x6 boards
    for i in range(200):
        name = small[i % len(small)]
        variation = SUDOKU_VARIATIONS.index(name)
        box = (2, 2) if name.startswith("four") else (2, 3)
        inst = gen("hard", "sudoku", variation, i // len(small))
        assert inst.solutions.kind == "unique"
        assert len(inst.solutions.values) == 1
        sols = oracles.sudoku_brute_solutions(inst.payload["puzzle"], *box)
        assert len(sols) == 1, f"{name}#{i}: {len(sols)} solutions"
        assert sols[0] == inst.solutions.values[0]


def test_criterion_02_logic_grid_uniqueness_200():
    shapes = [0, 1, 3, 4]  # the (n, m) grids with n <= 4 and m <= 4
    for i in range(200):
        variation = shapes[i % len(shapes)]
        inst = gen("hard", "logic_grid", variation, i // len(shapes))
        assert inst.solutions.kind == "unique"
        assert len(inst.solutions.values) == 1
        people = inst.payload["people"]
        cats = inst.payload["categories"]
        count, first = oracles.logic_brute_count(
            people, cats, LOGIC_VALUES, inst.payload["clues"]
        )
        assert count == 1, f"logic_grid v{variation}#{i}: {count} solutions"
        truth = inst.solutions.values[0]
        for cat in cats:
            for pi, person in enumerate(people):
                assert str(first[cat][pi]) == truth[person][cat]


def test_criterion_02_cryptarithmetic_uniqueness_200():
    variations = [v for v in range(12) if CRYPT_TIERS[v % 4][1] <= 7]
    for i in range(200):
        variation = variations[i % len(variations)]
        inst = gen("hard", "cryptarithmetic", variation, i // len(variations))
        assert inst.solutions.kind == "unique"
        assert len(inst.solutions.values) == 1
        p = inst.payload
        count = oracles.crypt_brute_count(p["word1"], p["op"], p["word2"],
                                          p["result"])
        assert count == 1, f"crypt v{variation}#{i}: {count} solutions"


def test_criterion_02_medium_families_200_each():
    for family in tasks_in_suite("medium"):
        n_var = registry_lookup(TaskId("medium", family.family, 0)).n_variations
        fam = family.family
        for i in range(200):
            inst = gen("medium", fam, i % n_var, i // n_var)
            assert inst.solutions.kind == "unique"
            assert len(inst.solutions.values) == 1
            assert oracles.medium_check(
                fam, inst.payload["variation_name"], inst.params,
                inst.payload["shown"], inst.payload["target"],
            ), f"{fam}/{inst.payload['variation_name']}#{i}"


# ---------------------------------------------------------------------------
# Criterion 3: published N-Queens counts
# ---------------------------------------------------------------------------


def test_criterion_03_nqueens_published_counts():
    for n, expected in ((4, 2), (5, 10), (6, 4), (8, 92)):
        solutions = nqueens_enumerate(n)
        assert len(solutions) == expected
        assert len({tuple(s) for s in solutions}) == expected


# ---------------------------------------------------------------------------
# Criterion 4: Hanoi optimal lengths and move-sequence classification
# ---------------------------------------------------------------------------


def test_criterion_04_hanoi_lengths_and_classification():
    for n in range(1, 11):
        assert len(hanoi_optimal(n)) == 2**n - 1

    cases = []
    for n in range(1, 11):
        opt = hanoi_optimal(n)
        cases.append((n, opt, "valid"))
        cases.append((n, [(1, "A", "B"), (1, "B", "A")] + opt, "suboptimal"))
        cases.append((n, opt[:-1], "incomplete"))
    cases += [(n, [(2, "A", "B")], "invalid") for n in range(2, 11)]
    cases += [
        (1, [(1, "A", "A")], "invalid"),            # source equals target
        (1, [(1, "A", "D")], "invalid"),            # unknown peg name
        (1, [(1, "B", "C")], "invalid"),            # source peg is empty
        (2, [(1, "A", "C"), (2, "A", "C")], "invalid"),  # larger onto smaller
        (2, [(1, "A", "C"), (1, "B", "C")], "invalid"),  # wrong source peg
        (3, [(5, "A", "C")], "invalid"),            # disk number out of range
        (3, [(0, "A", "C")], "invalid"),            # disk number zero
        (3, [(1, "A", "B"), (2, "A", "B")], "invalid"),  # stack violation later
        (4, [(1, "A", "C"), (1, "C", "A"), (1, "A", "A")], "invalid"),
        (2, [(2, "A", "C")], "invalid"),            # buried disk moved first
        (3, [(1, "A", "C"), (2, "B", "C")], "invalid"),  # claimed peg mismatch
    ]
    assert len(cases) == 50
    for n, moves, expected in cases:
        assert verify_hanoi(n, moves) == expected, (n, moves, expected)


# ---------------------------------------------------------------------------
# Criterion 5: matrix-chain DP vs brute-force parenthesization
# ---------------------------------------------------------------------------


def test_criterion_05_matrix_chain_dp_vs_brute():
    rng = random.Random(5)
    for _ in range(100):
        count = rng.randint(2, 8)
        dims = [rng.randint(1, 25) for _ in range(count + 1)]
        assert matrix_chain_min(dims) == oracles.matrix_chain_brute(dims)


# ---------------------------------------------------------------------------
# Criterion 6: CRT solver vs brute-force scan over [0, lcm)
# ---------------------------------------------------------------------------


def test_criterion_06_crt_vs_brute_scan():
    rng = random.Random(6)
    for _ in range(100):
        k = rng.randint(1, 5)
        moduli = []
        while len(moduli) < k:
            m = rng.randint(2, 50)
            if all(math.gcd(m, other) == 1 for other in moduli):
                moduli.append(m)
        congruences = [(rng.randrange(m), m) for m in moduli]
        solved = modular_solve(congruences)
        assert solved is not None
        x, modulus = solved
        assert modulus == math.lcm(*moduli)
        assert all(x % m == r for r, m in congruences)
        assert 0 <= x < modulus
        assert x == oracles.crt_brute_scan(congruences)


# ---------------------------------------------------------------------------
# Criterion 7: planted SAT assignments satisfy; accepted set is exhaustive
# ---------------------------------------------------------------------------


def _clause_satisfied(clause, assignment) -> bool:
    return any(assignment[abs(lit)] == (lit > 0) for lit in clause)


def test_criterion_07_sat_planted_and_exhaustive():
    for variation in range(len(SAT_VARIATIONS)):
        for index in range(1000):
            inst = gen("hard", "boolean_sat", variation, index)
            planted = inst.payload["planted"]
            assert all(
                _clause_satisfied(c, planted) for c in inst.payload["clauses"]
            ), f"{SAT_VARIATIONS[variation]}#{index}"
        for index in range(3):
            inst = gen("hard", "boolean_sat", variation, index, {"size_n": 7})
            n = inst.payload["num_vars"]
            assert n <= 10
            truth = oracles.sat_satisfying_set(inst.payload["clauses"], n)
            for bits in itertools.product((False, True), repeat=n):
                answer = {v: bits[v - 1] for v in range(1, n + 1)}
                assert verify_sat(inst, answer) == (bits in truth)


# ---------------------------------------------------------------------------
# Criterion 8: chromatic numbers — closed forms and exhaustive check
# ---------------------------------------------------------------------------

_CHI_CLOSED_FORM = {
    "complete": lambda n: n,
    "odd_cycle": lambda n: 3,
    "tree": lambda n: 2,
    "bipartite": lambda n: 2,
    "complete_bipartite": lambda n: 2,
    "star": lambda n: 2,
    "wheel": lambda n: 4,
    "grid": lambda n: 2,
    "fan": lambda n: 3,
}


def test_criterion_08_chromatic_closed_forms_and_exhaustive():
    seen_sizes = {}
    for variation, name in enumerate(COLORING_VARIATIONS):
        if name == "dense_random":
            continue
        for index in range(12):
            inst = gen("hard", "graph_coloring", variation, index)
            n, chi = inst.payload["n"], inst.payload["chromatic_number"]
            assert chi == _CHI_CLOSED_FORM[name](n), (name, n)
            seen_sizes.setdefault(name, set()).add(n)
    # every structured family exercised on more than one in-range size
    assert all(len(sizes) >= 2 for sizes in seen_sizes.values()), seen_sizes

    checked = 0
    variation = COLORING_VARIATIONS.index("dense_random")
    for index in range(30):
        inst = gen("hard", "graph_coloring", variation, index)
        n, chi = inst.payload["n"], inst.payload["chromatic_number"]
        edges = [tuple(e) for e in inst.payload["edges"]]
        if n <= 10:
            assert chi == oracles.chromatic_brute(n, edges), (n, index)
            checked += 1
    assert checked >= 10


# ---------------------------------------------------------------------------
# Criterion 9: allocation optimum vs 2^n enumeration; 95% boundary exact
# ---------------------------------------------------------------------------


def test_criterion_09_allocation_optimum_and_boundary():
    for i in range(100):
        variation = i % len(ALLOCATION_VARIATIONS)
        inst = gen("hard", "constraint_optimization", variation,
                   i // len(ALLOCATION_VARIATIONS), {"size_n": 6})
        spec = inst.payload["spec"]
        assert len(spec["projects"]) <= 6
        assert inst.payload["optimal_profit"] == oracles.allocation_brute(spec)

    # two mutually exclusive projects: optimum 100, runner-up exactly 95
    spec = {
        "projects": [
            {"id": 1, "profit": 100, "needs": {"budget": 10}},
            {"id": 2, "profit": 95, "needs": {"budget": 10}},
        ],
        "capacities": {"budget": 10},
    }
    best, sel = allocation_optimum(spec)
    assert (best, sel) == (100, [1])
    inst = ProblemInstance(
        task=TaskId("hard", "constraint_optimization", 0),
        seed=SeedSpec(),
        params={},
        payload={"spec": spec, "optimal_profit": best, "optimal_selection": sel},
        prompt_text="",
        solutions=SolutionSet(kind="predicate", predicate_spec={}),
    )
    assert verify_allocation(inst, [2])  # exactly 95% of optimum: accepted
    spec["projects"][1]["profit"] = 94
    assert not verify_allocation(inst, [2])  # below the boundary: rejected


# ---------------------------------------------------------------------------
# Criterion 10: token anchors and status boundaries
# ---------------------------------------------------------------------------


def test_criterion_10_token_anchors_and_boundaries():
    hanoi = TaskId("hard", "tower_of_hanoi", 0)
    assert estimate_tokens(hanoi, {"size_n": 8}) == 3060
    assert estimate_tokens(hanoi, {"size_n": 10}) == 12276

    budget = TokenBudget(context_size=1000)
    assert classify_tokens(850, budget) == "valid"
    assert classify_tokens(851, budget) == "warning"
    assert classify_tokens(1000, budget) == "warning"
    assert classify_tokens(1001, budget) == "overflow"
    alt = TokenBudget(context_size=1000, profile="conservative")
    assert classify_tokens(950, alt) == "valid"
    assert classify_tokens(951, alt) == "warning"


# ---------------------------------------------------------------------------
# Criterion 11: collision-probability anchor and Monte Carlo agreement
# ---------------------------------------------------------------------------


def test_criterion_11_contamination_math():
    p = collision_prob_approx(1e-5, 10**6)
    assert abs(p - 0.9999546) < 1e-9
    assert p == pytest.approx(1 - math.exp(-10), rel=1e-15)

    trials = 10**6
    rng = np.random.default_rng(11)
    for q, n_draws in ((1e-3, 1000), (5e-4, 3000)):
        hits = np.count_nonzero(rng.binomial(n_draws, q, size=trials) > 0)
        observed = hits / trials
        expected = collision_prob_exact(q, n_draws)
        sigma = math.sqrt(expected * (1 - expected) / trials)
        assert abs(observed - expected) <= 3 * sigma


# ---------------------------------------------------------------------------
# Criterion 12: closed loop — bundled answerer scores 100%, cat scores 0%
# ---------------------------------------------------------------------------


def test_criterion_12_closed_loop_oracle_and_cat(tmp_path, capsys):
    verdicts_path = tmp_path / "verdicts.jsonl"
    assert cli.main([
        "run", "--variation", "0", "--count", "5",
        "--model", ORACLE_CMD, "--out", str(verdicts_path), "--json",
    ]) == 0
    report = json.loads(capsys.readouterr().out)
    assert len(report["per_task"]) == 44
    for key, row in report["per_task"].items():
        assert row["accuracy"] == 1.0, key
        assert row["instruction_rate"] == 1.0, key
        assert row["total"] == 5, key
    with open(verdicts_path, encoding="utf-8") as fh:
        verdicts = [json.loads(line) for line in fh]
    assert len(verdicts) == 220
    assert all(v["correct"] and v["instruction_followed"] for v in verdicts)

    assert cli.main([
        "run", "--variation", "0", "--count", "2", "--model", "cat", "--json",
    ]) == 0
    report = json.loads(capsys.readouterr().out)
    assert len(report["per_task"]) == 44
    assert all(row["accuracy"] == 0.0 for row in report["per_task"].values())


# ---------------------------------------------------------------------------
# Criterion 13: parser fuzzing — no exceptions, no false positives
# ---------------------------------------------------------------------------

_FORMAT_REPRESENTATIVES = {
    "boxed_scalar": TaskId("easy", "sum", 0),
    "boxed_relation": TaskId("easy", "comparison", 0),
    "boxed_modes": TaskId("easy", "mode", 0),
    "boxed_list": TaskId("easy", "sorting", 0),
    "answer_tag_scalar": TaskId("hard", "matrix_chain", 0),
    "answer_tag_list": TaskId("hard", "n_queens", 0),
    "answer_tag_dict_int_bool": TaskId("hard", "boolean_sat", 0),
    "answer_tag_dict_int_str": TaskId("hard", "graph_coloring", 0),
    "answer_tag_dict_str_int": TaskId("hard", "cryptarithmetic", 0),
    "move_sequence": TaskId("hard", "tower_of_hanoi", 0),
    "grid": TaskId("hard", "sudoku", 0),
    "boxed_logic_grid": TaskId("hard", "logic_grid", 0),
}

_SCALAR_KINDS = {"boxed_scalar", "answer_tag_scalar"}


def test_criterion_13_parser_fuzz_10k_per_format():
    digit_free = string.ascii_uppercase + "!@#%^&*()[]{}<>:,./\\ \n\t"
    for kind, task in _FORMAT_REPRESENTATIVES.items():
        rng = random.Random(kind)
        for _ in range(10_000):
            text = "".join(
                rng.choice(string.printable)
                for _ in range(rng.randint(0, 60))
            )
            assert parse_response(text, task).status in ("parsed", "invalid")
        if kind in _SCALAR_KINDS or kind == "boxed_relation":
            # scalar formats legitimately accept bare numbers; the relation
            # keywords are lowercase words excluded from this alphabet anyway
            continue
        for _ in range(10_000):
            text = "".join(
                rng.choice(digit_free) for _ in range(rng.randint(0, 60))
            )
            res = parse_response(text, task)
            assert res.status == "invalid", (kind, text)


# ---------------------------------------------------------------------------
# Criterion 14: numeric tolerance boundaries are exact
# ---------------------------------------------------------------------------


def _easy_instance(family, payload):
    return ProblemInstance(
        task=TaskId("easy", family, 0),
        seed=SeedSpec(),
        params={},
        payload=payload,
        prompt_text="",
        solutions=SolutionSet(kind="unique", values=[0.0]),
    )


def test_criterion_14_tolerance_boundaries_exact():
    division = _easy_instance("division", {"a": 0, "b": 7})
    assert verify_easy(division, DIVISION_EPS)
    assert verify_easy(division, -DIVISION_EPS)
    assert not verify_easy(division, DIVISION_EPS * (1 + 1e-9))
    assert not verify_easy(division, -DIVISION_EPS * (1 + 1e-9))

    for family in ("mean", "median"):
        inst = _easy_instance(family, {"values": [-5, 5]})
        assert verify_easy(inst, 0.0)
        assert verify_easy(inst, STAT_EPS)
        assert verify_easy(inst, -STAT_EPS)
        assert not verify_easy(inst, STAT_EPS * (1 + 1e-9))
        assert not verify_easy(inst, -STAT_EPS * (1 + 1e-9))
