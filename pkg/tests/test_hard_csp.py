"""Hard CSP families: Hanoi, N-Queens, Sudoku, logic grids."""

import pytest

import oracles
from algobench.core import SeedSpec, TaskId
from algobench.hard_csp import (
    HANOI_DISKS,
    LOGIC_CATEGORIES,
    LOGIC_PEOPLE,
    LOGIC_SHAPES,
    LOGIC_VALUES,
    QUEENS_SIZES,
    SUDOKU_VARIATIONS,
    SudokuSpec,
    _box_units,
    generate_hanoi,
    generate_logic_grid,
    generate_queens,
    generate_sudoku,
    hanoi_optimal,
    logic_count_solutions,
    nqueens_enumerate,
    queens_valid,
    render_hanoi_answer,
    render_logic_answer,
    render_queens_answer,
    render_sudoku_answer,
    sudoku_count_solutions,
    verify_hanoi,
    verify_hanoi_answer,
    verify_logic_grid,
    verify_queens,
    verify_sudoku,
)
from algobench.parsing import parse_response


def seed(index: int = 0) -> SeedSpec:
    return SeedSpec(42, index)


# ---------------------------------------------------------------------------
# Tower of Hanoi
# ---------------------------------------------------------------------------


def test_hanoi_optimal_lengths():
    for n in range(1, 11):
        assert len(hanoi_optimal(n)) == 2**n - 1


def test_hanoi_optimal_sequence_is_valid():
    for n in range(1, 9):
        assert verify_hanoi(n, hanoi_optimal(n)) == "valid"


def test_verify_hanoi_classifications():
    n = 4
    opt = hanoi_optimal(n)
    # legal but longer: shuttle the small disk back and forth first
    detour = [(1, "A", "B"), (1, "B", "A")] + opt
    assert verify_hanoi(n, detour) == "suboptimal"
    assert verify_hanoi(n, opt[:-1]) == "incomplete"
    assert verify_hanoi(n, []) == "incomplete"
    assert verify_hanoi(n, [(2, "A", "C")]) == "invalid"  # disk 2 not on top
    assert verify_hanoi(n, [(1, "A", "A")]) == "invalid"  # src == dst
    assert verify_hanoi(n, [(1, "A", "D")]) == "invalid"  # bad peg
    assert verify_hanoi(n, [(1, "B", "C")]) == "invalid"  # peg B empty
    bad = [(1, "A", "B"), (2, "A", "B")]  # large onto small
    assert verify_hanoi(n, bad) == "invalid"


def test_generate_hanoi_variations_and_verify():
    task = TaskId("hard", "tower_of_hanoi", 2)
    inst = generate_hanoi(task, seed())
    assert inst.payload["num_disks"] == HANOI_DISKS[2]
    assert verify_hanoi_answer(inst, inst.solutions.values[0])
    assert not verify_hanoi_answer(inst, inst.solutions.values[0][:-1])
    parsed = parse_response(render_hanoi_answer(inst), task)
    assert parsed.status == "parsed"
    assert verify_hanoi_answer(inst, parsed.value)


def test_generate_hanoi_rejects_out_of_range_size():
    from algobench.core import IllegalParams

    with pytest.raises(IllegalParams):
        generate_hanoi(TaskId("hard", "tower_of_hanoi", 0), seed(), {"size_n": 13})


# ---------------------------------------------------------------------------
# N-Queens
# ---------------------------------------------------------------------------


def test_nqueens_published_counts():
    assert len(nqueens_enumerate(4)) == 2
    assert len(nqueens_enumerate(5)) == 10
    assert len(nqueens_enumerate(6)) == 4
    assert len(nqueens_enumerate(8)) == 92


def test_nqueens_solutions_all_valid_and_distinct():
    for n in (4, 5, 6):
        sols = nqueens_enumerate(n)
        assert len({tuple(s) for s in sols}) == len(sols)
        assert all(queens_valid(s) for s in sols)


def test_queens_instance_enumerated_and_round_trip():
    for v, n in enumerate(QUEENS_SIZES):
        task = TaskId("hard", "n_queens", v)
        inst = generate_queens(task, seed())
        assert inst.payload["n"] == n
        assert inst.solutions.kind == "enumerated"
        parsed = parse_response(render_queens_answer(inst), task)
        assert parsed.status == "parsed"
        assert verify_queens(inst, parsed.value)
        # any enumerated member is accepted; a rotation of a bad list is not
        for sol in inst.solutions.values[:5]:
            assert verify_queens(inst, sol)
        assert not verify_queens(inst, list(range(n)))


def test_queens_large_size_predicate_mode():
    inst = generate_queens(
        TaskId("hard", "n_queens", 0), seed(), {"size_n": 10}
    )
    assert inst.solutions.kind == "predicate"
    assert verify_queens(inst, inst.payload["sample_solution"])


# ---------------------------------------------------------------------------
# Sudoku
# ---------------------------------------------------------------------------

_BOX_SHAPES = {"four_easy": (4, 2, 2), "four_hard": (4, 2, 2),
               "six_medium": (6, 2, 3), "nine_easy": (9, 3, 3),
               "nine_medium": (9, 3, 3)}


@pytest.mark.parametrize("variation", range(len(SUDOKU_VARIATIONS)))
def test_sudoku_generation_and_solution_consistency(variation):
    name = SUDOKU_VARIATIONS[variation]
    task = TaskId("hard", "sudoku", variation)
    for index in range(3):
        inst = generate_sudoku(task, seed(index))
        size = inst.payload["size"]
        puzzle = inst.payload["puzzle"]
        solution = inst.solutions.values[0]
        assert len(puzzle) == size and all(len(r) == size for r in puzzle)
        # givens are preserved in the solution
        for r in range(size):
            for c in range(size):
                if puzzle[r][c]:
                    assert solution[r][c] == puzzle[r][c]
        # every row/column of the solution is a permutation of 1..size
        want = set(range(1, size + 1))
        for r in range(size):
            assert set(solution[r]) == want
            assert {solution[i][r] for i in range(size)} == want
        assert verify_sudoku(inst, solution)
        assert not verify_sudoku(inst, [row[::-1] for row in solution])
        parsed = parse_response(render_sudoku_answer(inst), task)
        assert parsed.status == "parsed"
        assert verify_sudoku(inst, parsed.value)


@pytest.mark.parametrize("name", ["four_easy", "six_medium", "nine_easy"])
def test_sudoku_uniqueness_against_independent_solver(name):
    variation = SUDOKU_VARIATIONS.index(name)
    size, br, bc = _BOX_SHAPES[name]
    for index in range(5):
        inst = generate_sudoku(TaskId("hard", "sudoku", variation), seed(index))
        sols = oracles.sudoku_brute_solutions(inst.payload["puzzle"], br, bc)
        assert len(sols) == 1
        assert sols[0] == inst.solutions.values[0]


def test_sudoku_four_hard_is_minimal():
    task = TaskId("hard", "sudoku", SUDOKU_VARIATIONS.index("four_hard"))
    spec = SudokuSpec(4, _box_units(4, 2, 2))
    for index in range(3):
        inst = generate_sudoku(task, seed(index))
        flat = [v for row in inst.payload["puzzle"] for v in row]
        assert sum(1 for v in flat if v) <= 6
        assert sudoku_count_solutions(flat, spec, limit=2) == 1
        # removing any remaining given breaks uniqueness (minimality)
        for i, v in enumerate(flat):
            if v:
                trial = list(flat)
                trial[i] = 0
                assert sudoku_count_solutions(trial, spec, limit=2) >= 2


def test_sudoku_count_solutions_detects_ambiguity():
    spec = SudokuSpec(4, _box_units(4, 2, 2))
    assert sudoku_count_solutions([0] * 16, spec, limit=300) == 288


# ---------------------------------------------------------------------------
# Logic grids
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("variation", range(len(LOGIC_SHAPES)))
def test_logic_grid_round_trip_and_uniqueness(variation):
    n, m = LOGIC_SHAPES[variation]
    task = TaskId("hard", "logic_grid", variation)
    inst = generate_logic_grid(task, seed())
    assert inst.payload["people"] == list(LOGIC_PEOPLE[:n])
    assert inst.payload["categories"] == list(LOGIC_CATEGORIES[:m])
    truth = inst.solutions.values[0]
    assert verify_logic_grid(inst, truth)
    parsed = parse_response(render_logic_answer(inst), task)
    assert parsed.status == "parsed"
    assert verify_logic_grid(inst, parsed.value)
    # wrong assignment rejected
    people = inst.payload["people"]
    swapped = {p: dict(truth[q]) for p, q in zip(people, people[1:] + people[:1])}
    assert not verify_logic_grid(inst, swapped)


@pytest.mark.parametrize("variation", [0, 1, 3, 4])
def test_logic_grid_unique_by_independent_enumeration(variation):
    n, m = LOGIC_SHAPES[variation]
    task = TaskId("hard", "logic_grid", variation)
    for index in range(3):
        inst = generate_logic_grid(task, seed(index))
        people = inst.payload["people"]
        cats = inst.payload["categories"]
        count, first = oracles.logic_brute_count(
            people, cats, LOGIC_VALUES, inst.payload["clues"]
        )
        assert count == 1
        truth = inst.solutions.values[0]
        for ci, cat in enumerate(cats):
            for pi, person in enumerate(people):
                assert str(first[cat][pi]) == truth[person][cat]


def test_logic_count_solutions_limit_semantics():
    cats = ["age", "pet"]
    # no clues: every pair of permutations is consistent
    assert logic_count_solutions(3, cats, [], limit=100) == 36
    assert logic_count_solutions(3, cats, [], limit=2) == 2


def test_logic_grid_case_insensitive_verification():
    inst = generate_logic_grid(TaskId("hard", "logic_grid", 0), seed())
    truth = inst.solutions.values[0]
    noisy = {
        p.upper(): {c.upper(): v.lower() for c, v in attrs.items()}
        for p, attrs in truth.items()
    }
    assert verify_logic_grid(inst, noisy)
