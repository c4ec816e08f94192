"""
Hard-suite constraint-satisfaction families:

  tower_of_hanoi  (6 variations: 3..8 disks, unique optimal move sequence)
  n_queens        (4 variations: n in {4,5,6,8}; enumerated solution sets
                   2/10/4/92; predicate verification supports n up to 16)
  sudoku          (8 variations: 4x4 easy/hard-minimal, 6x6, 9x9 easy/medium,
                   diagonal 4x4, irregular-region 6x6, killer-cage 4x4)
  logic_grid      (8 variations: (people, categories) grids with generated
                   clue sets proved unique by exhaustive counting)
"""

from __future__ import annotations

import itertools
from typing import Optional, Sequence

from .core import (
    GenerationExhausted,
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

# ---------------------------------------------------------------------------
# Tower of Hanoi
# ---------------------------------------------------------------------------

HANOI_DISKS = (3, 4, 5, 6, 7, 8)

_HANOI_PROMPT = """Solve this Tower of Hanoi puzzle with {n} disks.

RULES:
1. Only one disk can be moved at a time.
2. A larger disk cannot be placed on top of a smaller disk.
3. Only the topmost disk on any peg can be moved.

INITIAL STATE:
Peg A: {peg_a} (disk 1 is smallest, disk {n} is largest)
Peg B: []
Peg C: []

GOAL: Move all disks from Peg A to Peg C.

Provide the complete sequence of moves. You can use any of these formats:
- "Move disk X from peg Y to peg Z"
- "Move X from Y to Z"
- "X: Y -> Z"
- "Transfer disk X from Y to Z"

<answer>
Move disk 1 from peg A to peg C
Move disk 2 from peg A to peg B
...
</answer>"""


def hanoi_optimal(n: int, src: str = "A", aux: str = "B", dst: str = "C") -> list:
    """The unique optimal move sequence (disk, from, to), 2^n - 1 moves."""
    if n == 0:
        return []
    return (
        hanoi_optimal(n - 1, src, dst, aux)
        + [(n, src, dst)]
        + hanoi_optimal(n - 1, aux, src, dst)
    )


def verify_hanoi(n: int, moves: Sequence[tuple]) -> str:
    """Simulate moves; returns 'valid' | 'suboptimal' | 'incomplete' | 'invalid'."""
    pegs = {"A": list(range(n, 0, -1)), "B": [], "C": []}
    for move in moves:
        try:
            disk, src, dst = int(move[0]), str(move[1]).upper(), str(move[2]).upper()
        except (TypeError, ValueError, IndexError):
            return "invalid"
        if src not in pegs or dst not in pegs or src == dst:
            return "invalid"
        if not pegs[src] or pegs[src][-1] != disk:
            return "invalid"
        if pegs[dst] and pegs[dst][-1] < disk:
            return "invalid"
        pegs[dst].append(pegs[src].pop())
    if pegs["C"] == list(range(n, 0, -1)):
        return "valid" if len(moves) == (1 << n) - 1 else "suboptimal"
    return "incomplete"


def generate_hanoi(
    task: TaskId, seed: SeedSpec, params_override: Optional[dict] = None
) -> ProblemInstance:
    n = HANOI_DISKS[task.variation]
    if params_override and "size_n" in params_override:
        n = int(params_override["size_n"])
    if not 1 <= n <= 12:
        raise IllegalParams(f"hanoi disk count {n} outside [1, 12]")
    moves = hanoi_optimal(n)
    params = {"size_n": n}
    prompt = _HANOI_PROMPT.format(n=n, peg_a=list(range(n, 0, -1)))
    return ProblemInstance(
        task=task,
        seed=seed,
        params=params,
        payload={"num_disks": n, "optimal_length": (1 << n) - 1},
        prompt_text=prompt,
        solutions=SolutionSet(
            kind="unique", values=[[list(m) for m in moves]]
        ),
        estimated_tokens=tokens.estimate_tokens(task, params),
    )


def verify_hanoi_answer(instance: ProblemInstance, answer) -> bool:
    if not isinstance(answer, (list, tuple)):
        return False
    return verify_hanoi(instance.payload["num_disks"], answer) == "valid"


def render_hanoi_answer(instance: ProblemInstance) -> str:
    lines = [
        f"Move disk {d} from peg {s} to peg {t}"
        for d, s, t in instance.solutions.values[0]
    ]
    return "<answer>\n" + "\n".join(lines) + "\n</answer>"


register(
    TaskDef(
        suite="hard",
        family="tower_of_hanoi",
        n_variations=len(HANOI_DISKS),
        generate=generate_hanoi,
        verify=verify_hanoi_answer,
        render_oracle=render_hanoi_answer,
        format_kind=lambda v: "move_sequence",
    )
)

# ---------------------------------------------------------------------------
# N-Queens
# ---------------------------------------------------------------------------

QUEENS_SIZES = (4, 5, 6, 8)
_QUEENS_MAX_N = 16

_QUEENS_PROMPT = """Solve the {n}-Queens problem: Place {n} queens on an {n} x {n} chessboard so that no two queens attack each other.

RULES:
- Queens attack horizontally, vertically, and diagonally.
- No two queens can be in the same row, column, or diagonal.
- You must place exactly {n} queens on the board (one queen per row).

CRITICAL: Your answer must contain exactly {n} numbers, each representing the column position (0 to {n_minus_1}) of the queen in that row.

SOLUTION FORMAT:
Provide your solution as a list of {n} column numbers. The first number is the column for row 0, the second for row 1, etc.

REQUIRED FORMAT - Use one of these:
- [col0, col1, col2, ...] <- PREFERRED
- Answer: [1, 3, 0, 2]
- Solution: [1, 3, 0, 2]

<answer>
[your {n} column numbers here]
</answer>"""


def queens_valid(cols: Sequence[int]) -> bool:
    n = len(cols)
    if sorted(cols) != list(range(n)):
        return False
    for i in range(n):
        for j in range(i + 1, n):
            if abs(cols[i] - cols[j]) == j - i:
                return False
    return True


def nqueens_enumerate(n: int, cap: Optional[int] = None) -> list[list[int]]:
    """All solutions (column-per-row) via backtracking, optionally capped."""
    out: list[list[int]] = []
    cols, d1, d2 = set(), set(), set()
    placement: list[int] = []

    def place(row: int) -> bool:
        if row == n:
            out.append(list(placement))
            return cap is not None and len(out) >= cap
        for c in range(n):
            if c in cols or (row - c) in d1 or (row + c) in d2:
                continue
            cols.add(c); d1.add(row - c); d2.add(row + c)
            placement.append(c)
            if place(row + 1):
                return True
            placement.pop()
            cols.discard(c); d1.discard(row - c); d2.discard(row + c)
        return False

    place(0)
    return out


def generate_queens(
    task: TaskId, seed: SeedSpec, params_override: Optional[dict] = None
) -> ProblemInstance:
    n = QUEENS_SIZES[task.variation]
    if params_override and "size_n" in params_override:
        n = int(params_override["size_n"])
    if not 4 <= n <= _QUEENS_MAX_N:
        raise IllegalParams(f"n-queens size {n} outside [4, {_QUEENS_MAX_N}]")
    params = {"size_n": n}
    prompt = _QUEENS_PROMPT.format(n=n, n_minus_1=n - 1)
    if n <= 8:
        solutions = SolutionSet(kind="enumerated", values=nqueens_enumerate(n))
        sample = solutions.values[0]
    else:
        sample = nqueens_enumerate(n, cap=1)[0]
        solutions = SolutionSet(
            kind="predicate",
            predicate_spec={"type": "n_queens", "n": n},
        )
    return ProblemInstance(
        task=task,
        seed=seed,
        params=params,
        payload={"n": n, "sample_solution": sample},
        prompt_text=prompt,
        solutions=solutions,
        estimated_tokens=tokens.estimate_tokens(task, params),
    )


def verify_queens(instance: ProblemInstance, answer) -> bool:
    n = instance.payload["n"]
    if not isinstance(answer, (list, tuple)) or len(answer) != n:
        return False
    try:
        cols = [int(c) for c in answer]
    except (TypeError, ValueError):
        return False
    return queens_valid(cols)


def render_queens_answer(instance: ProblemInstance) -> str:
    cols = instance.payload["sample_solution"]
    return "<answer>\n[" + ", ".join(str(c) for c in cols) + "]\n</answer>"


register(
    TaskDef(
        suite="hard",
        family="n_queens",
        n_variations=len(QUEENS_SIZES),
        generate=generate_queens,
        verify=verify_queens,
        render_oracle=render_queens_answer,
        format_kind=lambda v: "answer_tag_list",
    )
)

# ---------------------------------------------------------------------------
# Sudoku
# ---------------------------------------------------------------------------

SUDOKU_VARIATIONS = (
    "four_easy",
    "four_hard",
    "six_medium",
    "nine_easy",
    "nine_medium",
    "diagonal_four",
    "irregular_six",
    "killer_four",
)

_SUDOKU_RETRY = 100


class SudokuSpec:
    """Board shape: size, all-different units, optional killer cages."""

    def __init__(
        self,
        size: int,
        units: list[list[int]],
        cages: Optional[list[tuple[int, list[int]]]] = None,
    ):
        self.size = size
        self.units = units
        self.cages = cages or []
        self.cell_units: list[list[list[int]]] = [[] for _ in range(size * size)]
        for unit in units:
            for cell in unit:
                self.cell_units[cell].append(unit)
        self.cell_cage: dict[int, tuple[int, list[int]]] = {}
        for cage in self.cages:
            for cell in cage[1]:
                self.cell_cage[cell] = cage


def _box_units(size: int, box_rows: int, box_cols: int) -> list[list[int]]:
    units = []
    for r in range(size):
        units.append([r * size + c for c in range(size)])
    for c in range(size):
        units.append([r * size + c for r in range(size)])
    for br in range(0, size, box_rows):
        for bc in range(0, size, box_cols):
            units.append(
                [
                    (br + dr) * size + (bc + dc)
                    for dr in range(box_rows)
                    for dc in range(box_cols)
                ]
            )
    return units


def _diagonal_units(size: int) -> list[list[int]]:
    return [
        [i * size + i for i in range(size)],
        [i * size + (size - 1 - i) for i in range(size)],
    ]


def _candidates(grid: list[int], spec: SudokuSpec, cell: int) -> list[int]:
    used = set()
    for unit in spec.cell_units[cell]:
        for other in unit:
            if grid[other]:
                used.add(grid[other])
    cands = [v for v in range(1, spec.size + 1) if v not in used]
    cage = spec.cell_cage.get(cell)
    if cage is not None:
        total, cells = cage
        assigned = [grid[c] for c in cells if grid[c]]
        remaining = len(cells) - len(assigned) - 1
        budget = total - sum(assigned)
        if remaining == 0:
            cands = [v for v in cands if v == budget]
        else:
            cands = [v for v in cands if v < budget]
    return cands


def sudoku_count_solutions(
    grid: list[int], spec: SudokuSpec, limit: int = 2
) -> int:
    """Count completions of `grid` up to `limit` using MRV backtracking."""
    work = list(grid)

    def step() -> int:
        best_cell, best_cands = -1, None
        for cell in range(spec.size * spec.size):
            if work[cell]:
                continue
            cands = _candidates(work, spec, cell)
            if not cands:
                return 0
            if best_cands is None or len(cands) < len(best_cands):
                best_cell, best_cands = cell, cands
                if len(cands) == 1:
                    break
        if best_cands is None:
            return 1
        found = 0
        for v in best_cands:
            work[best_cell] = v
            found += step()
            work[best_cell] = 0
            if found >= limit:
                break
        return found

    return step()


def sudoku_solve_full(spec: SudokuSpec, rng: Rng) -> Optional[list[int]]:
    """Fill an empty board with a random complete solution."""
    work = [0] * (spec.size * spec.size)

    def step() -> bool:
        best_cell, best_cands = -1, None
        for cell in range(spec.size * spec.size):
            if work[cell]:
                continue
            cands = _candidates(work, spec, cell)
            if not cands:
                return False
            if best_cands is None or len(cands) < len(best_cands):
                best_cell, best_cands = cell, cands
                if len(cands) == 1:
                    break
        if best_cands is None:
            return True
        rng.shuffle(best_cands)
        for v in best_cands:
            work[best_cell] = v
            if step():
                return True
            work[best_cell] = 0
        return False

    return work if step() else None


def _remove_cells(
    solution: list[int], spec: SudokuSpec, rng: Rng, target_removed: int
) -> list[int]:
    """Remove up to target_removed givens, preserving solution uniqueness."""
    puzzle = list(solution)
    order = list(range(len(puzzle)))
    rng.shuffle(order)
    removed = 0
    for cell in order:
        if removed >= target_removed:
            break
        saved, puzzle[cell] = puzzle[cell], 0
        if sudoku_count_solutions(puzzle, spec, limit=2) == 1:
            removed += 1
        else:
            puzzle[cell] = saved
    return puzzle


def _remove_to_minimal(solution: list[int], spec: SudokuSpec, rng: Rng) -> list[int]:
    """Remove givens to a fixpoint: no remaining given can be removed."""
    puzzle = list(solution)
    changed = True
    while changed:
        changed = False
        order = [c for c in range(len(puzzle)) if puzzle[c]]
        rng.shuffle(order)
        for cell in order:
            saved, puzzle[cell] = puzzle[cell], 0
            if sudoku_count_solutions(puzzle, spec, limit=2) == 1:
                changed = True
            else:
                puzzle[cell] = saved
    return puzzle


def _neighbors(cell: int, size: int) -> list[int]:
    r, c = divmod(cell, size)
    return [
        nr * size + nc
        for nr, nc in ((r - 1, c), (r + 1, c), (r, c - 1), (r, c + 1))
        if 0 <= nr < size and 0 <= nc < size
    ]


def _connected(cells: set, size: int) -> bool:
    if not cells:
        return True
    seen = {next(iter(cells))}
    stack = list(seen)
    while stack:
        cur = stack.pop()
        for n in _neighbors(cur, size):
            if n in cells and n not in seen:
                seen.add(n)
                stack.append(n)
    return len(seen) == len(cells)


def _carve_regions(size: int, rng: Rng) -> Optional[list[list[int]]]:
    """
    Partition the size x size board into `size` connected regions of `size`
    cells.  Grows one region at a time from the lowest-index free cell (so
    top-left pockets are consumed first) and fails fast when the remaining
    free cells become disconnected; callers retry on None.
    """
    free = set(range(size * size))
    regions: list[list[int]] = []
    for _ in range(size):
        start = min(free)
        region = [start]
        free.discard(start)
        while len(region) < size:
            frontier = sorted(
                {n for cell in region for n in _neighbors(cell, size) if n in free}
            )
            if not frontier:
                return None
            cell = rng.choice(frontier)
            region.append(cell)
            free.discard(cell)
        if free and not _connected(free, size):
            return None
        regions.append(region)
    return regions


def _carve_cages(size: int, rng: Rng) -> list[list[int]]:
    """Partition the board into orthogonally-adjacent cages of size 2 (or 1)."""
    unassigned = set(range(size * size))
    cages = []
    order = list(range(size * size))
    rng.shuffle(order)
    for cell in order:
        if cell not in unassigned:
            continue
        unassigned.discard(cell)
        r, c = divmod(cell, size)
        neighbors = [
            nr * size + nc
            for nr, nc in ((r - 1, c), (r + 1, c), (r, c - 1), (r, c + 1))
            if 0 <= nr < size and 0 <= nc < size and nr * size + nc in unassigned
        ]
        if neighbors:
            mate = rng.choice(neighbors)
            unassigned.discard(mate)
            cages.append([cell, mate])
        else:
            cages.append([cell])
    return cages


_SUDOKU_PROMPT = """Base Rules for {size} x {size} Sudoku:
- Fill the grid with numbers 1 to {size}.
- Each row must contain all numbers 1 to {size} exactly once.
- Each column must contain all numbers 1 to {size} exactly once.
- Each {box_rule} must contain all numbers 1 to {size} exactly once.
{extra_rules}
PUZZLE GRID (0 represents empty cells):
{grid}

SOLVING REQUIREMENTS:
- Provide the complete solved grid.
- Every cell must be filled with a number from 1 to {size}.
- Solution must satisfy all rules including additional constraints.

ANSWER FORMAT:
Provide your solution as a complete grid using one of these formats:

1. Grid format:
1 2 3 4
3 4 1 2
2 3 4 1
4 1 2 3

2. List format:
[[1,2,3,4],[3,4,1,2],[2,3,4,1],[4,1,2,3]]"""


def _sudoku_build(variation_name: str, rng: Rng):
    """Returns (size, spec, puzzle, solution, extra_rules_text)."""
    if variation_name in ("four_easy", "four_hard"):
        size, units = 4, _box_units(4, 2, 2)
        spec = SudokuSpec(size, units)
        solution = sudoku_solve_full(spec, rng)
        if variation_name == "four_easy":
            puzzle = _remove_cells(solution, spec, rng, 8)
        else:
            puzzle = _remove_to_minimal(solution, spec, rng)
            if sum(1 for v in puzzle if v) > 6:
                return None
        return size, spec, puzzle, solution, ""
    if variation_name == "six_medium":
        size, units = 6, _box_units(6, 2, 3)
        spec = SudokuSpec(size, units)
        solution = sudoku_solve_full(spec, rng)
        return size, spec, _remove_cells(solution, spec, rng, 20), solution, ""
    if variation_name in ("nine_easy", "nine_medium"):
        size, units = 9, _box_units(9, 3, 3)
        spec = SudokuSpec(size, units)
        solution = sudoku_solve_full(spec, rng)
        target = 40 if variation_name == "nine_easy" else 50
        return size, spec, _remove_cells(solution, spec, rng, target), solution, ""
    if variation_name == "diagonal_four":
        size = 4
        spec = SudokuSpec(size, _box_units(4, 2, 2) + _diagonal_units(4))
        solution = sudoku_solve_full(spec, rng)
        if solution is None:
            return None
        puzzle = _remove_cells(solution, spec, rng, 10)
        extra = (
            "- ADDITIONAL CONSTRAINT: each of the two main diagonals must also "
            "contain all numbers 1 to 4 exactly once.\n"
        )
        return size, spec, puzzle, solution, extra
    if variation_name == "irregular_six":
        size = 6
        regions = _carve_regions(size, rng)
        if regions is None:
            return None
        units = _box_units(6, 2, 3)[:12]  # rows and columns only
        spec = SudokuSpec(size, units + [sorted(r) for r in regions])
        solution = sudoku_solve_full(spec, rng)
        if solution is None:
            return None
        puzzle = _remove_cells(solution, spec, rng, 20)
        region_lines = []
        for i, reg in enumerate(regions):
            cells = ", ".join(f"({c // size},{c % size})" for c in sorted(reg))
            region_lines.append(f"  Region {i + 1}: {cells}")
        extra = (
            "- ADDITIONAL CONSTRAINT: instead of rectangular boxes, each of the "
            "following irregular regions must contain all numbers 1 to 6 exactly "
            "once (cells given as (row,col), 0-indexed):\n"
            + "\n".join(region_lines)
            + "\n"
        )
        return size, spec, puzzle, solution, extra
    if variation_name == "killer_four":
        size = 4
        base_spec = SudokuSpec(size, _box_units(4, 2, 2))
        solution = sudoku_solve_full(base_spec, rng)
        cage_cells = _carve_cages(size, rng)
        cages = [(sum(solution[c] for c in cells), cells) for cells in cage_cells]
        spec = SudokuSpec(size, _box_units(4, 2, 2), cages=cages)
        puzzle = _remove_cells(solution, spec, rng, 12)
        cage_lines = [
            "  Cage (sum={}): {}".format(
                total, ", ".join(f"({c // size},{c % size})" for c in cells)
            )
            for total, cells in cages
        ]
        extra = (
            "- ADDITIONAL CONSTRAINT (killer cages): the cells of each cage below "
            "must sum to the given value (cells given as (row,col), 0-indexed):\n"
            + "\n".join(cage_lines)
            + "\n"
        )
        return size, spec, puzzle, solution, extra
    raise ValueError(variation_name)


_BOX_RULE = {4: "2 x 2 box", 6: "2 x 3 box", 9: "3 x 3 box"}


def generate_sudoku(
    task: TaskId, seed: SeedSpec, params_override: Optional[dict] = None
) -> ProblemInstance:
    name = SUDOKU_VARIATIONS[task.variation]
    rng = Rng(seed.child_seed(task))
    for _ in range(_SUDOKU_RETRY):
        built = _sudoku_build(name, rng)
        if built is None:
            continue
        size, spec, puzzle, solution, extra = built
        grid_text = "\n".join(
            " ".join(str(puzzle[r * size + c]) for c in range(size))
            for r in range(size)
        )
        givens = sum(1 for v in puzzle if v)
        params = {"size_n": size, "givens": givens, "variation_name": name}
        rows = [
            [solution[r * size + c] for c in range(size)] for r in range(size)
        ]
        prompt = _SUDOKU_PROMPT.format(
            size=size,
            box_rule=_BOX_RULE[size],
            extra_rules=extra,
            grid=grid_text,
        )
        return ProblemInstance(
            task=task,
            seed=seed,
            params=params,
            payload={
                "size": size,
                "puzzle": [
                    [puzzle[r * size + c] for c in range(size)] for r in range(size)
                ],
                "variation_name": name,
            },
            prompt_text=prompt,
            solutions=SolutionSet(kind="unique", values=[rows]),
            estimated_tokens=tokens.estimate_tokens(task, params),
        )
    raise GenerationExhausted(f"{task.key()}: retry cap {_SUDOKU_RETRY} exceeded")


def verify_sudoku(instance: ProblemInstance, answer) -> bool:
    return answer == instance.solutions.values[0]


def render_sudoku_answer(instance: ProblemInstance) -> str:
    rows = instance.solutions.values[0]
    return "\n".join(" ".join(str(v) for v in row) for row in rows)


register(
    TaskDef(
        suite="hard",
        family="sudoku",
        n_variations=len(SUDOKU_VARIATIONS),
        generate=generate_sudoku,
        verify=verify_sudoku,
        render_oracle=render_sudoku_answer,
        format_kind=lambda v: "grid",
    )
)

# ---------------------------------------------------------------------------
# Logic grid puzzles
# ---------------------------------------------------------------------------

LOGIC_PEOPLE = ("Alice", "Bob", "Carol", "David", "Emma")
LOGIC_CATEGORIES = ("age", "favorite_color", "pet", "drink", "sport")
LOGIC_VALUES = {
    "age": (25, 30, 35, 40, 45),
    "favorite_color": ("Red", "Blue", "Green", "Yellow", "Purple"),
    "pet": ("Dog", "Cat", "Bird", "Fish", "Hamster"),
    "drink": ("Coffee", "Tea", "Juice", "Milk", "Water"),
    "sport": ("Tennis", "Soccer", "Chess", "Swimming", "Running"),
}

# (people, categories) per variation; (5,5) omitted to bound enumeration cost
LOGIC_SHAPES = ((3, 3), (3, 4), (3, 5), (4, 3), (4, 4), (4, 5), (5, 3), (5, 4))

_LOGIC_RETRY = 20


def _clue_text(clue: dict, people: Sequence[str]) -> str:
    kind = clue["kind"]
    if kind == "direct":
        p, cat, val = people[clue["p"]], clue["cat"], clue["val"]
        if cat == "age":
            return f"{p} is {val} years old."
        return f"{p}'s {cat.replace('_', ' ')} is {val}."
    if kind == "negative":
        p, cat, val = people[clue["p"]], clue["cat"], clue["val"]
        if cat == "age":
            return f"{p} is not {val} years old."
        return f"{p}'s {cat.replace('_', ' ')} is not {val}."
    if kind == "comparison":
        return f"{people[clue['p']]} is younger than {people[clue['q']]}."
    if kind == "conditional":
        c1, v1, c2, v2 = clue["cat1"], clue["val1"], clue["cat2"], clue["val2"]
        return (
            f"The person whose {c1.replace('_', ' ')} is {v1} has "
            f"{v2} as their {c2.replace('_', ' ')}."
        )
    if kind == "chain":
        c1, v1, c2, v2 = clue["cat1"], clue["val1"], clue["cat2"], clue["val2"]
        return (
            f"The person whose {c1.replace('_', ' ')} is {v1} is not the person "
            f"whose {c2.replace('_', ' ')} is {v2}."
        )
    raise ValueError(kind)


def _clue_cats(clue: dict) -> set:
    kind = clue["kind"]
    if kind in ("direct", "negative"):
        return {clue["cat"]}
    if kind == "comparison":
        return {"age"}
    return {clue["cat1"], clue["cat2"]}


def _clue_holds(clue: dict, assign: dict) -> bool:
    """assign: category -> tuple of values aligned with the people order."""
    kind = clue["kind"]
    if kind == "direct":
        return assign[clue["cat"]][clue["p"]] == clue["val"]
    if kind == "negative":
        return assign[clue["cat"]][clue["p"]] != clue["val"]
    if kind == "comparison":
        return assign["age"][clue["p"]] < assign["age"][clue["q"]]
    p1 = assign[clue["cat1"]].index(clue["val1"])
    p2 = assign[clue["cat2"]].index(clue["val2"])
    if kind == "conditional":
        return p1 == p2
    return p1 != p2  # chain


def logic_count_solutions(
    n: int, cats: Sequence[str], clues: Sequence[dict], limit: int = 2
) -> int:
    """Count clue-consistent assignments (one value permutation per category)."""
    values = {c: LOGIC_VALUES[c][:n] for c in cats}
    perms = {c: list(itertools.permutations(values[c])) for c in cats}
    by_depth: list[list[dict]] = [[] for _ in cats]
    for clue in clues:
        need = _clue_cats(clue)
        depth = max(i for i, c in enumerate(cats) if c in need)
        by_depth[depth].append(clue)
    count = 0

    def step(depth: int, assign: dict) -> bool:
        nonlocal count
        if depth == len(cats):
            count += 1
            return count >= limit
        for perm in perms[cats[depth]]:
            assign[cats[depth]] = perm
            if all(_clue_holds(cl, assign) for cl in by_depth[depth]):
                if step(depth + 1, assign):
                    return True
        del assign[cats[depth]]
        return False

    step(0, {})
    return count


def _logic_clue_pool(
    n: int, cats: Sequence[str], truth: dict, rng: Rng
) -> list[dict]:
    pool: list[dict] = []
    for p in range(n):
        for cat in cats:
            pool.append({"kind": "direct", "p": p, "cat": cat, "val": truth[cat][p]})
            wrong = [v for v in LOGIC_VALUES[cat][:n] if v != truth[cat][p]]
            pool.append(
                {"kind": "negative", "p": p, "cat": cat, "val": rng.choice(wrong)}
            )
    if "age" in cats:
        for p in range(n):
            for q in range(n):
                if truth["age"][p] < truth["age"][q]:
                    pool.append({"kind": "comparison", "p": p, "q": q})
    for c1, c2 in itertools.combinations(cats, 2):
        for p in range(n):
            pool.append(
                {
                    "kind": "conditional",
                    "cat1": c1,
                    "val1": truth[c1][p],
                    "cat2": c2,
                    "val2": truth[c2][p],
                }
            )
            other = rng.randint(0, n - 1)
            if other != p:
                pool.append(
                    {
                        "kind": "chain",
                        "cat1": c1,
                        "val1": truth[c1][p],
                        "cat2": c2,
                        "val2": truth[c2][other],
                    }
                )
    rng.shuffle(pool)
    # prefer indirect clue styles early so puzzles need actual deduction
    pool.sort(key=lambda cl: 0 if cl["kind"] != "direct" else 1)
    return pool


_LOGIC_PROMPT = """You are solving a logic grid puzzle. This requires systematic logical reasoning and constraint satisfaction.

PUZZLE SETUP:
Grid Size: {n} x {n}
People: {people}
Categories: {cats}

CLUES:
{clues}

TASK: Use logical deduction to determine which person has which attributes in each category.

CRITICAL INSTRUCTIONS:
Present your final answer in ONE of these EXACT formats:

FORMAT 1 (PREFERRED - Use this exact structure):
\\boxed{{
{example}
...}}

IMPORTANT FORMATTING NOTES:
- Replace each value with the actual specific attribute.
- Use the exact person names from the people list.
- Include ALL people and ALL their attributes.
- Make sure no two people share the same attribute value."""


def generate_logic_grid(
    task: TaskId, seed: SeedSpec, params_override: Optional[dict] = None
) -> ProblemInstance:
    n, m = LOGIC_SHAPES[task.variation]
    rng = Rng(seed.child_seed(task))
    people = LOGIC_PEOPLE[:n]
    cats = LOGIC_CATEGORIES[:m]

    for _ in range(_LOGIC_RETRY):
        truth = {}
        for cat in cats:
            vals = list(LOGIC_VALUES[cat][:n])
            rng.shuffle(vals)
            truth[cat] = tuple(vals)
        pool = _logic_clue_pool(n, cats, truth, rng)
        clues: list[dict] = []
        for clue in pool:
            clues.append(clue)
            if logic_count_solutions(n, cats, clues, limit=2) == 1:
                break
        else:
            continue
        if n * m <= 16:
            # minimize: drop clues that are not needed for uniqueness
            kept = list(clues)
            for clue in list(kept):
                trial = [c for c in kept if c is not clue]
                if trial and logic_count_solutions(n, cats, trial, limit=2) == 1:
                    kept = trial
            clues = kept

        clue_lines = "\n".join(
            f"{i + 1}. {_clue_text(c, people)}" for i, c in enumerate(clues)
        )
        prompt = _LOGIC_PROMPT.format(
            n=n,
            people=", ".join(people),
            cats=", ".join(cats),
            clues=clue_lines,
            example=f"{people[0]}: [" + ", ".join(f"{cat}: [value]" for cat in cats) + "]",
        )
        solution = {
            people[p]: {cat: str(truth[cat][p]) for cat in cats} for p in range(n)
        }
        params = {"size_n": n, "num_categories": m}
        return ProblemInstance(
            task=task,
            seed=seed,
            params=params,
            payload={
                "people": list(people),
                "categories": list(cats),
                "clues": [_clue_text(c, people) for c in clues],
            },
            prompt_text=prompt,
            solutions=SolutionSet(kind="unique", values=[solution]),
            estimated_tokens=tokens.estimate_tokens(task, params),
        )
    raise GenerationExhausted(f"{task.key()}: retry cap {_LOGIC_RETRY} exceeded")


def verify_logic_grid(instance: ProblemInstance, answer) -> bool:
    if not isinstance(answer, dict):
        return False
    truth = instance.solutions.values[0]
    norm = {
        str(p).strip().lower(): {
            str(c).strip().lower(): str(v).strip().lower() for c, v in attrs.items()
        }
        for p, attrs in answer.items()
        if isinstance(attrs, dict)
    }
    for person, attrs in truth.items():
        got = norm.get(person.lower())
        if got is None:
            return False
        for cat, val in attrs.items():
            if got.get(cat.lower()) != val.lower():
                return False
    return True


def render_logic_answer(instance: ProblemInstance) -> str:
    truth = instance.solutions.values[0]
    lines = [
        f"{person}: [" + ", ".join(f"{c}: {v}" for c, v in attrs.items()) + "]"
        for person, attrs in truth.items()
    ]
    return "\\boxed{\n" + "\n".join(lines) + "\n}"


register(
    TaskDef(
        suite="hard",
        family="logic_grid",
        n_variations=len(LOGIC_SHAPES),
        generate=generate_logic_grid,
        verify=verify_logic_grid,
        render_oracle=render_logic_answer,
        format_kind=lambda v: "boxed_logic_grid",
    )
)
