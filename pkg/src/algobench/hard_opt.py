"""
Hard-suite search/optimization families:

  boolean_sat             (5 variations: planted random-3SAT, random-kSAT,
                           Horn, XOR-parity CNF expansion, mixed)
  graph_coloring          (10 graph classes with known or exactly computed
                           chromatic number; answers checked as predicates)
  cryptarithmetic         (12 variations: 3 operators x 4 letter-count tiers;
                           uniqueness proved by exhaustive counting)
  matrix_chain            (5 dimension patterns; exact DP optimum)
  modular_system          (5 constraint types over a CRT-consistent system)
  constraint_optimization (5 constraint mixes; exact optimum by subset
                           enumeration, answers accepted at >= 95% of optimal)
"""

from __future__ import annotations

import itertools
from typing import Optional, Sequence

from .core import (
    GenerationExhausted,
    ProblemInstance,
    SeedSpec,
    SolutionSet,
    TaskDef,
    TaskId,
    register,
)
from .rng import Rng
from . import tokens

_RETRY = 80

# ---------------------------------------------------------------------------
# Boolean SAT
# ---------------------------------------------------------------------------

SAT_VARIATIONS = ("random_3sat", "random_ksat", "horn", "xor", "mixed")

_SAT_PROMPT = """CHALLENGING BOOLEAN SATISFIABILITY (SAT) PROBLEM:

Find a truth assignment for variables x1, x2, ..., x{n} that satisfies this complex formula:

{formula}

LOGICAL OPERATORS:
- ∨ means OR (disjunction)
- ∧ means AND (conjunction)
- ¬ means NOT (negation)

SOLUTION FORMAT REQUIREMENTS:
Your answer must assign True/False to ALL {n} variables.

REQUIRED FORMAT (STRICTLY FOLLOW THIS):
<answer>
{{1: True, 2: False, 3: True, ..., {n}: True}}
</answer>

IMPORTANT FORMATTING NOTES:
- Use EXACTLY the format shown above inside <answer> tags.
- Use numbers (1, 2, 3...) NOT variable names (x1, x2, x3).
- Use True/False (not true/false, 1/0, T/F).
- Include ALL {n} variables in your answer.
- Do NOT use code blocks, markdown, or other formatting."""


def sat_verify(clauses: Sequence[Sequence[int]], assignment: dict) -> Optional[int]:
    """Index of the first unsatisfied clause, or None when all are satisfied."""
    for i, clause in enumerate(clauses):
        if not any(
            assignment.get(abs(lit)) == (lit > 0) for lit in clause
        ):
            return i
    return None


def render_formula(clauses: Sequence[Sequence[int]]) -> str:
    parts = []
    for clause in clauses:
        lits = " ∨ ".join(
            (f"x{lit}" if lit > 0 else f"¬x{-lit}") for lit in clause
        )
        parts.append(f"({lits})")
    return " ∧ ".join(parts)


def _planted_clause(rng: Rng, n: int, k: int, alpha: Sequence[bool]) -> list[int]:
    """A k-literal clause over distinct variables, satisfied by alpha."""
    vars_ = rng.sample_range(1, n, k)
    clause = [v if rng.randint(0, 1) else -v for v in vars_]
    if not any((lit > 0) == alpha[abs(lit) - 1] for lit in clause):
        i = rng.randint(0, k - 1)
        clause[i] = -clause[i]
    return clause


def _horn_clause(rng: Rng, n: int, alpha: Sequence[bool]) -> list[int]:
    """A Horn clause (at most one positive literal) satisfied by alpha."""
    false_vars = [v for v in range(1, n + 1) if not alpha[v - 1]]
    true_vars = [v for v in range(1, n + 1) if alpha[v - 1]]
    k = rng.randint(2, 3)
    if false_vars and (not true_vars or rng.randint(0, 1)):
        # satisfied by a negative literal on a false variable
        anchor = rng.choice(false_vars)
        others = [v for v in rng.sample_range(1, n, min(k + 1, n)) if v != anchor][: k - 1]
        clause = [-anchor] + [-v for v in others]
        if others and rng.randint(0, 1):
            clause[-1] = -clause[-1]  # the single allowed positive literal
        return clause
    # satisfied by its single positive literal on a true variable
    anchor = rng.choice(true_vars)
    others = [v for v in rng.sample_range(1, n, min(k + 1, n)) if v != anchor][: k - 1]
    return [anchor] + [-v for v in others]


def _xor_clauses(rng: Rng, n: int, alpha: Sequence[bool]) -> list[list[int]]:
    """CNF expansion (4 clauses) of a 3-variable parity constraint true under alpha."""
    a, b, c = rng.sample_range(1, n, 3)
    parity = alpha[a - 1] ^ alpha[b - 1] ^ alpha[c - 1]
    out = []
    for sa, sb, sc in itertools.product((1, -1), repeat=3):
        # a 3-literal clause forbids exactly its all-literals-false point;
        # keep the clauses whose forbidden point has the wrong parity
        forbidden_parity = (sa > 0) ^ (sb > 0) ^ (sc > 0) ^ True
        if forbidden_parity != parity:
            out.append([sa * a, sb * b, sc * c])
    return out


def generate_sat(
    task: TaskId, seed: SeedSpec, params_override: Optional[dict] = None
) -> ProblemInstance:
    name = SAT_VARIATIONS[task.variation]
    rng = Rng(seed.child_seed(task))
    n = rng.randint(10, 14)
    if params_override and "size_n" in params_override:
        n = max(4, int(params_override["size_n"]))
    alpha = [bool(rng.randint(0, 1)) for _ in range(n)]
    clauses: list[list[int]] = []
    if name == "random_3sat":
        for _ in range(round(4.2 * n)):
            clauses.append(_planted_clause(rng, n, 3, alpha))
    elif name == "random_ksat":
        for _ in range(round(4.0 * n)):
            clauses.append(_planted_clause(rng, n, rng.randint(2, 4), alpha))
    elif name == "horn":
        for _ in range(round(3.0 * n)):
            clauses.append(_horn_clause(rng, n, alpha))
    elif name == "xor":
        for _ in range(max(3, n // 2)):
            clauses.extend(_xor_clauses(rng, n, alpha))
    else:  # mixed
        for _ in range(round(2.0 * n)):
            clauses.append(_planted_clause(rng, n, 3, alpha))
        for _ in range(n):
            clauses.append(_horn_clause(rng, n, alpha))
        for _ in range(max(2, n // 4)):
            clauses.extend(_xor_clauses(rng, n, alpha))
    assignment = {v: alpha[v - 1] for v in range(1, n + 1)}
    assert sat_verify(clauses, assignment) is None
    params = {"size_n": n, "num_clauses": len(clauses), "variation_name": name}
    return ProblemInstance(
        task=task,
        seed=seed,
        params=params,
        payload={"num_vars": n, "clauses": clauses, "planted": assignment},
        prompt_text=_SAT_PROMPT.format(n=n, formula=render_formula(clauses)),
        solutions=SolutionSet(
            kind="predicate",
            predicate_spec={"type": "sat", "num_vars": n, "clauses": clauses},
        ),
        estimated_tokens=tokens.estimate_tokens(task, params),
    )


def verify_sat(instance: ProblemInstance, answer) -> bool:
    if not isinstance(answer, dict):
        return False
    n = instance.payload["num_vars"]
    try:
        assignment = {int(k): bool(v) for k, v in answer.items()}
    except (TypeError, ValueError):
        return False
    if set(assignment) != set(range(1, n + 1)):
        return False
    return sat_verify(instance.payload["clauses"], assignment) is None


def render_sat_answer(instance: ProblemInstance) -> str:
    planted = instance.payload["planted"]
    body = ", ".join(f"{v}: {planted[v]}" for v in sorted(planted))
    return "<answer>\n{" + body + "}\n</answer>"


register(
    TaskDef(
        suite="hard",
        family="boolean_sat",
        n_variations=len(SAT_VARIATIONS),
        generate=generate_sat,
        verify=verify_sat,
        render_oracle=render_sat_answer,
        format_kind=lambda v: "answer_tag_dict_int_bool",
    )
)

# ---------------------------------------------------------------------------
# Graph coloring
# ---------------------------------------------------------------------------

COLORING_VARIATIONS = (
    "complete",
    "odd_cycle",
    "tree",
    "bipartite",
    "complete_bipartite",
    "star",
    "wheel",
    "grid",
    "fan",
    "dense_random",
)

_COLOR_NAMES = (
    "Red",
    "Blue",
    "Green",
    "Yellow",
    "Purple",
    "Orange",
    "Cyan",
    "Magenta",
    "Brown",
    "Pink",
    "Gray",
    "Olive",
)

_COLORING_PROMPT = """CHALLENGING GRAPH COLORING PROBLEM:

Your task: Color the vertices of a complex graph using exactly {chi} colors such that no two adjacent (connected) vertices have the same color.

GRAPH SPECIFICATION:
- {n} vertices numbered from 0 to {n_minus_1}.
- {n_edges} edges: {edges}.
- Minimum colors needed: {chi}.

COLORING RULES:
- Use exactly {chi} different colors.
- NO two vertices connected by an edge can have the same color.
- EVERY vertex must be assigned exactly one color.

FINAL ANSWER FORMAT:
End your response with the complete solution dictionary in this format:

<answer>
{{0: "Red", 1: "Blue", 2: "Green", 3: "Yellow", ..., {n_minus_1}: "ColorX"}}
</answer>"""


def greedy_coloring_bound(n: int, edges: Sequence[tuple]) -> int:
    """Welsh-Powell upper bound on the chromatic number."""
    adj = [set() for _ in range(n)]
    for a, b in edges:
        adj[a].add(b)
        adj[b].add(a)
    color: dict[int, int] = {}
    for v in sorted(range(n), key=lambda v: -len(adj[v])):
        used = {color[u] for u in adj[v] if u in color}
        c = 0
        while c in used:
            c += 1
        color[v] = c
    return 1 + max(color.values()) if color else 1


def k_colorable(n: int, edges: Sequence[tuple], k: int) -> Optional[list[int]]:
    """A proper k-coloring, or None.  Exact DFS; intended for n <= ~14."""
    adj = [set() for _ in range(n)]
    for a, b in edges:
        adj[a].add(b)
        adj[b].add(a)
    order = sorted(range(n), key=lambda v: -len(adj[v]))
    color = [-1] * n

    def place(i: int) -> bool:
        if i == n:
            return True
        v = order[i]
        used = {color[u] for u in adj[v] if color[u] != -1}
        max_new = min(k, (max(color[u] for u in order[:i]) + 2) if i else 1)
        for c in range(max_new):
            if c in used:
                continue
            color[v] = c
            if place(i + 1):
                return True
            color[v] = -1
        return False

    return color if place(0) else None


def chromatic_number(n: int, edges: Sequence[tuple]) -> tuple[int, list[int]]:
    """Exact chromatic number and a witness coloring."""
    ub = greedy_coloring_bound(n, edges)
    for k in range(1, ub + 1):
        witness = k_colorable(n, edges, k)
        if witness is not None:
            return k, witness
    raise RuntimeError("unreachable: greedy bound must be colorable")


def _coloring_graph(name: str, rng: Rng):
    """Returns (n, edges, chi, witness_colors)."""
    if name == "complete":
        n = rng.randint(4, 6)
        edges = [(a, b) for a in range(n) for b in range(a + 1, n)]
        return n, edges, n, list(range(n))
    if name == "odd_cycle":
        n = 2 * rng.randint(3, 6) + 1
        edges = [(i, (i + 1) % n) for i in range(n)]
        witness = [i % 2 for i in range(n - 1)] + [2]
        return n, edges, 3, witness
    if name == "tree":
        n = rng.randint(8, 14)
        edges, depth = [], [0] * n
        for v in range(1, n):
            parent = rng.randint(0, v - 1)
            edges.append((parent, v))
            depth[v] = depth[parent] + 1
        return n, edges, 2, [d % 2 for d in depth]
    if name == "bipartite":
        a = rng.randint(4, 6)
        b = rng.randint(4, 6)
        n = a + b
        edges = [
            (i, a + j)
            for i in range(a)
            for j in range(b)
            if rng.random() < 0.5
        ]
        if not edges:
            edges = [(0, a)]
        return n, edges, 2, [0] * a + [1] * b
    if name == "complete_bipartite":
        a, b = rng.randint(3, 5), rng.randint(3, 5)
        n = a + b
        edges = [(i, a + j) for i in range(a) for j in range(b)]
        return n, edges, 2, [0] * a + [1] * b
    if name == "star":
        n = rng.randint(6, 12)
        return n, [(0, v) for v in range(1, n)], 2, [0] + [1] * (n - 1)
    if name == "wheel":
        # hub + odd cycle: chromatic number 4
        c = 2 * rng.randint(3, 5) + 1
        n = c + 1
        edges = [(i, (i + 1) % c) for i in range(c)] + [(c, v) for v in range(c)]
        witness = [i % 2 for i in range(c - 1)] + [2, 3]
        return n, edges, 4, witness
    if name == "grid":
        r, c = rng.randint(3, 4), rng.randint(3, 5)
        n = r * c
        edges = []
        for i in range(r):
            for j in range(c):
                if j + 1 < c:
                    edges.append((i * c + j, i * c + j + 1))
                if i + 1 < r:
                    edges.append((i * c + j, (i + 1) * c + j))
        return n, edges, 2, [(i + j) % 2 for i in range(r) for j in range(c)]
    if name == "fan":
        # hub + path: chromatic number 3
        p = rng.randint(5, 9)
        n = p + 1
        edges = [(i, i + 1) for i in range(p - 1)] + [(p, v) for v in range(p)]
        return n, edges, 3, [i % 2 for i in range(p)] + [2]
    if name == "dense_random":
        n = rng.choice([8, 10, 12])
        edges = [
            (a, b)
            for a in range(n)
            for b in range(a + 1, n)
            if rng.random() < 0.6
        ]
        chi, witness = chromatic_number(n, edges)
        return n, edges, chi, witness
    raise ValueError(name)


def generate_coloring(
    task: TaskId, seed: SeedSpec, params_override: Optional[dict] = None
) -> ProblemInstance:
    name = COLORING_VARIATIONS[task.variation]
    rng = Rng(seed.child_seed(task))
    n, edges, chi, witness = _coloring_graph(name, rng)
    edges = sorted(set(tuple(sorted(e)) for e in edges))
    witness_names = {v: _COLOR_NAMES[witness[v]] for v in range(n)}
    params = {"size_n": n, "num_edges": len(edges), "variation_name": name}
    prompt = _COLORING_PROMPT.format(
        chi=chi,
        n=n,
        n_minus_1=n - 1,
        n_edges=len(edges),
        edges=", ".join(f"({a},{b})" for a, b in edges),
    )
    return ProblemInstance(
        task=task,
        seed=seed,
        params=params,
        payload={
            "n": n,
            "edges": [list(e) for e in edges],
            "chromatic_number": chi,
            "witness": witness_names,
        },
        prompt_text=prompt,
        solutions=SolutionSet(
            kind="predicate",
            predicate_spec={
                "type": "graph_coloring",
                "n": n,
                "edges": [list(e) for e in edges],
                "chromatic_number": chi,
            },
        ),
        estimated_tokens=tokens.estimate_tokens(task, params),
    )


def verify_coloring(instance: ProblemInstance, answer) -> bool:
    if not isinstance(answer, dict):
        return False
    n = instance.payload["n"]
    chi = instance.payload["chromatic_number"]
    try:
        coloring = {int(k): str(v).strip().lower() for k, v in answer.items()}
    except (TypeError, ValueError):
        return False
    if set(coloring) != set(range(n)):
        return False
    if len(set(coloring.values())) > chi:
        return False
    return all(coloring[a] != coloring[b] for a, b in instance.payload["edges"])


def render_coloring_answer(instance: ProblemInstance) -> str:
    witness = instance.payload["witness"]
    body = ", ".join(f'{v}: "{witness[v]}"' for v in sorted(witness))
    return "<answer>\n{" + body + "}\n</answer>"


register(
    TaskDef(
        suite="hard",
        family="graph_coloring",
        n_variations=len(COLORING_VARIATIONS),
        generate=generate_coloring,
        verify=verify_coloring,
        render_oracle=render_coloring_answer,
        format_kind=lambda v: "answer_tag_dict_int_str",
    )
)

# ---------------------------------------------------------------------------
# Cryptarithmetic
# ---------------------------------------------------------------------------

CRYPT_OPS = ("+", "-", "*")
CRYPT_TIERS = ((4, 5), (5, 6), (6, 7), (7, 8))  # distinct-letter bands

_WORDS = {
    2: ("NO", "GO", "TO", "IS", "AT", "ON", "MY", "WE", "UP", "IT", "SO", "BE"),
    3: ("SEE", "TOO", "ONE", "TWO", "SIX", "TEN", "CAT", "DOG", "SUN", "FUN",
        "RED", "BIG", "ODD", "EGG", "ART", "ICE"),
    4: ("SEND", "MORE", "LOVE", "GAME", "TREE", "BLUE", "STAR", "MOON", "FIRE",
        "GOLD", "BIRD", "FISH", "LION", "WOLF"),
    5: ("MONEY", "LIGHT", "WORLD", "HEART", "MUSIC", "DREAM", "RIVER", "STONE"),
}

# operand word lengths per (op, tier)
_CRYPT_LENGTHS = {
    "+": {0: ((2, 2), (3, 2)), 1: ((3, 3),), 2: ((4, 3), (4, 4)), 3: ((5, 4), (5, 5))},
    "-": {0: ((2, 2), (3, 2)), 1: ((3, 3),), 2: ((4, 3), (4, 4)), 3: ((5, 4), (5, 5))},
    "*": {0: ((2, 2),), 1: ((3, 2),), 2: ((3, 3), (4, 2)), 3: ((4, 3),)},
}

_RESULT_LETTERS = "RSTUVWXYZQPK"

_CRYPT_PROMPT = """Solve this challenging cryptarithmetic puzzle:

{word1} {op} {word2} = {result}

Rules:
- Each letter represents a unique digit from 0 to 9.
- No two letters can have the same digit.
- Leading letters cannot be zero.

SOLUTION FORMAT REQUIREMENTS (STRICTLY FOLLOW THIS):
Your answer must assign digits to ALL letters.

REQUIRED FORMAT:
<answer>
{{"A": 1, "B": 2, "C": 3, ...}}
</answer>

IMPORTANT FORMATTING NOTES:
- Use EXACTLY the format shown above inside <answer> tags.
- Use double quotes around letter names: "A", "B", "C", etc.
- Use actual digits: 1, 2, 3, etc. (not "1", "2", "3").
- Include ALL letters in your answer.
- Do NOT use code blocks, markdown, or other formatting."""


def _word_value(word: str, mapping: dict) -> int:
    value = 0
    for ch in word:
        value = value * 10 + mapping[ch]
    return value


def crypt_check(word1: str, op: str, word2: str, result: str, mapping: dict) -> bool:
    letters = set(word1 + word2 + result)
    if set(mapping) < letters:
        return False
    digits = [mapping[ch] for ch in letters]
    if len(set(digits)) != len(digits) or not all(0 <= d <= 9 for d in digits):
        return False
    for w in (word1, word2, result):
        if len(w) > 1 and mapping[w[0]] == 0:
            return False
    a, b, r = (_word_value(w, mapping) for w in (word1, word2, result))
    if op == "+":
        return a + b == r
    if op == "-":
        return a - b == r
    return a * b == r


def _crypt_count_additive(w1: str, w2: str, res: str, limit: int) -> int:
    """Count solutions of w1 + w2 = res by column-wise DFS with carries."""
    if max(len(w1), len(w2)) > len(res):
        return 0
    width = len(res)
    cols = []
    for i in range(width):
        pick = lambda w: w[len(w) - 1 - i] if i < len(w) else None
        cols.append((pick(w1), pick(w2), res[len(res) - 1 - i]))
    leading = {w[0] for w in (w1, w2, res) if len(w) > 1}
    assign: dict[str, int] = {}
    used = [False] * 10
    count = 0

    def letters_at(col: int) -> list[str]:
        # deduplicate: the same letter may occur in both operand positions
        seen = []
        for ch in cols[col][:2]:
            if ch is not None and ch not in assign and ch not in seen:
                seen.append(ch)
        return seen

    def column_ok(col: int, carry_in: int) -> Optional[int]:
        a, b, r = cols[col]
        total = (assign[a] if a else 0) + (assign[b] if b else 0) + carry_in
        digit, carry_out = total % 10, total // 10
        if r in assign:
            return carry_out if assign[r] == digit else None
        if used[digit] or (digit == 0 and r in leading):
            return None
        assign[r] = digit
        used[digit] = True
        return carry_out

    def step(col: int, carry: int):
        nonlocal count
        if count >= limit:
            return
        if col == width:
            if carry == 0:
                count += 1
            return
        free = letters_at(col)

        def assign_free(i: int):
            nonlocal count
            if count >= limit:
                return
            if i == len(free):
                a, b, r = cols[col]
                r_was_new = r not in assign
                carry_out = column_ok(col, carry)
                if carry_out is not None:
                    step(col + 1, carry_out)
                    if r_was_new and r in assign:
                        used[assign[r]] = False
                        del assign[r]
                return
            ch = free[i]
            lo = 1 if ch in leading else 0
            for d in range(lo, 10):
                if used[d]:
                    continue
                assign[ch] = d
                used[d] = True
                assign_free(i + 1)
                used[d] = False
                del assign[ch]

        assign_free(0)

    step(0, 0)
    return count


def _crypt_count_mul(w1: str, w2: str, res: str, limit: int) -> int:
    """Count solutions of w1 * w2 = res by DFS over the operand letters."""
    op_letters = sorted(set(w1 + w2))
    leading = {w[0] for w in (w1, w2, res) if len(w) > 1}
    count = 0
    used = [False] * 10
    assign: dict[str, int] = {}

    def check_result() -> bool:
        product = _word_value(w1, assign) * _word_value(w2, assign)
        digits = str(product)
        if len(digits) != len(res):
            return False
        local = dict(assign)
        local_used = list(used)
        for ch, d in zip(res, digits):
            d = int(d)
            if ch in local:
                if local[ch] != d:
                    return False
            else:
                if local_used[d] or (d == 0 and ch in leading):
                    return False
                local[ch] = d
                local_used[d] = True
        return True

    def step(i: int):
        nonlocal count
        if count >= limit:
            return
        if i == len(op_letters):
            if check_result():
                count += 1
            return
        ch = op_letters[i]
        lo = 1 if ch in leading else 0
        for d in range(lo, 10):
            if used[d]:
                continue
            assign[ch] = d
            used[d] = True
            step(i + 1)
            used[d] = False
            del assign[ch]

    step(0)
    return count


def crypt_count_solutions(
    word1: str, op: str, word2: str, result: str, limit: int = 2
) -> int:
    if op == "+":
        return _crypt_count_additive(word1, word2, result, limit)
    if op == "-":
        # w1 - w2 = r  <=>  w2 + r = w1
        return _crypt_count_additive(word2, result, word1, limit)
    return _crypt_count_mul(word1, word2, result, limit)


def generate_crypt(
    task: TaskId, seed: SeedSpec, params_override: Optional[dict] = None
) -> ProblemInstance:
    op = CRYPT_OPS[task.variation // 4]
    tier = task.variation % 4
    lo, hi = CRYPT_TIERS[tier]
    rng = Rng(seed.child_seed(task))

    # unique puzzles are rare among sampled mappings (~1%), but each
    # attempt costs well under a millisecond, so a large cap is cheap
    for _ in range(8000):
        l1, l2 = rng.choice(_CRYPT_LENGTHS[op][tier])
        w1 = rng.choice(_WORDS[l1])
        w2 = rng.choice(_WORDS[l2])
        letters = sorted(set(w1 + w2))
        if len(letters) > 8:
            continue
        digits = rng.sample_range(0, 9, len(letters))
        mapping = dict(zip(letters, digits))
        if any(len(w) > 1 and mapping[w[0]] == 0 for w in (w1, w2)):
            continue
        a, b = _word_value(w1, mapping), _word_value(w2, mapping)
        # subtraction is built as an addition and presented rearranged
        # (sum - addend = addend); the constraint system is identical, so
        # a uniqueness proof for the addition carries over
        value = a * b if op == "*" else a + b
        if value <= 0:
            continue
        # derive the result word from the sampled mapping
        digit_to_letter = {d: ch for ch, d in mapping.items()}
        fresh = [ch for ch in _RESULT_LETTERS if ch not in letters]
        result_chars = []
        for d in (int(c) for c in str(value)):
            if d not in digit_to_letter:
                if not fresh:
                    break
                digit_to_letter[d] = fresh.pop(0)
                mapping[digit_to_letter[d]] = d
            result_chars.append(digit_to_letter[d])
        if len(result_chars) != len(str(value)):
            continue
        result = "".join(result_chars)
        if len(result) > 1 and mapping[result[0]] == 0:
            continue
        if op == "-":
            w1, w2, result = result, w1, w2
        n_letters = len(set(w1 + w2 + result))
        if not lo <= n_letters <= hi:
            continue
        if crypt_count_solutions(w1, op, w2, result, limit=2) != 1:
            continue
        full_mapping = {ch: mapping[ch] for ch in sorted(set(w1 + w2 + result))}
        assert crypt_check(w1, op, w2, result, full_mapping)
        params = {"size_n": n_letters, "variation_name": f"{op}_{lo}-{hi}"}
        return ProblemInstance(
            task=task,
            seed=seed,
            params=params,
            payload={"word1": w1, "word2": w2, "op": op, "result": result},
            prompt_text=_CRYPT_PROMPT.format(word1=w1, op=op, word2=w2, result=result),
            solutions=SolutionSet(kind="unique", values=[full_mapping]),
            estimated_tokens=tokens.estimate_tokens(task, params),
        )
    raise GenerationExhausted(f"{task.key()}: retry cap exceeded")


def verify_crypt(instance: ProblemInstance, answer) -> bool:
    if not isinstance(answer, dict):
        return False
    try:
        mapping = {str(k).upper(): int(v) for k, v in answer.items()}
    except (TypeError, ValueError):
        return False
    p = instance.payload
    return crypt_check(p["word1"], p["op"], p["word2"], p["result"], mapping)


def render_crypt_answer(instance: ProblemInstance) -> str:
    mapping = instance.solutions.values[0]
    body = ", ".join(f'"{ch}": {d}' for ch, d in mapping.items())
    return "<answer>\n{" + body + "}\n</answer>"


register(
    TaskDef(
        suite="hard",
        family="cryptarithmetic",
        n_variations=12,
        generate=generate_crypt,
        verify=verify_crypt,
        render_oracle=render_crypt_answer,
        format_kind=lambda v: "answer_tag_dict_str_int",
    )
)

# ---------------------------------------------------------------------------
# Matrix chain multiplication
# ---------------------------------------------------------------------------

MATRIX_PATTERNS = ("random", "increasing", "decreasing", "alternating", "bottleneck")

_MATRIX_PROMPT = """CHALLENGING MATRIX CHAIN MULTIPLICATION OPTIMIZATION PROBLEM:

Your task: Find the minimum number of scalar multiplications needed to compute the matrix product using optimal parenthesization.

PROBLEM SPECIFICATION:
- Number of matrices: {count}.
- Matrix dimensions: {dims}.

MATRIX MULTIPLICATION COST MODEL:
- To multiply two matrices of dimensions (p x q) and (q x r): cost = p x q x r scalar multiplications.

DYNAMIC PROGRAMMING APPROACH:
This is a classic optimization problem that requires dynamic programming.

CRITICAL: ANSWER FORMAT REQUIREMENTS
To ensure your answer is correctly parsed, follow these EXACT formatting requirements:

1. ALWAYS provide your final answer in this precise format:
<answer>
[NUMERIC_VALUE_ONLY]
</answer>

2. REPLACE [NUMERIC_VALUE_ONLY] with ONLY the numeric value.
3. Example: If the answer is 1204480, write exactly: <answer>1204480</answer>."""


def matrix_chain_min(dims: Sequence[int]) -> int:
    """Minimum scalar multiplications for the chain, by the classic O(n^3) DP."""
    n = len(dims) - 1
    cost = [[0] * n for _ in range(n)]
    for span in range(1, n):
        for i in range(n - span):
            j = i + span
            cost[i][j] = min(
                cost[i][k] + cost[k + 1][j] + dims[i] * dims[k + 1] * dims[j + 1]
                for k in range(i, j)
            )
    return cost[0][n - 1]


def _matrix_dims(name: str, rng: Rng, count: int) -> list[int]:
    if name == "random":
        return [rng.randint(5, 50) for _ in range(count + 1)]
    if name == "increasing":
        dims = [rng.randint(2, 8)]
        while len(dims) < count + 1:
            dims.append(dims[-1] + rng.randint(2, 10))
        return dims
    if name == "decreasing":
        dims = [rng.randint(60, 90)]
        while len(dims) < count + 1:
            dims.append(max(2, dims[-1] - rng.randint(2, 10)))
        return dims
    if name == "alternating":
        return [
            rng.randint(5, 15) if i % 2 == 0 else rng.randint(40, 80)
            for i in range(count + 1)
        ]
    if name == "bottleneck":
        dims = [rng.randint(40, 80) for _ in range(count + 1)]
        dims[count // 2] = rng.randint(2, 5)
        return dims
    raise ValueError(name)


def generate_matrix_chain(
    task: TaskId, seed: SeedSpec, params_override: Optional[dict] = None
) -> ProblemInstance:
    name = MATRIX_PATTERNS[task.variation]
    rng = Rng(seed.child_seed(task))
    count = rng.randint(6, 10)
    if params_override and "size_n" in params_override:
        count = max(2, int(params_override["size_n"]))
    dims = _matrix_dims(name, rng, count)
    best = matrix_chain_min(dims)
    descriptions = ", ".join(
        f"A{i + 1}: {dims[i]}x{dims[i + 1]}" for i in range(count)
    )
    params = {"size_n": count, "variation_name": name}
    return ProblemInstance(
        task=task,
        seed=seed,
        params=params,
        payload={"dims": dims, "matrix_count": count},
        prompt_text=_MATRIX_PROMPT.format(count=count, dims=descriptions),
        solutions=SolutionSet(kind="unique", values=[best]),
        estimated_tokens=tokens.estimate_tokens(task, params),
    )


def verify_matrix_chain(instance: ProblemInstance, answer) -> bool:
    if not isinstance(answer, (int, float)):
        return False
    return float(answer) == float(instance.solutions.values[0])


def render_matrix_answer(instance: ProblemInstance) -> str:
    return f"<answer>{instance.solutions.values[0]}</answer>"


register(
    TaskDef(
        suite="hard",
        family="matrix_chain",
        n_variations=len(MATRIX_PATTERNS),
        generate=generate_matrix_chain,
        verify=verify_matrix_chain,
        render_oracle=render_matrix_answer,
        format_kind=lambda v: "answer_tag_scalar",
    )
)

# ---------------------------------------------------------------------------
# Modular systems
# ---------------------------------------------------------------------------

MODULAR_VARIATIONS = (
    "smallest_positive",
    "prime",
    "range",
    "divisibility",
    "range_divisibility",
)

_MODULAR_SCAN_LIMIT = 10**6

_MODULAR_PROMPT = """ADVANCED MODULAR SYSTEMS PROBLEM:

Your task: Solve the following system of modular arithmetic equations and find the value of x that satisfies all conditions.

SYSTEM OF EQUATIONS:
{equations}

ADDITIONAL CONSTRAINTS:
{constraints}

MATHEMATICAL BACKGROUND:
- Modular arithmetic: x = a (mod m) means x leaves remainder a when divided by m.
- Use the Chinese Remainder Theorem for systems with coprime moduli.
- For non-coprime moduli, use the general solution method.

ANSWER FORMAT REQUIREMENTS:
Your response must end with your final numerical answer in one of these formats:

Option 1 (Preferred):
<answer>
[Your integer answer here]
</answer>

Option 2 (Alternative):
Therefore, x = [Your integer answer here].

DO NOT end with intermediate calculations or parametric expressions."""


def extended_gcd(a: int, b: int) -> tuple[int, int, int]:
    """(g, x, y) with a*x + b*y = g = gcd(a, b)."""
    if b == 0:
        return a, 1, 0
    g, x, y = extended_gcd(b, a % b)
    return g, y, x - (a // b) * y


def crt_merge(a1: int, m1: int, a2: int, m2: int) -> Optional[tuple[int, int]]:
    """Merge x=a1 (mod m1) and x=a2 (mod m2); None when inconsistent."""
    g, p, _ = extended_gcd(m1, m2)
    if (a2 - a1) % g != 0:
        return None
    lcm = m1 // g * m2
    diff = (a2 - a1) // g
    x = (a1 + m1 * (diff * p % (m2 // g))) % lcm
    return x, lcm


def modular_solve(congruences: Sequence[tuple[int, int]]) -> Optional[tuple[int, int]]:
    """Solve the system; returns (residue, modulus) or None when inconsistent."""
    a, m = 0, 1
    for ai, mi in congruences:
        merged = crt_merge(a, m, ai % mi, mi)
        if merged is None:
            return None
        a, m = merged
    return a, m


def generate_modular(
    task: TaskId, seed: SeedSpec, params_override: Optional[dict] = None
) -> ProblemInstance:
    name = MODULAR_VARIATIONS[task.variation]
    rng = Rng(seed.child_seed(task))
    from .medium import is_prime  # local import avoids a cycle at module load

    for _ in range(_RETRY * 3):
        moduli = rng.sample([3, 4, 5, 7, 8, 9, 11, 13], 3)
        x0 = rng.randint(50, 5000)
        congruences = [(x0 % m, m) for m in moduli]
        solved = modular_solve(congruences)
        if solved is None:
            continue
        r, L = solved
        base = r if r > 0 else L
        constraints_text = []
        answer: Optional[int] = None

        if name == "smallest_positive":
            answer = base
            constraints_text.append("Find the smallest positive integer x.")
        elif name == "prime":
            x = base
            while x <= _MODULAR_SCAN_LIMIT:
                if is_prime(x):
                    answer = x
                    break
                x += L
            constraints_text.append("x must be a prime number (smallest such prime).")
        elif name == "range":
            t = rng.randint(2, 20)
            lo = r + t * L - rng.randint(0, L - 1)
            hi = lo + L - 1
            answer = r + t * L
            constraints_text.append(f"x must satisfy {lo} <= x <= {hi}.")
        elif name == "divisibility":
            d = rng.randint(2, 12)
            merged = crt_merge(r, L, 0, d)
            if merged is None:
                continue
            r2, L2 = merged
            answer = r2 if r2 > 0 else L2
            if answer > _MODULAR_SCAN_LIMIT:
                continue
            constraints_text.append(
                f"x must be divisible by {d} (smallest positive such x)."
            )
        else:  # range_divisibility
            d = rng.randint(2, 12)
            merged = crt_merge(r, L, 0, d)
            if merged is None:
                continue
            r2, L2 = merged
            t = rng.randint(1, 5)
            s = r2 + t * L2
            if s > _MODULAR_SCAN_LIMIT:
                continue
            lo = s - rng.randint(0, L2 - 1)
            hi = lo + L2 - 1
            answer = s
            constraints_text.append(f"x must be divisible by {d}.")
            constraints_text.append(f"x must satisfy {lo} <= x <= {hi}.")

        if answer is None:
            continue
        equations = "\n".join(f"x = {a} (mod {m})" for a, m in congruences)
        params = {"size_n": len(congruences), "variation_name": name}
        return ProblemInstance(
            task=task,
            seed=seed,
            params=params,
            payload={
                "congruences": [list(c) for c in congruences],
                "constraints": constraints_text,
            },
            prompt_text=_MODULAR_PROMPT.format(
                equations=equations, constraints="\n".join(constraints_text)
            ),
            solutions=SolutionSet(kind="unique", values=[answer]),
            estimated_tokens=tokens.estimate_tokens(task, params),
        )
    raise GenerationExhausted(f"{task.key()}: retry cap exceeded")


def verify_modular(instance: ProblemInstance, answer) -> bool:
    if not isinstance(answer, (int, float)) or float(answer) != int(answer):
        return False
    return int(answer) == instance.solutions.values[0]


def render_modular_answer(instance: ProblemInstance) -> str:
    return f"<answer>\n{instance.solutions.values[0]}\n</answer>"


register(
    TaskDef(
        suite="hard",
        family="modular_system",
        n_variations=len(MODULAR_VARIATIONS),
        generate=generate_modular,
        verify=verify_modular,
        render_oracle=render_modular_answer,
        format_kind=lambda v: "answer_tag_scalar",
    )
)

# ---------------------------------------------------------------------------
# Constraint optimization (resource allocation)
# ---------------------------------------------------------------------------

ALLOCATION_VARIATIONS = (
    "capacity_only",
    "dependencies",
    "quality",
    "risk",
    "all_constraints",
)

ALLOCATION_TOLERANCE = 0.95

_ALLOCATION_PROMPT = """ADVANCED MULTI-CONSTRAINT RESOURCE ALLOCATION PROBLEM:

Your task: Select an optimal subset of projects to maximize total profit while satisfying all resource capacity constraints and additional requirements.

AVAILABLE RESOURCES:
{resources}

AVAILABLE PROJECTS:
{projects}

OPTIMIZATION OBJECTIVE:
Maximize total profit from selected projects.

CONSTRAINTS:
{constraints}

ANSWER FORMAT:
Provide your answer as a list of project IDs (numbers) in square brackets.

<answer>
[project_id_1, project_id_2, project_id_3, ...]
</answer>"""


def _allocation_feasible(selection: Sequence[int], spec: dict) -> bool:
    projects = {p["id"]: p for p in spec["projects"]}
    chosen = [projects.get(i) for i in selection]
    if any(p is None for p in chosen) or len(set(selection)) != len(selection):
        return False
    for res, cap in spec["capacities"].items():
        if sum(p["needs"][res] for p in chosen) > cap:
            return False
    if spec.get("use_deps"):
        picked = set(selection)
        for p in chosen:
            if any(dep not in picked for dep in p.get("deps", ())):
                return False
    if spec.get("min_quality") is not None:
        if sum(p.get("quality", 0) for p in chosen) < spec["min_quality"]:
            return False
    if spec.get("max_risk") is not None:
        if sum(p.get("risk", 0) for p in chosen) > spec["max_risk"]:
            return False
    return True


def allocation_optimum(spec: dict) -> tuple[int, list[int]]:
    """
    Exact optimum by branch and bound.

    Capacity overruns prune branches immediately; dependency/quality/risk
    constraints are checked at the leaves.  The upper bound is the current
    profit plus the fractional-knapsack relaxation on the first resource,
    which is admissible because it ignores every other constraint.
    """
    projects = spec["projects"]
    resources = list(spec["capacities"])
    r0 = resources[0]
    order = sorted(
        projects, key=lambda p: -p["profit"] / (p["needs"][r0] + 1)
    )
    caps = spec["capacities"]
    best, best_sel, found = 0, [], False

    def bound(i: int, used0: int, profit: int) -> float:
        room = caps[r0] - used0
        total = float(profit)
        for p in order[i:]:
            need = p["needs"][r0]
            if need <= room:
                room -= need
                total += p["profit"]
            else:
                if need > 0:
                    total += p["profit"] * room / need
                break
        return total

    def dfs(i: int, sel: list[int], used: dict, profit: int) -> None:
        nonlocal best, best_sel, found
        if found and bound(i, used[r0], profit) <= best:
            return
        if i == len(order):
            if _allocation_feasible(sel, spec):
                if not found or profit > best:
                    best, best_sel, found = profit, sorted(sel), True
            return
        p = order[i]
        if all(used[res] + p["needs"][res] <= caps[res] for res in resources):
            for res in resources:
                used[res] += p["needs"][res]
            sel.append(p["id"])
            dfs(i + 1, sel, used, profit + p["profit"])
            sel.pop()
            for res in resources:
                used[res] -= p["needs"][res]
        dfs(i + 1, sel, used, profit)

    dfs(0, [], {res: 0 for res in resources}, 0)
    return best, best_sel


def generate_allocation(
    task: TaskId, seed: SeedSpec, params_override: Optional[dict] = None
) -> ProblemInstance:
    name = ALLOCATION_VARIATIONS[task.variation]
    rng = Rng(seed.child_seed(task))
    for _ in range(_RETRY):
        k = rng.randint(6, 9)
        if params_override and "size_n" in params_override:
            k = min(12, max(3, int(params_override["size_n"])))
        resources = ["budget", "staff"]
        if rng.randint(0, 1):
            resources.append("time")
        projects = []
        for pid in range(1, k + 1):
            p = {
                "id": pid,
                "profit": rng.randint(10, 80),
                "needs": {res: rng.randint(2, 30) for res in resources},
            }
            projects.append(p)
        capacities = {
            res: int(sum(p["needs"][res] for p in projects) * 0.5)
            for res in resources
        }
        spec = {"projects": projects, "capacities": capacities}
        constraints = [
            "1. Resource capacity: Cannot exceed available capacity for any resource."
        ]
        use_deps = name in ("dependencies", "all_constraints")
        if use_deps:
            spec["use_deps"] = True
            for p in projects[1:]:
                if rng.random() < 0.4:
                    p["deps"] = [rng.randint(1, p["id"] - 1)]
            constraints.append(
                "2. Dependencies: If a project has dependencies, all dependency "
                "projects must also be selected."
            )
        if name in ("quality", "all_constraints"):
            for p in projects:
                p["quality"] = rng.randint(1, 10)
            spec["min_quality"] = rng.randint(8, 15)
            constraints.append(
                f"{len(constraints) + 1}. Quality: total quality of selected "
                f"projects must be at least {spec['min_quality']}."
            )
        if name in ("risk", "all_constraints"):
            for p in projects:
                p["risk"] = rng.randint(1, 10)
            spec["max_risk"] = rng.randint(12, 20)
            constraints.append(
                f"{len(constraints) + 1}. Risk: total risk of selected projects "
                f"must not exceed {spec['max_risk']}."
            )
        best, best_sel = allocation_optimum(spec)
        if best <= 0:
            continue

        resource_lines = "\n".join(
            f"- {res.capitalize()}: {cap} units available"
            for res, cap in capacities.items()
        )
        project_lines = []
        for p in projects:
            bits = [f"profit={p['profit']}"]
            bits += [f"{res}={p['needs'][res]}" for res in resources]
            if p.get("deps"):
                bits.append(f"depends on {p['deps']}")
            if "quality" in p:
                bits.append(f"quality={p['quality']}")
            if "risk" in p:
                bits.append(f"risk={p['risk']}")
            project_lines.append(f"- Project {p['id']}: " + ", ".join(bits))

        params = {"size_n": k, "variation_name": name}
        return ProblemInstance(
            task=task,
            seed=seed,
            params=params,
            payload={"spec": spec, "optimal_profit": best, "optimal_selection": best_sel},
            prompt_text=_ALLOCATION_PROMPT.format(
                resources=resource_lines,
                projects="\n".join(project_lines),
                constraints="\n".join(constraints),
            ),
            solutions=SolutionSet(
                kind="predicate",
                predicate_spec={
                    "type": "allocation",
                    "optimal_profit": best,
                    "tolerance": ALLOCATION_TOLERANCE,
                },
            ),
            estimated_tokens=tokens.estimate_tokens(task, params),
        )
    raise GenerationExhausted(f"{task.key()}: retry cap exceeded")


def verify_allocation(instance: ProblemInstance, answer) -> bool:
    if not isinstance(answer, (list, tuple)):
        return False
    try:
        selection = [int(x) for x in answer]
    except (TypeError, ValueError):
        return False
    spec = instance.payload["spec"]
    if not _allocation_feasible(selection, spec):
        return False
    profit = {p["id"]: p["profit"] for p in spec["projects"]}
    total = sum(profit[i] for i in selection)
    return total >= ALLOCATION_TOLERANCE * instance.payload["optimal_profit"]


def render_allocation_answer(instance: ProblemInstance) -> str:
    sel = instance.payload["optimal_selection"]
    return "<answer>\n[" + ", ".join(str(i) for i in sel) + "]\n</answer>"


register(
    TaskDef(
        suite="hard",
        family="constraint_optimization",
        n_variations=len(ALLOCATION_VARIATIONS),
        generate=generate_allocation,
        verify=verify_allocation,
        render_oracle=render_allocation_answer,
        format_kind=lambda v: "answer_tag_list",
    )
)
