"""
Layered extraction of structured answers from free-text model responses.

Strategies run in order of strictness: exact wrappers (\\boxed{...},
<answer>...</answer>), fuzzy phrasings ("The answer is", "Solution:",
"Therefore, x ="), structural extraction (lists, dicts, grids, move lists),
and a last-number fallback that only applies to scalar tasks.  When several
well-formed occurrences exist, the LAST one wins.

Parse failures are reported as status "invalid" -- never as an incorrect
answer.  The instruction-following flag is independent of correctness: it
records whether the response contains at least one syntactically complete
instance of an accepted format (in strict form), even if the value is wrong.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Any, Optional

from .core import TaskId, registry_lookup


@dataclass
class ParseResult:
    status: str  # "parsed" | "invalid"
    value: Any = None
    matched_format: Optional[str] = None
    instruction_followed: bool = False


# ---------------------------------------------------------------------------
# Wrapper extraction
# ---------------------------------------------------------------------------


def _all_boxed(text: str) -> list[str]:
    """All \\boxed{...} contents, handling nested braces."""
    out = []
    i = 0
    needle = "\\boxed{"
    while True:
        j = text.find(needle, i)
        if j < 0:
            break
        depth = 1
        k = j + len(needle)
        start = k
        while k < len(text) and depth > 0:
            if text[k] == "{":
                depth += 1
            elif text[k] == "}":
                depth -= 1
            k += 1
        if depth == 0:
            out.append(text[start : k - 1])
            i = k
        else:
            break  # unclosed wrapper: malformed, stop
    return out


def _last_boxed(text: str) -> Optional[str]:
    found = _all_boxed(text)
    return found[-1] if found else None


_ANSWER_TAG_RE = re.compile(r"<answer>(.*?)</answer>", re.DOTALL | re.IGNORECASE)


def _last_answer_tag(text: str) -> Optional[str]:
    found = _ANSWER_TAG_RE.findall(text)
    return found[-1] if found else None


# ---------------------------------------------------------------------------
# Scalar / list / dict primitives
# ---------------------------------------------------------------------------

_NUMBER_RE = re.compile(r"-?\d+(?:\.\d+)?")
_INT_LIST_RE = re.compile(
    r"\[\s*(-?\d+(?:\s*,\s*-?\d+)*)\s*,?\s*\]"
)


def parse_scalar(s: str):
    """Parse an int, float, or simple fraction a/b from a short string."""
    s = s.strip().strip("$").replace(",", "").rstrip(".")
    s = s.strip()
    if not s:
        return None
    m = re.fullmatch(r"(-?\d+)\s*/\s*(-?\d+)", s)
    if m and int(m.group(2)) != 0:
        return int(m.group(1)) / int(m.group(2))
    try:
        return int(s)
    except ValueError:
        pass
    try:
        return float(s)
    except ValueError:
        return None


def _scalar_from_text(s: str):
    """Scalar from a wrapper whose content may carry light markup."""
    v = parse_scalar(s)
    if v is not None:
        return v
    nums = _NUMBER_RE.findall(s)
    if len(nums) == 1:
        return parse_scalar(nums[0])
    return None


def _parse_int_list(s: str) -> Optional[list[int]]:
    """A bracketed comma-separated integer list; last occurrence wins."""
    found = _INT_LIST_RE.findall(s)
    if not found:
        # tolerate a bare comma-separated sequence covering the whole string
        if re.fullmatch(r"\s*-?\d+(\s*,\s*-?\d+)+\s*", s):
            return [int(x) for x in s.split(",")]
        return None
    return [int(x) for x in found[-1].split(",")]


_RELATIONS = ("greater than", "less than", "equal to")


def _parse_relation(s: str) -> Optional[str]:
    low = s.lower()
    hits = [(low.rfind(r), r) for r in _RELATIONS if r in low]
    if not hits:
        return None
    return max(hits)[1]


def _parse_modes(s: str) -> Optional[list[int]]:
    s = s.strip().strip("[]{}")
    parts = re.split(r",| and ", s)
    values = []
    for p in parts:
        p = p.strip()
        if not p:
            continue
        if not re.fullmatch(r"-?\d+", p):
            return None
        values.append(int(p))
    return values or None


_TRUE_LENIENT = {"true", "t", "1"}
_FALSE_LENIENT = {"false", "f", "0"}


def _last_brace_block(text: str) -> Optional[str]:
    """Last balanced {...} block in the text."""
    end = text.rfind("}")
    while end >= 0:
        depth = 0
        for i in range(end, -1, -1):
            if text[i] == "}":
                depth += 1
            elif text[i] == "{":
                depth -= 1
                if depth == 0:
                    return text[i : end + 1]
        end = text.rfind("}", 0, end)
    return None


_PAIR_SPLIT_RE = re.compile(r",(?=(?:[^\"']*[\"'][^\"']*[\"'])*[^\"']*$)")


def _dict_pairs(content: str) -> Optional[list[tuple[str, str]]]:
    block = _last_brace_block(content)
    if block is None:
        return None
    inner = block[1:-1].strip()
    if not inner:
        return []
    pairs = []
    for part in _PAIR_SPLIT_RE.split(inner):
        if ":" not in part:
            return None
        k, _, v = part.partition(":")
        pairs.append((k.strip(), v.strip()))
    return pairs


def _parse_dict_int_bool(content: str, strict: bool) -> Optional[dict[int, bool]]:
    pairs = _dict_pairs(content)
    if not pairs:
        return None
    out: dict[int, bool] = {}
    for k, v in pairs:
        if not re.fullmatch(r"\d+", k):
            return None
        if v == "True":
            out[int(k)] = True
        elif v == "False":
            out[int(k)] = False
        elif not strict and v.lower() in _TRUE_LENIENT:
            out[int(k)] = True
        elif not strict and v.lower() in _FALSE_LENIENT:
            out[int(k)] = False
        else:
            return None
    return out


def _strip_quotes(s: str) -> tuple[str, bool]:
    """Returns (bare string, had_double_quotes)."""
    if len(s) >= 2 and s[0] == s[-1] and s[0] in "\"'":
        return s[1:-1], s[0] == '"'
    return s, False


def _parse_dict_int_str(content: str, strict: bool) -> Optional[dict[int, str]]:
    pairs = _dict_pairs(content)
    if not pairs:
        return None
    out: dict[int, str] = {}
    for k, v in pairs:
        if not re.fullmatch(r"\d+", k):
            return None
        name, _ = _strip_quotes(v)
        if not re.fullmatch(r"[A-Za-z][A-Za-z0-9_ -]*", name):
            return None
        out[int(k)] = name
    return out


def _parse_dict_str_int(content: str, strict: bool) -> Optional[dict[str, int]]:
    pairs = _dict_pairs(content)
    if not pairs:
        return None
    out: dict[str, int] = {}
    for k, v in pairs:
        name, quoted = _strip_quotes(k)
        if strict and not quoted:
            return None
        if not re.fullmatch(r"[A-Za-z]", name):
            return None
        if not re.fullmatch(r"\d", v):
            return None
        out[name.upper()] = int(v)
    return out


# ---------------------------------------------------------------------------
# Move sequences (Tower of Hanoi)
# ---------------------------------------------------------------------------

_MOVE_RE = re.compile(
    r"(?:move\s+disk\s+(\d+)\s+from\s+(?:peg\s+)?([A-Ca-c])\s+to\s+(?:peg\s+)?([A-Ca-c])"
    r"|move\s+(\d+)\s+from\s+(?:peg\s+)?([A-Ca-c])\s+to\s+(?:peg\s+)?([A-Ca-c])"
    r"|transfer\s+disk\s+(\d+)\s+from\s+(?:peg\s+)?([A-Ca-c])\s+to\s+(?:peg\s+)?([A-Ca-c])"
    r"|(\d+)\s*:\s*([A-Ca-c])\s*->\s*([A-Ca-c]))",
    re.IGNORECASE,
)


def parse_moves(text: str) -> list[tuple[int, str, str]]:
    """All Hanoi moves in order, in any of the four accepted phrasings."""
    moves = []
    for m in _MOVE_RE.finditer(text):
        g = [x for x in m.groups() if x is not None]
        disk, src, dst = g
        moves.append((int(disk), src.upper(), dst.upper()))
    return moves


# ---------------------------------------------------------------------------
# Grids (Sudoku)
# ---------------------------------------------------------------------------

_NESTED_LIST_RE = re.compile(r"\[\s*\[[\d,\s\[\]]+\]\s*\]")


def parse_grid(text: str) -> Optional[list[list[int]]]:
    """A square grid as nested lists or as whitespace rows; last block wins."""
    for m in reversed(_NESTED_LIST_RE.findall(text)):
        rows = _INT_LIST_RE.findall(m)
        if rows:
            grid = [[int(x) for x in r.split(",")] for r in rows]
            if len({len(r) for r in grid}) == 1 and len(grid) == len(grid[0]):
                return grid
    # whitespace rows: trailing maximal block of integer-only lines
    lines = [ln.strip() for ln in text.splitlines()]
    blocks: list[list[list[int]]] = []
    current: list[list[int]] = []
    for ln in lines:
        if ln and re.fullmatch(r"(\d+[ \t]*)+", ln):
            current.append([int(x) for x in ln.split()])
        else:
            if current:
                blocks.append(current)
            current = []
    if current:
        blocks.append(current)
    for block in reversed(blocks):
        if len(block) >= 2 and len({len(r) for r in block}) == 1 and len(block) == len(
            block[0]
        ):
            return block
    return None


# ---------------------------------------------------------------------------
# Logic grid assignment blocks
# ---------------------------------------------------------------------------

_PERSON_RE = re.compile(r"([A-Za-z]+)\s*:\s*\[([^\]]*)\]")


def parse_logic_assignment(content: str) -> Optional[dict[str, dict[str, str]]]:
    out: dict[str, dict[str, str]] = {}
    for m in _PERSON_RE.finditer(content):
        person = m.group(1)
        attrs: dict[str, str] = {}
        inner = m.group(2).strip()
        if inner:
            for part in inner.split(","):
                if ":" not in part:
                    return None
                c, _, v = part.partition(":")
                attrs[c.strip()] = v.strip()
        out[person] = attrs
    return out or None


# ---------------------------------------------------------------------------
# Fuzzy phrasings
# ---------------------------------------------------------------------------

_FUZZY_SCALAR_RES = [
    re.compile(r"therefore,?\s*x\s*=\s*(-?\d+(?:\.\d+)?)", re.IGNORECASE),
    re.compile(r"the\s+answer\s+is\s*[:\s]\s*\$?(-?\d+(?:\.\d+)?)", re.IGNORECASE),
    re.compile(r"\bsolution\s*[:=]\s*\$?(-?\d+(?:\.\d+)?)", re.IGNORECASE),
]
_ANSWER_LIST_RES = [
    re.compile(r"answer\s*[:=]\s*(\[[^\]]*\])", re.IGNORECASE),
    re.compile(r"solution\s*[:=]\s*(\[[^\]]*\])", re.IGNORECASE),
]


def _fuzzy_scalar(text: str):
    best = None
    for rx in _FUZZY_SCALAR_RES:
        for m in rx.finditer(text):
            best = (m.start(), m.group(1)) if best is None or m.start() > best[0] else best
    if best is None:
        return None
    return parse_scalar(best[1])


def _last_number(text: str):
    nums = _NUMBER_RE.findall(text)
    return parse_scalar(nums[-1]) if nums else None


# ---------------------------------------------------------------------------
# Top-level dispatch
# ---------------------------------------------------------------------------

SCALAR_KINDS = {"boxed_scalar", "answer_tag_scalar"}


def _wrapper_contents(text: str) -> list[tuple[str, str]]:
    """[(format, content)] for present wrappers, primary sources first."""
    out = []
    b = _last_boxed(text)
    if b is not None:
        out.append(("boxed", b))
    a = _last_answer_tag(text)
    if a is not None:
        out.append(("answer_tag", a))
    return out


def parse_response(text: str, task: TaskId, strict: bool = False) -> ParseResult:
    """Extract the final answer from a response for the given task."""
    if not isinstance(text, str):
        return ParseResult(status="invalid")
    kind = registry_lookup(task).format_kind(task.variation)
    try:
        return _parse_by_kind(text, kind, strict)
    except Exception:
        return ParseResult(status="invalid")


def classify_instruction(text: str, task: TaskId) -> bool:
    """True iff a syntactically complete accepted format instance is present."""
    return parse_response(text, task).instruction_followed


def _parse_by_kind(text: str, kind: str, strict: bool) -> ParseResult:
    wrappers = _wrapper_contents(text)

    if kind in ("boxed_scalar", "answer_tag_scalar"):
        primary = "boxed" if kind == "boxed_scalar" else "answer_tag"
        instruction = False
        parsed = None
        matched = None
        # prefer the primary wrapper, then the other wrapper
        for fmt, content in sorted(wrappers, key=lambda w: w[0] != primary):
            v = _scalar_from_text(content)
            if v is not None:
                if parsed is None:
                    parsed, matched = v, fmt
                if fmt == primary:
                    instruction = True
        if kind == "answer_tag_scalar" and not instruction:
            # "Therefore, x = N" counts as an accepted alternative
            v = _fuzzy_scalar(text)
            if v is not None and re.search(r"therefore,?\s*x\s*=", text, re.I):
                instruction = True
                if parsed is None:
                    parsed, matched = v, "therefore_x"
        if parsed is None:
            parsed = _fuzzy_scalar(text)
            matched = "fuzzy" if parsed is not None else None
        if parsed is None:
            parsed = _last_number(text)
            matched = "last_number" if parsed is not None else None
        if parsed is None:
            return ParseResult(status="invalid", instruction_followed=instruction)
        return ParseResult("parsed", parsed, matched, instruction)

    if kind == "boxed_relation":
        for fmt, content in wrappers:
            rel = _parse_relation(content)
            if rel is not None:
                return ParseResult("parsed", rel, fmt, fmt == "boxed")
        rel = _parse_relation(text)
        if rel is not None:
            return ParseResult("parsed", rel, "keyword", False)
        return ParseResult(status="invalid")

    if kind == "boxed_modes":
        for fmt, content in wrappers:
            v = _parse_modes(content)
            if v is not None:
                return ParseResult("parsed", v, fmt, fmt == "boxed")
        return ParseResult(status="invalid")

    if kind in ("boxed_list", "answer_tag_list"):
        primary = "boxed" if kind == "boxed_list" else "answer_tag"
        for fmt, content in sorted(wrappers, key=lambda w: w[0] != primary):
            v = _parse_int_list(content)
            if v is not None:
                return ParseResult("parsed", v, fmt, True)
        for rx in _ANSWER_LIST_RES:
            hits = rx.findall(text)
            if hits:
                v = _parse_int_list(hits[-1])
                if v is not None:
                    return ParseResult("parsed", v, "answer_phrase", True)
        v = _parse_int_list(text)
        if v is not None:
            # a bare bracketed list is a documented accepted format for
            # list-answer tasks (PREFERRED form in the board prompts)
            return ParseResult("parsed", v, "bare_list", kind == "answer_tag_list")
        return ParseResult(status="invalid")

    if kind in ("answer_tag_dict_int_bool", "answer_tag_dict_int_str",
                "answer_tag_dict_str_int"):
        parser = {
            "answer_tag_dict_int_bool": _parse_dict_int_bool,
            "answer_tag_dict_int_str": _parse_dict_int_str,
            "answer_tag_dict_str_int": _parse_dict_str_int,
        }[kind]
        for fmt, content in sorted(wrappers, key=lambda w: w[0] != "answer_tag"):
            strict_v = parser(content, True)
            v = strict_v if strict_v is not None else (
                None if strict else parser(content, False)
            )
            if v is not None:
                return ParseResult("parsed", v, fmt,
                                   fmt == "answer_tag" and strict_v is not None)
        strict_v = parser(text, True)
        v = strict_v if strict_v is not None else (
            None if strict else parser(text, False)
        )
        if v is not None:
            return ParseResult("parsed", v, "bare_dict", False)
        return ParseResult(status="invalid")

    if kind == "move_sequence":
        tag = _last_answer_tag(text)
        region = tag if tag is not None else text
        moves = parse_moves(region)
        if moves:
            return ParseResult("parsed", moves, "moves", True)
        return ParseResult(status="invalid")

    if kind == "grid":
        grid = parse_grid(text)
        if grid is not None:
            return ParseResult("parsed", grid, "grid", True)
        return ParseResult(status="invalid")

    if kind == "boxed_logic_grid":
        for fmt, content in wrappers:
            v = parse_logic_assignment(content)
            if v is not None:
                return ParseResult("parsed", v, fmt, fmt == "boxed")
        return ParseResult(status="invalid")

    raise ValueError(f"unknown format kind {kind!r}")
