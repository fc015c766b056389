"""Extract and classify ACSL clauses from annotated C sources and LLM replies.

Annotations are ACSL comments (``/*@ ... */`` blocks and ``//@ ...`` lines).
A block may hold several clauses; each clause is classified by its leading
keyword. Classification is total: recognized non-core keywords (terminates,
axiomatic, ...) are kept as "other" kinds carrying the verbatim keyword so a
census can surface them, and arbitrary words never start a clause, so binder
semicolons (``\\forall integer i; ...``) do not split clauses apart.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Any, Iterable

from ..model import (
    ASSERT,
    ASSIGNS,
    ASSUMES,
    BEHAVIOR,
    ENSURES,
    GHOST,
    KNOWN_KINDS,
    LOOP_ASSIGNS,
    LOOP_INVARIANT,
    LOOP_VARIANT,
    PREDICATE,
    REQUIRES,
    AnnotationKind,
)
from .lexer import Token, TokenKind, tokenize


class NoCodeFence(ValueError):
    """The response contains no fenced code block at all."""


@dataclass(frozen=True)
class SplitResponse:
    """An LLM reply split into reasoning prose and the annotated-program fence."""

    reasoning: str
    code: str

    def to_dict(self) -> dict[str, Any]:
        return {"reasoning": self.reasoning, "code": self.code}

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "SplitResponse":
        return cls(reasoning=d["reasoning"], code=d["code"])


def split_response(response_text: str) -> SplitResponse:
    """Select the annotated program fence; everything outside fences is reasoning.

    Preference order: the longest ``c``-tagged fence, then the longest
    untagged fence, then the longest fence of any tag; ties go to the last
    occurrence (models often finish with a consolidated program). Raises
    NoCodeFence when the reply has no fence at all.
    """
    fences: list[tuple[str, str]] = []  # (tag, content)
    reasoning_lines: list[str] = []
    lines = response_text.split("\n")
    i = 0
    while i < len(lines):
        stripped = lines[i].strip()
        if stripped.startswith("```"):
            tag = stripped[3:].strip().lower()
            j = i + 1
            content: list[str] = []
            while j < len(lines) and not lines[j].strip().startswith("```"):
                content.append(lines[j])
                j += 1
            fences.append((tag, "\n".join(content)))
            i = j + 1  # past the closing fence; an unclosed fence runs to EOF
        else:
            reasoning_lines.append(lines[i])
            i += 1

    if not fences:
        raise NoCodeFence("response contains no fenced code block")

    candidates = [(idx, f) for idx, f in enumerate(fences) if f[0] == "c"]
    if not candidates:
        candidates = [(idx, f) for idx, f in enumerate(fences) if f[0] == ""]
    if not candidates:
        candidates = list(enumerate(fences))
    _, (_, code) = max(candidates, key=lambda pair: (len(pair[1][1]), pair[0]))

    reasoning = "\n".join(reasoning_lines).strip()
    return SplitResponse(reasoning=reasoning, code=code)


@dataclass(frozen=True)
class Enclosing:
    """Where a clause sits: function contract, loop, statement, or behavior body."""

    context: str  # "function_contract" | "loop" | "statement" | "behavior_body"
    behavior: str | None = None

    def __post_init__(self) -> None:
        if self.context not in ("function_contract", "loop", "statement", "behavior_body"):
            raise ValueError(f"bad enclosing context {self.context!r}")
        if (self.context == "behavior_body") != (self.behavior is not None):
            raise ValueError("behavior name set iff context is behavior_body")

    def to_dict(self) -> dict[str, Any]:
        d: dict[str, Any] = {"context": self.context}
        if self.behavior is not None:
            d["behavior"] = self.behavior
        return d

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "Enclosing":
        return cls(context=d["context"], behavior=d.get("behavior"))


FUNCTION_CONTRACT = Enclosing("function_contract")
LOOP_ANNOTATION = Enclosing("loop")
STATEMENT = Enclosing("statement")


@dataclass(frozen=True)
class Annotation:
    """One classified ACSL clause."""

    kind: AnnotationKind
    clause_text: str  # body after the keyword, trimmed, no '@' decoration
    block_style: bool  # True inside /*@ ... */, False for //@ lines
    line: int
    enclosing: Enclosing

    def to_dict(self) -> dict[str, Any]:
        return {
            "kind": self.kind.to_dict(),
            "clause_text": self.clause_text,
            "block_style": self.block_style,
            "line": self.line,
            "enclosing": self.enclosing.to_dict(),
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "Annotation":
        return cls(
            kind=AnnotationKind.from_dict(d["kind"]),
            clause_text=d["clause_text"],
            block_style=d["block_style"],
            line=d["line"],
            enclosing=Enclosing.from_dict(d["enclosing"]),
        )


# Clause-starting keywords. Core kinds get their own bucket; the rest of the
# ACSL clause vocabulary is recognized but reported verbatim as "other".
_CORE_STARTERS: dict[str, AnnotationKind] = {
    "loop invariant": LOOP_INVARIANT,
    "loop assigns": LOOP_ASSIGNS,
    "loop variant": LOOP_VARIANT,
    "requires": REQUIRES,
    "ensures": ENSURES,
    "assigns": ASSIGNS,
    "assert": ASSERT,
    "behavior": BEHAVIOR,
    "assumes": ASSUMES,
    "predicate": PREDICATE,
    "ghost": GHOST,
}

_OTHER_STARTERS: tuple[str, ...] = (
    "complete behaviors",
    "disjoint behaviors",
    "global invariant",
    "loop allocates",
    "loop frees",
    "terminates",
    "decreases",
    "allocates",
    "frees",
    "exits",
    "returns",
    "breaks",
    "continues",
    "invariant",
    "variant",
    "axiomatic",
    "axiom",
    "lemma",
    "logic",
    "inductive",
    "check",
    "admit",
)

_ALL_STARTERS: tuple[str, ...] = tuple(
    sorted(
        list(_CORE_STARTERS) + list(_OTHER_STARTERS),
        key=lambda kw: (-len(kw.split()), -len(kw)),
    )
)

_STARTER_RE = re.compile(
    "|".join(
        r"(?:\b" + r"\s+".join(re.escape(w) for w in kw.split()) + r"\b)"
        for kw in _ALL_STARTERS
    )
)

_BEHAVIOR_NAME_RE = re.compile(r"\s*([A-Za-z_]\w*)\s*:")
_LOOP_HEADS = frozenset(("for", "while", "do"))


def _normalize_line(raw_line: str) -> str:
    """Drop '@' decoration (leading/trailing runs) and '//' end-of-line comments."""
    text = raw_line.strip()
    while text.startswith("@"):
        text = text[1:].lstrip()
    while text.endswith("@"):
        text = text[:-1].rstrip()
    cut = text.find("//")
    if cut != -1:
        text = text[:cut].rstrip()
    return text


def _comment_body(token: Token) -> list[tuple[int, str]]:
    """Normalized (line, text) segments of an annotation comment's content."""
    if token.kind is TokenKind.COMMENT:
        inner = token.text[3:-2]  # strip '/*@' and '*/'
    else:
        inner = token.text[3:]  # strip '//@'
    segments = []
    for i, raw_line in enumerate(inner.split("\n")):
        segments.append((token.line + i, _normalize_line(raw_line)))
    return segments


@dataclass(frozen=True)
class _Clause:
    kind: AnnotationKind
    text: str
    line: int
    is_behavior_header: bool
    behavior_name: str | None


def _scan_clauses(segments: list[tuple[int, str]]) -> list[_Clause]:
    body = "\n".join(text for _, text in segments)
    # Map body offsets back to source lines.
    line_starts: list[tuple[int, int]] = []  # (offset, source line)
    offset = 0
    for line_no, text in segments:
        line_starts.append((offset, line_no))
        offset += len(text) + 1

    def line_of(pos: int) -> int:
        result = line_starts[0][1] if line_starts else 1
        for start, line_no in line_starts:
            if start <= pos:
                result = line_no
            else:
                break
        return result

    matches = []
    for m in _STARTER_RE.finditer(body):
        before = body[: m.start()].rstrip()
        if before and before[-1] not in ";:":
            continue  # mid-clause word (e.g. after a binder semicolon), not a new clause
        matches.append(m)

    clauses: list[_Clause] = []
    for i, m in enumerate(matches):
        keyword = " ".join(m.group().split())
        end = matches[i + 1].start() if i + 1 < len(matches) else len(body)
        text = body[m.end():end].strip().rstrip(";").strip()
        kind = _CORE_STARTERS.get(keyword, AnnotationKind.other(keyword))
        behavior_name = None
        is_header = False
        if kind == BEHAVIOR:
            is_header = True
            name_match = _BEHAVIOR_NAME_RE.match(body, m.end())
            if name_match:
                behavior_name = name_match.group(1)
                text = behavior_name
            else:
                behavior_name = text or "<anonymous>"
        clauses.append(
            _Clause(
                kind=kind,
                text=text,
                line=line_of(m.start()),
                is_behavior_header=is_header,
                behavior_name=behavior_name,
            )
        )
    return clauses


@dataclass(frozen=True)
class AnnotationBlock:
    """One annotation comment with its parsed clauses and placement facts.

    ``loop_key`` identifies the loop statement the block annotates (the token
    index of the following ``for``/``while``/``do``) so lint can group the
    blocks attached to the same loop; None for non-loop blocks.
    """

    annotations: tuple[Annotation, ...]
    block_style: bool
    token_index: int  # index of the comment token in the full token stream
    loop_key: int | None
    is_function_contract: bool


def parse_blocks(code: str) -> tuple[list[AnnotationBlock], list[Token]]:
    """Parse annotation blocks plus the full token stream they came from."""
    tokens = tokenize(code)
    blocks: list[AnnotationBlock] = []
    depth = 0
    for idx, token in enumerate(tokens):
        if not token.is_acsl:
            if token.kind is TokenKind.PUNCT:
                if token.text == "{":
                    depth += 1
                elif token.text == "}":
                    depth = max(0, depth - 1)
            continue

        segments = _comment_body(token)
        clauses = _scan_clauses(segments)
        if not clauses:
            continue

        next_code = next(
            (
                (j, t)
                for j, t in enumerate(tokens[idx + 1:], start=idx + 1)
                if not t.is_comment
            ),
            None,
        )
        heads_loop = next_code is not None and next_code[1].text in _LOOP_HEADS
        has_loop_clause = any(c.kind.keyword.startswith("loop ") for c in clauses)
        block_style = token.kind is TokenKind.COMMENT

        if heads_loop or has_loop_clause:
            enclosing_for = lambda _c: LOOP_ANNOTATION  # noqa: E731
            loop_key = next_code[0] if heads_loop else idx
            is_contract = False
        elif depth == 0:
            loop_key = None
            is_contract = True
            current_behavior: list[str | None] = [None]

            def enclosing_for(c: _Clause) -> Enclosing:
                if c.is_behavior_header:
                    current_behavior[0] = c.behavior_name
                    return FUNCTION_CONTRACT
                if current_behavior[0] is not None:
                    return Enclosing("behavior_body", current_behavior[0])
                return FUNCTION_CONTRACT

        else:
            loop_key = None
            is_contract = False
            enclosing_for = lambda _c: STATEMENT  # noqa: E731

        annotations = tuple(
            Annotation(
                kind=c.kind,
                clause_text=c.text,
                block_style=block_style,
                line=c.line,
                enclosing=enclosing_for(c),
            )
            for c in clauses
        )
        blocks.append(
            AnnotationBlock(
                annotations=annotations,
                block_style=block_style,
                token_index=idx,
                loop_key=loop_key,
                is_function_contract=is_contract,
            )
        )
    return blocks, tokens


def parse_annotations(code: str) -> list[Annotation]:
    """All ACSL clauses in ``code``, in source order."""
    blocks, _ = parse_blocks(code)
    return [a for b in blocks for a in b.annotations]


def count_by_kind(annotations: Iterable[Annotation]) -> dict[AnnotationKind, int]:
    """Histogram of clause kinds; known kinds are always present (zero allowed)."""
    histogram: dict[AnnotationKind, int] = {kind: 0 for kind in KNOWN_KINDS}
    for annotation in annotations:
        histogram[annotation.kind] = histogram.get(annotation.kind, 0) + 1
    return histogram


def merge_loop_assigns(
    histogram: dict[AnnotationKind, int]
) -> dict[AnnotationKind, int]:
    """Census view folding ``loop assigns`` into ``assigns``.

    The two kinds are kept distinct everywhere else; this is a report-side
    option for comparing against censuses that bucket them together.
    """
    merged = dict(histogram)
    loop_count = merged.pop(LOOP_ASSIGNS, 0)
    merged[ASSIGNS] = merged.get(ASSIGNS, 0) + loop_count
    return merged


def strip_annotations(code: str) -> str:
    """Remove all ACSL comments, preserving every other token in order.

    Newlines inside removed blocks are kept so remaining tokens stay on their
    original lines; code with no annotations comes back byte-identical.
    """
    tokens = tokenize(code)
    spans = [(t.start, t.end, t.text) for t in tokens if t.is_acsl]
    if not spans:
        return code
    out: list[str] = []
    pos = 0
    for start, end, text in spans:
        out.append(code[pos:start])
        newlines = "\n" * text.count("\n")
        out.append(newlines if newlines else " ")
        pos = end
    out.append(code[pos:])
    return "".join(out)
