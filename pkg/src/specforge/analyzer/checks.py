"""Code-preservation verdicts and structural lint rules for annotated sources."""

from __future__ import annotations

import re
from dataclasses import dataclass
from difflib import SequenceMatcher
from enum import Enum
from typing import Any

from ..model import SourceProgram
from .annotations import parse_blocks, strip_annotations
from .lexer import C_KEYWORDS, Token, TokenKind, compare_text, tokenize


@dataclass(frozen=True)
class DiffRun:
    """One mismatching token run between original and annotated-then-stripped code."""

    line: int
    original: str
    modified: str

    def to_dict(self) -> dict[str, Any]:
        return {"line": self.line, "original": self.original, "modified": self.modified}

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "DiffRun":
        return cls(line=d["line"], original=d["original"], modified=d["modified"])


@dataclass(frozen=True)
class PreservationVerdict:
    preserved: bool
    diff: tuple[DiffRun, ...]

    def __post_init__(self) -> None:
        if self.preserved and self.diff:
            raise ValueError("preserved verdict must carry an empty diff")

    def to_dict(self) -> dict[str, Any]:
        return {"preserved": self.preserved, "diff": [d.to_dict() for d in self.diff]}

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "PreservationVerdict":
        return cls(
            preserved=d["preserved"],
            diff=tuple(DiffRun.from_dict(r) for r in d["diff"]),
        )


def _comparable(source: str) -> list[Token]:
    return [t for t in tokenize(source) if not t.is_comment]


def check_code_preserved(
    original: SourceProgram, annotated_code: str, max_diff_runs: int = 10
) -> PreservationVerdict:
    """True iff stripping annotations from ``annotated_code`` leaves the original tokens.

    Whitespace and comments never count; the diff localizes up to
    ``max_diff_runs`` mismatching token runs, line numbers taken from the
    original source where possible.
    """
    tok_orig = _comparable(original.source)
    tok_mod = _comparable(strip_annotations(annotated_code))
    values_orig = [compare_text(t) for t in tok_orig]
    values_mod = [compare_text(t) for t in tok_mod]
    if values_orig == values_mod:
        return PreservationVerdict(preserved=True, diff=())

    runs: list[DiffRun] = []
    matcher = SequenceMatcher(None, values_orig, values_mod, autojunk=False)
    for op, i1, i2, j1, j2 in matcher.get_opcodes():
        if op == "equal":
            continue
        if i1 < len(tok_orig):
            line = tok_orig[i1].line
        elif tok_orig:
            line = tok_orig[-1].line
        elif j1 < len(tok_mod):
            line = tok_mod[j1].line
        else:
            line = 1
        runs.append(
            DiffRun(
                line=line,
                original=" ".join(values_orig[i1:i2]),
                modified=" ".join(values_mod[j1:j2]),
            )
        )
        if len(runs) >= max_diff_runs:
            break
    return PreservationVerdict(preserved=False, diff=tuple(runs))


class LintRule(str, Enum):
    VARIANT_BEFORE_ASSIGNS = "variant_before_assigns"
    ASSIGNS_OUT_OF_SCOPE = "assigns_out_of_scope"
    BLOCK_STYLE_IN_BODY = "block_style_in_body"


@dataclass(frozen=True)
class LintIssue:
    rule: LintRule
    line: int
    detail: str

    def to_dict(self) -> dict[str, Any]:
        return {"rule": self.rule.value, "line": self.line, "detail": self.detail}

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "LintIssue":
        return cls(rule=LintRule(d["rule"]), line=d["line"], detail=d["detail"])


_IDENT_RE = re.compile(r"[A-Za-z_]\w*")
_DEFINE_RE = re.compile(r"#\s*define\s+(\w+)")


def _split_targets(clause_text: str) -> list[str]:
    """Split an assigns clause body on top-level commas."""
    targets: list[str] = []
    depth = 0
    current: list[str] = []
    for ch in clause_text:
        if ch in "([{":
            depth += 1
        elif ch in ")]}":
            depth = max(0, depth - 1)
        if ch == "," and depth == 0:
            targets.append("".join(current).strip())
            current = []
        else:
            current.append(ch)
    tail = "".join(current).strip()
    if tail:
        targets.append(tail)
    return [t for t in targets if t]


def _file_scope_names(tokens: list[Token]) -> set[str]:
    """Identifiers visible at file scope plus #define'd names (over-approximate)."""
    names: set[str] = set()
    depth = 0
    for token in tokens:
        if token.kind is TokenKind.PUNCT:
            if token.text == "{":
                depth += 1
            elif token.text == "}":
                depth = max(0, depth - 1)
        elif token.kind is TokenKind.PREPROC:
            m = _DEFINE_RE.match(" ".join(token.text.split()))
            if m:
                names.add(m.group(1))
        elif token.kind is TokenKind.ID and depth == 0 and token.text not in C_KEYWORDS:
            names.add(token.text)
    return names


def _formals_after(tokens: list[Token], start: int) -> set[str] | None:
    """Parameter-list identifiers of the function header following token ``start``.

    Collects every non-keyword identifier in the parentheses (deliberately
    over-approximate: the out-of-scope rule must only fire on clear misses).
    Returns None when no header-like shape follows.
    """
    i = start
    n = len(tokens)
    while i < n and tokens[i].is_comment:
        i += 1
    # Seek the opening paren of the parameter list before any { or ;.
    while i < n:
        t = tokens[i]
        if t.kind is TokenKind.PUNCT and t.text == "(":
            break
        if t.kind is TokenKind.PUNCT and t.text in "{;":
            return None
        i += 1
    else:
        return None
    names: set[str] = set()
    depth = 0
    while i < n:
        t = tokens[i]
        if t.kind is TokenKind.PUNCT and t.text == "(":
            depth += 1
        elif t.kind is TokenKind.PUNCT and t.text == ")":
            depth -= 1
            if depth == 0:
                return names
        elif t.kind is TokenKind.ID and t.text not in C_KEYWORDS:
            names.add(t.text)
        i += 1
    return names


def lint(code: str) -> list[LintIssue]:
    """Structural rules over annotations; conservative, warning-grade findings.

    - variant_before_assigns: a loop's ``loop variant`` precedes its
      ``loop assigns``.
    - assigns_out_of_scope: a function-contract ``assigns`` target whose base
      identifier is neither an ACSL builtin, a formal parameter, nor a
      file-scope name.
    - block_style_in_body: a multi-clause ``/*@`` block annotating a non-loop
      statement inside a function body.
    """
    blocks, tokens = parse_blocks(code)
    issues: list[LintIssue] = []
    file_scope = _file_scope_names(tokens)

    # variant-before-assigns, grouped by the loop each block annotates
    loop_groups: dict[int, list] = {}
    for block in blocks:
        if block.loop_key is not None:
            loop_groups.setdefault(block.loop_key, []).extend(block.annotations)
    for annotations in loop_groups.values():
        variant_at = next(
            (i for i, a in enumerate(annotations) if a.kind.keyword == "loop variant"),
            None,
        )
        assigns_at = next(
            (i for i, a in enumerate(annotations) if a.kind.keyword == "loop assigns"),
            None,
        )
        if variant_at is not None and assigns_at is not None and variant_at < assigns_at:
            issues.append(
                LintIssue(
                    rule=LintRule.VARIANT_BEFORE_ASSIGNS,
                    line=annotations[variant_at].line,
                    detail="loop assigns must be placed before loop variant",
                )
            )

    for block in blocks:
        if block.is_function_contract:
            formals = _formals_after(tokens, block.token_index + 1)
            visible = (formals or set()) | file_scope
            for annotation in block.annotations:
                if annotation.kind.keyword != "assigns":
                    continue
                for target in _split_targets(annotation.clause_text):
                    base = target.lstrip("*(").strip()
                    if base.startswith("\\"):
                        continue  # ACSL builtin location (\nothing, \result, ...)
                    m = _IDENT_RE.search(base)
                    if m is None:
                        continue
                    if m.group() not in visible:
                        issues.append(
                            LintIssue(
                                rule=LintRule.ASSIGNS_OUT_OF_SCOPE,
                                line=annotation.line,
                                detail=(
                                    f"assigns target {target!r}: {m.group()!r} is not "
                                    "a parameter or file-scope name"
                                ),
                            )
                        )

        if (
            block.block_style
            and len(block.annotations) > 1
            and block.annotations[0].enclosing.context == "statement"
        ):
            issues.append(
                LintIssue(
                    rule=LintRule.BLOCK_STYLE_IN_BODY,
                    line=block.annotations[0].line,
                    detail="multi-clause /*@ block on a statement; "
                    "use this style only for function headers",
                )
            )

    issues.sort(key=lambda i: (i.line, i.rule.value))
    return issues
