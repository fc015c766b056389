"""Lexing, annotation extraction, census, lint, preservation, and similarity."""

from .annotations import (
    Annotation,
    AnnotationBlock,
    Enclosing,
    FUNCTION_CONTRACT,
    LOOP_ANNOTATION,
    NoCodeFence,
    SplitResponse,
    STATEMENT,
    count_by_kind,
    merge_loop_assigns,
    parse_annotations,
    parse_blocks,
    split_response,
    strip_annotations,
)
from .checks import (
    DiffRun,
    LintIssue,
    LintRule,
    PreservationVerdict,
    check_code_preserved,
    lint,
)
from .lexer import (
    C_KEYWORDS,
    Token,
    TokenKind,
    TokenizeError,
    UnterminatedComment,
    UnterminatedLiteral,
    code_tokens,
    compare_text,
    tokenize,
)
from .similarity import normalize_clause, spec_similarity

__all__ = [
    "Annotation",
    "AnnotationBlock",
    "C_KEYWORDS",
    "DiffRun",
    "Enclosing",
    "FUNCTION_CONTRACT",
    "LOOP_ANNOTATION",
    "LintIssue",
    "LintRule",
    "NoCodeFence",
    "PreservationVerdict",
    "SplitResponse",
    "STATEMENT",
    "Token",
    "TokenKind",
    "TokenizeError",
    "UnterminatedComment",
    "UnterminatedLiteral",
    "check_code_preserved",
    "code_tokens",
    "compare_text",
    "count_by_kind",
    "lint",
    "merge_loop_assigns",
    "normalize_clause",
    "parse_annotations",
    "parse_blocks",
    "split_response",
    "spec_similarity",
    "strip_annotations",
    "tokenize",
]
