"""Lexical scanner for C sources carrying ACSL comment annotations.

This is deliberately a tokenizer, not a parser: the preservation, lint, and
mutation machinery only needs a faithful token stream with source spans.
Comments survive as tokens (annotations live inside them), preprocessor
directives collapse to one token per logical line, and any character the
scanner does not recognize becomes a one-character punctuator so that
scanning is total except for unterminated comments and literals.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum


class TokenizeError(Exception):
    """Base class for scanner failures."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class UnterminatedComment(TokenizeError):
    def __init__(self, line: int):
        super().__init__("unterminated block comment", line)


class UnterminatedLiteral(TokenizeError):
    def __init__(self, line: int, quote: str):
        super().__init__(f"unterminated {quote} literal", line)


class TokenKind(Enum):
    COMMENT = "comment"            # /* ... */
    LINE_COMMENT = "line_comment"  # // ...
    PREPROC = "preproc"            # whole #-directive logical line
    ID = "id"
    NUMBER = "number"
    CHAR = "char"
    STRING = "string"
    PUNCT = "punct"


@dataclass(frozen=True)
class Token:
    kind: TokenKind
    text: str
    line: int   # 1-based line of the token's first character
    start: int  # byte offset into the source, inclusive
    end: int    # byte offset, exclusive

    @property
    def is_comment(self) -> bool:
        return self.kind in (TokenKind.COMMENT, TokenKind.LINE_COMMENT)

    @property
    def is_acsl(self) -> bool:
        """True for ACSL annotation comments: ``/*@ ...`` or ``//@ ...``."""
        if self.kind is TokenKind.COMMENT:
            return self.text.startswith("/*@")
        if self.kind is TokenKind.LINE_COMMENT:
            return self.text.startswith("//@")
        return False


C_KEYWORDS = frozenset(
    """
    auto break case char const continue default do double else enum extern
    float for goto if inline int long register restrict return short signed
    sizeof static struct switch typedef union unsigned void volatile while
    _Bool _Complex _Imaginary
    """.split()
)

_ID_RE = re.compile(r"[A-Za-z_$][A-Za-z0-9_$]*")
_NUMBER_RE = re.compile(
    r"(?:0[xX][0-9a-fA-F]+|(?:\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?)"
    r"[uUlLfF]*"
)

# Longest-match first; covers C punctuators plus nothing ACSL-specific (ACSL
# text lives inside comment tokens and is never scanned here).
_PUNCTUATORS = (
    "<<=", ">>=", "...",
    "->", "++", "--", "<<", ">>", "<=", ">=", "==", "!=", "&&", "||",
    "+=", "-=", "*=", "/=", "%=", "&=", "^=", "|=",
    "+", "-", "*", "/", "%", "<", ">", "=", "!", "&", "|", "^", "~",
    "?", ":", ";", ",", ".", "(", ")", "[", "]", "{", "}",
)


def tokenize(source: str) -> list[Token]:
    """Scan ``source`` into tokens, comments included.

    Raises UnterminatedComment / UnterminatedLiteral; everything else scans.
    """
    tokens: list[Token] = []
    pos = 0
    line = 1
    n = len(source)
    at_line_start = True  # only whitespace seen since the last newline

    while pos < n:
        ch = source[pos]

        if ch == "\n":
            line += 1
            pos += 1
            at_line_start = True
            continue
        if ch in " \t\r\v\f":
            pos += 1
            continue

        start = pos
        start_line = line

        if ch == "/" and source.startswith("/*", pos):
            close = source.find("*/", pos + 2)
            if close == -1:
                raise UnterminatedComment(start_line)
            end = close + 2
            text = source[start:end]
            line += text.count("\n")
            tokens.append(Token(TokenKind.COMMENT, text, start_line, start, end))
            pos = end
            at_line_start = False
            continue

        if ch == "/" and source.startswith("//", pos):
            end = source.find("\n", pos)
            end = n if end == -1 else end
            tokens.append(
                Token(TokenKind.LINE_COMMENT, source[start:end], start_line, start, end)
            )
            pos = end
            at_line_start = False
            continue

        if ch == "#" and at_line_start:
            # One token per directive; backslash-newline continues the line.
            end = pos
            while end < n:
                nl = source.find("\n", end)
                if nl == -1:
                    end = n
                    break
                stripped = source[end:nl].rstrip()
                if stripped.endswith("\\"):
                    line += 1
                    end = nl + 1
                else:
                    end = nl
                    break
            tokens.append(Token(TokenKind.PREPROC, source[start:end], start_line, start, end))
            pos = end
            at_line_start = False
            continue

        at_line_start = False

        if ch in "'\"":
            pos += 1
            while pos < n:
                c = source[pos]
                if c == "\\" and pos + 1 < n:
                    pos += 2
                    continue
                if c == ch:
                    pos += 1
                    break
                if c == "\n":
                    raise UnterminatedLiteral(start_line, ch)
                pos += 1
            else:
                raise UnterminatedLiteral(start_line, ch)
            kind = TokenKind.CHAR if ch == "'" else TokenKind.STRING
            tokens.append(Token(kind, source[start:pos], start_line, start, pos))
            continue

        m = _ID_RE.match(source, pos)
        if m:
            tokens.append(Token(TokenKind.ID, m.group(), start_line, start, m.end()))
            pos = m.end()
            continue

        if ch.isdigit() or (ch == "." and pos + 1 < n and source[pos + 1].isdigit()):
            m = _NUMBER_RE.match(source, pos)
            if m:
                tokens.append(Token(TokenKind.NUMBER, m.group(), start_line, start, m.end()))
                pos = m.end()
                continue

        for p in _PUNCTUATORS:
            if source.startswith(p, pos):
                pos += len(p)
                tokens.append(Token(TokenKind.PUNCT, p, start_line, start, pos))
                break
        else:
            # Unknown byte (@, \, $...) — keep it as a one-char punctuator.
            pos += 1
            tokens.append(Token(TokenKind.PUNCT, ch, start_line, start, pos))

    return tokens


_WS_RUN_RE = re.compile(r"\s+")


def code_tokens(source: str) -> list[Token]:
    """Tokens with comments dropped: the stream preservation checks compare."""
    return [t for t in tokenize(source) if not t.is_comment]


def compare_text(token: Token) -> str:
    """Token text normalized for stream comparison.

    Preprocessor tokens collapse internal whitespace so layout-only edits to
    a directive do not register as code changes.
    """
    if token.kind is TokenKind.PREPROC:
        return _WS_RUN_RE.sub(" ", token.text.strip())
    return token.text
