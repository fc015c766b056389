from __future__ import annotations

import pytest

from conftest import oracle_tokens
from specforge.analyzer import (
    Token,
    TokenKind,
    UnterminatedComment,
    UnterminatedLiteral,
    code_tokens,
    compare_text,
    tokenize,
)


def kinds(code):
    return [t.kind for t in tokenize(code)]


def texts(code):
    return [t.text for t in tokenize(code)]


def test_basic_stream():
    toks = tokenize("int x = a[3] + 0x1F;\n")
    assert [t.text for t in toks] == ["int", "x", "=", "a", "[", "3", "]", "+", "0x1F", ";"]
    assert toks[0].kind is TokenKind.ID
    assert toks[2].kind is TokenKind.PUNCT
    assert toks[8].kind is TokenKind.NUMBER


def test_comments_are_tokens():
    toks = tokenize("/*@ requires x; */ int x; //@ assert x;\n// plain\n")
    assert toks[0].kind is TokenKind.COMMENT and toks[0].is_acsl
    line_comments = [t for t in toks if t.kind is TokenKind.LINE_COMMENT]
    assert [t.is_acsl for t in line_comments] == [True, False]


def test_block_comment_spans_lines_and_tracks_line_numbers():
    code = "a;\n/* one\ntwo */\nb;\n"
    toks = tokenize(code)
    assert toks[2].kind is TokenKind.COMMENT
    assert toks[2].line == 2
    b = [t for t in toks if t.text == "b"][0]
    assert b.line == 4


def test_preproc_directive_is_one_token():
    toks = tokenize('#include <string.h>\nint x;\n#define EOS \'\\0\'\n')
    preproc = [t for t in toks if t.kind is TokenKind.PREPROC]
    assert [t.text for t in preproc] == ["#include <string.h>", "#define EOS '\\0'"]


def test_preproc_continuation_line():
    toks = tokenize("#define MAX(a, b) \\\n  ((a) > (b) ? (a) : (b))\nint y;\n")
    assert toks[0].kind is TokenKind.PREPROC
    assert "((a) > (b)" in toks[0].text
    assert toks[1].text == "int"


def test_hash_inside_line_is_not_preproc():
    toks = tokenize("int a; a = b # c;\n")
    hash_tok = [t for t in toks if t.text == "#"][0]
    assert hash_tok.kind is TokenKind.PUNCT


def test_string_and_char_literals():
    toks = tokenize("char c = '\\n'; char *s = \"a\\\"b\";\n")
    assert [t.kind for t in toks if t.kind in (TokenKind.CHAR, TokenKind.STRING)] == [
        TokenKind.CHAR,
        TokenKind.STRING,
    ]


def test_longest_match_punctuators():
    assert texts("a <<= b >> c <= d < e;") == [
        "a", "<<=", "b", ">>", "c", "<=", "d", "<", "e", ";",
    ]


def test_unknown_bytes_become_single_punct():
    toks = tokenize("x @ y \\ z;")
    assert [t.text for t in toks] == ["x", "@", "y", "\\", "z", ";"]


def test_unterminated_block_comment_raises_with_line():
    with pytest.raises(UnterminatedComment) as exc:
        tokenize("int a;\n/* no close\nint b;\n")
    assert exc.value.line == 2


def test_unterminated_string_raises():
    with pytest.raises(UnterminatedLiteral):
        tokenize('char *s = "oops;\n')


def test_spans_reconstruct_source():
    code = 'int f(int n) { return n + 1; } /* tail */\n'
    for tok in tokenize(code):
        assert code[tok.start : tok.end] == tok.text


def test_code_tokens_drop_comments_only():
    code = "/*@ requires x; */ int x; // note\n"
    assert [t.text for t in code_tokens(code)] == ["int", "x", ";"]


def test_compare_text_normalizes_preproc_whitespace():
    a = Token(TokenKind.PREPROC, "#define   X  1", 1, 0, 14)
    b = Token(TokenKind.PREPROC, "#define X 1", 1, 0, 11)
    assert compare_text(a) == compare_text(b)


def test_matches_oracle_on_shipped_programs(corpus_load):
    for entry in corpus_load.entries:
        source = entry.program.source
        mine = []
        for tok in code_tokens(source):
            if tok.kind is TokenKind.PREPROC:
                # the oracle splits directives; do the same here
                mine.extend(oracle_tokens(tok.text))
            else:
                mine.append(tok.text)
        assert mine == oracle_tokens(source), entry.program.name
