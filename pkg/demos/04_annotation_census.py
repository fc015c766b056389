"""Split a model reply, classify its ACSL clauses, census them, and lint.

The reply format is reasoning prose plus a fenced program; every clause in an
annotation comment is classified by keyword (requires, ensures, assigns, loop
invariant, ...), and structural rules are linted.
"""

from pathlib import Path

from specforge.analyzer import (
    check_code_preserved,
    count_by_kind,
    lint,
    parse_annotations,
    split_response,
)
from specforge.runner import histogram_to_dict, load_corpus

ROOT = Path(__file__).resolve().parent.parent

reply = (ROOT / "fixtures" / "binary_search" / "baseline" / "0.txt").read_text(
    encoding="utf-8"
)
split = split_response(reply)
print("--- reasoning ---")
print(split.reasoning)

annotations = parse_annotations(split.code)
print("\n--- clauses ---")
for a in annotations:
    print(f"  line {a.line:>2}  {a.kind.keyword:15s} {a.clause_text[:50]}")

print("\n--- census ---")
for keyword, count in histogram_to_dict(count_by_kind(annotations)).items():
    if count:
        print(f"  {keyword:15s} {count}")

issues = lint(split.code)
print("\nlint:", "clean" if not issues else issues)

corpus = load_corpus(ROOT / "corpus")
program = next(e.program for e in corpus.entries if e.program.name == "binary_search")
verdict = check_code_preserved(program, split.code)
print(f"code preserved against the original source: {verdict.preserved}")
