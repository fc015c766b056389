"""Multiset Jaccard similarity over normalized annotation clauses.

Used to quantify how stable generated specifications are when the underlying
program is perturbed: 1.0 means the two annotation multisets agree clause for
clause, 0.0 means they share nothing.
"""

from __future__ import annotations

from collections import Counter
from typing import Iterable

from .annotations import Annotation


def normalize_clause(annotation: Annotation) -> str:
    """Canonical clause string: kind keyword + clause text, whitespace collapsed."""
    return " ".join(f"{annotation.kind.keyword} {annotation.clause_text}".split())


def spec_similarity(a: Iterable[Annotation], b: Iterable[Annotation]) -> float:
    """Jaccard index over the multisets of normalized clauses; 1.0 when both empty."""
    counts_a = Counter(normalize_clause(x) for x in a)
    counts_b = Counter(normalize_clause(x) for x in b)
    if not counts_a and not counts_b:
        return 1.0
    intersection = sum((counts_a & counts_b).values())
    union = sum((counts_a | counts_b).values())
    return intersection / union
