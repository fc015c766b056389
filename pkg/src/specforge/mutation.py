"""Deterministic single-typo mutants of C programs.

Four typo classes are modeled: swapping the index pair of a 2-D array access,
substituting a condition variable with a neighbor from the same line, widening
or narrowing a relational operator, and flipping an additive operator. Sites
are enumerated in source order; ``mutate`` picks one with a seeded generator,
so the same (program bytes, seed) always reproduces the same mutant.

Mutants carry a contract: the parent and mutant token streams differ in
exactly one position. A full index-pair swap edits two token positions, so
index-swap sites are enumerated (and can be applied explicitly through
``apply_site``) but are never drawn by ``mutate``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from enum import Enum
from typing import Any

from .analyzer.lexer import C_KEYWORDS, Token, TokenKind, tokenize
from .model import Origin, SourceProgram


class NoMutationSite(ValueError):
    """The program offers no site that a single-token mutation can hit."""


class MutationOperator(str, Enum):
    INDEX_SWAP = "index_swap"
    VARIABLE_SUBSTITUTION = "variable_substitution"
    RELATIONAL_FLIP = "relational_flip"
    ARITHMETIC_OPERATOR_SWAP = "arithmetic_operator_swap"


@dataclass(frozen=True)
class MutationSite:
    """One applicable typo: where it is, what it reads now, what it becomes.

    ``edits`` are (start, end, new_text) splices into the source;
    single-edit sites are the ones ``mutate`` may select.
    """

    operator: MutationOperator
    line: int
    token: str
    replacement: str
    edits: tuple[tuple[int, int, str], ...]

    @property
    def single_token(self) -> bool:
        return len(self.edits) == 1


@dataclass(frozen=True)
class MutationRecord:
    mutation_id: str
    operator: MutationOperator
    line: int
    original_token: str
    mutated_token: str
    seed: int

    def __post_init__(self) -> None:
        if self.original_token == self.mutated_token:
            raise ValueError("mutation must change the token")

    def to_dict(self) -> dict[str, Any]:
        return {
            "mutation_id": self.mutation_id,
            "operator": self.operator.value,
            "line": self.line,
            "original_token": self.original_token,
            "mutated_token": self.mutated_token,
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "MutationRecord":
        return cls(
            mutation_id=d["mutation_id"],
            operator=MutationOperator(d["operator"]),
            line=d["line"],
            original_token=d["original_token"],
            mutated_token=d["mutated_token"],
            seed=d["seed"],
        )


_RELATIONAL_FLIPS = {"<": "<=", "<=": "<", ">": ">=", ">=": ">"}
_ARITHMETIC_SWAPS = {"+": "-", "-": "+"}
_CONDITION_HEADS = frozenset(("if", "while", "for"))


def _condition_token_indices(tokens: list[Token]) -> set[int]:
    """Indices of tokens inside if/while/for parenthesized headers."""
    inside: set[int] = set()
    i = 0
    n = len(tokens)
    while i < n:
        t = tokens[i]
        if t.kind is TokenKind.ID and t.text in _CONDITION_HEADS:
            j = i + 1
            while j < n and tokens[j].is_comment:
                j += 1
            if j < n and tokens[j].text == "(":
                depth = 0
                k = j
                while k < n:
                    if tokens[k].text == "(":
                        depth += 1
                    elif tokens[k].text == ")":
                        depth -= 1
                        if depth == 0:
                            break
                    inside.add(k)
                    k += 1
                i = k
        i += 1
    inside_only = {
        idx for idx in inside if tokens[idx].text not in ("(", ")")
    }
    return inside_only


def _identifier_sites(tokens: list[Token]) -> list[MutationSite]:
    condition_indices = _condition_token_indices(tokens)

    def is_candidate(idx: int) -> bool:
        t = tokens[idx]
        if t.kind is not TokenKind.ID or t.text in C_KEYWORDS:
            return False
        nxt = next(
            (u for u in tokens[idx + 1:] if not u.is_comment), None
        )
        return not (nxt is not None and nxt.text == "(")  # skip call positions

    # Replacement pool: other identifiers on the same source line.
    by_line: dict[int, list[int]] = {}
    for idx, t in enumerate(tokens):
        if t.kind is TokenKind.ID and t.text not in C_KEYWORDS:
            by_line.setdefault(t.line, []).append(idx)

    sites: list[MutationSite] = []
    for idx in sorted(condition_indices):
        if not is_candidate(idx):
            continue
        token = tokens[idx]
        pool = sorted(
            {
                tokens[other].text
                for other in by_line.get(token.line, [])
                if tokens[other].text != token.text and is_candidate(other)
            }
        )
        for replacement in pool:
            sites.append(
                MutationSite(
                    operator=MutationOperator.VARIABLE_SUBSTITUTION,
                    line=token.line,
                    token=token.text,
                    replacement=replacement,
                    edits=((token.start, token.end, replacement),),
                )
            )
    return sites


def _operator_sites(tokens: list[Token]) -> list[MutationSite]:
    sites: list[MutationSite] = []
    for t in tokens:
        if t.kind is not TokenKind.PUNCT:
            continue
        if t.text in _RELATIONAL_FLIPS:
            sites.append(
                MutationSite(
                    operator=MutationOperator.RELATIONAL_FLIP,
                    line=t.line,
                    token=t.text,
                    replacement=_RELATIONAL_FLIPS[t.text],
                    edits=((t.start, t.end, _RELATIONAL_FLIPS[t.text]),),
                )
            )
        elif t.text in _ARITHMETIC_SWAPS:
            sites.append(
                MutationSite(
                    operator=MutationOperator.ARITHMETIC_OPERATOR_SWAP,
                    line=t.line,
                    token=t.text,
                    replacement=_ARITHMETIC_SWAPS[t.text],
                    edits=((t.start, t.end, _ARITHMETIC_SWAPS[t.text]),),
                )
            )
    return sites


def _index_swap_sites(tokens: list[Token]) -> list[MutationSite]:
    """2-D accesses ``base[a][b]`` with distinct single-token indices."""
    sites: list[MutationSite] = []
    single = (TokenKind.ID, TokenKind.NUMBER)
    for i in range(len(tokens) - 6):
        window = tokens[i : i + 7]
        if (
            window[0].kind is TokenKind.ID
            and window[0].text not in C_KEYWORDS
            and window[1].text == "["
            and window[2].kind in single
            and window[3].text == "]"
            and window[4].text == "["
            and window[5].kind in single
            and window[6].text == "]"
            and window[2].text != window[5].text
        ):
            base, first, second = window[0], window[2], window[5]
            sites.append(
                MutationSite(
                    operator=MutationOperator.INDEX_SWAP,
                    line=base.line,
                    token=f"{base.text}[{first.text}][{second.text}]",
                    replacement=f"{base.text}[{second.text}][{first.text}]",
                    edits=(
                        (first.start, first.end, second.text),
                        (second.start, second.end, first.text),
                    ),
                )
            )
    return sites


def enumerate_sites(program: SourceProgram) -> list[MutationSite]:
    """Every applicable typo site, ordered by source position."""
    tokens = [t for t in tokenize(program.source) if not t.is_comment]
    sites = (
        _identifier_sites(tokens) + _operator_sites(tokens) + _index_swap_sites(tokens)
    )
    sites.sort(key=lambda s: (s.edits[0][0], s.operator.value, s.replacement))
    return sites


def apply_site(source: str, site: MutationSite) -> str:
    """Splice a site's edits into the source text."""
    out = source
    for start, end, new_text in sorted(site.edits, reverse=True):
        out = out[:start] + new_text + out[end:]
    return out


def mutate(program: SourceProgram, seed: int) -> tuple[SourceProgram, MutationRecord]:
    """Apply one seeded single-token typo; same (program, seed) → same mutant.

    Raises NoMutationSite when no single-token site exists.
    """
    candidates = [s for s in enumerate_sites(program) if s.single_token]
    if not candidates:
        raise NoMutationSite(f"no single-token mutation site in {program.name!r}")
    rng = random.Random(seed)
    site = candidates[rng.randrange(len(candidates))]
    mutation_id = f"{site.operator.value}-l{site.line}-s{seed}"
    record = MutationRecord(
        mutation_id=mutation_id,
        operator=site.operator,
        line=site.line,
        original_token=site.token,
        mutated_token=site.replacement,
        seed=seed,
    )
    mutant = SourceProgram(
        name=f"{program.name}.mut-{mutation_id}",
        source=apply_site(program.source, site),
        entry_function=program.entry_function,
        origin=Origin.mutant(parent_name=program.name, mutation_id=mutation_id),
    )
    return mutant, record
