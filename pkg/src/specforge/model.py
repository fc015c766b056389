"""Shared domain vocabulary: programs, prompt variants, annotation kinds, sampling config.

Everything here is an immutable value type with a canonical JSON encoding
(lowercase snake_case field names). These encodings are the interchange
format used by every adapter, the gateway, and the experiment reports.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Any


class PromptVariant(str, Enum):
    """The three prompt flavors: bare program, test-case context, value-analysis context."""

    BASELINE = "baseline"
    PATHCRAWLER = "pathcrawler"
    EVA = "eva"

    def __str__(self) -> str:
        return self.value

    @classmethod
    def parse(cls, text: str) -> "PromptVariant":
        try:
            return cls(text.strip().lower())
        except ValueError:
            raise ValueError(
                f"unknown prompt variant {text!r}; expected one of "
                f"{', '.join(v.value for v in cls)}"
            ) from None


@dataclass(frozen=True)
class Origin:
    """Provenance of a program: written by hand, or derived from a parent by one mutation."""

    kind: str  # "original" | "mutant"
    parent_name: str | None = None
    mutation_id: str | None = None

    def __post_init__(self) -> None:
        if self.kind not in ("original", "mutant"):
            raise ValueError(f"origin kind must be 'original' or 'mutant', got {self.kind!r}")
        if self.kind == "mutant" and not (self.parent_name and self.mutation_id):
            raise ValueError("mutant origin requires parent_name and mutation_id")
        if self.kind == "original" and (self.parent_name or self.mutation_id):
            raise ValueError("original origin carries no parent_name/mutation_id")

    @classmethod
    def original(cls) -> "Origin":
        return cls(kind="original")

    @classmethod
    def mutant(cls, parent_name: str, mutation_id: str) -> "Origin":
        return cls(kind="mutant", parent_name=parent_name, mutation_id=mutation_id)

    def to_dict(self) -> dict[str, Any]:
        d: dict[str, Any] = {"kind": self.kind}
        if self.kind == "mutant":
            d["parent_name"] = self.parent_name
            d["mutation_id"] = self.mutation_id
        return d

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "Origin":
        return cls(
            kind=d["kind"],
            parent_name=d.get("parent_name"),
            mutation_id=d.get("mutation_id"),
        )


@dataclass(frozen=True)
class SourceProgram:
    """One C source unit plus metadata.

    ``source`` is the full program text; mutants point back at their parent
    via ``origin``. The entry function is the one the study annotates
    (Pathcrawler-style programs conventionally call it ``testme``).
    """

    name: str
    source: str
    entry_function: str | None = None
    origin: Origin = field(default_factory=Origin.original)

    def __post_init__(self) -> None:
        if not self.name:
            raise ValueError("program name must be non-empty")
        if not self.source:
            raise ValueError("program source must be non-empty")

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "source": self.source,
            "entry_function": self.entry_function,
            "origin": self.origin.to_dict(),
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "SourceProgram":
        return cls(
            name=d["name"],
            source=d["source"],
            entry_function=d.get("entry_function"),
            origin=Origin.from_dict(d["origin"]) if "origin" in d else Origin.original(),
        )


@dataclass(frozen=True)
class AnnotationKind:
    """Classification of one ACSL clause by its keyword.

    ``keyword`` is the canonical clause keyword ("requires", "loop invariant",
    ...). Clauses whose keyword is recognized but has no dedicated bucket are
    kept with ``known=False`` so unexpected constructs surface in census
    reports instead of being silently merged.
    """

    keyword: str
    known: bool = True

    def __post_init__(self) -> None:
        if not self.keyword:
            raise ValueError("annotation kind keyword must be non-empty")

    @classmethod
    def other(cls, raw_keyword: str) -> "AnnotationKind":
        return cls(keyword=raw_keyword, known=False)

    def to_dict(self) -> dict[str, Any]:
        return {"keyword": self.keyword, "known": self.known}

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "AnnotationKind":
        return cls(keyword=d["keyword"], known=d.get("known", True))


REQUIRES = AnnotationKind("requires")
ENSURES = AnnotationKind("ensures")
ASSIGNS = AnnotationKind("assigns")
ASSERT = AnnotationKind("assert")
LOOP_INVARIANT = AnnotationKind("loop invariant")
LOOP_ASSIGNS = AnnotationKind("loop assigns")
LOOP_VARIANT = AnnotationKind("loop variant")
BEHAVIOR = AnnotationKind("behavior")
ASSUMES = AnnotationKind("assumes")
PREDICATE = AnnotationKind("predicate")
GHOST = AnnotationKind("ghost")

#: Kinds with a dedicated bucket, in canonical report order.
KNOWN_KINDS: tuple[AnnotationKind, ...] = (
    REQUIRES,
    ENSURES,
    ASSIGNS,
    ASSERT,
    LOOP_INVARIANT,
    LOOP_ASSIGNS,
    LOOP_VARIANT,
    BEHAVIOR,
    ASSUMES,
    PREDICATE,
    GHOST,
)

_KIND_ORDER = {kind.keyword: i for i, kind in enumerate(KNOWN_KINDS)}


def kind_sort_key(kind: AnnotationKind) -> tuple[int, str]:
    """Canonical ordering: the known buckets first, then others alphabetically."""
    return (_KIND_ORDER.get(kind.keyword, len(KNOWN_KINDS)), kind.keyword)


@dataclass(frozen=True)
class GenerationConfig:
    """Sampling configuration for annotation generation."""

    model_id: str = "gpt-4-0125-preview"
    temperature: float = 0.7
    samples_per_program: int = 3
    max_output_tokens: int = 4096

    def __post_init__(self) -> None:
        if not 0.0 <= self.temperature <= 2.0:
            raise ValueError(f"temperature must be in [0, 2], got {self.temperature}")
        if self.samples_per_program < 1:
            raise ValueError("samples_per_program must be positive")
        if self.max_output_tokens < 1:
            raise ValueError("max_output_tokens must be positive")

    def to_dict(self) -> dict[str, Any]:
        return {
            "model_id": self.model_id,
            "temperature": self.temperature,
            "samples_per_program": self.samples_per_program,
            "max_output_tokens": self.max_output_tokens,
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "GenerationConfig":
        return cls(
            model_id=d["model_id"],
            temperature=d["temperature"],
            samples_per_program=d["samples_per_program"],
            max_output_tokens=d["max_output_tokens"],
        )
