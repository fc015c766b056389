"""Load prompt templates and instantiate them with program and analysis context.

Templates are plain-text data files, one per variant, with placeholder slots
``{program}``, ``{csv}``, ``{eva}`` plus two few-shot snippet slots
``{valid_assigns}``/``{invalid_assigns}`` filled from companion files at load
time. Substitution is purely textual (no format-string machinery — C code is
full of braces), so a built prompt contains the program and its context
byte-for-byte.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Any

from .eva import EvaReport
from .model import PromptVariant, SourceProgram
from .pathcrawler import TestSuite, render_csv, summarize


class TemplateError(ValueError):
    """Base class for template loading/instantiation failures."""


class MissingTemplate(TemplateError):
    def __init__(self, variant: PromptVariant, path: Path):
        super().__init__(f"no template file for variant {variant} at {path}")
        self.variant = variant


class PlaceholderMismatch(TemplateError):
    def __init__(self, variant: PromptVariant, placeholder: str, detail: str):
        super().__init__(f"{variant} template, {placeholder}: {detail}")
        self.variant = variant
        self.placeholder = placeholder


class MissingContext(TemplateError):
    def __init__(self, variant: PromptVariant, needed: str):
        super().__init__(f"{variant} prompt requires {needed}")
        self.variant = variant


class UnresolvedPlaceholder(TemplateError):
    def __init__(self, name: str):
        super().__init__(f"placeholder {name} left unresolved after substitution")
        self.name = name


STATE_MUTATION_WARNING = (
    "StateMutationWarning: every test case in the suite has an empty output; "
    "the function under test appears to mutate state, and test-case context "
    "without outputs tends to hurt generation quality"
)

_SNIPPET_SLOTS = ("{valid_assigns}", "{invalid_assigns}")
_CONTEXT_SLOT = {
    PromptVariant.BASELINE: None,
    PromptVariant.PATHCRAWLER: "{csv}",
    PromptVariant.EVA: "{eva}",
}
_PLACEHOLDER_RE = re.compile(r"\{[a-z_]+\}")


@dataclass(frozen=True)
class PromptTemplate:
    """A loaded template: snippet slots already filled, context slots still open."""

    variant: PromptVariant
    body: str

    def to_dict(self) -> dict[str, Any]:
        return {"variant": self.variant.value, "body": self.body}

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "PromptTemplate":
        return cls(variant=PromptVariant(d["variant"]), body=d["body"])


@dataclass(frozen=True)
class BuiltPrompt:
    """A fully substituted prompt ready for the gateway."""

    variant: PromptVariant
    text: str
    program_name: str
    context_digest: str  # sha256 of the substituted context; "" for baseline
    warnings: tuple[str, ...] = ()

    def to_dict(self) -> dict[str, Any]:
        return {
            "variant": self.variant.value,
            "text": self.text,
            "program_name": self.program_name,
            "context_digest": self.context_digest,
            "warnings": list(self.warnings),
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "BuiltPrompt":
        return cls(
            variant=PromptVariant(d["variant"]),
            text=d["text"],
            program_name=d["program_name"],
            context_digest=d["context_digest"],
            warnings=tuple(d.get("warnings", ())),
        )


def default_template_dir() -> Path:
    """The template directory shipped inside the package."""
    return Path(resources.files("specforge") / "templates")  # type: ignore[arg-type]


def _validate(variant: PromptVariant, body: str) -> None:
    if "{program}" not in body:
        raise PlaceholderMismatch(variant, "{program}", "required slot is missing")
    if "START OF INPUT" not in body:
        raise PlaceholderMismatch(
            variant, "{program}", "template must end with the START OF INPUT section"
        )
    allowed = {"{program}"}
    context = _CONTEXT_SLOT[variant]
    if context:
        if context not in body:
            raise PlaceholderMismatch(variant, context, "required slot is missing")
        allowed.add(context)
    for found in set(_PLACEHOLDER_RE.findall(body)):
        if found not in allowed:
            raise PlaceholderMismatch(variant, found, "slot not allowed in this template")


def load_templates(directory: Path | str) -> dict[PromptVariant, PromptTemplate]:
    """Read and validate one template per variant from ``directory``.

    Snippet slots are filled from ``snippets/valid_assigns.c`` and
    ``snippets/invalid_assigns.c`` next to the templates. Raises
    MissingTemplate / PlaceholderMismatch.
    """
    directory = Path(directory)
    templates: dict[PromptVariant, PromptTemplate] = {}
    for variant in PromptVariant:
        path = directory / f"{variant.value}.txt"
        if not path.is_file():
            raise MissingTemplate(variant, path)
        body = path.read_text(encoding="utf-8")
        for slot in _SNIPPET_SLOTS:
            if slot not in body:
                continue
            snippet_path = directory / "snippets" / f"{slot[1:-1]}.c"
            if not snippet_path.is_file():
                raise PlaceholderMismatch(
                    variant, slot, f"snippet file {snippet_path} is missing"
                )
            body = body.replace(slot, snippet_path.read_text(encoding="utf-8").rstrip("\n"))
        _validate(variant, body)
        templates[variant] = PromptTemplate(variant=variant, body=body)
    return templates


def build_prompt(
    template: PromptTemplate,
    program: SourceProgram,
    suite: TestSuite | None = None,
    report: EvaReport | None = None,
) -> BuiltPrompt:
    """Substitute the program and its context into the template's slots.

    The Pathcrawler variant requires ``suite``, the Eva variant ``report``;
    raises MissingContext otherwise. A suite whose cases all have empty
    outputs attaches a state-mutation warning to the result.
    """
    warnings: tuple[str, ...] = ()
    if template.variant is PromptVariant.PATHCRAWLER:
        if suite is None:
            raise MissingContext(template.variant, "a parsed test suite")
        context = render_csv(suite)
        if not summarize(suite).has_output:
            warnings = (STATE_MUTATION_WARNING,)
    elif template.variant is PromptVariant.EVA:
        if report is None:
            raise MissingContext(template.variant, "a parsed value-analysis report")
        context = report.raw
    else:
        context = ""

    text = template.body.replace("{program}", program.source)
    slot = _CONTEXT_SLOT[template.variant]
    if slot:
        text = text.replace(slot, context)

    for name in ("{program}", "{csv}", "{eva}", *_SNIPPET_SLOTS):
        if name in text:
            raise UnresolvedPlaceholder(name)

    digest = hashlib.sha256(context.encode("utf-8")).hexdigest() if context else ""
    return BuiltPrompt(
        variant=template.variant,
        text=text,
        program_name=program.name,
        context_digest=digest,
        warnings=warnings,
    )
