"""Orchestrate the full study: corpus x prompt variants x samples.

Loads a corpus directory, builds prompts, collects completions through a
gateway backend, analyzes every response (split, census, lint, preservation),
aggregates per-variant histograms and mutant-robustness scores, and persists
everything as deterministic JSON/CSV artifacts. Single-result failures are
recorded, never fatal: one bad cell removes exactly that cell.
"""

from __future__ import annotations

import hashlib
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Iterable, Sequence

from .analyzer import (
    Annotation,
    NoCodeFence,
    PreservationVerdict,
    SplitResponse,
    TokenizeError,
    check_code_preserved,
    count_by_kind,
    parse_annotations,
    spec_similarity,
    split_response,
    tokenize,
)
from .analyzer import lint as lint_code
from .analyzer.checks import LintIssue
from .eva import EvaReport, parse_eva_report
from .gateway import (
    CompletionBackend,
    CompletionRequest,
    CompletionResponse,
    GatewayError,
)
from .model import (
    KNOWN_KINDS,
    AnnotationKind,
    GenerationConfig,
    Origin,
    PromptVariant,
    SourceProgram,
    kind_sort_key,
)
from .pathcrawler import CsvError, TestSuite, parse_test_csv
from .prompts import PromptTemplate, build_prompt

STATUS_OK = "ok"
STATUS_NO_CODE_FENCE = "no_code_fence"
STATUS_PARSE_FAILED = "parse_failed"
STATUS_BACKEND_FAILED = "backend_failed"

REPLAY_PROVENANCE_NOTE = (
    "replay fixtures are curated recordings standing in for live model output; "
    "live sampling is non-deterministic and will not reproduce them"
)


class EmptyCorpus(ValueError):
    def __init__(self, directory: Path):
        super().__init__(f"no corpus entries under {directory}")


class ConfigError(RuntimeError):
    """The run cannot start: no backend, no templates, or bad options."""


@dataclass(frozen=True)
class CorpusEntry:
    """One program plus whatever symbolic context shipped next to it."""

    program: SourceProgram
    suite: TestSuite | None = None
    report: EvaReport | None = None
    load_errors: tuple[str, ...] = ()
    provenance: str = "unspecified"
    tags: tuple[tuple[str, str], ...] = ()  # free-form meta.json entries (clarity, ...)


@dataclass(frozen=True)
class CorpusLoad:
    entries: tuple[CorpusEntry, ...]
    skipped: tuple[tuple[str, str], ...]  # (directory name, reason)
    digest: str  # content hash over every corpus file read


def load_corpus(directory: Path | str) -> CorpusLoad:
    """Read ``<dir>/<name>/program.c`` entries with optional tests.csv/eva.txt/meta.json.

    Context that fails to parse is recorded on the entry and left absent; a
    program that cannot even be tokenized skips the whole entry with a
    reason. Raises EmptyCorpus when nothing loads.
    """
    directory = Path(directory)
    entries: list[CorpusEntry] = []
    skipped: list[tuple[str, str]] = []
    hasher = hashlib.sha256()

    candidates = sorted(
        (p for p in directory.iterdir() if (p / "program.c").is_file())
        if directory.is_dir()
        else []
    )
    for subdir in candidates:
        name = subdir.name
        errors: list[str] = []
        source = (subdir / "program.c").read_text(encoding="utf-8")
        hasher.update(f"{name}/program.c\x00".encode())
        hasher.update(source.encode("utf-8"))
        try:
            tokenize(source)
        except TokenizeError as exc:
            skipped.append((name, f"program.c does not tokenize: {exc}"))
            continue

        entry_function = None
        origin = Origin.original()
        provenance = "unspecified"
        tags: tuple[tuple[str, str], ...] = ()
        meta_path = subdir / "meta.json"
        if meta_path.is_file():
            raw_meta = meta_path.read_text(encoding="utf-8")
            hasher.update(f"{name}/meta.json\x00".encode())
            hasher.update(raw_meta.encode("utf-8"))
            try:
                meta = json.loads(raw_meta)
                entry_function = meta.get("entry_function")
                provenance = meta.get("provenance", provenance)
                if "origin" in meta:
                    origin = Origin.from_dict(meta["origin"])
                tags = tuple(
                    sorted(
                        (str(k), str(v))
                        for k, v in meta.items()
                        if k not in ("entry_function", "origin", "provenance")
                    )
                )
            except (ValueError, KeyError) as exc:
                errors.append(f"meta.json: {exc}")

        suite = None
        csv_path = subdir / "tests.csv"
        if csv_path.is_file():
            raw_csv = csv_path.read_text(encoding="utf-8")
            hasher.update(f"{name}/tests.csv\x00".encode())
            hasher.update(raw_csv.encode("utf-8"))
            try:
                suite = parse_test_csv(raw_csv)
            except CsvError as exc:
                errors.append(f"tests.csv: {exc}")

        report = None
        eva_path = subdir / "eva.txt"
        if eva_path.is_file():
            raw_eva = eva_path.read_text(encoding="utf-8")
            hasher.update(f"{name}/eva.txt\x00".encode())
            hasher.update(raw_eva.encode("utf-8"))
            report = parse_eva_report(raw_eva)

        entries.append(
            CorpusEntry(
                program=SourceProgram(
                    name=name,
                    source=source,
                    entry_function=entry_function,
                    origin=origin,
                ),
                suite=suite,
                report=report,
                load_errors=tuple(errors),
                provenance=provenance,
                tags=tags,
            )
        )

    if not entries:
        raise EmptyCorpus(directory)
    return CorpusLoad(
        entries=tuple(entries), skipped=tuple(skipped), digest=hasher.hexdigest()
    )


@dataclass(frozen=True)
class GenerationResult:
    """Everything learned from one program x variant x sample cell."""

    program_name: str
    variant: PromptVariant
    sample_index: int
    status: str
    status_reason: str | None = None
    response: CompletionResponse | None = None
    split: SplitResponse | None = None
    annotations: tuple[Annotation, ...] = ()
    histogram: dict[AnnotationKind, int] | None = None
    lint_issues: tuple[LintIssue, ...] = ()
    preservation: PreservationVerdict | None = None
    prompt_warnings: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if self.status == STATUS_OK and (
            self.histogram is None or self.preservation is None
        ):
            raise ValueError("ok results must carry histogram and preservation")

    def to_dict(self) -> dict[str, Any]:
        return {
            "program_name": self.program_name,
            "variant": self.variant.value,
            "sample_index": self.sample_index,
            "status": self.status,
            "status_reason": self.status_reason,
            "response": self.response.to_dict() if self.response else None,
            "split": self.split.to_dict() if self.split else None,
            "annotations": [a.to_dict() for a in self.annotations],
            "histogram": histogram_to_dict(self.histogram)
            if self.histogram is not None
            else None,
            "lint_issues": [i.to_dict() for i in self.lint_issues],
            "preservation": self.preservation.to_dict() if self.preservation else None,
            "prompt_warnings": list(self.prompt_warnings),
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "GenerationResult":
        return cls(
            program_name=d["program_name"],
            variant=PromptVariant(d["variant"]),
            sample_index=d["sample_index"],
            status=d["status"],
            status_reason=d.get("status_reason"),
            response=CompletionResponse.from_dict(d["response"])
            if d.get("response")
            else None,
            split=SplitResponse.from_dict(d["split"]) if d.get("split") else None,
            annotations=tuple(Annotation.from_dict(a) for a in d["annotations"]),
            histogram=histogram_from_dict(d["histogram"])
            if d.get("histogram") is not None
            else None,
            lint_issues=tuple(LintIssue.from_dict(i) for i in d["lint_issues"]),
            preservation=PreservationVerdict.from_dict(d["preservation"])
            if d.get("preservation")
            else None,
            prompt_warnings=tuple(d.get("prompt_warnings", ())),
        )


def histogram_to_dict(histogram: dict[AnnotationKind, int]) -> dict[str, int]:
    """Histogram keyed by canonical keyword, in canonical order."""
    return {
        kind.keyword: histogram[kind] for kind in sorted(histogram, key=kind_sort_key)
    }


def histogram_from_dict(d: dict[str, int]) -> dict[AnnotationKind, int]:
    by_keyword = {k.keyword: k for k in KNOWN_KINDS}
    return {
        by_keyword.get(keyword, AnnotationKind.other(keyword)): count
        for keyword, count in d.items()
    }


def sum_histograms(
    histograms: Iterable[dict[AnnotationKind, int]]
) -> dict[AnnotationKind, int]:
    total: dict[AnnotationKind, int] = {}
    for histogram in histograms:
        for kind, count in histogram.items():
            total[kind] = total.get(kind, 0) + count
    return total


@dataclass(frozen=True)
class RobustnessRow:
    """Mean spec similarity between a parent's and a mutant's sampled specs.

    Samples are paired by index; ``mean_similarity`` is None when no sample
    index succeeded on both sides.
    """

    parent: str
    mutant: str
    variant: PromptVariant
    mean_similarity: float | None
    pairs_compared: int

    def to_dict(self) -> dict[str, Any]:
        return {
            "parent": self.parent,
            "mutant": self.mutant,
            "variant": self.variant.value,
            "mean_similarity": self.mean_similarity,
            "pairs_compared": self.pairs_compared,
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "RobustnessRow":
        return cls(
            parent=d["parent"],
            mutant=d["mutant"],
            variant=PromptVariant(d["variant"]),
            mean_similarity=d["mean_similarity"],
            pairs_compared=d["pairs_compared"],
        )


@dataclass(frozen=True)
class ExperimentReport:
    config: GenerationConfig
    corpus_digest: str
    backend_kind: str
    results: tuple[GenerationResult, ...]
    skips: tuple[tuple[str, str, str], ...]  # (program, variant, reason)
    robustness: tuple[RobustnessRow, ...]
    notes: tuple[str, ...] = ()

    @property
    def aggregate_histograms(self) -> dict[PromptVariant, dict[AnnotationKind, int]]:
        by_variant: dict[PromptVariant, list[dict[AnnotationKind, int]]] = {}
        for result in self.results:
            if result.status == STATUS_OK and result.histogram is not None:
                by_variant.setdefault(result.variant, []).append(result.histogram)
        return {
            variant: sum_histograms(histograms)
            for variant, histograms in by_variant.items()
        }

    @property
    def failures(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for result in self.results:
            if result.status != STATUS_OK:
                counts[result.status] = counts.get(result.status, 0) + 1
        return counts

    def to_dict(self) -> dict[str, Any]:
        return {
            "config": self.config.to_dict(),
            "corpus_digest": self.corpus_digest,
            "backend_kind": self.backend_kind,
            "results": [r.to_dict() for r in self.results],
            "skips": [list(s) for s in self.skips],
            "robustness": [r.to_dict() for r in self.robustness],
            "notes": list(self.notes),
            "aggregate_histograms": {
                variant.value: histogram_to_dict(histogram)
                for variant, histogram in sorted(
                    self.aggregate_histograms.items(), key=lambda kv: kv[0].value
                )
            },
            "failures": dict(sorted(self.failures.items())),
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "ExperimentReport":
        return cls(
            config=GenerationConfig.from_dict(d["config"]),
            corpus_digest=d["corpus_digest"],
            backend_kind=d["backend_kind"],
            results=tuple(GenerationResult.from_dict(r) for r in d["results"]),
            skips=tuple((s[0], s[1], s[2]) for s in d["skips"]),
            robustness=tuple(RobustnessRow.from_dict(r) for r in d["robustness"]),
            notes=tuple(d.get("notes", ())),
        )


def _context_for(
    entry: CorpusEntry, variant: PromptVariant
) -> tuple[bool, TestSuite | None, EvaReport | None, str]:
    """(available, suite, report, reason-if-missing) for one program x variant."""
    if variant is PromptVariant.PATHCRAWLER and entry.suite is None:
        return False, None, None, "no test suite for this program"
    if variant is PromptVariant.EVA and entry.report is None:
        return False, None, None, "no value-analysis report for this program"
    return True, entry.suite, entry.report, ""


def _run_cell(
    entry: CorpusEntry,
    template: PromptTemplate,
    suite: TestSuite | None,
    report: EvaReport | None,
    config: GenerationConfig,
    backend: CompletionBackend,
    sample_index: int,
) -> GenerationResult:
    prompt = build_prompt(template, entry.program, suite=suite, report=report)
    base: dict[str, Any] = dict(
        program_name=entry.program.name,
        variant=template.variant,
        sample_index=sample_index,
        prompt_warnings=prompt.warnings,
    )
    try:
        response = backend.complete(
            CompletionRequest(prompt=prompt, config=config, sample_index=sample_index)
        )
    except GatewayError as exc:
        return GenerationResult(status=STATUS_BACKEND_FAILED, status_reason=str(exc), **base)

    try:
        split = split_response(response.text)
    except NoCodeFence as exc:
        return GenerationResult(
            status=STATUS_NO_CODE_FENCE,
            status_reason=str(exc),
            response=response,
            **base,
        )

    try:
        annotations = tuple(parse_annotations(split.code))
        histogram = count_by_kind(annotations)
        lint_issues = tuple(lint_code(split.code))
        preservation = check_code_preserved(entry.program, split.code)
    except TokenizeError as exc:
        return GenerationResult(
            status=STATUS_PARSE_FAILED,
            status_reason=str(exc),
            response=response,
            split=split,
            **base,
        )

    return GenerationResult(
        status=STATUS_OK,
        response=response,
        split=split,
        annotations=annotations,
        histogram=histogram,
        lint_issues=lint_issues,
        preservation=preservation,
        **base,
    )


def _generate_results(
    entries: Sequence[CorpusEntry],
    variants: Sequence[PromptVariant],
    config: GenerationConfig,
    backend: CompletionBackend,
    templates: dict[PromptVariant, PromptTemplate],
    max_workers: int,
) -> tuple[list[GenerationResult], list[tuple[str, str, str]]]:
    tasks = []
    skips: list[tuple[str, str, str]] = []
    for entry in entries:
        for variant in variants:
            available, suite, report, reason = _context_for(entry, variant)
            if not available:
                skips.append((entry.program.name, variant.value, reason))
                continue
            template = templates[variant]
            for sample_index in range(config.samples_per_program):
                tasks.append((entry, template, suite, report, sample_index))

    if not tasks:
        return [], skips

    with ThreadPoolExecutor(max_workers=max(1, max_workers)) as pool:
        results = list(
            pool.map(
                lambda t: _run_cell(t[0], t[1], t[2], t[3], config, backend, t[4]),
                tasks,
            )
        )
    results.sort(key=lambda r: (r.program_name, r.variant.value, r.sample_index))
    return results, skips


def _robustness_rows(
    results: Sequence[GenerationResult],
    pairs: Sequence[tuple[str, str]],
    variants: Sequence[PromptVariant],
) -> list[RobustnessRow]:
    by_cell: dict[tuple[str, str, int], GenerationResult] = {
        (r.program_name, r.variant.value, r.sample_index): r for r in results
    }
    max_sample = max((r.sample_index for r in results), default=-1)
    rows = []
    for parent, mutant in pairs:
        for variant in variants:
            scores = []
            for sample in range(max_sample + 1):
                a = by_cell.get((parent, variant.value, sample))
                b = by_cell.get((mutant, variant.value, sample))
                if (
                    a is None
                    or b is None
                    or a.status != STATUS_OK
                    or b.status != STATUS_OK
                ):
                    continue
                scores.append(spec_similarity(a.annotations, b.annotations))
            rows.append(
                RobustnessRow(
                    parent=parent,
                    mutant=mutant,
                    variant=variant,
                    mean_similarity=sum(scores) / len(scores) if scores else None,
                    pairs_compared=len(scores),
                )
            )
    rows.sort(key=lambda r: (r.variant.value, r.parent, r.mutant))
    return rows


def mutant_pairs(entries: Sequence[CorpusEntry]) -> list[tuple[str, str]]:
    """(parent, mutant) name pairs for corpus entries with mutant origin."""
    names = {e.program.name for e in entries}
    pairs = []
    for entry in entries:
        origin = entry.program.origin
        if origin.kind == "mutant" and origin.parent_name in names:
            pairs.append((origin.parent_name, entry.program.name))
    return sorted(pairs)


def run(
    corpus: CorpusLoad | Sequence[CorpusEntry],
    variants: Sequence[PromptVariant],
    config: GenerationConfig,
    backend: CompletionBackend,
    templates: dict[PromptVariant, PromptTemplate],
    max_workers: int = 4,
) -> ExperimentReport:
    """Generate and analyze every program x variant x sample cell.

    Variants whose required context is absent for a program are skipped and
    recorded; per-cell failures become result statuses. Robustness rows are
    computed for every corpus mutant whose parent is present.
    """
    if isinstance(corpus, CorpusLoad):
        entries: Sequence[CorpusEntry] = corpus.entries
        digest = corpus.digest
    else:
        entries = list(corpus)
        digest = ""
    if not entries:
        raise ConfigError("empty corpus")
    missing = [v for v in variants if v not in templates]
    if missing:
        raise ConfigError(f"no template loaded for variants: {missing}")

    results, skips = _generate_results(
        entries, variants, config, backend, templates, max_workers
    )
    rows = _robustness_rows(results, mutant_pairs(entries), variants)
    backend_kind = type(backend).__name__
    notes = []
    if "replay" in backend_kind.lower():
        notes.append(REPLAY_PROVENANCE_NOTE)
    provenances = sorted({e.provenance for e in entries})
    notes.append("corpus provenance: " + ", ".join(provenances))
    return ExperimentReport(
        config=config,
        corpus_digest=digest,
        backend_kind=backend_kind,
        results=tuple(results),
        skips=tuple(skips),
        robustness=tuple(rows),
        notes=tuple(notes),
    )


def robustness_study(
    pairs: Sequence[tuple[CorpusEntry, CorpusEntry]],
    variants: Sequence[PromptVariant],
    config: GenerationConfig,
    backend: CompletionBackend,
    templates: dict[PromptVariant, PromptTemplate],
    max_workers: int = 4,
) -> list[RobustnessRow]:
    """Generate specs for each (parent, mutant) pair and score their similarity.

    Samples are paired by index so a deterministic backend scores an
    identical pair at exactly 1.0; rows come back sorted by (variant, parent).
    """
    seen: dict[str, CorpusEntry] = {}
    for parent, mutant in pairs:
        seen.setdefault(parent.program.name, parent)
        seen.setdefault(mutant.program.name, mutant)
    results, _ = _generate_results(
        list(seen.values()), variants, config, backend, templates, max_workers
    )
    name_pairs = [(p.program.name, m.program.name) for p, m in pairs]
    return _robustness_rows(results, name_pairs, variants)


def _canonical_json(data: Any) -> str:
    return json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def emit(
    report: ExperimentReport, directory: Path | str, normalize: str = "totals"
) -> list[Path]:
    """Write report.json, histogram.csv, robustness.csv, and generated sources.

    ``normalize`` is "totals" (sum over samples) or "per-sample" (mean per
    successful sample). Emission is deterministic: the same report always
    produces byte-identical files.
    """
    if normalize not in ("totals", "per-sample"):
        raise ConfigError(f"normalize must be 'totals' or 'per-sample', got {normalize!r}")
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []

    report_path = directory / "report.json"
    report_path.write_text(_canonical_json(report.to_dict()), encoding="utf-8")
    written.append(report_path)

    aggregates = report.aggregate_histograms
    ok_counts: dict[PromptVariant, int] = {}
    for result in report.results:
        if result.status == STATUS_OK:
            ok_counts[result.variant] = ok_counts.get(result.variant, 0) + 1
    kinds = sorted(
        {kind for histogram in aggregates.values() for kind, n in histogram.items() if n},
        key=kind_sort_key,
    )
    variant_order = list(PromptVariant)
    lines = ["kind," + ",".join(f"{v.value}_count" for v in variant_order)]
    for kind in kinds:
        row = [kind.keyword]
        for variant in variant_order:
            count = aggregates.get(variant, {}).get(kind, 0)
            if normalize == "per-sample":
                ok = ok_counts.get(variant, 0)
                row.append(f"{count / ok:.4f}" if ok else "0")
            else:
                row.append(str(count))
        lines.append(",".join(row))
    histogram_path = directory / "histogram.csv"
    histogram_path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    written.append(histogram_path)

    rob_lines = ["parent,mutant,variant,mean_similarity,pairs_compared"]
    for row in report.robustness:
        value = "" if row.mean_similarity is None else f"{row.mean_similarity:.6f}"
        rob_lines.append(
            f"{row.parent},{row.mutant},{row.variant.value},{value},{row.pairs_compared}"
        )
    robustness_path = directory / "robustness.csv"
    robustness_path.write_text("\n".join(rob_lines) + "\n", encoding="utf-8")
    written.append(robustness_path)

    for result in report.results:
        if result.status != STATUS_OK or result.split is None:
            continue
        out = directory / "generated" / result.program_name / result.variant.value
        out.mkdir(parents=True, exist_ok=True)
        path = out / f"{result.sample_index}.c"
        path.write_text(result.split.code + "\n", encoding="utf-8")
        written.append(path)

    return written


def load_report(path: Path | str) -> ExperimentReport:
    """Read back a report.json written by :func:`emit`."""
    return ExperimentReport.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))
