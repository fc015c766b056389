"""Run the whole study offline: corpus x variants x samples on recorded replies.

The replay backend serves recorded fixtures, so the full pipeline (prompt,
complete, split, census, lint, preservation, robustness) runs deterministically
with no network. Artifacts land in ./demo_out.
"""

from pathlib import Path

from specforge.gateway import ReplayBackend
from specforge.model import GenerationConfig, PromptVariant
from specforge.prompts import default_template_dir, load_templates
from specforge.runner import emit, histogram_to_dict, load_corpus, run, sum_histograms

ROOT = Path(__file__).resolve().parent.parent

corpus = load_corpus(ROOT / "corpus")
report = run(
    corpus,
    list(PromptVariant),
    GenerationConfig(),
    ReplayBackend(ROOT / "fixtures"),
    load_templates(default_template_dir()),
)

ok = sum(1 for r in report.results if r.status == "ok")
print(f"{len(report.results)} cells generated ({ok} ok), "
      f"{len(report.skips)} skipped for missing context")

print("\naggregate census per prompt variant:")
for variant, histogram in sorted(report.aggregate_histograms.items()):
    top = sorted(histogram.items(), key=lambda kv: -kv[1])[:3]
    label = ", ".join(f"{k.keyword}={v}" for k, v in top)
    print(f"  {variant.value:12s} {label}")

overall = sum_histograms(report.aggregate_histograms.values())
print("\noverall census:")
for keyword, count in histogram_to_dict(overall).items():
    if count:
        print(f"  {keyword:15s} {count}")

print("\nrobustness of specs against the handcrafted typo mutants:")
for row in report.robustness:
    if row.mean_similarity is not None:
        print(
            f"  {row.parent} vs {row.mutant} [{row.variant.value}]: "
            f"mean clause similarity {row.mean_similarity:.3f} "
            f"over {row.pairs_compared} sample pairs"
        )

out = Path(__file__).resolve().parent / "demo_out"
emit(report, out)
print(f"\nartifacts written under {out}")
