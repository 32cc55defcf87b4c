"""Corpus scoring and correlation against human judgments.

A corpus is a directory tree ``<root>/<topic_id>/models/<model_id>.txt``
plus ``<root>/<topic_id>/systems/<system_id>.txt``; judgments arrive as a
CSV ``system_id,pyramid,responsiveness,readability``. Every configured
metric scores every system summary against its topic's model summaries,
per-system means are correlated with each judgment column, and the report
is emitted as CSV and JSON.
"""

from __future__ import annotations

import csv
import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from .correlation import CorrelationTriple, ScoreVector, align_by_label, correlation_triple
from .embeddings import EmbeddingTable
from .rouge import MatchFunction, RougeVariant, rouge_score
from .textpipe import DEFAULT_CONFIG, TokenizeConfig, tokenize

logger = logging.getLogger(__name__)

JUDGMENT_TYPES = ("pyramid", "responsiveness", "readability")
JUDGMENTS_HEADER = ("system_id", "pyramid", "responsiveness", "readability")


class CorpusLoadError(Exception):
    pass


class JudgmentsFormatError(Exception):
    pass


class MetaEvalError(Exception):
    pass


@dataclass
class Topic:
    topic_id: str
    model_summaries: list[tuple[str, str]]
    system_summaries: list[tuple[str, str]]


@dataclass
class HumanJudgments:
    """Per-system scores for each human judgment type."""

    scores: dict[str, dict[str, float]]

    def column(self, judgment: str) -> ScoreVector:
        ids = sorted(self.scores)
        return ScoreVector(tuple(self.scores[s][judgment] for s in ids), tuple(ids))


@dataclass(frozen=True)
class MetricConfig:
    """One metric to evaluate: a ROUGE variant plus its matching options."""

    variant: RougeVariant
    match: str = "exact"  # "exact" | "we"
    oov: str = "zero"
    multiref: str = "average"
    component: str = "recall"

    def __post_init__(self):
        if self.match not in ("exact", "we"):
            raise ValueError(f"unknown match {self.match!r}")
        if self.component not in ("recall", "precision", "f1"):
            raise ValueError(f"unknown report component {self.component!r}")

    @property
    def name(self) -> str:
        if self.match == "we":
            return self.variant.name.replace("rouge-", "rouge-we-", 1)
        return self.variant.name

    def to_dict(self) -> dict:
        return {
            "variant": self.variant.name,
            "match": self.match,
            "oov": self.oov,
            "multiref": self.multiref,
            "report": self.component,
        }

    @classmethod
    def from_dict(cls, data: dict, match: str = "exact", oov: str = "zero",
                  multiref: str = "average", component: str = "recall") -> "MetricConfig":
        """Parse the metric configuration schema; omitted keys take the
        given run-level defaults."""
        unknown = set(data) - {"variant", "match", "oov", "multiref", "report"}
        if unknown:
            raise ValueError(f"unknown metric config keys: {', '.join(sorted(unknown))}")
        if "variant" not in data:
            raise ValueError("metric config requires a 'variant'")
        return cls(
            RougeVariant.parse(data["variant"]),
            match=data.get("match", match),
            oov=data.get("oov", oov),
            multiref=data.get("multiref", multiref),
            component=data.get("report", component),
        )


def _read_text(path: Path) -> str:
    try:
        return path.read_text(encoding="utf-8")
    except OSError as exc:
        raise CorpusLoadError(f"unreadable file {path}: {exc}") from exc


def _read_dir(directory: Path) -> list[tuple[str, str]]:
    entries = sorted(p for p in directory.iterdir() if p.is_file() and p.suffix == ".txt")
    return [(p.stem, _read_text(p)) for p in entries]


def load_corpus(root: str | Path) -> list[Topic]:
    """Load all topics under ``root``. Texts stay raw; normalization is the
    scorer's job."""
    root = Path(root)
    if not root.is_dir():
        raise CorpusLoadError(f"corpus root {root} is not a directory")
    topics = []
    for topic_dir in sorted(p for p in root.iterdir() if p.is_dir()):
        models_dir = topic_dir / "models"
        if not models_dir.is_dir():
            raise CorpusLoadError(f"topic {topic_dir.name!r} has no models/ directory")
        models = _read_dir(models_dir)
        if not models:
            raise CorpusLoadError(f"topic {topic_dir.name!r} has no model summaries")
        systems_dir = topic_dir / "systems"
        systems = _read_dir(systems_dir) if systems_dir.is_dir() else []
        topics.append(Topic(topic_dir.name, models, systems))
    return topics


def load_judgments(path: str | Path) -> HumanJudgments:
    """Parse the judgments CSV; duplicates and non-numeric scores are errors."""
    scores: dict[str, dict[str, float]] = {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise JudgmentsFormatError("judgments file is empty") from None
        if tuple(h.strip() for h in header) != JUDGMENTS_HEADER:
            raise JudgmentsFormatError(
                f"expected header {','.join(JUDGMENTS_HEADER)!r}, found {','.join(header)!r}"
            )
        for rownum, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 4:
                raise JudgmentsFormatError(f"row {rownum}: expected 4 fields, found {len(row)}")
            system_id = row[0].strip()
            if system_id in scores:
                raise JudgmentsFormatError(f"row {rownum}: duplicate system_id {system_id!r}")
            try:
                values = [float(v) for v in row[1:]]
            except ValueError:
                raise JudgmentsFormatError(f"row {rownum}: non-numeric score") from None
            scores[system_id] = dict(zip(JUDGMENT_TYPES, values))
    return HumanJudgments(scores)


def score_corpus(
    topics: Sequence[Topic],
    metrics: Sequence[MetricConfig],
    table: EmbeddingTable | None = None,
    tokenize_config: TokenizeConfig = DEFAULT_CONFIG,
    threads: int = 1,
) -> dict[str, ScoreVector]:
    """Per-metric mean score of every system over all topics.

    A system missing a topic's summary contributes 0 for that topic (and
    is logged); per-summary scoring failures likewise score 0. Aggregation
    is a deterministic fold in (metric, system, topic) order no matter how
    scoring is parallelized.
    """
    if not topics:
        raise ValueError("no topics to score")
    if any(m.match == "we" for m in metrics) and table is None:
        raise ValueError("embedding-based metrics require an embedding table")

    model_seqs = {
        t.topic_id: [tokenize(text, tokenize_config, source_id=f"{t.topic_id}/models/{mid}")
                     for mid, text in t.model_summaries]
        for t in topics
    }
    system_seqs = {
        t.topic_id: {sid: tokenize(text, tokenize_config, source_id=f"{t.topic_id}/systems/{sid}")
                     for sid, text in t.system_summaries}
        for t in topics
    }
    system_ids = sorted({sid for t in topics for sid, _ in t.system_summaries})

    def score_one(metric: MetricConfig, match: MatchFunction, system_id: str, topic: Topic) -> float:
        cand = system_seqs[topic.topic_id].get(system_id)
        if cand is None:
            logger.warning("system %s has no summary for topic %s; scoring 0",
                           system_id, topic.topic_id)
            return 0.0
        try:
            score = rouge_score(cand, model_seqs[topic.topic_id], metric.variant,
                                match, multiref=metric.multiref)
        except Exception:
            logger.exception("scoring failed for system %s on topic %s; scoring 0",
                             system_id, topic.topic_id)
            return 0.0
        return getattr(score, metric.component)

    results: dict[str, ScoreVector] = {}
    executor = ThreadPoolExecutor(max_workers=threads) if threads > 1 else None
    try:
        for metric in metrics:
            if metric.match == "we":
                match = MatchFunction.we(table, oov_policy=metric.oov)
            else:
                match = MatchFunction.exact()
            means = []
            for system_id in system_ids:
                tasks = ((metric, match, system_id, t) for t in topics)
                if executor is not None:
                    per_topic = list(executor.map(lambda args: score_one(*args), tasks))
                else:
                    per_topic = [score_one(*args) for args in tasks]
                means.append(sum(per_topic) / len(topics))
            results[metric.name] = ScoreVector(tuple(means), tuple(system_ids))
    finally:
        if executor is not None:
            executor.shutdown()
    return results


@dataclass
class ReportRow:
    metric: str
    judgment: str
    triple: CorrelationTriple
    n: int


@dataclass
class MetaEvalReport:
    rows: list[ReportRow] = field(default_factory=list)
    n_systems: int = 0


def meta_evaluate(system_scores: dict[str, ScoreVector], judgments: HumanJudgments) -> MetaEvalReport:
    """Correlate each metric's per-system scores with each judgment column.

    Only systems present on both sides enter the correlations; fewer than
    2 common systems is an error.
    """
    report = MetaEvalReport()
    for metric_name, scores in system_scores.items():
        for judgment in JUDGMENT_TYPES:
            x, y = align_by_label(scores, judgments.column(judgment))
            if len(x) < 2:
                raise MetaEvalError(
                    f"only {len(x)} system(s) common to scores and judgments; need at least 2"
                )
            report.rows.append(ReportRow(metric_name, judgment, correlation_triple(x, y), len(x)))
            report.n_systems = len(x)
    return report


def write_reports(report: MetaEvalReport, out_dir: str | Path, config: dict | None = None) -> tuple[Path, Path]:
    """Emit report.csv and report.json; returns their paths."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    csv_path = out_dir / "report.csv"
    json_path = out_dir / "report.json"

    with open(csv_path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["metric", "judgment", "pearson", "spearman", "kendall", "n"])
        for row in report.rows:
            writer.writerow([
                row.metric, row.judgment,
                f"{row.triple.pearson:.4f}", f"{row.triple.spearman:.4f}",
                f"{row.triple.kendall:.4f}", row.n,
            ])

    payload = {
        "config": config or {},
        "n_systems": report.n_systems,
        "rows": [
            {
                "metric": row.metric,
                "judgment": row.judgment,
                "pearson": row.triple.pearson,
                "spearman": row.triple.spearman,
                "kendall": row.triple.kendall,
                "n": row.n,
            }
            for row in report.rows
        ],
    }
    json_path.write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
    return csv_path, json_path


def format_table(report: MetaEvalReport) -> str:
    """Fixed-width correlation table for terminal output."""
    lines = [f"{'metric':<14} {'judgment':<15} {'P':>8} {'S':>8} {'K':>8} {'n':>4}"]
    for row in report.rows:
        lines.append(
            f"{row.metric:<14} {row.judgment:<15} {row.triple.pearson:>8.4f} "
            f"{row.triple.spearman:>8.4f} {row.triple.kendall:>8.4f} {row.n:>4}"
        )
    return "\n".join(lines)
