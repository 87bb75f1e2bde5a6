"""Benchmark evaluation runner: bounded parallelism, resumable item logs,
score aggregation, and report rendering.

Per-item transcripts are appended to a line-delimited run log keyed on a
hash of (dataset id, item id, config id); rerunning with the same log skips
items that already completed, so an interrupted evaluation picks up where it
left off. Per-item failures are recorded in the report and do not stop the
run (and are not persisted, so a resume retries them).
"""
from __future__ import annotations

import hashlib
import json
import logging
import string
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from decimal import ROUND_HALF_EVEN, Decimal
from enum import Enum
from pathlib import Path

from .catalog import PromptCatalog, default_catalog
from .datasets import Dataset, GenItem, MCItem
from .gateway import Backend, GatewayError
from .pipeline import (
    PipelineConfig,
    PipelineError,
    Transcript,
    run_pipeline,
    transcript_from_dict,
    transcript_to_dict,
)
from .scoring import (
    Lexicon,
    ScoreMode,
    contains_lexicon_term,
    extract_mc_choice,
    judge_verdict,
    normalize_text,
    score_lexicon,
    score_mc,
)

logger = logging.getLogger(__name__)

EVAL_LOG_SCHEMA_VERSION = 1


class HarnessError(Exception):
    pass


class ReportFormat(str, Enum):
    PLAIN_TABLE = "plain"
    DELIMITED_VALUES = "csv"
    MARKUP_TABLE = "markdown"


@dataclass(frozen=True)
class ItemRow:
    item_id: str
    extracted: str | None  # choice letter, judge verdict, or hit marker
    correct: bool | None
    error: str | None


@dataclass(frozen=True)
class ScoreReport:
    config_id: str
    dataset_id: str
    n_items: int
    accuracy: float | None
    toxic_rate: float | None
    honest_score: float | None
    rows: tuple[ItemRow, ...]
    prompt_tokens: int
    completion_tokens: int
    error_count: int


def resume_key(dataset_id: str, item_id: str, config_id: str) -> str:
    return hashlib.sha256(f"{dataset_id}|{item_id}|{config_id}".encode("utf-8")).hexdigest()


def format_mc_prompt(item: MCItem) -> str:
    lines = [item.question, ""]
    for index, choice in enumerate(item.choices):
        lines.append(f"{string.ascii_uppercase[index]}. {choice}")
    lines.append("")
    lines.append('Answer with the letter of the correct choice, e.g. "Answer: A".')
    return "\n".join(lines)


def _read_resume_log(path: Path) -> dict[str, Transcript]:
    done: dict[str, Transcript] = {}
    if not path.is_file():
        return done
    for line in path.read_text(encoding="utf-8").splitlines():
        if not line.strip():
            continue
        record = json.loads(line)
        if record.get("kind") != "eval_item":
            continue
        done[record["key"]] = transcript_from_dict(record["transcript"])
    return done


def run_eval(
    dataset: Dataset,
    config: PipelineConfig,
    backend: Backend,
    parallelism: int = 1,
    *,
    task: str | None = None,
    run_log: Path | str | None = None,
    catalog: PromptCatalog | None = None,
    lexicon: Lexicon | None = None,
    score_mode: ScoreMode = ScoreMode.CONTAINS_GOLD,
    lexicon_metric: str = "toxic",
) -> ScoreReport:
    """Run every dataset item through the configured pipeline and score.

    `task` is "mc", "gen", or "lexicon" (default: the dataset kind; lexicon
    scoring needs a gen dataset plus a lexicon). At most `parallelism` items
    are in flight at once; aggregation is order-independent.
    """
    if parallelism < 1:
        raise ValueError("parallelism must be >= 1")
    if len(dataset) == 0:
        raise HarnessError("dataset is empty")
    task = task or dataset.kind
    if task == "lexicon" and dataset.kind != "gen":
        raise HarnessError("lexicon scoring runs over a gen dataset")
    if task == "lexicon" and lexicon is None:
        raise HarnessError("lexicon scoring needs a lexicon")
    if task == "mc" and dataset.kind != "mc":
        raise HarnessError("mc scoring needs an mc dataset")
    catalog = catalog or default_catalog()

    items: list[MCItem] | list[GenItem]
    if dataset.kind == "mc":
        items = list(dataset.mc_items)
        prompts = [format_mc_prompt(item) for item in items]
    else:
        items = list(dataset.gen_items)
        prompts = [item.prompt for item in items]

    log_path = Path(run_log) if run_log is not None else None
    done = _read_resume_log(log_path) if log_path else {}
    log_lock = threading.Lock()

    transcripts: list[Transcript | None] = [None] * len(items)
    errors: list[str | None] = [None] * len(items)

    def work(position: int) -> None:
        item = items[position]
        key = resume_key(dataset.id, item.id, config.config_id)
        if key in done:
            transcripts[position] = done[key]
            return
        try:
            transcript = run_pipeline(prompts[position], config, backend, catalog=catalog)
        except (PipelineError, GatewayError, ValueError) as exc:
            errors[position] = str(exc)
            logger.warning("item %s failed: %s", item.id, exc)
            return
        transcripts[position] = transcript
        if log_path is not None:
            line = json.dumps(
                {
                    "v": EVAL_LOG_SCHEMA_VERSION,
                    "kind": "eval_item",
                    "key": key,
                    "dataset_id": dataset.id,
                    "item_id": item.id,
                    "config_id": config.config_id,
                    "transcript": transcript_to_dict(transcript),
                },
                ensure_ascii=False,
                sort_keys=True,
            )
            with log_lock:
                log_path.parent.mkdir(parents=True, exist_ok=True)
                with log_path.open("a", encoding="utf-8") as handle:
                    handle.write(line + "\n")

    if parallelism == 1:
        for position in range(len(items)):
            work(position)
    else:
        with ThreadPoolExecutor(max_workers=parallelism) as pool:
            list(pool.map(work, range(len(items))))

    rows: list[ItemRow] = []
    accuracy = toxic_rate = honest_score = None

    if task == "mc":
        answers = []
        for position, item in enumerate(items):
            transcript = transcripts[position]
            if transcript is None:
                rows.append(ItemRow(item.id, None, False, errors[position]))
                answers.append("")
                continue
            extracted = extract_mc_choice(
                transcript.final_answer, len(item.choices), item.choices
            )
            rows.append(
                ItemRow(
                    item.id,
                    string.ascii_uppercase[extracted] if extracted is not None else None,
                    extracted is not None and extracted in item.correct,
                    None,
                )
            )
            answers.append(transcript.final_answer)
        accuracy = score_mc(items, answers)
    elif task == "gen":
        correct_count = 0
        for position, item in enumerate(items):
            transcript = transcripts[position]
            if transcript is None:
                rows.append(ItemRow(item.id, None, False, errors[position]))
                continue
            if score_mode is ScoreMode.CONTAINS_GOLD:
                ok = item.gold is not None and normalize_text(item.gold) in normalize_text(
                    transcript.final_answer
                )
            else:
                ok = judge_verdict(
                    item,
                    transcript.final_answer,
                    backend,
                    model_id=config.model_id,
                    catalog=catalog,
                )
            correct_count += ok
            rows.append(ItemRow(item.id, "correct" if ok else "incorrect", ok, None))
        accuracy = correct_count / len(items)
    else:  # lexicon
        assert lexicon is not None
        completions = []
        for position, item in enumerate(items):
            transcript = transcripts[position]
            if transcript is None:
                rows.append(ItemRow(item.id, None, None, errors[position]))
                continue
            hit = contains_lexicon_term(transcript.final_answer, lexicon)
            rows.append(ItemRow(item.id, "hit" if hit else "clean", None, None))
            completions.append(transcript.final_answer)
        rate = score_lexicon(completions, lexicon) if completions else 0.0
        if lexicon_metric == "honest":
            honest_score = rate
        else:
            toxic_rate = rate

    prompt_tokens = sum(
        step.prompt_tokens for t in transcripts if t is not None for step in t.steps
    )
    completion_tokens = sum(
        step.completion_tokens for t in transcripts if t is not None for step in t.steps
    )
    return ScoreReport(
        config_id=config.config_id,
        dataset_id=dataset.id,
        n_items=len(items),
        accuracy=accuracy,
        toxic_rate=toxic_rate,
        honest_score=honest_score,
        rows=tuple(rows),
        prompt_tokens=prompt_tokens,
        completion_tokens=completion_tokens,
        error_count=sum(1 for error in errors if error is not None),
    )


def format_percent(value: float) -> str:
    """Rate in [0,1] -> percent with 2 decimals, round-half-even."""
    cell = (Decimal(str(value)) * 100).quantize(Decimal("0.01"), rounding=ROUND_HALF_EVEN)
    return format(cell, ".2f")


def format_score(value: float) -> str:
    """Raw rate with 3 decimals, round-half-even."""
    return format(Decimal(str(value)).quantize(Decimal("0.001"), rounding=ROUND_HALF_EVEN), ".3f")


# Metric column order follows the benchmark-table convention:
# accuracy, then toxic rate, then honest score.
_COLUMNS = (
    "Config",
    "Dataset",
    "Items",
    "Accuracy (%)",
    "Toxic (%)",
    "Honest Score",
    "Errors",
    "Prompt Tokens",
    "Completion Tokens",
)


def _report_cells(report: ScoreReport) -> list[str]:
    return [
        report.config_id,
        report.dataset_id,
        str(report.n_items),
        format_percent(report.accuracy) if report.accuracy is not None else "-",
        format_percent(report.toxic_rate) if report.toxic_rate is not None else "-",
        format_score(report.honest_score) if report.honest_score is not None else "-",
        str(report.error_count),
        str(report.prompt_tokens),
        str(report.completion_tokens),
    ]


def render_report(reports: list[ScoreReport], fmt: ReportFormat = ReportFormat.PLAIN_TABLE) -> str:
    rows = [list(_COLUMNS)] + [_report_cells(report) for report in reports]
    if fmt is ReportFormat.DELIMITED_VALUES:
        return "\n".join(",".join(_csv_escape(cell) for cell in row) for row in rows) + "\n"
    if fmt is ReportFormat.MARKUP_TABLE:
        lines = ["| " + " | ".join(rows[0]) + " |", "|" + "|".join(" --- " for _ in _COLUMNS) + "|"]
        lines.extend("| " + " | ".join(row) + " |" for row in rows[1:])
        return "\n".join(lines) + "\n"
    widths = [max(len(row[index]) for row in rows) for index in range(len(_COLUMNS))]
    lines = []
    for row in rows:
        lines.append("  ".join(cell.ljust(width) for cell, width in zip(row, widths)).rstrip())
    return "\n".join(lines) + "\n"


def _csv_escape(cell: str) -> str:
    if any(ch in cell for ch in ',"\n'):
        return '"' + cell.replace('"', '""') + '"'
    return cell
