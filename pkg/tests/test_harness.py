from __future__ import annotations

import json
import string

import pytest

from edu_prompting.datasets import Dataset, GenItem, MCItem
from edu_prompting.gateway import KeyedResponse, ScriptedBackend, backend_usage, make_scripted_backend
from edu_prompting.harness import (
    HarnessError,
    ItemRow,
    ReportFormat,
    ScoreReport,
    format_mc_prompt,
    format_percent,
    render_report,
    resume_key,
    run_eval,
)
from edu_prompting.pipeline import PipelineConfig, PipelineKind
from edu_prompting.scoring import Lexicon, ScoreMode

FULL = PipelineConfig(PipelineKind.FULL_EDU)
ZS = PipelineConfig(PipelineKind.ZERO_SHOT)


def _mc_dataset(n: int = 4) -> Dataset:
    items = tuple(
        MCItem(
            f"q{i}",
            f"Question item-q{i}: which choice is marked correct?",
            tuple(f"choice {i}-{j}" for j in range(4)),
            frozenset({i % 4}),
        )
        for i in range(1, n + 1)
    )
    return Dataset(id="synth-mc", kind="mc", mc_items=items)


def _keyed_full_edu_backend(n: int = 4, wrong_items: set[int] = frozenset({4})) -> ScriptedBackend:
    """Per-(item, stage) fixture entries, so any call order works."""
    keyed = []
    for i in range(1, n + 1):
        marker = f"item-q{i}"
        correct = i % 4
        answer = (correct + 1) % 4 if i in wrong_items else correct
        keyed.extend(
            [
                KeyedResponse(("first of several reviewers", marker), f"r-{marker}"),
                KeyedResponse(("really AN answer", marker), f"v-{marker}"),
                KeyedResponse(("Read inquiry and clarify", f"r-{marker}"), f"c-{marker}"),
                KeyedResponse(
                    ("Collect majority-agreed facts", f"r-{marker}"),
                    f"Answer: {string.ascii_uppercase[answer]}",
                ),
            ]
        )
    return ScriptedBackend(keyed=keyed)


def _ordered_full_edu_responses(items: range) -> list[str]:
    responses = []
    for i in items:
        correct = i % 4
        answer = (correct + 1) % 4 if i == 4 else correct
        responses.extend(
            [f"r-item-q{i}", f"v-item-q{i}", f"c-item-q{i}", f"Answer: {string.ascii_uppercase[answer]}"]
        )
    return responses


def test_full_edu_four_items_issue_sixteen_calls(tmp_path) -> None:
    backend = _keyed_full_edu_backend()
    report = run_eval(_mc_dataset(), FULL, backend, run_log=tmp_path / "log.jsonl")
    assert backend_usage(backend).call_count == 16
    assert report.n_items == 4
    assert report.accuracy == 0.75
    assert report.error_count == 0


def test_parallelism_one_preserves_item_order_in_log(tmp_path) -> None:
    log = tmp_path / "log.jsonl"
    run_eval(_mc_dataset(), FULL, _keyed_full_edu_backend(), parallelism=1, run_log=log)
    logged_ids = [json.loads(line)["item_id"] for line in log.read_text().splitlines()]
    assert logged_ids == ["q1", "q2", "q3", "q4"]


def test_parallelism_does_not_change_the_report(tmp_path) -> None:
    sequential = run_eval(
        _mc_dataset(), FULL, _keyed_full_edu_backend(), parallelism=1,
        run_log=tmp_path / "log1.jsonl",
    )
    concurrent = run_eval(
        _mc_dataset(), FULL, _keyed_full_edu_backend(), parallelism=4,
        run_log=tmp_path / "log4.jsonl",
    )
    assert sequential == concurrent


def test_interrupted_run_records_errors_and_resume_completes(tmp_path) -> None:
    log = tmp_path / "log.jsonl"
    dataset = _mc_dataset()

    # First run dies after two items' worth of responses.
    first_backend = make_scripted_backend(_ordered_full_edu_responses(range(1, 3)))
    interrupted = run_eval(dataset, FULL, first_backend, run_log=log)
    assert interrupted.error_count == 2
    assert [row.error is not None for row in interrupted.rows] == [False, False, True, True]

    # Resume: only the two missing items issue calls.
    resume_backend = make_scripted_backend(_ordered_full_edu_responses(range(3, 5)))
    resumed = run_eval(dataset, FULL, resume_backend, run_log=log)
    assert backend_usage(resume_backend).call_count == 8
    assert resumed.error_count == 0

    # And the final report is identical to one from an uninterrupted run.
    fresh_backend = make_scripted_backend(_ordered_full_edu_responses(range(1, 5)))
    fresh = run_eval(dataset, FULL, fresh_backend, run_log=tmp_path / "fresh.jsonl")
    assert resumed == fresh


def test_resume_key_is_stable_and_distinct() -> None:
    key = resume_key("ds", "item", "cfg")
    assert key == resume_key("ds", "item", "cfg")
    assert key != resume_key("ds", "item2", "cfg")
    assert key != resume_key("ds", "item", "cfg2")


def test_gen_dataset_contains_gold_scoring(tmp_path) -> None:
    dataset = Dataset(
        id="gen",
        kind="gen",
        gen_items=(GenItem("g1", "what is 5x5? say item-g1", "25"), GenItem("g2", "say item-g2", "7")),
    )
    backend = make_scripted_backend(["the product is 25", "it is eight"])
    report = run_eval(dataset, ZS, backend, run_log=tmp_path / "log.jsonl")
    assert report.accuracy == 0.5
    assert report.rows[0].correct and not report.rows[1].correct


def test_gen_dataset_judge_scoring(tmp_path) -> None:
    dataset = Dataset(id="gen", kind="gen", gen_items=(GenItem("g1", "q", "gold"),))
    backend = make_scripted_backend(["some answer", "CORRECT"])
    report = run_eval(
        dataset, ZS, backend, run_log=tmp_path / "log.jsonl", score_mode=ScoreMode.JUDGE
    )
    assert report.accuracy == 1.0
    assert backend_usage(backend).call_count == 2  # one answer + one grading call


def test_lexicon_task_populates_requested_metric(tmp_path) -> None:
    dataset = Dataset(
        id="bold-sample",
        kind="gen",
        gen_items=tuple(GenItem(f"b{i}", f"prompt {i}") for i in range(4)),
    )
    lexicon = Lexicon(frozenset({"snarfle"}))
    backend = make_scripted_backend(["a snarfle", "clean", "clean", "clean"])
    report = run_eval(
        dataset, ZS, backend, task="lexicon", lexicon=lexicon, run_log=tmp_path / "log.jsonl"
    )
    assert report.toxic_rate == 0.25
    assert report.honest_score is None
    assert report.accuracy is None

    backend = make_scripted_backend(["a snarfle", "clean", "clean", "clean"])
    report = run_eval(
        dataset, ZS, backend, task="lexicon", lexicon=lexicon, lexicon_metric="honest",
        run_log=tmp_path / "log2.jsonl",
    )
    assert report.honest_score == 0.25
    assert report.toxic_rate is None


def test_run_eval_validates_inputs() -> None:
    with pytest.raises(HarnessError):
        run_eval(Dataset(id="e", kind="mc"), FULL, make_scripted_backend([]))
    with pytest.raises(ValueError):
        run_eval(_mc_dataset(), FULL, make_scripted_backend([]), parallelism=0)
    with pytest.raises(HarnessError):
        run_eval(_mc_dataset(), FULL, make_scripted_backend([]), task="lexicon")


def test_format_mc_prompt_shape() -> None:
    prompt = format_mc_prompt(_mc_dataset().mc_items[0])
    assert "A. choice 1-0" in prompt and "D. choice 1-3" in prompt
    assert 'e.g. "Answer: A"' in prompt


def test_format_percent_matches_table_precision() -> None:
    assert format_percent(0.9412) == "94.12"
    assert format_percent(1.0) == "100.00"
    assert format_percent(0.0) == "0.00"
    # round-half-even at the second decimal
    assert format_percent(0.10125) == "10.12"
    assert format_percent(0.10135) == "10.14"


def _sample_report() -> ScoreReport:
    return ScoreReport(
        config_id="full_edu@scripted",
        dataset_id="synth-mc",
        n_items=4,
        accuracy=0.9412,
        toxic_rate=None,
        honest_score=None,
        rows=(ItemRow("q1", "B", True, None),),
        prompt_tokens=120,
        completion_tokens=30,
        error_count=0,
    )


def test_render_report_plain_has_table_2_style_cell() -> None:
    text = render_report([_sample_report()], ReportFormat.PLAIN_TABLE)
    assert "94.12" in text
    assert "Accuracy (%)" in text
    lines = text.splitlines()
    assert len(lines) == 2


def test_render_report_empty_list_is_header_only() -> None:
    for fmt in ReportFormat:
        text = render_report([], fmt)
        assert "Accuracy (%)" in text
        assert "94.12" not in text


def test_render_report_csv_and_markdown() -> None:
    csv_text = render_report([_sample_report()], ReportFormat.DELIMITED_VALUES)
    assert csv_text.splitlines()[0].startswith("Config,Dataset,Items,Accuracy (%)")
    assert "full_edu@scripted,synth-mc,4,94.12" in csv_text
    md_text = render_report([_sample_report()], ReportFormat.MARKUP_TABLE)
    assert md_text.splitlines()[1].startswith("| ---")
    assert "| 94.12 |" in md_text


def test_render_report_golden_plain() -> None:
    golden = (
        "Config             Dataset   Items  Accuracy (%)  Toxic (%)  Honest Score  Errors  Prompt Tokens  Completion Tokens\n"
        "full_edu@scripted  synth-mc  4      94.12         -          -             0       120            30\n"
    )
    assert render_report([_sample_report()], ReportFormat.PLAIN_TABLE) == golden
