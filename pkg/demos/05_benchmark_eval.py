"""Run a small multiple-choice evaluation end to end, then resume it.

Everything is scripted: four synthetic items go through the full four-agent
pipeline (sixteen generation calls), get scored, and render as a report
table. A second pass against the same run log shows resumability: already
completed items are loaded from disk, not re-generated.
"""
import string
import tempfile
from pathlib import Path

from edu_prompting.datasets import Dataset, MCItem
from edu_prompting.gateway import KeyedResponse, ScriptedBackend, backend_usage
from edu_prompting.harness import ReportFormat, render_report, run_eval
from edu_prompting.pipeline import PipelineConfig, PipelineKind

items = tuple(
    MCItem(
        f"q{i}",
        f"Synthetic question item-q{i}: which choice is marked correct?",
        tuple(f"choice {i}-{j}" for j in range(4)),
        frozenset({i % 4}),
    )
    for i in range(1, 5)
)
dataset = Dataset(id="demo-mc", kind="mc", mc_items=items)


def fresh_backend() -> ScriptedBackend:
    keyed = []
    for i in range(1, 5):
        marker = f"item-q{i}"
        answer = i % 4 if i != 4 else (i + 1) % 4  # item 4 answers wrong
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


with tempfile.TemporaryDirectory() as scratch:
    log = Path(scratch) / "run.jsonl"

    backend = fresh_backend()
    config = PipelineConfig(PipelineKind.FULL_EDU)
    report = run_eval(dataset, config, backend, parallelism=2, run_log=log)
    print(f"first run: {backend_usage(backend).call_count} generation calls "
          f"(4 items x 4 agents)\n")
    print(render_report([report], ReportFormat.PLAIN_TABLE))

    backend = fresh_backend()
    rerun = run_eval(dataset, config, backend, parallelism=2, run_log=log)
    print(f"rerun against the same log: {backend_usage(backend).call_count} calls "
          f"(all items resumed from disk)")
    print(f"reports identical: {report == rerun}")
