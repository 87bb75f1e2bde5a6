"""Four-agent critical-thinking pipeline and composable wrapper stages.

The full pipeline runs brainstorm, validity check, critique, and aggregation
strictly in that order, each stage consuming the prior outputs verbatim.
Wrapper configurations bolt a single validity / critique / raw-critique step
onto a one-step base pipeline.
"""
from __future__ import annotations

import json
import os
import time
from dataclasses import dataclass, replace
from enum import Enum
from pathlib import Path
from typing import Iterable

from .catalog import PromptCatalog, ReasoningMode, default_catalog
from .gateway import Backend, GatewayError, GenerationResult, user_request

TRANSCRIPT_SCHEMA_VERSION = 1

# Sampling defaults: brainstorm invites divergent output, everything else is
# deterministic by default.
BRAINSTORM_TEMPERATURE = 0.7
DEFAULT_TEMPERATURE = 0.0

# Validity slot text when a critique wrapper runs without a validity stage.
NO_VALIDITY_TEXT = "(no validity assessment was produced for this answer)"


class PipelineError(Exception):
    """A stage failed; carries the steps completed before the failure."""

    def __init__(self, agent_id: "AgentId", cause: Exception, steps: tuple["StepRecord", ...]):
        super().__init__(f"stage '{agent_id.value}' failed: {cause}")
        self.agent_id = agent_id
        self.cause = cause
        self.steps = steps


class TranscriptParseError(Exception):
    pass


class AgentId(str, Enum):
    BRAINSTORM = "brainstorm"
    VALIDITY = "validity"
    CRITIQUE = "critique"
    AGGREGATE = "aggregate"
    RAW_CRITIQUE = "raw_critique"
    BASE_ZERO_SHOT = "zero_shot"
    BASE_ZERO_SHOT_COT = "zero_shot_cot"


@dataclass(frozen=True)
class AgentSpec:
    id: AgentId
    template_id: str
    reasoning_mode: ReasoningMode


AGENT_SPECS: dict[AgentId, AgentSpec] = {
    AgentId.BRAINSTORM: AgentSpec(AgentId.BRAINSTORM, "brainstorm", ReasoningMode.ZERO_SHOT),
    AgentId.VALIDITY: AgentSpec(AgentId.VALIDITY, "validity_check", ReasoningMode.ZERO_SHOT),
    AgentId.CRITIQUE: AgentSpec(AgentId.CRITIQUE, "critique", ReasoningMode.ZERO_SHOT_COT),
    AgentId.AGGREGATE: AgentSpec(AgentId.AGGREGATE, "aggregate", ReasoningMode.ZERO_SHOT_COT),
    AgentId.RAW_CRITIQUE: AgentSpec(AgentId.RAW_CRITIQUE, "raw_critique", ReasoningMode.ZERO_SHOT),
    AgentId.BASE_ZERO_SHOT: AgentSpec(AgentId.BASE_ZERO_SHOT, "zero_shot", ReasoningMode.ZERO_SHOT),
    AgentId.BASE_ZERO_SHOT_COT: AgentSpec(
        AgentId.BASE_ZERO_SHOT_COT, "zero_shot_cot", ReasoningMode.ZERO_SHOT_COT
    ),
}

# The first two agents are zero-shot; the critique and aggregation agents
# reason step-by-step.
assert AGENT_SPECS[AgentId.BRAINSTORM].reasoning_mode is ReasoningMode.ZERO_SHOT
assert AGENT_SPECS[AgentId.VALIDITY].reasoning_mode is ReasoningMode.ZERO_SHOT
assert AGENT_SPECS[AgentId.CRITIQUE].reasoning_mode is ReasoningMode.ZERO_SHOT_COT
assert AGENT_SPECS[AgentId.AGGREGATE].reasoning_mode is ReasoningMode.ZERO_SHOT_COT


class PipelineKind(str, Enum):
    ZERO_SHOT = "zero_shot"
    ZERO_SHOT_COT = "zero_shot_cot"
    ZERO_SHOT_COT_PLUS_VALIDITY = "zero_shot_cot_plus_validity"
    ZERO_SHOT_COT_PLUS_CRITIQUE = "zero_shot_cot_plus_critique"
    PLUS_RAW_CRITIQUE = "plus_raw_critique"
    FULL_EDU = "full_edu"


@dataclass(frozen=True)
class PipelineConfig:
    kind: PipelineKind
    model_id: str = "scripted"
    base: PipelineKind | None = None  # only for PLUS_RAW_CRITIQUE
    temperature: float | None = None  # None = per-agent defaults
    max_tokens: int = 1024
    seed: int | None = None

    def __post_init__(self) -> None:
        if self.kind is PipelineKind.PLUS_RAW_CRITIQUE:
            base = self.base or PipelineKind.ZERO_SHOT_COT
            if base in (PipelineKind.PLUS_RAW_CRITIQUE,):
                raise ValueError("raw-critique wrapper cannot wrap itself")
            object.__setattr__(self, "base", base)
        elif self.base is not None:
            raise ValueError(f"base is only meaningful for {PipelineKind.PLUS_RAW_CRITIQUE.value}")

    @property
    def config_id(self) -> str:
        if self.base is not None:
            return f"{self.kind.value}({self.base.value})@{self.model_id}"
        return f"{self.kind.value}@{self.model_id}"


@dataclass(frozen=True)
class StepRecord:
    agent_id: AgentId
    rendered_prompt: str
    output: str
    prompt_tokens: int
    completion_tokens: int
    latency_ms: int


@dataclass(frozen=True)
class Transcript:
    question: str
    steps: tuple[StepRecord, ...]
    final_answer: str
    config: PipelineConfig
    run_id: str

    def __post_init__(self) -> None:
        if self.steps and self.final_answer != self.steps[-1].output:
            raise ValueError("final_answer must equal the last step's output")


def new_run_id() -> str:
    """Time-ordered random identifier."""
    return f"{time.time_ns():016x}-{os.urandom(4).hex()}"


def _agent_temperature(agent_id: AgentId, config: PipelineConfig) -> float:
    if config.temperature is not None:
        return config.temperature
    return BRAINSTORM_TEMPERATURE if agent_id is AgentId.BRAINSTORM else DEFAULT_TEMPERATURE


def _run_step(
    agent_id: AgentId,
    bindings: dict[str, str],
    backend: Backend,
    config: PipelineConfig,
    catalog: PromptCatalog,
    prior: tuple[StepRecord, ...] = (),
) -> StepRecord:
    spec = AGENT_SPECS[agent_id]
    prompt = catalog.render(spec.template_id, bindings)
    request = user_request(
        config.model_id,
        prompt,
        temperature=_agent_temperature(agent_id, config),
        max_tokens=config.max_tokens,
        seed=config.seed,
    )
    try:
        result: GenerationResult = backend.generate(request)
    except GatewayError as exc:
        raise PipelineError(agent_id, exc, prior) from exc
    return StepRecord(
        agent_id=agent_id,
        rendered_prompt=prompt,
        output=result.text,
        prompt_tokens=result.prompt_tokens,
        completion_tokens=result.completion_tokens,
        latency_ms=result.latency_ms,
    )


def run_brainstorm(
    question: str,
    backend: Backend,
    *,
    config: PipelineConfig | None = None,
    catalog: PromptCatalog | None = None,
) -> StepRecord:
    if not question:
        raise ValueError("question must be non-empty")
    config = config or PipelineConfig(PipelineKind.FULL_EDU)
    return _run_step(
        AgentId.BRAINSTORM, {"question": question}, backend, config, catalog or default_catalog()
    )


def run_validity(
    question: str,
    raw: StepRecord,
    backend: Backend,
    *,
    config: PipelineConfig | None = None,
    catalog: PromptCatalog | None = None,
) -> StepRecord:
    if raw.agent_id is not AgentId.BRAINSTORM:
        raise ValueError("validity stage consumes the brainstorm record")
    config = config or PipelineConfig(PipelineKind.FULL_EDU)
    return _run_step(
        AgentId.VALIDITY,
        {"question": question, "raw_answer": raw.output},
        backend,
        config,
        catalog or default_catalog(),
        prior=(raw,),
    )


def run_critique(
    raw: StepRecord,
    validity: StepRecord,
    backend: Backend,
    *,
    config: PipelineConfig | None = None,
    catalog: PromptCatalog | None = None,
) -> StepRecord:
    if raw.agent_id is not AgentId.BRAINSTORM or validity.agent_id is not AgentId.VALIDITY:
        raise ValueError("critique stage consumes the brainstorm and validity records")
    config = config or PipelineConfig(PipelineKind.FULL_EDU)
    return _run_step(
        AgentId.CRITIQUE,
        {"raw_answer": raw.output, "validity": validity.output},
        backend,
        config,
        catalog or default_catalog(),
        prior=(raw, validity),
    )


def run_aggregate(
    raw: StepRecord,
    validity: StepRecord,
    critique: StepRecord,
    backend: Backend,
    *,
    config: PipelineConfig | None = None,
    catalog: PromptCatalog | None = None,
) -> StepRecord:
    expected = (AgentId.BRAINSTORM, AgentId.VALIDITY, AgentId.CRITIQUE)
    if (raw.agent_id, validity.agent_id, critique.agent_id) != expected:
        raise ValueError("aggregation consumes the brainstorm, validity, and critique records")
    config = config or PipelineConfig(PipelineKind.FULL_EDU)
    return _run_step(
        AgentId.AGGREGATE,
        {"raw_answer": raw.output, "validity": validity.output, "critique": critique.output},
        backend,
        config,
        catalog or default_catalog(),
        prior=(raw, validity, critique),
    )


def run_pipeline(
    question: str,
    config: PipelineConfig,
    backend: Backend,
    *,
    catalog: PromptCatalog | None = None,
) -> Transcript:
    """Run one pipeline configuration end to end.

    Any stage failure aborts the run; the raised :class:`PipelineError`
    carries the completed steps.
    """
    if not question:
        raise ValueError("question must be non-empty")
    catalog = catalog or default_catalog()

    if config.kind is PipelineKind.PLUS_RAW_CRITIQUE:
        assert config.base is not None
        base_transcript = run_pipeline(
            question, replace(config, kind=config.base, base=None), backend, catalog=catalog
        )
        return run_raw_critique_wrapper(base_transcript, backend, catalog=catalog, config=config)

    steps: list[StepRecord] = []
    if config.kind is PipelineKind.FULL_EDU:
        raw = run_brainstorm(question, backend, config=config, catalog=catalog)
        steps.append(raw)
        try:
            validity = run_validity(question, raw, backend, config=config, catalog=catalog)
            steps.append(validity)
            critique = run_critique(raw, validity, backend, config=config, catalog=catalog)
            steps.append(critique)
            aggregate = run_aggregate(raw, validity, critique, backend, config=config, catalog=catalog)
            steps.append(aggregate)
        except PipelineError as exc:
            raise PipelineError(exc.agent_id, exc.cause, tuple(steps)) from exc.cause
    elif config.kind in (PipelineKind.ZERO_SHOT, PipelineKind.ZERO_SHOT_COT):
        agent = (
            AgentId.BASE_ZERO_SHOT
            if config.kind is PipelineKind.ZERO_SHOT
            else AgentId.BASE_ZERO_SHOT_COT
        )
        steps.append(_run_step(agent, {"question": question}, backend, config, catalog))
    elif config.kind in (
        PipelineKind.ZERO_SHOT_COT_PLUS_VALIDITY,
        PipelineKind.ZERO_SHOT_COT_PLUS_CRITIQUE,
    ):
        base = _run_step(
            AgentId.BASE_ZERO_SHOT_COT, {"question": question}, backend, config, catalog
        )
        steps.append(base)
        # The base final answer fills the raw-answer slot of the wrapper prompt.
        if config.kind is PipelineKind.ZERO_SHOT_COT_PLUS_VALIDITY:
            bindings = {"question": question, "raw_answer": base.output}
            wrapper_agent = AgentId.VALIDITY
        else:
            bindings = {"raw_answer": base.output, "validity": NO_VALIDITY_TEXT}
            wrapper_agent = AgentId.CRITIQUE
        try:
            steps.append(_run_step(wrapper_agent, bindings, backend, config, catalog))
        except PipelineError as exc:
            raise PipelineError(exc.agent_id, exc.cause, tuple(steps)) from exc.cause
    else:
        raise ValueError(f"unsupported pipeline kind: {config.kind}")

    return Transcript(
        question=question,
        steps=tuple(steps),
        final_answer=steps[-1].output,
        config=config,
        run_id=new_run_id(),
    )


def run_raw_critique_wrapper(
    base_transcript: Transcript,
    backend: Backend,
    *,
    catalog: PromptCatalog | None = None,
    config: PipelineConfig | None = None,
) -> Transcript:
    """Append one unstructured criticize-and-rewrite step; its output becomes
    the final answer."""
    if not base_transcript.final_answer:
        raise ValueError("base transcript has no final answer to criticize")
    catalog = catalog or default_catalog()
    config = config or PipelineConfig(
        PipelineKind.PLUS_RAW_CRITIQUE,
        model_id=base_transcript.config.model_id,
        base=base_transcript.config.kind,
    )
    step = _run_step(
        AgentId.RAW_CRITIQUE,
        {"question": base_transcript.question, "answer": base_transcript.final_answer},
        backend,
        config,
        catalog,
        prior=base_transcript.steps,
    )
    steps = base_transcript.steps + (step,)
    return Transcript(
        question=base_transcript.question,
        steps=steps,
        final_answer=step.output,
        config=config,
        run_id=base_transcript.run_id,
    )


def transcript_to_dict(transcript: Transcript) -> dict:
    return {
        "v": TRANSCRIPT_SCHEMA_VERSION,
        "run_id": transcript.run_id,
        "question": transcript.question,
        "final_answer": transcript.final_answer,
        "config": {
            "kind": transcript.config.kind.value,
            "model_id": transcript.config.model_id,
            "base": transcript.config.base.value if transcript.config.base else None,
            "temperature": transcript.config.temperature,
            "max_tokens": transcript.config.max_tokens,
            "seed": transcript.config.seed,
        },
        "steps": [
            {
                "agent_id": step.agent_id.value,
                "rendered_prompt": step.rendered_prompt,
                "output": step.output,
                "prompt_tokens": step.prompt_tokens,
                "completion_tokens": step.completion_tokens,
                "latency_ms": step.latency_ms,
            }
            for step in transcript.steps
        ],
    }


def serialize_transcript(transcript: Transcript) -> bytes:
    """One UTF-8 JSON line; lossless, including run_id and token counts."""
    return json.dumps(transcript_to_dict(transcript), ensure_ascii=False, sort_keys=True).encode(
        "utf-8"
    )


def transcript_from_dict(record: dict) -> Transcript:
    try:
        if record.get("v") != TRANSCRIPT_SCHEMA_VERSION:
            raise TranscriptParseError(f"unsupported transcript schema: {record.get('v')!r}")
        config = record["config"]
        steps = tuple(
            StepRecord(
                agent_id=AgentId(s["agent_id"]),
                rendered_prompt=s["rendered_prompt"],
                output=s["output"],
                prompt_tokens=s["prompt_tokens"],
                completion_tokens=s["completion_tokens"],
                latency_ms=s["latency_ms"],
            )
            for s in record["steps"]
        )
        return Transcript(
            question=record["question"],
            steps=steps,
            final_answer=record["final_answer"],
            config=PipelineConfig(
                kind=PipelineKind(config["kind"]),
                model_id=config["model_id"],
                base=PipelineKind(config["base"]) if config.get("base") else None,
                temperature=config["temperature"],
                max_tokens=config["max_tokens"],
                seed=config["seed"],
            ),
            run_id=record["run_id"],
        )
    except TranscriptParseError:
        raise
    except (ValueError, KeyError, TypeError) as exc:
        raise TranscriptParseError(f"malformed transcript record: {exc}") from exc


def load_transcript(data: bytes | str) -> Transcript:
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        record = json.loads(data)
    except ValueError as exc:
        raise TranscriptParseError(f"malformed transcript record: {exc}") from exc
    return transcript_from_dict(record)


def canonical_transcript_bytes(transcript: Transcript) -> bytes:
    """Serialization with run_id and latency blanked, for golden comparisons."""
    record = transcript_to_dict(transcript)
    record["run_id"] = ""
    for step in record["steps"]:
        step["latency_ms"] = 0
    return json.dumps(record, ensure_ascii=False, sort_keys=True, indent=2).encode("utf-8")


def append_run_log(path: Path | str, transcripts: Iterable[Transcript]) -> None:
    """Append transcripts to a line-delimited run log."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("ab") as handle:
        for transcript in transcripts:
            handle.write(serialize_transcript(transcript) + b"\n")


def read_run_log(path: Path | str) -> list[Transcript]:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    return [load_transcript(line) for line in lines if line.strip()]
