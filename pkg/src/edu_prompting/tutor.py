"""Five-stage tutoring application over a persistent session.

Each turn goes through: stage classification, conditional vocabulary support
(pre-writing turns only), writing assessment (when writing is present), the
topic module, and final response synthesis. The learner profile is extracted
once from the intake text and never mutated by turns.
"""
from __future__ import annotations

import json
import re
import uuid
from dataclasses import dataclass, replace
from datetime import datetime, timezone
from enum import Enum
from pathlib import Path

from .catalog import (
    PromptCatalog,
    TUTOR_PERSONAS,
    default_catalog,
    default_rubric,
    render_persona,
    stage_asset,
)
from .gateway import Backend, user_request
from .pipeline import PipelineConfig, PipelineKind, run_pipeline
from .wordnet import LexiconIndex, TermNotFound, UsageBundle, lookup

SESSION_SCHEMA_VERSION = 1

DEFAULT_VOCAB_CAP = 8
DEFAULT_TOPIC_CAP = 3

PROFILE_CATEGORIES = ("demographic", "proficiency", "preferences", "context")


class TutorError(Exception):
    pass


class EmptyWriting(TutorError):
    pass


class SessionNotFound(TutorError):
    pass


class SessionParseError(TutorError):
    pass


class Stage(str, Enum):
    PRE_WRITING = "pre_writing"
    DRAFTING = "drafting"
    REVISION = "revision"


# Marker line each stage instruction asset starts with; aggregated prompts
# always contain the active stage's marker.
STAGE_MARKERS = {
    Stage.PRE_WRITING: "[stage guidance: pre-writing]",
    Stage.DRAFTING: "[stage guidance: drafting]",
    Stage.REVISION: "[stage guidance: revision]",
}


@dataclass(frozen=True)
class LearnerProfile:
    demographic: str = "unknown"
    proficiency: str = "unknown"
    preferences: str = "unknown"
    context: str = "unknown"

    def as_text(self) -> str:
        return "\n".join(f"{name}: {getattr(self, name)}" for name in PROFILE_CATEGORIES)


@dataclass(frozen=True)
class TurnInput:
    writing: str = ""
    question: str = ""
    turn_index: int = 1

    def __post_init__(self) -> None:
        if not self.writing and not self.question:
            raise ValueError("a turn needs writing or a question")
        if self.turn_index < 1:
            raise ValueError("turn_index starts at 1")

    def as_text(self) -> str:
        parts = []
        if self.writing:
            parts.append(f"Writing:\n{self.writing}")
        if self.question:
            parts.append(f"Question:\n{self.question}")
        return "\n\n".join(parts)


@dataclass(frozen=True)
class VocabExplanation:
    term: str
    explanation: str
    source_usage: UsageBundle


@dataclass(frozen=True)
class AssessmentFeedback:
    feedback: str
    criteria_used: str


@dataclass(frozen=True)
class TopicBundle:
    topics: tuple[str, ...]
    topic_prompts: tuple[str, ...]
    aggregated_prompt: str


@dataclass(frozen=True)
class TurnRecord:
    input: TurnInput
    stage: Stage
    vocab: tuple[VocabExplanation, ...]
    feedback: AssessmentFeedback | None
    topics: TopicBundle
    response: str


@dataclass(frozen=True)
class SessionState:
    session_id: str
    profile: LearnerProfile
    turns: tuple[TurnRecord, ...]
    created_at: str

    @property
    def next_turn_index(self) -> int:
        return len(self.turns) + 1


def _split_terms(text: str) -> list[str]:
    pieces = re.split(r"[,\n]", text)
    seen: list[str] = []
    for piece in pieces:
        term = re.sub(r"\s+", " ", piece.strip().strip("\"'").strip()).lower()
        if term and term not in seen:
            seen.append(term)
    return seen


class TutorPipeline:
    """Binds the backend, prompt catalog, and lexicon into the per-turn flow."""

    def __init__(
        self,
        backend: Backend,
        *,
        model_id: str = "scripted",
        catalog: PromptCatalog | None = None,
        lexicon_index: LexiconIndex | None = None,
        store: "SessionStore | None" = None,
        rubric: str | None = None,
        vocab_cap: int = DEFAULT_VOCAB_CAP,
        topic_cap: int = DEFAULT_TOPIC_CAP,
        stage_asset_dir: Path | str | None = None,
    ) -> None:
        self.backend = backend
        self.model_id = model_id
        self.catalog = catalog or default_catalog()
        self.index = lexicon_index
        self.store = store
        self.rubric = rubric if rubric is not None else default_rubric()
        self.vocab_cap = vocab_cap
        self.topic_cap = topic_cap
        self._stage_asset_dir = stage_asset_dir

    def _call(self, template_id: str, bindings: dict[str, str], *, temperature: float = 0.0) -> str:
        prompt = render_persona(TUTOR_PERSONAS[template_id]) + "\n\n" + self.catalog.render(
            template_id, bindings
        )
        result = self.backend.generate(
            user_request(self.model_id, prompt, temperature=temperature)
        )
        return result.text

    def stage_block(self, stage: Stage) -> str:
        return stage_asset(stage.value, self._stage_asset_dir).strip()

    def extract_profile(self, intake: str) -> LearnerProfile:
        """Prompt for a four-category block and parse it; categories that do
        not parse fall back to "unknown" rather than failing."""
        if not intake:
            raise ValueError("intake text must be non-empty")
        output = self._call("profile_extraction", {"intake": intake})
        values: dict[str, str] = {}
        for line in output.splitlines():
            name, sep, value = line.partition(":")
            name = name.strip().lower()
            if sep and name in PROFILE_CATEGORIES and value.strip():
                values.setdefault(name, value.strip())
        return LearnerProfile(**{name: values.get(name, "unknown") for name in PROFILE_CATEGORIES})

    def classify_stage(self, turn: TurnInput) -> Stage:
        """Three-class stage decision; anything unrecognizable counts as
        drafting, the middle-of-the-road support mode."""
        output = self._call(
            "stage_classification", {"writing": turn.writing, "question": turn.question}
        ).lower()
        if "brainstorm" in output or "pre-writ" in output or "prewrit" in output or "pre_writ" in output:
            return Stage.PRE_WRITING
        if "revis" in output:
            return Stage.REVISION
        return Stage.DRAFTING

    def fetch_vocab(self, turn: TurnInput) -> list[str]:
        output = self._call(
            "vocab_fetch",
            {
                "writing": turn.writing,
                "question": turn.question,
                "max_terms": str(self.vocab_cap),
            },
        )
        return _split_terms(output)[: self.vocab_cap]

    def explain_vocab(self, terms: list[str]) -> list[VocabExplanation]:
        """One explanation per term, in order. Terms missing from the lexicon
        still get explained, with an empty usage bundle."""
        explanations = []
        for term in terms:
            usage = UsageBundle()
            if self.index is not None:
                try:
                    usage = lookup(term, self.index)
                except TermNotFound:
                    pass
            text = self._call("vocab_explain", {"term": term, "usage": usage.as_text()})
            explanations.append(VocabExplanation(term=term, explanation=text, source_usage=usage))
        return explanations

    def assess_writing(
        self, turn: TurnInput, profile: LearnerProfile, criteria: str | None = None
    ) -> AssessmentFeedback:
        if not turn.writing:
            raise EmptyWriting("no writing content to assess")
        criteria = criteria if criteria is not None else self.rubric
        output = self._call(
            "writing_assessment",
            {
                "learner_profile": profile.as_text(),
                "criteria": criteria,
                "writing": turn.writing,
            },
        )
        return AssessmentFeedback(feedback=output, criteria_used=criteria)

    def identify_topics(self, turn: TurnInput) -> list[str]:
        output = self._call(
            "topic_identify",
            {
                "writing": turn.writing,
                "question": turn.question,
                "max_topics": str(self.topic_cap),
            },
        )
        return _split_terms(output)[: self.topic_cap]

    def aggregate_prompts(self, topics: list[str], stage: Stage) -> TopicBundle:
        """Merge the stage instruction block with generated topic prompts.
        With no topics the aggregated prompt is the stage block alone and no
        backend call is made."""
        block = self.stage_block(stage)
        if not topics:
            return TopicBundle(topics=(), topic_prompts=(), aggregated_prompt=block)
        output = self._call(
            "topic_prompts", {"topics": "\n".join(topics), "stage": stage.value}
        )
        prompts = tuple(line.strip() for line in output.splitlines() if line.strip())
        aggregated = block + "\n\nTopic prompts:\n" + "\n".join(prompts)
        return TopicBundle(topics=tuple(topics), topic_prompts=prompts, aggregated_prompt=aggregated)

    def _final_prompt(
        self,
        turn: TurnInput,
        bundle: TopicBundle,
        vocab: list[VocabExplanation],
        feedback: AssessmentFeedback | None,
        profile: LearnerProfile,
    ) -> str:
        vocab_block = ""
        if vocab:
            vocab_block = "Vocabulary support:\n" + "\n".join(
                f"- {item.term}: {item.explanation}" for item in vocab
            )
        feedback_block = ""
        if feedback is not None:
            feedback_block = "Writing feedback:\n" + feedback.feedback
        return render_persona(TUTOR_PERSONAS["final_response"]) + "\n\n" + self.catalog.render(
            "final_response",
            {
                "learner_profile": profile.as_text(),
                "guidance": bundle.aggregated_prompt,
                "turn_content": turn.as_text(),
                "vocab_block": vocab_block,
                "feedback_block": feedback_block,
            },
        )

    def generate_final_response(
        self,
        turn: TurnInput,
        bundle: TopicBundle,
        vocab: list[VocabExplanation],
        feedback: AssessmentFeedback | None,
        profile: LearnerProfile,
        *,
        use_reasoning_pipeline: bool = False,
    ) -> str:
        prompt = self._final_prompt(turn, bundle, vocab, feedback, profile)
        if use_reasoning_pipeline:
            # Route the composed prompt through the four-agent pipeline
            # instead of a single call; off by default.
            transcript = run_pipeline(
                prompt,
                PipelineConfig(PipelineKind.FULL_EDU, model_id=self.model_id),
                self.backend,
                catalog=self.catalog,
            )
            return transcript.final_answer
        result = self.backend.generate(user_request(self.model_id, prompt))
        return result.text

    def start_session(self, intake: str) -> SessionState:
        profile = self.extract_profile(intake)
        session = SessionState(
            session_id=uuid.uuid4().hex,
            profile=profile,
            turns=(),
            created_at=datetime.now(timezone.utc).isoformat(),
        )
        if self.store is not None:
            self.store.save(session)
        return session

    def run_turn(
        self,
        session: SessionState,
        turn: TurnInput,
        *,
        use_reasoning_pipeline: bool = False,
    ) -> tuple[SessionState, TurnRecord]:
        """Execute one full turn and return the extended session.

        The input session is never mutated, so a failure in any sub-step
        leaves it untouched. The vocabulary module runs only for pre-writing
        turns; assessment runs only when the turn carries writing.
        """
        if turn.turn_index != session.next_turn_index:
            raise ValueError(
                f"expected turn_index {session.next_turn_index}, got {turn.turn_index}"
            )
        stage = self.classify_stage(turn)
        vocab: list[VocabExplanation] = []
        if stage is Stage.PRE_WRITING:
            vocab = self.explain_vocab(self.fetch_vocab(turn))
        feedback = self.assess_writing(turn, session.profile) if turn.writing else None
        bundle = self.aggregate_prompts(self.identify_topics(turn), stage)
        response = self.generate_final_response(
            turn, bundle, vocab, feedback, session.profile,
            use_reasoning_pipeline=use_reasoning_pipeline,
        )
        record = TurnRecord(
            input=turn,
            stage=stage,
            vocab=tuple(vocab),
            feedback=feedback,
            topics=bundle,
            response=response,
        )
        updated = replace(session, turns=session.turns + (record,))
        if self.store is not None:
            self.store.save(updated)
        return updated, record


def _usage_dict(usage: UsageBundle) -> dict:
    return {
        "definitions": list(usage.definitions),
        "synonyms": list(usage.synonyms),
        "examples": list(usage.examples),
        "usage_patterns": [[pos, count] for pos, count in usage.usage_patterns],
    }


def _usage_from_dict(record: dict) -> UsageBundle:
    return UsageBundle(
        definitions=tuple(record["definitions"]),
        synonyms=tuple(record["synonyms"]),
        examples=tuple(record["examples"]),
        usage_patterns=tuple((pos, count) for pos, count in record["usage_patterns"]),
    )


def turn_record_dict(record: TurnRecord) -> dict:
    return {
        "v": SESSION_SCHEMA_VERSION,
        "kind": "turn",
        "turn_index": record.input.turn_index,
        "writing": record.input.writing,
        "question": record.input.question,
        "stage": record.stage.value,
        "vocab": [
            {
                "term": item.term,
                "explanation": item.explanation,
                "usage": _usage_dict(item.source_usage),
            }
            for item in record.vocab
        ],
        "feedback": (
            {"feedback": record.feedback.feedback, "criteria_used": record.feedback.criteria_used}
            if record.feedback is not None
            else None
        ),
        "topics": {
            "topics": list(record.topics.topics),
            "topic_prompts": list(record.topics.topic_prompts),
            "aggregated_prompt": record.topics.aggregated_prompt,
        },
        "response": record.response,
    }


def _turn_record_from_dict(record: dict) -> TurnRecord:
    return TurnRecord(
        input=TurnInput(
            writing=record["writing"],
            question=record["question"],
            turn_index=record["turn_index"],
        ),
        stage=Stage(record["stage"]),
        vocab=tuple(
            VocabExplanation(
                term=item["term"],
                explanation=item["explanation"],
                source_usage=_usage_from_dict(item["usage"]),
            )
            for item in record["vocab"]
        ),
        feedback=(
            AssessmentFeedback(
                feedback=record["feedback"]["feedback"],
                criteria_used=record["feedback"]["criteria_used"],
            )
            if record["feedback"] is not None
            else None
        ),
        topics=TopicBundle(
            topics=tuple(record["topics"]["topics"]),
            topic_prompts=tuple(record["topics"]["topic_prompts"]),
            aggregated_prompt=record["topics"]["aggregated_prompt"],
        ),
        response=record["response"],
    )


class SessionStore:
    """One line-delimited JSON file per session: a header record followed by
    one record per turn."""

    def __init__(self, directory: Path | str) -> None:
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)

    def _path(self, session_id: str) -> Path:
        return self.directory / f"{session_id}.jsonl"

    def save(self, session: SessionState) -> None:
        lines = [
            json.dumps(
                {
                    "v": SESSION_SCHEMA_VERSION,
                    "kind": "session",
                    "session_id": session.session_id,
                    "created_at": session.created_at,
                    "profile": {
                        name: getattr(session.profile, name) for name in PROFILE_CATEGORIES
                    },
                },
                ensure_ascii=False,
                sort_keys=True,
            )
        ]
        lines.extend(
            json.dumps(turn_record_dict(record), ensure_ascii=False, sort_keys=True)
            for record in session.turns
        )
        self._path(session.session_id).write_text("\n".join(lines) + "\n", encoding="utf-8")

    def load(self, session_id: str) -> SessionState:
        path = self._path(session_id)
        if not path.is_file():
            raise SessionNotFound(f"no session '{session_id}'")
        try:
            lines = [
                json.loads(line)
                for line in path.read_text(encoding="utf-8").splitlines()
                if line.strip()
            ]
            header = lines[0]
            if header.get("v") != SESSION_SCHEMA_VERSION or header.get("kind") != "session":
                raise SessionParseError(f"bad session header in {path.name}")
            return SessionState(
                session_id=header["session_id"],
                profile=LearnerProfile(**header["profile"]),
                turns=tuple(_turn_record_from_dict(record) for record in lines[1:]),
                created_at=header["created_at"],
            )
        except SessionParseError:
            raise
        except (ValueError, KeyError, IndexError, TypeError) as exc:
            raise SessionParseError(f"malformed session file {path.name}: {exc}") from exc

    def exists(self, session_id: str) -> bool:
        return self._path(session_id).is_file()
