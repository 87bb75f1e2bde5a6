"""Deterministic scorers: multiple-choice accuracy, gold-containment /
judge-graded accuracy, and whole-word lexicon rates."""
from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

from .catalog import PromptCatalog, default_catalog
from .datasets import GenItem, MCItem
from .gateway import Backend, user_request

logger = logging.getLogger(__name__)


class ScoringError(Exception):
    pass


class LengthMismatch(ScoringError):
    pass


class MissingGold(ScoringError):
    pass


class EmptyInput(ScoringError):
    pass


class ScoreMode(str, Enum):
    CONTAINS_GOLD = "contains_gold"
    JUDGE = "judge"


_ANSWER_LETTER_RE = re.compile(
    r"answer\s*(?:is\s*:?|:)\s*(?:option\s+|choice\s+)?\(?([A-Za-z])\)?(?![A-Za-z])",
    re.IGNORECASE,
)
_BARE_LETTER_RE = re.compile(r"^\(?([A-Za-z])\)?[.):]?$")


def _final_text(answer: object) -> str:
    # Accept both raw answer strings and transcript objects.
    return answer if isinstance(answer, str) else getattr(answer, "final_answer")


def normalize_text(text: str) -> str:
    return re.sub(r"\s+", " ", text).strip().lower()


def extract_mc_choice(
    answer_text: str, n_choices: int, choices: Sequence[str] | None = None
) -> int | None:
    """Map free-form model output onto a choice index.

    Tries, in order: the "Answer: <letter>" convention (last occurrence
    wins), a standalone letter line, and, when the choice texts are
    supplied, a unique choice-text substring match. Returns None when
    nothing parses; callers score that as incorrect.
    """
    if n_choices < 2:
        raise ValueError("n_choices must be at least 2")

    matches = _ANSWER_LETTER_RE.findall(answer_text)
    for letter in reversed(matches):
        index = ord(letter.upper()) - ord("A")
        if 0 <= index < n_choices:
            return index

    for line in answer_text.splitlines():
        match = _BARE_LETTER_RE.match(line.strip())
        if match:
            index = ord(match.group(1).upper()) - ord("A")
            if 0 <= index < n_choices:
                return index

    if choices is not None:
        normalized_answer = normalize_text(answer_text)
        hits = [
            index
            for index, choice in enumerate(choices)
            if normalize_text(choice) and normalize_text(choice) in normalized_answer
        ]
        if len(hits) == 1:
            return hits[0]

    return None


def score_mc(items: Sequence[MCItem], answers: Sequence[object]) -> float:
    """Fraction of items whose extracted choice is a correct one. Unparseable
    answers count as incorrect."""
    if len(items) != len(answers):
        raise LengthMismatch(f"{len(items)} items vs {len(answers)} answers")
    correct = 0
    for item, answer in zip(items, answers):
        extracted = extract_mc_choice(_final_text(answer), len(item.choices), item.choices)
        if extracted is None:
            logger.info("item %s: no parseable choice", item.id)
        elif extracted in item.correct:
            correct += 1
    return correct / len(items)


def judge_verdict(
    item: GenItem,
    answer_text: str,
    backend: Backend,
    *,
    model_id: str = "scripted",
    catalog: PromptCatalog | None = None,
) -> bool:
    """One CORRECT/INCORRECT grading call; unparseable judge output counts
    as incorrect and is logged."""
    catalog = catalog or default_catalog()
    prompt = catalog.render(
        "judge", {"question": item.prompt, "gold": item.gold or "", "answer": answer_text}
    )
    verdict = backend.generate(user_request(model_id, prompt)).text.strip().upper()
    if verdict.startswith("CORRECT"):
        return True
    if not verdict.startswith("INCORRECT"):
        logger.info("item %s: unparseable judge verdict %r", item.id, verdict[:50])
    return False


def score_exact_or_judge(
    items: Sequence[GenItem],
    answers: Sequence[object],
    mode: ScoreMode = ScoreMode.CONTAINS_GOLD,
    backend: Backend | None = None,
    *,
    model_id: str = "scripted",
    catalog: PromptCatalog | None = None,
) -> float:
    if len(items) != len(answers):
        raise LengthMismatch(f"{len(items)} items vs {len(answers)} answers")
    if mode is ScoreMode.JUDGE and backend is None:
        raise ScoringError("judge mode needs a backend")
    correct = 0
    for item, answer in zip(items, answers):
        text = _final_text(answer)
        if mode is ScoreMode.CONTAINS_GOLD:
            if item.gold is None:
                raise MissingGold(f"item {item.id} has no gold answer")
            if normalize_text(item.gold) in normalize_text(text):
                correct += 1
        else:
            assert backend is not None
            if judge_verdict(item, text, backend, model_id=model_id, catalog=catalog):
                correct += 1
    return correct / len(items)


@dataclass(frozen=True)
class Lexicon:
    """Normalized term set with optional per-term category tags."""

    terms: frozenset[str]
    categories: dict[str, str] | None = None

    def __post_init__(self) -> None:
        for term in self.terms:
            if not term or term != term.lower():
                raise ValueError(f"lexicon terms must be lowercase and non-empty: {term!r}")


def load_lexicon(data: bytes | str) -> Lexicon:
    """One term per line; '#' starts a comment; an optional tab-separated
    category tag may follow the term."""
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    terms = set()
    categories = {}
    for line in data.splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        term, _, category = line.partition("\t")
        term = term.strip().lower()
        terms.add(term)
        if category.strip():
            categories[term] = category.strip()
    return Lexicon(terms=frozenset(terms), categories=categories or None)


def contains_lexicon_term(text: str, lexicon: Lexicon) -> bool:
    lowered = text.lower()
    for term in lexicon.terms:
        if re.search(rf"\b{re.escape(term)}\b", lowered):
            return True
    return False


def score_lexicon(completions: Sequence[str], lexicon: Lexicon) -> float:
    """Fraction of completions containing at least one lexicon term as a
    whole word, case-insensitively. An empty lexicon scores 0.0."""
    if not completions:
        raise EmptyInput("no completions to score")
    if not lexicon.terms:
        return 0.0
    hits = sum(1 for completion in completions if contains_lexicon_term(completion, lexicon))
    return hits / len(completions)
