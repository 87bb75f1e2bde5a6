from __future__ import annotations

import json
from pathlib import Path

import pytest

from edu_prompting.gateway import KeyedResponse, ScriptedBackend
from edu_prompting.wordnet import LexiconIndex, load_wordnet_dir

REPO_ROOT = Path(__file__).resolve().parent.parent
FIXTURES = Path(__file__).resolve().parent / "fixtures"
GOLDEN = Path(__file__).resolve().parent / "golden"
WORDNET_DIR = REPO_ROOT / "testdata" / "wordnet"
LEXICON_PATH = REPO_ROOT / "testdata" / "lexicon_neutral.txt"


@pytest.fixture(scope="session")
def wordnet_index() -> LexiconIndex:
    return load_wordnet_dir(WORDNET_DIR)


def tutor_keyed_backend() -> ScriptedBackend:
    """Scripted backend driven by the shared tutoring-session fixture."""
    raw = json.loads((FIXTURES / "tutor_session.json").read_text(encoding="utf-8"))
    keyed = [KeyedResponse(tuple(entry["match"]), entry["response"]) for entry in raw["keyed"]]
    return ScriptedBackend(keyed=keyed)


def count_prompts_containing(backend: ScriptedBackend, text: str) -> int:
    return sum(1 for request in backend.requests if text in request.prompt_text)
