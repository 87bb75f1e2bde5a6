"""Drive a complete tutoring session offline.

The keyed fixture answers each agent by prompt content, so the session shows
the real orchestration: profile extraction, stage classification, the
pre-writing-only vocabulary module, writing assessment, topic prompts, and
the synthesized reply.
"""
import json
from pathlib import Path

from edu_prompting.gateway import KeyedResponse, ScriptedBackend, backend_usage
from edu_prompting.tutor import TurnInput, TutorPipeline
from edu_prompting.wordnet import load_wordnet_dir

ROOT = Path(__file__).resolve().parent.parent
fixture = json.loads((ROOT / "tests" / "fixtures" / "tutor_session.json").read_text())
backend = ScriptedBackend(
    keyed=[KeyedResponse(tuple(entry["match"]), entry["response"]) for entry in fixture["keyed"]]
)

tutor = TutorPipeline(backend, lexicon_index=load_wordnet_dir(ROOT / "testdata" / "wordnet"))

session = tutor.start_session(
    "Hi, I'm Sam, a second-year biology student. I write okay but want sharper "
    "arguments, I learn best from examples, and I'm working on a persuasive "
    "essay about urban wildlife."
)
print("learner profile:")
print("  " + session.profile.as_text().replace("\n", "\n  "))

print("\n--- turn 1: a question, no draft yet ---")
session, turn = tutor.run_turn(
    session, TurnInput(question="Which angle should I take for my essay?", turn_index=1)
)
print(f"stage: {turn.stage.value}")
print(f"vocabulary support ({len(turn.vocab)} terms, pre-writing only):")
for item in turn.vocab:
    print(f"  {item.term}: {item.explanation}")
print(f"reply: {turn.response}")

print("\n--- turn 2: a revised draft comes back ---")
calls_before = backend_usage(backend).call_count
session, turn = tutor.run_turn(
    session,
    TurnInput(
        writing="I tightened the argument and added sources.",
        question="Is my revision stronger now?",
        turn_index=2,
    ),
)
print(f"stage: {turn.stage.value}")
print(f"vocabulary entries this turn: {len(turn.vocab)} (module gated off outside pre-writing)")
print(f"assessor feedback: {turn.feedback.feedback}")
print(f"reply: {turn.response}")
print(f"\nbackend calls for turn 2: {backend_usage(backend).call_count - calls_before}")
print(f"session now holds {len(session.turns)} turns")
