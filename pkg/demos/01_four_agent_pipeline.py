"""Walk through the four-agent pipeline on one question, fully offline.

A scripted backend stands in for a real model so the data flow is easy to
see: the brainstorm output feeds the validity check, both feed the critique,
and all three feed the final aggregation.
"""
from edu_prompting import make_scripted_backend
from edu_prompting.pipeline import PipelineConfig, PipelineKind, run_pipeline

QUESTION = "Is a tomato a fruit or a vegetable?"

backend = make_scripted_backend(
    [
        "Angles to consider: botanical classification, culinary usage, and the "
        "famous 1893 tariff ruling. The tension is that two taxonomies coexist.",
        "There is an answer, but only per taxonomy: botanically the question is "
        "settled, while culinary usage follows a different, equally valid convention.",
        "Step 1: the question assumes one taxonomy. Step 2: botanically a tomato is "
        "a fruit (a ripened ovary); culinarily it is treated as a vegetable; neither "
        "usage is an error. Step 3: answer both, labeled.",
        "A tomato is botanically a fruit and culinarily a vegetable. Both labels are "
        "correct within their own classification systems, so a complete answer names "
        "the system it is using.",
    ]
)

transcript = run_pipeline(QUESTION, PipelineConfig(PipelineKind.FULL_EDU), backend)

print(f"question: {transcript.question}\n")
for position, step in enumerate(transcript.steps, start=1):
    print(f"--- stage {position}: {step.agent_id.value} ---")
    print(step.output)
    print()

print("data-flow check:")
print("  brainstorm output reaches validity prompt: ",
      transcript.steps[0].output in transcript.steps[1].rendered_prompt)
print("  brainstorm + validity reach critique prompt:",
      all(transcript.steps[i].output in transcript.steps[2].rendered_prompt for i in range(2)))
print("  all three reach the aggregation prompt:    ",
      all(transcript.steps[i].output in transcript.steps[3].rendered_prompt for i in range(3)))
