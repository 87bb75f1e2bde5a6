"""Tour the prompt catalog: template ids, aliases, rendering, personas."""
from edu_prompting.catalog import PersonaFields, default_catalog, render_persona

catalog = default_catalog()

print("templates in the catalog:")
for template_id in catalog.catalog_ids():
    template = catalog.resolve(template_id)
    placeholders = ", ".join(sorted(template.required_placeholders))
    print(f"  {template_id:22s} [{template.reasoning_mode.value}]  needs: {placeholders}")

print("\nshort aliases resolve to the same assets:")
print("  P3 ->", catalog.resolve("P3").id)

print("\na rendered critique prompt (inputs truncated for the demo):")
print(catalog.render("critique", {"raw_answer": "<raw answer here>", "validity": "<validity here>"}))

print("\na persona preamble:")
print(
    render_persona(
        PersonaFields(
            role="a writing tutor",
            objective="give level-appropriate, critically honest guidance",
            audience="a college-level learner",
        )
    )
)
