"""Versioned prompt templates and agent personas.

Templates live as plain-text assets (one file per template, listed in
``manifest.json``) so wordings are diffable and testable. Placeholders use
double-brace markers, e.g. ``{{question}}``; substitution is literal.
Short aliases (P1..P4, Pa, Pr) resolve to the descriptive template ids.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

_ASSET_DIR = Path(__file__).parent / "assets"
_PLACEHOLDER_RE = re.compile(r"\{\{([a-z_]+)\}\}")


class CatalogError(Exception):
    pass


class UnknownTemplate(CatalogError):
    pass


class MissingPlaceholder(CatalogError):
    def __init__(self, name: str):
        super().__init__(f"binding missing for placeholder '{name}'")
        self.name = name


class MissingField(CatalogError):
    def __init__(self, name: str):
        super().__init__(f"persona field '{name}' must be set")
        self.name = name


class ReasoningMode(str, Enum):
    ZERO_SHOT = "zero_shot"
    ZERO_SHOT_COT = "zero_shot_cot"


@dataclass(frozen=True)
class PromptTemplate:
    id: str
    body: str
    required_placeholders: frozenset[str]
    reasoning_mode: ReasoningMode

    def __post_init__(self) -> None:
        found = frozenset(_PLACEHOLDER_RE.findall(self.body))
        if found != self.required_placeholders:
            raise CatalogError(
                f"template '{self.id}': body placeholders {sorted(found)} "
                f"!= declared {sorted(self.required_placeholders)}"
            )


@dataclass(frozen=True)
class PersonaFields:
    """Agent persona preamble fields: topic, style, audience, context, role,
    objective. Only role and objective are mandatory."""

    topic: str | None = None
    style: str | None = None
    audience: str | None = None
    context: str | None = None
    role: str | None = None
    objective: str | None = None


def render_persona(persona: PersonaFields) -> str:
    """One preamble paragraph naming role, objective, and any set optional
    fields; prepended to agent prompts."""
    if not persona.role:
        raise MissingField("role")
    if not persona.objective:
        raise MissingField("objective")
    parts = [f"You are acting as {persona.role}.", f"Your objective: {persona.objective}."]
    for name in ("topic", "style", "audience", "context"):
        value = getattr(persona, name)
        if value:
            parts.append(f"{name.capitalize()}: {value}.")
    return " ".join(parts)


class PromptCatalog:
    """Read-only template store loaded from an asset directory."""

    def __init__(self, template_dir: Path | str | None = None) -> None:
        root = Path(template_dir) if template_dir else _ASSET_DIR / "prompts"
        manifest = json.loads((root / "manifest.json").read_text(encoding="utf-8"))
        self._templates: dict[str, PromptTemplate] = {}
        self._aliases: dict[str, str] = {}
        for entry in manifest["templates"]:
            body = (root / entry["file"]).read_text(encoding="utf-8")
            template = PromptTemplate(
                id=entry["id"],
                body=body,
                required_placeholders=frozenset(entry["placeholders"]),
                reasoning_mode=ReasoningMode(entry["reasoning_mode"]),
            )
            self._templates[template.id] = template
            for alias in entry.get("aliases", []):
                self._aliases[alias] = template.id

    def resolve(self, template_id: str) -> PromptTemplate:
        canonical = self._aliases.get(template_id, template_id)
        try:
            return self._templates[canonical]
        except KeyError:
            raise UnknownTemplate(f"no template '{template_id}'") from None

    def catalog_ids(self) -> list[str]:
        return sorted(self._templates)

    def render(self, template_id: str, bindings: dict[str, str]) -> str:
        template = self.resolve(template_id)
        for name in sorted(template.required_placeholders):
            if name not in bindings:
                raise MissingPlaceholder(name)

        def substitute(match: re.Match[str]) -> str:
            return bindings[match.group(1)]

        return _PLACEHOLDER_RE.sub(substitute, template.body)


_default_catalog: PromptCatalog | None = None


def default_catalog() -> PromptCatalog:
    global _default_catalog
    if _default_catalog is None:
        _default_catalog = PromptCatalog()
    return _default_catalog


def stage_asset(stage_name: str, asset_dir: Path | str | None = None) -> str:
    """Instruction block for one writing stage (pre_writing/drafting/revision)."""
    root = Path(asset_dir) if asset_dir else _ASSET_DIR / "stages"
    path = root / f"{stage_name}.txt"
    if not path.is_file():
        raise UnknownTemplate(f"no stage asset '{stage_name}'")
    return path.read_text(encoding="utf-8")


def default_rubric() -> str:
    """Built-in assessment criteria used when the caller supplies none."""
    return (_ASSET_DIR / "rubric.txt").read_text(encoding="utf-8")


# Persona tuples for the tutoring application's agents. The final response
# generator and prompt aggregator carry the full six fields; the rest carry
# context/role/objective.
TUTOR_PERSONAS: dict[str, PersonaFields] = {
    "profile_extraction": PersonaFields(
        context="a learner is introducing themselves to a writing tutor",
        role="an intake interviewer for a writing tutoring service",
        objective="distill the introduction into a structured learner profile",
    ),
    "stage_classification": PersonaFields(
        context="a tutoring session where support depends on the writing stage",
        role="a writing-process analyst",
        objective="decide which stage of the writing process this turn reflects",
    ),
    "vocab_fetch": PersonaFields(
        context="a learner whose vocabulary level is described in their profile",
        role="a vocabulary screener",
        objective="spot the terms this learner most needs explained",
    ),
    "vocab_explain": PersonaFields(
        context="dictionary data is available for some terms",
        role="a vocabulary coach",
        objective="give short, level-appropriate explanations of terms",
    ),
    "writing_assessment": PersonaFields(
        context="a learner has submitted writing for review",
        role="a writing assessor",
        objective="evaluate the writing against the criteria and give actionable feedback",
    ),
    "topic_identify": PersonaFields(
        context="a tutoring turn that may span several subjects",
        role="a topic analyst",
        objective="name the primary subject matter of the turn",
    ),
    "topic_prompts": PersonaFields(
        topic="the learner's current subject matter",
        style="succinct imperative guidance",
        audience="a tutoring response generator",
        context="topics and the learner's writing stage are known",
        role="an instruction aggregator",
        objective="combine topic and stage guidance into one instruction set",
    ),
    "final_response": PersonaFields(
        topic="the learner's current writing project",
        style="encouraging, specific, critically honest",
        audience="a college-level writing learner",
        context="module outputs for this turn are provided in the prompt",
        role="a writing tutor",
        objective="synthesize all module outputs into one comprehensive reply",
    ),
}
