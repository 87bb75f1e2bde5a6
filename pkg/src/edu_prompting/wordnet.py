"""Parser and lookup layer for WordNet database files (WNDB layout).

Reads the fixed-column ``index.<pos>`` / ``data.<pos>`` text files that ship
with Princeton WordNet and answers term lookups with a four-part usage
bundle: definitions, synonyms, contextual examples, and usage patterns
(part-of-speech with sense counts).

Only the fields this package needs are parsed: synset offsets, lemmas, and
glosses. Pointers, lexicographer file numbers, and verb frames are read past
but not retained. Glosses split at the ``|`` separator into a definition and
the double-quoted example fragments.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path


class WordNetError(Exception):
    pass


class WndbParseError(WordNetError):
    """Malformed row; the message names the offending file line."""


class TermNotFound(WordNetError):
    pass


class Pos(str, Enum):
    NOUN = "n"
    VERB = "v"
    ADJ = "a"
    ADV = "r"

    @property
    def label(self) -> str:
        return {"n": "noun", "v": "verb", "a": "adjective", "r": "adverb"}[self.value]


# WNDB file suffixes keyed by part of speech.
POS_FILES = {Pos.NOUN: "noun", Pos.VERB: "verb", Pos.ADJ: "adj", Pos.ADV: "adv"}

# Satellite adjectives ("s") fold into the adjective class.
_SS_TYPE_TO_POS = {"n": Pos.NOUN, "v": Pos.VERB, "a": Pos.ADJ, "s": Pos.ADJ, "r": Pos.ADV}

# Adjective lemmas may carry a syntactic-position marker suffix.
_ADJ_MARKER_RE = re.compile(r"\((?:a|p|ip)\)$")
_QUOTED_RE = re.compile(r'"([^"]*)"')


@dataclass(frozen=True)
class Synset:
    offset: int
    pos: Pos
    lemmas: tuple[str, ...]
    gloss: str
    examples: tuple[str, ...]

    def __post_init__(self) -> None:
        if not self.lemmas:
            raise ValueError("synset needs at least one lemma")
        if not self.gloss:
            raise ValueError("synset gloss must be non-empty")
        for lemma in self.lemmas:
            if any(c.isspace() for c in lemma):
                raise ValueError(f"lemma '{lemma}' contains whitespace")


@dataclass(frozen=True)
class UsageBundle:
    """The four-part enrichment handed to the vocabulary explainer."""

    definitions: tuple[str, ...] = ()
    synonyms: tuple[str, ...] = ()
    examples: tuple[str, ...] = ()
    usage_patterns: tuple[tuple[str, int], ...] = ()

    @property
    def empty(self) -> bool:
        return not (self.definitions or self.synonyms or self.examples or self.usage_patterns)

    def as_text(self) -> str:
        if self.empty:
            return "(no dictionary entry found)"
        lines = []
        if self.definitions:
            lines.append("definitions: " + "; ".join(self.definitions))
        if self.synonyms:
            lines.append("synonyms: " + ", ".join(self.synonyms))
        if self.examples:
            lines.append("examples: " + " | ".join(self.examples))
        if self.usage_patterns:
            lines.append(
                "usage patterns: "
                + ", ".join(f"{pos} ({count} sense{'s' if count != 1 else ''})" for pos, count in self.usage_patterns)
            )
        return "\n".join(lines)


@dataclass
class LexiconIndex:
    """Immutable-after-load lookup structure over one or more pos fragments."""

    senses: dict[tuple[str, Pos], tuple[int, ...]] = field(default_factory=dict)
    synsets: dict[tuple[Pos, int], Synset] = field(default_factory=dict)

    def merge(self, other: "LexiconIndex") -> None:
        self.senses.update(other.senses)
        self.synsets.update(other.synsets)


def normalize_term(term: str) -> str:
    return term.strip().lower().replace(" ", "_")


def _as_text(data: bytes | str) -> str:
    return data.decode("utf-8") if isinstance(data, bytes) else data


def _split_gloss(raw: str) -> tuple[str, tuple[str, ...]]:
    examples = tuple(fragment.strip() for fragment in _QUOTED_RE.findall(raw))
    definition = _QUOTED_RE.sub("", raw)
    definition = re.sub(r"(\s*;\s*)+", "; ", definition).strip().strip(";").strip()
    return definition, examples


def _parse_data(data_text: str, pos: Pos, filename: str) -> dict[tuple[Pos, int], Synset]:
    synsets: dict[tuple[Pos, int], Synset] = {}
    for lineno, line in enumerate(data_text.splitlines(), start=1):
        if not line.strip() or line.startswith(" "):
            continue  # header/license lines are indented
        head, sep, gloss_raw = line.partition("|")
        if not sep:
            raise WndbParseError(f"{filename} line {lineno}: missing '|' gloss separator")
        tokens = head.split()
        if len(tokens) < 5:
            raise WndbParseError(f"{filename} line {lineno}: truncated synset row")
        if not tokens[0].isdigit():
            raise WndbParseError(
                f"{filename} line {lineno}: non-numeric synset offset '{tokens[0]}'"
            )
        offset = int(tokens[0])
        ss_type = tokens[2]
        row_pos = _SS_TYPE_TO_POS.get(ss_type)
        if row_pos is None or row_pos is not pos:
            raise WndbParseError(
                f"{filename} line {lineno}: synset type '{ss_type}' does not belong in {filename}"
            )
        try:
            word_count = int(tokens[3], 16)
        except ValueError:
            raise WndbParseError(
                f"{filename} line {lineno}: bad word count '{tokens[3]}'"
            ) from None
        words = tokens[4 : 4 + 2 * word_count : 2]
        if len(words) != word_count:
            raise WndbParseError(f"{filename} line {lineno}: word list shorter than declared")
        lemmas = tuple(_ADJ_MARKER_RE.sub("", word) for word in words)
        definition, examples = _split_gloss(gloss_raw.strip())
        if not definition and not examples:
            raise WndbParseError(f"{filename} line {lineno}: empty gloss")
        try:
            synsets[(pos, offset)] = Synset(
                offset=offset,
                pos=pos,
                lemmas=lemmas,
                gloss=definition or examples[0],
                examples=examples,
            )
        except ValueError as exc:
            raise WndbParseError(f"{filename} line {lineno}: {exc}") from exc
    return synsets


def _parse_index(index_text: str, pos: Pos, filename: str) -> dict[tuple[str, Pos], tuple[int, ...]]:
    senses: dict[tuple[str, Pos], tuple[int, ...]] = {}
    for lineno, line in enumerate(index_text.splitlines(), start=1):
        if not line.strip() or line.startswith(" "):
            continue
        tokens = line.split()
        if len(tokens) < 6:
            raise WndbParseError(f"{filename} line {lineno}: truncated index row")
        lemma = tokens[0]
        try:
            synset_cnt = int(tokens[2])
            p_cnt = int(tokens[3])
            offset_start = 6 + p_cnt
            offsets = tuple(int(tok) for tok in tokens[offset_start : offset_start + synset_cnt])
        except ValueError as exc:
            raise WndbParseError(f"{filename} line {lineno}: {exc}") from None
        if len(offsets) != synset_cnt:
            raise WndbParseError(
                f"{filename} line {lineno}: expected {synset_cnt} offsets, found {len(offsets)}"
            )
        senses[(lemma.lower(), pos)] = offsets
    return senses


def parse_wndb(index_data: bytes | str, data_data: bytes | str, pos: Pos) -> LexiconIndex:
    """Parse one part of speech's index/data pair into a lexicon fragment.

    Raises :class:`WndbParseError` (naming the line) on malformed rows and
    when the index references a synset offset absent from the data section.
    """
    suffix = POS_FILES[pos]
    synsets = _parse_data(_as_text(data_data), pos, f"data.{suffix}")
    senses = _parse_index(_as_text(index_data), pos, f"index.{suffix}")
    for (lemma, _), offsets in senses.items():
        for offset in offsets:
            if (pos, offset) not in synsets:
                raise WndbParseError(
                    f"index.{suffix}: lemma '{lemma}' references missing synset {offset:08d}"
                )
    return LexiconIndex(senses=senses, synsets=synsets)


def load_wordnet_dir(path: Path | str) -> LexiconIndex:
    """Load every pos pair present in a WNDB directory; at least one pair
    must exist."""
    root = Path(path)
    index = LexiconIndex()
    found = False
    for pos, suffix in POS_FILES.items():
        index_path = root / f"index.{suffix}"
        data_path = root / f"data.{suffix}"
        if index_path.is_file() and data_path.is_file():
            index.merge(parse_wndb(index_path.read_bytes(), data_path.read_bytes(), pos))
            found = True
    if not found:
        raise WordNetError(f"no WNDB index/data pairs found under {root}")
    return index


def lookup(term: str, index: LexiconIndex) -> UsageBundle:
    """Usage bundle for a term across all parts of speech, in index sense
    order. Raises :class:`TermNotFound` when the term is absent everywhere."""
    normalized = normalize_term(term)
    definitions: list[str] = []
    synonyms: list[str] = []
    examples: list[str] = []
    patterns: list[tuple[str, int]] = []
    for pos in (Pos.NOUN, Pos.VERB, Pos.ADJ, Pos.ADV):
        offsets = index.senses.get((normalized, pos))
        if not offsets:
            continue
        patterns.append((pos.label, len(offsets)))
        for offset in offsets:
            synset = index.synsets[(pos, offset)]
            definitions.append(synset.gloss)
            examples.extend(synset.examples)
            for lemma in synset.lemmas:
                if normalize_term(lemma) != normalized and lemma not in synonyms:
                    synonyms.append(lemma)
    if not patterns:
        raise TermNotFound(f"term '{term}' not found in any part of speech")
    return UsageBundle(
        definitions=tuple(definitions),
        synonyms=tuple(synonyms),
        examples=tuple(examples),
        usage_patterns=tuple(patterns),
    )


def synset_listing(index: LexiconIndex) -> str:
    """Deterministic dump of every synset, for stability checks."""
    lines = []
    for (pos, offset) in sorted(index.synsets, key=lambda key: (key[0].value, key[1])):
        synset = index.synsets[(pos, offset)]
        lines.append(f"{offset:08d} {pos.value} {' '.join(synset.lemmas)} | {synset.gloss}")
    return "\n".join(lines)
