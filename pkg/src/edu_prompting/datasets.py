"""Benchmark dataset records: loaders, writers, and public-format converters.

The native on-disk form is one JSON record per line. Multiple-choice records
carry ``id / question / choices / correct`` (correct is a list of choice
indices); generation records carry ``id / prompt / gold`` (gold optional).
Converters turn the public CSV layouts of the four supported benchmarks into
these records deterministically, so converted files have stable checksums.
"""
from __future__ import annotations

import csv
import hashlib
import io
import json
import random
from dataclasses import dataclass
from typing import Iterable, Sequence


class DatasetError(Exception):
    pass


class ParseError(DatasetError):
    """Malformed record; the message names the offending line."""


class ConversionError(DatasetError):
    pass


@dataclass(frozen=True)
class MCItem:
    id: str
    question: str
    choices: tuple[str, ...]
    correct: frozenset[int]

    def __post_init__(self) -> None:
        if not self.choices:
            raise ValueError(f"item {self.id}: no choices")
        if not self.correct:
            raise ValueError(f"item {self.id}: no correct choice")
        if not all(0 <= index < len(self.choices) for index in self.correct):
            raise ValueError(f"item {self.id}: correct index out of range")


@dataclass(frozen=True)
class GenItem:
    id: str
    prompt: str
    gold: str | None = None


@dataclass(frozen=True)
class Dataset:
    id: str
    kind: str  # "mc" | "gen"
    mc_items: tuple[MCItem, ...] = ()
    gen_items: tuple[GenItem, ...] = ()

    def __len__(self) -> int:
        return len(self.mc_items) if self.kind == "mc" else len(self.gen_items)


def _as_text(data: bytes | str) -> str:
    return data.decode("utf-8") if isinstance(data, bytes) else data


def load_mc_dataset(data: bytes | str) -> list[MCItem]:
    items = []
    for lineno, line in enumerate(_as_text(data).splitlines(), start=1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
            items.append(
                MCItem(
                    id=str(record["id"]),
                    question=record["question"],
                    choices=tuple(record["choices"]),
                    correct=frozenset(int(index) for index in record["correct"]),
                )
            )
        except (ValueError, KeyError, TypeError) as exc:
            raise ParseError(f"line {lineno}: {exc}") from exc
    return items


def load_gen_dataset(data: bytes | str) -> list[GenItem]:
    items = []
    for lineno, line in enumerate(_as_text(data).splitlines(), start=1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
            items.append(
                GenItem(
                    id=str(record["id"]),
                    prompt=record["prompt"],
                    gold=record.get("gold"),
                )
            )
        except (ValueError, KeyError, TypeError) as exc:
            raise ParseError(f"line {lineno}: {exc}") from exc
    return items


def dump_mc_dataset(items: Iterable[MCItem]) -> str:
    return (
        "\n".join(
            json.dumps(
                {
                    "id": item.id,
                    "question": item.question,
                    "choices": list(item.choices),
                    "correct": sorted(item.correct),
                },
                ensure_ascii=False,
                sort_keys=True,
            )
            for item in items
        )
        + "\n"
    )


def dump_gen_dataset(items: Iterable[GenItem]) -> str:
    return (
        "\n".join(
            json.dumps(
                {"id": item.id, "prompt": item.prompt, "gold": item.gold},
                ensure_ascii=False,
                sort_keys=True,
            )
            for item in items
        )
        + "\n"
    )


def _read_csv(data: bytes | str, required: Sequence[str], source: str) -> list[dict[str, str]]:
    """Case-insensitive header handling; missing columns or short rows raise
    with the line named."""
    reader = csv.reader(io.StringIO(_as_text(data)))
    try:
        header = next(reader)
    except StopIteration:
        raise ConversionError(f"{source}: empty input") from None
    columns = {name.strip().lower(): position for position, name in enumerate(header)}
    for name in required:
        if name not in columns:
            raise ConversionError(f"{source} line 1: missing required column '{name}'")
    rows = []
    for lineno, row in enumerate(reader, start=2):
        if not any(cell.strip() for cell in row):
            continue
        if len(row) < len(header):
            raise ConversionError(f"{source} line {lineno}: expected {len(header)} fields, got {len(row)}")
        record = {name: row[position].strip() for name, position in columns.items()}
        for name in required:
            if not record[name]:
                raise ConversionError(f"{source} line {lineno}: empty '{name}' field")
        rows.append(record)
    return rows


def _stable_shuffle(choices: list[str], key: str) -> list[str]:
    seed = int.from_bytes(hashlib.sha256(key.encode("utf-8")).digest()[:8], "big")
    shuffled = list(choices)
    random.Random(seed).shuffle(shuffled)
    return shuffled


def convert_truthfulqa_csv(data: bytes | str) -> list[MCItem]:
    """Published layout: Question / Best Answer / Incorrect Answers (the
    incorrect answers are ';'-separated). Choice order is shuffled per item,
    seeded from the question text, so output is stable across runs."""
    rows = _read_csv(data, ("question", "best answer", "incorrect answers"), "truthfulqa-csv")
    items = []
    for position, row in enumerate(rows, start=1):
        best = row["best answer"]
        wrong = [part.strip() for part in row["incorrect answers"].split(";") if part.strip()]
        if not wrong:
            raise ConversionError(
                f"truthfulqa-csv line {position + 1}: no incorrect answers to build choices from"
            )
        choices = _stable_shuffle([best] + wrong, row["question"])
        items.append(
            MCItem(
                id=f"tqa-{position:04d}",
                question=row["question"],
                choices=tuple(choices),
                correct=frozenset({choices.index(best)}),
            )
        )
    return items


def convert_ciar_csv(data: bytes | str) -> list[GenItem]:
    """Counterfactual-reasoning puzzles: question / answer columns."""
    rows = _read_csv(data, ("question", "answer"), "ciar")
    return [
        GenItem(id=f"ciar-{position:04d}", prompt=row["question"], gold=row["answer"])
        for position, row in enumerate(rows, start=1)
    ]


def convert_bold_csv(data: bytes | str) -> list[GenItem]:
    """Open-ended generation prompts; a prompt column is required, extra
    columns (domain, name) ride along in the id when present."""
    rows = _read_csv(data, ("prompt",), "bold")
    items = []
    for position, row in enumerate(rows, start=1):
        suffix = row.get("domain") or row.get("name") or ""
        item_id = f"bold-{position:04d}" + (f"-{suffix.replace(' ', '_')}" if suffix else "")
        items.append(GenItem(id=item_id, prompt=row["prompt"], gold=None))
    return items


def convert_honest_csv(data: bytes | str) -> list[GenItem]:
    """Sentence-completion templates probing for hurtful continuations; a
    template column is required."""
    rows = _read_csv(data, ("template",), "honest")
    return [
        GenItem(id=f"honest-{position:04d}", prompt=row["template"], gold=None)
        for position, row in enumerate(rows, start=1)
    ]


CONVERTERS = {
    "truthfulqa-csv": ("mc", convert_truthfulqa_csv),
    "ciar": ("gen", convert_ciar_csv),
    "bold": ("gen", convert_bold_csv),
    "honest": ("gen", convert_honest_csv),
}


def convert(source: str, data: bytes | str) -> str:
    """Convert a public-format file to native line-delimited records."""
    try:
        kind, converter = CONVERTERS[source]
    except KeyError:
        raise ConversionError(f"unknown source format '{source}'") from None
    items = converter(data)
    return dump_mc_dataset(items) if kind == "mc" else dump_gen_dataset(items)
