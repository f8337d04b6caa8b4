"""Split generation and serialization.

A dataset is six splits per language, each fully determined by
(language, master seed): every example draws from its own RNG stream keyed
by (master seed, split role, example index), so generation order — and even
concurrency — cannot change the output.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .automata import EOS, EOS_GLYPH
from .errors import ConfigurationError, GenerationError, IntegrityError, ParseError
from .langlib import LanguageSpec, get_language
from .perturb import sample_negative

FORMAT_VERSION = "flgen-split-v1"

# role -> (stream id, default count, default n_min, default n_max)
ROLES: dict[str, tuple[int, int, int, int]] = {
    "train": (0, 10_000, 0, 40),
    "val-short": (1, 1_000, 0, 40),
    "val-long": (2, 1_000, 0, 80),
    "test-short": (3, 1_000, 0, 40),
    "test-long": (4, 5_010, 0, 500),
    "editdist-probe": (5, 50, 0, 500),
}

DEFAULT_DEDUP_ATTEMPTS = 1_000


@dataclass(frozen=True)
class LabeledExample:
    symbols: tuple[int, ...]
    text: str
    label: bool
    next_sets: tuple[frozenset[int], ...] | None = None


@dataclass
class DatasetSplit:
    language: str
    role: str
    n_min: int
    n_max: int
    seed: int
    examples: list[LabeledExample]

    @property
    def count(self) -> int:
        return len(self.examples)


def _example_rng(master_seed: int, role_id: int, index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([master_seed, role_id, index]))


def generate_example(
    lang: LanguageSpec,
    n_min: int,
    n_max: int,
    annotate: bool,
    rng: np.random.Generator,
    label: bool | None = None,
) -> LabeledExample:
    """One labeled example: fair-coin label, then a string of that class.

    A caller that must redraw a colliding example passes the already-drawn
    ``label`` so retries resample only the string; redrawing the coin under
    rejection would bias labels toward whichever class has more unseen
    strings left."""
    if label is None:
        label = bool(rng.integers(2))
    if label:
        symbols = lang.sample_positive(n_min, n_max, rng)
        next_sets = tuple(lang.next_sets(symbols)) if annotate else None
    else:
        symbols = sample_negative(lang, n_min, n_max, rng)
        next_sets = None
    return LabeledExample(tuple(symbols), lang.render(symbols), label, next_sets)


def generate_split(
    lang: LanguageSpec,
    role: str,
    master_seed: int,
    *,
    annotate: bool = False,
    count: int | None = None,
    n_min: int | None = None,
    n_max: int | None = None,
    forbidden: set[str] | None = None,
    dedup_attempts: int = DEFAULT_DEDUP_ATTEMPTS,
) -> DatasetSplit:
    if role not in ROLES:
        raise ConfigurationError(
            f"unknown role {role!r}; known: {', '.join(ROLES)}"
        )
    if master_seed < 0:
        raise ConfigurationError("master seed must be non-negative")
    role_id, default_count, default_min, default_max = ROLES[role]
    count = default_count if count is None else count
    n_min = default_min if n_min is None else n_min
    n_max = default_max if n_max is None else n_max
    negatives_only = role == "editdist-probe"

    examples: list[LabeledExample] = []
    for index in range(count):
        rng = _example_rng(master_seed, role_id, index)
        label: bool | None = None
        for _attempt in range(dedup_attempts):
            if negatives_only:
                symbols = sample_negative(lang, n_min, n_max, rng)
                example = LabeledExample(tuple(symbols), lang.render(symbols), False)
            else:
                example = generate_example(lang, n_min, n_max, annotate, rng, label)
                label = example.label
            if forbidden is None or example.text not in forbidden:
                break
        else:
            raise GenerationError(
                f"{lang.name}/{role}: no unseen example after "
                f"{dedup_attempts} attempts at index {index}"
            )
        examples.append(example)
    return DatasetSplit(lang.name, role, n_min, n_max, master_seed, examples)


def generate_standard_suite(
    lang: LanguageSpec,
    master_seed: int,
    *,
    annotate: bool = False,
) -> dict[str, DatasetSplit]:
    """All six splits in their canonical order, with test-short deduplicated
    against the train and validation texts."""
    splits: dict[str, DatasetSplit] = {}
    for role in ("train", "val-short", "val-long"):
        splits[role] = generate_split(lang, role, master_seed, annotate=annotate)
    seen = {
        ex.text
        for role in ("train", "val-short", "val-long")
        for ex in splits[role].examples
    }
    splits["test-short"] = generate_split(
        lang, "test-short", master_seed, annotate=annotate, forbidden=seen
    )
    for role in ("test-long", "editdist-probe"):
        splits[role] = generate_split(lang, role, master_seed, annotate=annotate)
    return splits


def split_filename(language: str, role: str) -> str:
    return f"{language}.{role}.jsonl"


def _render_next(lang: LanguageSpec, next_sets) -> list[list[str]]:
    out = []
    for cur in next_sets:
        glyphs = [lang.alphabet.render_symbol(s) for s in sorted(cur) if s != EOS]
        if EOS in cur:
            glyphs.append(EOS_GLYPH)
        out.append(glyphs)
    return out


def _parse_next(lang: LanguageSpec, arrays, line_no: int) -> tuple[frozenset[int], ...]:
    out = []
    for arr in arrays:
        ids = set()
        for glyph in arr:
            if glyph == EOS_GLYPH:
                ids.add(EOS)
            elif glyph in lang.alphabet:
                ids.add(lang.alphabet.id_of(glyph))
            else:
                raise ParseError(f"unknown symbol {glyph!r} in next field", line_no)
        out.append(frozenset(ids))
    return tuple(out)


def write_split(split: DatasetSplit, path) -> None:
    lang = get_language(split.language)
    header = {
        "format": FORMAT_VERSION,
        "language": split.language,
        "role": split.role,
        "n_min": split.n_min,
        "n_max": split.n_max,
        "seed": split.seed,
        "count": split.count,
    }
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(json.dumps(header, sort_keys=True, separators=(",", ":")) + "\n")
        for ex in split.examples:
            record = {"text": ex.text, "label": int(ex.label)}
            if ex.next_sets is not None:
                record["next"] = _render_next(lang, ex.next_sets)
            fh.write(json.dumps(record, sort_keys=True, separators=(",", ":")) + "\n")


def read_split(path) -> DatasetSplit:
    path = Path(path)
    with open(path, encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise ParseError("empty split file", 1)

    def load(line_no: int) -> dict:
        try:
            obj = json.loads(lines[line_no - 1])
        except json.JSONDecodeError as exc:
            raise ParseError(f"bad record: {exc.msg}", line_no) from exc
        if not isinstance(obj, dict):
            raise ParseError("record is not an object", line_no)
        return obj

    header = load(1)
    for field in ("format", "language", "role", "n_min", "n_max", "seed", "count"):
        if field not in header:
            raise ParseError(f"header missing field {field!r}", 1)
    if header["format"] != FORMAT_VERSION:
        raise ParseError(f"unsupported format {header['format']!r}", 1)
    lang = get_language(header["language"])
    if len(lines) - 1 != header["count"]:
        raise IntegrityError(
            f"{path.name}: header promises {header['count']} examples, "
            f"file has {len(lines) - 1}"
        )
    examples = []
    for line_no in range(2, len(lines) + 1):
        record = load(line_no)
        if "text" not in record or "label" not in record:
            missing = "text" if "text" not in record else "label"
            raise ParseError(f"record missing field {missing!r}", line_no)
        if record["label"] not in (0, 1):
            raise ParseError(f"label must be 0 or 1, got {record['label']!r}", line_no)
        try:
            symbols = tuple(lang.alphabet.encode(record["text"]))
        except Exception as exc:
            raise ParseError(f"cannot tokenize text: {exc}", line_no) from exc
        next_sets = None
        if "next" in record:
            next_sets = _parse_next(lang, record["next"], line_no)
        examples.append(
            LabeledExample(symbols, record["text"], bool(record["label"]), next_sets)
        )
    return DatasetSplit(
        header["language"], header["role"], header["n_min"], header["n_max"],
        header["seed"], examples,
    )


def validate_split(split: DatasetSplit) -> list[str]:
    """Re-derive everything checkable about a split; returns human-readable
    violation descriptions, empty when the split is sound."""
    violations = []
    try:
        lang = get_language(split.language)
    except ConfigurationError as exc:
        return [str(exc)]
    if split.role not in ROLES:
        violations.append(f"unknown role {split.role!r}")
    for idx, ex in enumerate(split.examples):
        where = f"example {idx}"
        if not split.n_min <= len(ex.symbols) <= split.n_max:
            violations.append(
                f"{where}: length {len(ex.symbols)} outside "
                f"[{split.n_min}, {split.n_max}]"
            )
        truth = lang.contains(list(ex.symbols))
        if truth != ex.label:
            violations.append(
                f"{where}: label {int(ex.label)} but membership is {int(truth)}"
            )
        if ex.next_sets is not None:
            if not ex.label:
                violations.append(f"{where}: negative example carries next sets")
            elif len(ex.next_sets) != len(ex.symbols) + 1:
                violations.append(
                    f"{where}: next has {len(ex.next_sets)} entries for "
                    f"{len(ex.symbols)} symbols"
                )
            else:
                expected = tuple(lang.next_sets(list(ex.symbols)))
                if ex.next_sets != expected:
                    violations.append(f"{where}: next sets do not match re-derivation")
    if split.role == "editdist-probe" and any(ex.label for ex in split.examples):
        violations.append("editdist-probe split contains a positive example")
    return violations
