"""Command-line entry points: dataset suite generation, edit-distance
reports, split validation, and per-language statistics.

Exit codes: 0 success, 1 validation failure, 2 configuration error,
3 I/O failure.  All randomness flows from ``--seed``.
"""

from __future__ import annotations

import argparse
import math
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

from .dataset import (
    ROLES,
    DatasetSplit,
    generate_split,
    generate_standard_suite,
    read_split,
    split_filename,
    validate_split,
    write_split,
)
from .editdist import edit_distance
from .errors import (
    ConfigurationError,
    GenerationError,
    IntegrityError,
    ParseError,
    UsageError,
)
from .langlib import get_language
from .lcsampler import build_sampler_tables

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_CONFIG = 2
EXIT_IO = 3

MAX_REPORTED_VIOLATIONS = 20


@dataclass(frozen=True)
class RunConfig:
    """Validated arguments shared by the generation commands."""

    command: str
    language: str
    seed: int = 0
    output_dir: Path = Path(".")
    overrides: dict[str, tuple[int | None, int | None, int | None]] = field(
        default_factory=dict
    )
    annotate: bool = False

    def __post_init__(self):
        get_language(self.language)
        if self.seed < 0:
            raise ConfigurationError("seed must be nonnegative")
        for role, (count, n_min, n_max) in self.overrides.items():
            if role not in ROLES:
                known = ", ".join(ROLES)
                raise ConfigurationError(f"unknown split role {role!r}; known: {known}")
            if count is not None and count < 0:
                raise ConfigurationError(f"{role}: negative count")
            if n_min is not None and n_max is not None and not 0 <= n_min <= n_max:
                raise ConfigurationError(
                    f"{role}: bad length range [{n_min}, {n_max}]"
                )


def _parse_override(text: str) -> tuple[str, tuple[int, int | None, int | None]]:
    role, sep, rest = text.partition("=")
    if not sep or not rest:
        raise ConfigurationError(
            f"override {text!r} is not ROLE=COUNT or ROLE=COUNT:MIN:MAX"
        )
    parts = rest.split(":")
    try:
        if len(parts) == 1:
            return role, (int(parts[0]), None, None)
        if len(parts) == 3:
            return role, (int(parts[0]), int(parts[1]), int(parts[2]))
    except ValueError:
        pass
    raise ConfigurationError(
        f"override {text!r} is not ROLE=COUNT or ROLE=COUNT:MIN:MAX"
    )


def _build_config(args: argparse.Namespace) -> RunConfig:
    overrides: dict[str, tuple[int | None, int | None, int | None]] = {}
    if args.min_len is not None or args.max_len is not None:
        for role, (_rid, _count, lo, hi) in ROLES.items():
            overrides[role] = (
                None,
                args.min_len if args.min_len is not None else lo,
                args.max_len if args.max_len is not None else hi,
            )
    for text in args.override:
        role, (count, lo, hi) = _parse_override(text)
        base = overrides.get(role, (None, None, None))
        overrides[role] = (
            count,
            lo if lo is not None else base[1],
            hi if hi is not None else base[2],
        )
    return RunConfig(
        command=args.command,
        language=args.language,
        seed=args.seed,
        output_dir=args.out,
        overrides=overrides,
        annotate=args.annotate,
    )


# ---------------------------------------------------------------------------
# generate


def _generate_suite(config: RunConfig) -> dict[str, DatasetSplit]:
    lang = get_language(config.language)
    if not config.overrides:
        return generate_standard_suite(lang, config.seed, annotate=config.annotate)
    splits: dict[str, DatasetSplit] = {}
    seen: set[str] = set()
    for role in ROLES:
        count, n_min, n_max = config.overrides.get(role, (None, None, None))
        splits[role] = generate_split(
            lang,
            role,
            config.seed,
            annotate=config.annotate,
            count=count,
            n_min=n_min,
            n_max=n_max,
            forbidden=seen if role == "test-short" else None,
        )
        if role in ("train", "val-short", "val-long"):
            seen.update(ex.text for ex in splits[role].examples)
    return splits


def _summarize(split: DatasetSplit) -> str:
    if split.count == 0:
        return f"{split.role:<15} {0:>6}  {'-':>8}  -"
    positive = sum(ex.label for ex in split.examples) / split.count
    lengths = [len(ex.symbols) for ex in split.examples]
    return (
        f"{split.role:<15} {split.count:>6}  {positive:>8.3f}  "
        f"{min(lengths)}-{max(lengths)}"
    )


def cmd_generate(config: RunConfig) -> int:
    try:
        config.output_dir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        print(f"error: cannot create {config.output_dir}: {exc}", file=sys.stderr)
        return EXIT_IO
    splits = _generate_suite(config)
    print(f"{'split':<15} {'count':>6}  {'positive':>8}  lengths")
    for role, split in splits.items():
        write_split(split, config.output_dir / split_filename(config.language, role))
        print(_summarize(split))
    return EXIT_OK


# ---------------------------------------------------------------------------
# editdist


def _read_input_strings(path: Path) -> list[str]:
    """A generated split file contributes its example texts; anything else
    is treated as one input string per line."""
    with open(path, encoding="utf-8") as fh:
        raw = fh.read()
    first = raw.splitlines()[0] if raw.splitlines() else ""
    if first.startswith("{"):
        split = read_split(path)
        return [ex.text for ex in split.examples]
    return raw.splitlines()


def cmd_editdist(args: argparse.Namespace) -> int:
    lang = get_language(args.language)
    if lang.dfa is None:
        print(
            f"error: edit distance requires a regular language; "
            f"{lang.name} is {lang.class_label}",
            file=sys.stderr,
        )
        return EXIT_CONFIG
    texts = _read_input_strings(args.input)
    lines = []
    for text in texts:
        result = edit_distance(lang.dfa, lang.parse(text))
        if result.distance == math.inf:
            lines.append(f"inf\t-\t{text}")
        else:
            lines.append(f"{result.distance}\t{lang.render(result.witness)}\t{text}")
    report = "\n".join(lines) + ("\n" if lines else "")
    if args.out is None:
        sys.stdout.write(report)
    else:
        args.out.write_text(report, encoding="utf-8")
    return EXIT_OK


# ---------------------------------------------------------------------------
# validate


def cmd_validate(paths: list[Path]) -> int:
    violations = []
    for path in paths:
        try:
            split = read_split(path)
        except (ParseError, IntegrityError) as exc:
            violations.append(f"{path}: {exc}")
            continue
        get_language(split.language)
        violations.extend(f"{path}: {v}" for v in validate_split(split))
    if violations:
        for line in violations[:MAX_REPORTED_VIOLATIONS]:
            print(line)
        extra = len(violations) - MAX_REPORTED_VIOLATIONS
        if extra > 0:
            print(f"... and {extra} more")
        return EXIT_INVALID
    print(f"{len(paths)} file(s) pass")
    return EXIT_OK


# ---------------------------------------------------------------------------
# stats


def _format_lengths(lengths: tuple[int, ...]) -> str:
    if not lengths:
        return "none"
    runs = []
    start = prev = lengths[0]
    for n in lengths[1:]:
        if n == prev + 1:
            prev = n
            continue
        runs.append((start, prev))
        start = prev = n
    runs.append((start, prev))
    return ", ".join(f"{a}" if a == b else f"{a}-{b}" for a, b in runs)


def cmd_stats(name: str) -> int:
    lang = get_language(name)
    glyphs = " ".join(
        lang.alphabet.render_symbol(i) for i in range(len(lang.alphabet))
    )
    print(f"language: {lang.name}")
    print(f"class: {lang.class_label}")
    print(f"alphabet ({len(lang.alphabet)}): {glyphs}")
    if lang.dfa is None:
        print("membership: procedural")
        return EXIT_OK
    print(f"dfa states: {lang.dfa.n_states}")
    tables = build_sampler_tables(lang.dfa, 0, 40)
    print(f"valid lengths [0,40]: {_format_lengths(tables.valid_lengths)}")
    for n_max in (80, 500):
        t0 = time.perf_counter()
        build_sampler_tables(lang.dfa, 0, n_max)
        print(f"preprocessing n_max={n_max}: {time.perf_counter() - t0:.2f}s")
    return EXIT_OK


# ---------------------------------------------------------------------------
# entry point


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="flgen",
        description="Formal-language benchmark dataset generator.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="write the six dataset splits")
    gen.add_argument("--language", required=True)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out", type=Path, default=Path("."))
    gen.add_argument("--min-len", type=int, default=None)
    gen.add_argument("--max-len", type=int, default=None)
    gen.add_argument("--annotate", action="store_true",
                     help="emit valid next-symbol sets on positive examples")
    gen.add_argument("--override", action="append", default=[],
                     metavar="ROLE=COUNT[:MIN:MAX]",
                     help="reshape one split (repeatable)")

    ed = sub.add_parser("editdist", help="distance-to-language report")
    ed.add_argument("--language", required=True)
    ed.add_argument("input", type=Path,
                    help="split file or plain text, one string per line")
    ed.add_argument("--out", type=Path, default=None)

    val = sub.add_parser("validate", help="re-derive labels and annotations")
    val.add_argument("paths", nargs="+", type=Path)

    st = sub.add_parser("stats", help="print language statistics")
    st.add_argument("language")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "generate":
            return cmd_generate(_build_config(args))
        if args.command == "editdist":
            return cmd_editdist(args)
        if args.command == "validate":
            return cmd_validate(args.paths)
        return cmd_stats(args.language)
    except (ConfigurationError, UsageError, GenerationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ParseError, IntegrityError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
