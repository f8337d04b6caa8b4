"""Dataset generation and serialization tests."""

import numpy as np
import pytest

from flgen.dataset import (
    ROLES,
    DatasetSplit,
    LabeledExample,
    generate_example,
    generate_split,
    generate_standard_suite,
    read_split,
    split_filename,
    validate_split,
    write_split,
)
from flgen.automata import EOS
from flgen.errors import ConfigurationError, GenerationError, IntegrityError, ParseError
from flgen.langlib import get_language


def test_generate_example_properties():
    lang = get_language("parity")
    rng = np.random.default_rng(3)
    n_pos = 0
    for _ in range(10_000):
        ex = generate_example(lang, 0, 40, True, rng)
        assert lang.contains(list(ex.symbols)) == ex.label
        assert 0 <= len(ex.symbols) <= 40
        assert ex.text == lang.render(list(ex.symbols))
        if ex.label:
            n_pos += 1
            assert ex.next_sets is not None
            assert len(ex.next_sets) == len(ex.symbols) + 1
            assert EOS in ex.next_sets[-1]
        else:
            assert ex.next_sets is None
    # fair coin within 3 sigma of binomial(10000, 1/2)
    assert abs(n_pos - 5_000) <= 3 * 50


def test_generate_example_unannotated():
    lang = get_language("majority")
    rng = np.random.default_rng(4)
    for _ in range(50):
        ex = generate_example(lang, 0, 20, False, rng)
        assert ex.next_sets is None


def test_split_determinism():
    lang = get_language("marked-reversal")
    a = generate_split(lang, "val-short", 77, count=40, n_max=20)
    b = generate_split(lang, "val-short", 77, count=40, n_max=20)
    assert a == b
    c = generate_split(lang, "val-long", 77, count=40, n_max=20)
    assert [e.text for e in a.examples] != [e.text for e in c.examples]
    d = generate_split(lang, "val-short", 78, count=40, n_max=20)
    assert [e.text for e in a.examples] != [e.text for e in d.examples]


def test_split_defaults_and_overrides():
    lang = get_language("parity")
    split = generate_split(lang, "editdist-probe", 5)
    assert split.count == 50
    assert (split.n_min, split.n_max) == (0, 500)
    assert all(not ex.label for ex in split.examples)
    small = generate_split(lang, "train", 5, count=25, n_min=2, n_max=10)
    assert small.count == 25
    assert all(2 <= len(ex.symbols) <= 10 for ex in small.examples)


def test_standard_suite_shapes():
    lang = get_language("parity")
    suite = generate_standard_suite(lang, 123)
    expected = {
        "train": (10_000, 0, 40),
        "val-short": (1_000, 0, 40),
        "val-long": (1_000, 0, 80),
        "test-short": (1_000, 0, 40),
        "test-long": (5_010, 0, 500),
        "editdist-probe": (50, 0, 500),
    }
    assert set(suite) == set(expected)
    for role, (count, lo, hi) in expected.items():
        split = suite[role]
        assert split.count == count
        assert (split.n_min, split.n_max) == (lo, hi)
        assert all(lo <= len(ex.symbols) <= hi for ex in split.examples)
    seen = {
        ex.text
        for role in ("train", "val-short", "val-long")
        for ex in suite[role].examples
    }
    assert all(ex.text not in seen for ex in suite["test-short"].examples)
    n_pos = sum(ex.label for ex in suite["train"].examples)
    assert abs(n_pos - 5_000) <= 3 * 50
    for role in expected:
        assert validate_split(suite[role]) == []


def test_roundtrip(tmp_path):
    lang = get_language("majority")
    split = generate_split(lang, "val-short", 9, annotate=True, count=30, n_max=12)
    path = tmp_path / split_filename("majority", "val-short")
    write_split(split, path)
    assert read_split(path) == split
    # byte-identical across rewrites and regenerations
    first = path.read_bytes()
    write_split(split, path)
    assert path.read_bytes() == first
    again = generate_split(lang, "val-short", 9, annotate=True, count=30, n_max=12)
    write_split(again, path)
    assert path.read_bytes() == first


def test_next_field_rendering(tmp_path):
    lang = get_language("majority")
    split = generate_split(lang, "train", 1, annotate=True, count=5, n_max=8)
    path = tmp_path / "m.jsonl"
    write_split(split, path)
    lines = path.read_text().splitlines()
    import json

    for line in lines[1:]:
        record = json.loads(line)
        if record["label"] == 1:
            for cur in record["next"]:
                assert cur == sorted(set(cur) - {"</s>"}) + (
                    ["</s>"] if "</s>" in cur else []
                )


def test_validate_catches_tampering():
    lang = get_language("even-pairs")
    split = generate_split(lang, "val-short", 2, annotate=True, count=20, n_max=12)
    assert validate_split(split) == []

    flipped = DatasetSplit(
        split.language, split.role, split.n_min, split.n_max, split.seed,
        [
            LabeledExample(ex.symbols, ex.text, not ex.label, None)
            for ex in split.examples[:1]
        ],
    )
    problems = validate_split(flipped)
    assert len(problems) == 1 and "label" in problems[0]

    ex = split.examples[0]
    shrunk = DatasetSplit("even-pairs", "val-short", 0, 1, 2,
                          [e for e in split.examples if len(e.symbols) > 1][:1])
    assert any("length" in p for p in validate_split(shrunk))

    if any(e.label and e.next_sets for e in split.examples):
        pos = next(e for e in split.examples if e.label and e.next_sets)
        bad = LabeledExample(pos.symbols, pos.text, True,
                             (frozenset(),) * (len(pos.symbols) + 1))
        wrong = DatasetSplit("even-pairs", "val-short", 0, 12, 2, [bad])
        assert any("next sets" in p for p in validate_split(wrong))

    neg = LabeledExample((1,), "1", False, (frozenset({0}),) * 2)
    carried = DatasetSplit("repeat-01", "val-short", 0, 12, 2, [neg])
    assert any("negative" in p for p in validate_split(carried))

    unknown = DatasetSplit("no-such", "val-short", 0, 12, 2, [])
    assert validate_split(unknown)
    assert ex  # silence unused warning paths


def test_read_errors(tmp_path):
    good = generate_split(get_language("parity"), "val-short", 1, count=3, n_max=10)
    path = tmp_path / "x.jsonl"

    def rewrite(mutate):
        write_split(good, path)
        lines = path.read_text().splitlines()
        mutate(lines)
        path.write_text("\n".join(lines) + "\n")

    rewrite(lambda lines: lines.__setitem__(2, "{not json"))
    with pytest.raises(ParseError) as err:
        read_split(path)
    assert err.value.line == 3

    rewrite(lambda lines: lines.__setitem__(1, '{"label":1}'))
    with pytest.raises(ParseError, match="text"):
        read_split(path)

    rewrite(lambda lines: lines.__setitem__(2, '{"text":"11","label":"yes"}'))
    with pytest.raises(ParseError, match="label"):
        read_split(path)

    rewrite(lambda lines: lines.__setitem__(3, '{"text":"2abc","label":0}'))
    with pytest.raises(ParseError, match="tokenize"):
        read_split(path)

    rewrite(lambda lines: lines.pop())
    with pytest.raises(IntegrityError, match="promises 3"):
        read_split(path)

    rewrite(lambda lines: lines.__setitem__(
        0, lines[0].replace("flgen-split-v1", "flgen-split-v0")))
    with pytest.raises(ParseError, match="format"):
        read_split(path)

    path.write_text("")
    with pytest.raises(ParseError, match="empty"):
        read_split(path)

    header_only = (
        '{"count":0,"format":"flgen-split-v1","language":"parity","n_max":10,'
        '"role":"val-short"}'
    )
    path.write_text(header_only + "\n")
    with pytest.raises(ParseError, match="n_min"):
        read_split(path)


def test_dedup_retry_and_exhaustion():
    lang = get_language("repeat-01")
    natural = generate_split(lang, "test-short", 3, count=5, n_max=6)
    forbidden = {natural.examples[0].text}
    deduped = generate_split(
        lang, "test-short", 3, count=5, n_max=6, forbidden=forbidden
    )
    assert deduped.examples[0].text not in forbidden
    assert deduped.examples[0] != natural.examples[0]

    everything = {"", "0", "1", "00", "01", "10", "11"}
    with pytest.raises(GenerationError, match="no unseen example"):
        generate_split(
            lang, "test-short", 3, count=5, n_max=2,
            forbidden=everything, dedup_attempts=10,
        )


def test_config_errors():
    lang = get_language("parity")
    with pytest.raises(ConfigurationError, match="unknown role"):
        generate_split(lang, "test", 0)
    with pytest.raises(ConfigurationError, match="seed"):
        generate_split(lang, "train", -1, count=1)


def test_role_table():
    assert [r[0] for r in ROLES.values()] == [0, 1, 2, 3, 4, 5]
    assert split_filename("dyck-2-3", "test-long") == "dyck-2-3.test-long.jsonl"
