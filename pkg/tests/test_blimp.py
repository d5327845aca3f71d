import json

import pytest

from fict.blimp import (
    BlimpError,
    convert,
    extract_wordlists,
    normalize_benchmark,
    read_benchmark_file,
    write_wordlists,
)
from fict.evaluation import MinimalPair, load_pairs
from fict.filters import load_wordlist


def write_jsonl(path, records):
    with path.open("w", encoding="utf-8") as f:
        for rec in records:
            f.write(json.dumps(rec) + "\n")


def test_normalize_benchmark_aliases():
    assert (
        normalize_benchmark("distractor_agreement_relational_noun")
        == "distractor_agr_relational_noun"
    )
    assert normalize_benchmark("passive_1") == "passive_1"


def test_convert_benchmark_files(tmp_path):
    src = tmp_path / "bench.jsonl"
    write_jsonl(
        src,
        [
            {
                "UID": "determiner_noun_agreement_1",
                "pairID": 0,
                "sentence_good": "Craig explored that grocery store .",
                "sentence_bad": "Craig explored that grocery stores .",
            },
            {
                "UID": "determiner_noun_agreement_1",
                "pairID": 1,
                "sentence_good": "Carl cures those horses .",
                "sentence_bad": "Carl cures those horse .",
            },
        ],
    )
    dst = tmp_path / "pairs.jsonl"
    assert convert([src], dst) == 2
    pairs = load_pairs(dst)
    assert pairs[0].benchmark == "det_noun_agr_1"
    assert pairs[0].pair_id == "determiner_noun_agreement_1:0"


def test_malformed_benchmark_records(tmp_path):
    src = tmp_path / "bad.jsonl"
    src.write_text('{"UID": "x", "pairID": 0}\n', encoding="utf-8")
    with pytest.raises(BlimpError):
        read_benchmark_file(src)
    src.write_text("not json\n", encoding="utf-8")
    with pytest.raises(BlimpError):
        read_benchmark_file(src)


def pair(bench, good, bad, i=0):
    return MinimalPair(f"{bench}:{i}", bench, good, bad)


def test_extract_agreement_nouns():
    pairs = [
        # _1 paradigms differ on the verb; the noun precedes the difference
        pair("irregular_plural_subject_verb_agr_1",
             "This goose isn't bothering Edward .",
             "This goose weren't bothering Edward ."),
        # _2 paradigms differ on the noun itself
        pair("regular_plural_subject_verb_agr_2",
             "The dress crumples .", "The dresses crumples ."),
    ]
    lists = extract_wordlists(pairs)
    assert lists["agr_re_irr_sv_nouns.txt"] == {"goose", "dress", "dresses"}


def test_extract_det_nouns_and_passives():
    pairs = [
        pair("det_noun_agr_1", "Craig explored that store .",
             "Craig explored that stores ."),
        pair("det_noun_agr_2", "Carl cures those horses .",
             "Carl cures that horses ."),
        pair("passive_1", "Jeffrey's sons are insulted by Tina .",
             "Jeffrey's sons are smiled by Tina ."),
    ]
    lists = extract_wordlists(pairs)
    assert lists["det_noun_nouns.txt"] == {"store", "stores", "horses"}
    assert lists["passive_verbs.txt"] == {"insulted", "smiled"}


def test_extract_skips_multi_token_differences():
    pairs = [
        pair("passive_1", "one two three .", "completely different words ."),
        pair("passive_2", "short .", "much longer sentence ."),
    ]
    lists = extract_wordlists(pairs)
    assert lists["passive_verbs.txt"] == set()


def test_write_wordlists_readable_by_filter_loader(tmp_path):
    write_wordlists({"passive_verbs.txt": {"b", "a"}}, tmp_path)
    assert load_wordlist(tmp_path / "passive_verbs.txt") == ["a", "b"]
