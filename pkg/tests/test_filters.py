import io

import pytest

from fict.conllu import parse_conllu
from fict.filters import (
    BENCHMARK_ALIASES,
    FILTER_NAMES,
    FilterStats,
    UnknownFilterError,
    apply_filter,
    discarding_filters,
    get_filter,
    registry,
)
from fict.synthgen import generate, write_corpus

TABLE_BENCHMARKS = {
    "agr-pp-mod": ["distractor_agr_relational_noun"],
    "agr-rel-cl": ["distractor_agr_relative_clause"],
    "agr-re-irr-sv": [
        "irregular_plural_subject_verb_agr_1",
        "irregular_plural_subject_verb_agr_2",
        "regular_plural_subject_verb_agr_1",
        "regular_plural_subject_verb_agr_2",
    ],
    "npi-only": ["only_npi_licensor_present", "only_npi_scope"],
    "npi-sent-neg": [
        "sentential_negation_npi_licensor_present",
        "sentential_negation_npi_scope",
    ],
    "npi-sim-ques": ["matrix_question_npi_licensor_present"],
    "quantifier-superlative": ["superlative_quantifiers_1", "superlative_quantifiers_2"],
    "quantifier-existential-there": ["existential_there_quantifiers_1"],
    "binding-c-command": ["principle_A_c_command"],
    "binding-case": ["principle_A_case_1", "principle_A_case_2"],
    "binding-domain": ["principle_A_domain_1", "principle_A_domain_2", "principle_A_domain_3"],
    "binding-reconstruction": ["principle_A_reconstruction"],
    "passive": ["passive_1", "passive_2"],
    "det-adj-noun": [
        "det_noun_agr_with_adj_1",
        "det_noun_agr_with_adj_2",
        "det_noun_agr_with_adj_irregular_1",
        "det_noun_agr_with_adj_irregular_2",
    ],
    "det-noun": [
        "det_noun_agr_1",
        "det_noun_agr_2",
        "det_noun_agr_irregular_1",
        "det_noun_agr_irregular_2",
    ],
}


def test_registry_has_fifteen_filters():
    specs = registry()
    assert len(specs) == 15
    assert [s.name for s in specs] == list(FILTER_NAMES)
    assert len({s.name for s in specs}) == 15


def test_registry_targets_all_table_benchmarks():
    specs = {s.name: s for s in registry()}
    for name, benchmarks in TABLE_BENCHMARKS.items():
        assert list(specs[name].targeted_benchmarks) == benchmarks
    all_targets = [b for s in specs.values() for b in s.targeted_benchmarks]
    assert len(all_targets) == len(set(all_targets)) == 31


def test_every_spec_has_patterns_or_rule():
    for spec in registry():
        assert spec.patterns or spec.rule is not None
        assert spec.targeted_benchmarks
        for pattern in spec.patterns:
            for pred in pattern.nodes.values():
                assert any(
                    v is not None
                    for v in (pred.upos_in, pred.deprel_in, pred.form_in,
                              pred.lemma_in, pred.feats_require)
                )


def test_benchmark_aliases_map_onto_registry_targets():
    targets = {b for s in registry() for b in s.targeted_benchmarks}
    assert set(BENCHMARK_ALIASES.values()) <= targets


def test_unknown_filter_name():
    with pytest.raises(UnknownFilterError):
        get_filter("no-such-filter")


def test_golden_fixture_labels_match_exactly(golden_sentences, golden_labels):
    specs = registry()
    mismatches = []
    for sent in golden_sentences:
        got = frozenset(discarding_filters(sent, specs))
        want = golden_labels[sent.sent_id]
        if got != want:
            mismatches.append((sent.sent_id, sorted(want), sorted(got)))
    assert not mismatches, mismatches


def test_golden_fixture_has_min_cases_per_filter(golden_sentences, golden_labels):
    assert len(golden_sentences) >= 60
    for name in FILTER_NAMES:
        positives = sum(1 for labels in golden_labels.values() if name in labels)
        negatives = sum(1 for labels in golden_labels.values() if name not in labels)
        assert positives >= 2, name
        assert negatives >= 2, name


def test_apply_filter_partition_and_stats(golden_sentences):
    spec = get_filter("agr-pp-mod")
    kept, discarded, stats = apply_filter(golden_sentences, spec)
    assert len(kept) + len(discarded) == len(golden_sentences)
    assert stats.input_sentences == len(golden_sentences)
    assert stats.discarded_sentences == len(discarded)
    assert stats.input_tokens == sum(len(s.tokens) for s in golden_sentences)
    assert stats.output_tokens == sum(len(s.tokens) for s in kept)
    expected_pct = 100.0 * len(discarded) / len(golden_sentences)
    assert abs(stats.pct_sentences_filtered - expected_pct) < 1e-9


def test_five_sentence_fixture_yields_twenty_percent(golden_sentences):
    # one PP-modified subject placed third among five sentences
    by_id = {s.sent_id: s for s in golden_sentences}
    mini = [by_id[i] for i in ("s004", "s005", "s001", "s012", "s013")]
    kept, discarded, stats = apply_filter(mini, get_filter("agr-pp-mod"))
    assert [s.sent_id for s in discarded] == ["s001"]
    assert stats.pct_sentences_filtered == 20.0


def test_apply_filter_empty_corpus():
    kept, discarded, stats = apply_filter([], get_filter("passive"))
    assert kept == [] and discarded == []
    assert stats.input_sentences == 0
    assert stats.pct_sentences_filtered == 0.0


def test_order_preservation(golden_sentences):
    spec = get_filter("npi-sent-neg")
    kept, discarded, _ = apply_filter(golden_sentences, spec)
    ids = [s.sent_id for s in golden_sentences]
    assert [s.sent_id for s in kept] == [i for i in ids if i in {s.sent_id for s in kept}]
    assert [s.sent_id for s in discarded] == [
        i for i in ids if i in {s.sent_id for s in discarded}
    ]


@pytest.fixture(scope="module")
def synth_corpus(tmp_path_factory):
    path = tmp_path_factory.mktemp("synth") / "corpus.conllu"
    write_corpus(generate(2000, seed=23), path)
    with path.open(encoding="utf-8") as f:
        return list(parse_conllu(f))


def test_partition_and_idempotence_all_filters(synth_corpus):
    for spec in registry():
        kept, discarded, stats = apply_filter(synth_corpus, spec)
        assert len(kept) + len(discarded) == len(synth_corpus)
        rekept, rediscarded, _ = apply_filter(kept, spec)
        assert rediscarded == []
        assert len(rekept) == len(kept)


def test_strength_ordering_on_naturalistic_corpus(synth_corpus):
    _, _, pp = apply_filter(synth_corpus, get_filter("agr-pp-mod"))
    _, _, ques = apply_filter(synth_corpus, get_filter("npi-sim-ques"))
    assert pp.pct_sentences_filtered > ques.pct_sentences_filtered


def test_determinism_identical_streams(synth_corpus):
    spec = get_filter("det-adj-noun")
    first = apply_filter(synth_corpus, spec)
    second = apply_filter(synth_corpus, spec)
    assert [s.raw_lines for s in first[0]] == [s.raw_lines for s in second[0]]
    assert [s.raw_lines for s in first[1]] == [s.raw_lines for s in second[1]]


def test_multiword_npi_detection():
    text = (
        "1\tonly\tonly\tADV\t_\t_\t3\tadvmod\t_\t_\n"
        "2\tthey\tthey\tPRON\t_\t_\t3\tnsubj\t_\t_\n"
        "3\ttried\ttry\tVERB\t_\t_\t0\troot\t_\t_\n"
        "4\tat\tat\tADV\t_\t_\t3\tadvmod\t_\t_\n"
        "5\tall\tall\tADV\t_\t_\t4\tfixed\t_\t_\n\n"
    )
    sent = next(parse_conllu(io.StringIO(text)))
    assert get_filter("npi-only").discards(sent)
    # "at" and "all" separated: the multiword item must not fire
    text2 = text.replace("4\tat", "4\tat").replace("5\tall", "5\tnever")
    sent2 = next(parse_conllu(io.StringIO(text2.replace("never", "soon"))))
    assert not get_filter("npi-only").discards(sent2)


def test_filter_stats_percentages():
    s = FilterStats(name="x", input_sentences=200, discarded_sentences=37,
                    input_tokens=1000, output_tokens=800)
    assert abs(s.pct_sentences_filtered - 18.5) < 1e-12
    assert abs(s.tokens_pct_of_full - 80.0) < 1e-12
