import io
import random

import pytest
from hypothesis import given, settings, strategies as st

from oracle import oracle_match, random_pattern, random_sentence

from fict.conllu import parse_conllu
from fict.treequery import (
    NodePredicate,
    OrderConstraint,
    PatternEdge,
    PatternError,
    TreePattern,
    has_match,
    match,
    parse_pattern,
)

# hand-annotated parse of a PP-modified-subject sentence
PP_SUBJECT = (
    "1\tA\ta\tDET\t_\t_\t2\tdet\t_\t_\n"
    "2\tsketch\tsketch\tNOUN\t_\t_\t5\tnsubj\t_\t_\n"
    "3\tof\tof\tADP\t_\t_\t4\tcase\t_\t_\n"
    "4\tlights\tlight\tNOUN\t_\t_\t2\tnmod\t_\t_\n"
    "5\tappears\tappear\tVERB\t_\t_\t0\troot\t_\t_\n"
    "6\t.\t.\tPUNCT\t_\t_\t5\tpunct\t_\t_\n\n"
)
# same lexical material, but the PP modifies the object
PP_OBJECT = (
    "1\tMary\tMary\tPROPN\t_\t_\t2\tnsubj\t_\t_\n"
    "2\tsaw\tsee\tVERB\t_\t_\t0\troot\t_\t_\n"
    "3\ta\ta\tDET\t_\t_\t4\tdet\t_\t_\n"
    "4\tsketch\tsketch\tNOUN\t_\t_\t2\tobj\t_\t_\n"
    "5\tof\tof\tADP\t_\t_\t6\tcase\t_\t_\n"
    "6\tlights\tlight\tNOUN\t_\t_\t4\tnmod\t_\t_\n\n"
)
ONE_TOKEN = "1\tGo\tgo\tVERB\t_\t_\t0\troot\t_\t_\n\n"

CHAIN = "V:VERB >nsubj N1:NOUN >nmod N2:NOUN >case P:ADP"


def sentence(text):
    return next(parse_conllu(io.StringIO(text)))


def test_chain_pattern_binds_pp_subject():
    bindings = match(sentence(PP_SUBJECT), parse_pattern(CHAIN))
    assert bindings == [{"V": 5, "N1": 2, "N2": 4, "P": 3}]


def test_chain_pattern_rejects_pp_object():
    assert match(sentence(PP_OBJECT), parse_pattern(CHAIN)) == []


def test_two_node_pattern_on_one_token_sentence():
    pat = parse_pattern("V:VERB > X:NOUN")
    assert match(sentence(ONE_TOKEN), pat) == []


def test_has_match_short_circuits_consistently():
    s, p = sentence(PP_SUBJECT), parse_pattern(CHAIN)
    assert has_match(s, p) is True
    assert has_match(sentence(PP_OBJECT), p) is False


def test_unsatisfiable_upos_is_false():
    assert not has_match(sentence(PP_SUBJECT), parse_pattern("X:INTJ"))


def test_subtype_aware_and_exact_relations():
    s = sentence(
        "1\tMary\tMary\tPROPN\t_\t_\t3\tnmod:poss\t_\t_\n"
        "2\t's\t's\tPART\t_\t_\t1\tcase\t_\t_\n"
        "3\tdog\tdog\tNOUN\t_\t_\t0\troot\t_\t_\n\n"
    )
    assert has_match(s, parse_pattern("N:NOUN >nmod M:PROPN"))
    assert not has_match(s, parse_pattern("N:NOUN >nmod! M:PROPN"))
    assert has_match(s, parse_pattern("N:NOUN >nmod:poss M:PROPN"))


def test_form_matching_case_insensitive_lemma_sensitive():
    s = sentence(
        "1\tOnly\tonly\tADV\t_\t_\t2\tadvmod\t_\t_\n"
        "2\twins\tWin\tVERB\t_\t_\t0\troot\t_\t_\n\n"
    )
    assert has_match(s, parse_pattern("A:ADV[form=only]"))
    assert has_match(s, parse_pattern("V:VERB[lemma=Win]"))
    assert not has_match(s, parse_pattern("V:VERB[lemma=win]"))


def test_order_constraints():
    s = sentence(PP_SUBJECT)
    assert has_match(s, parse_pattern("N:NOUN >det D:DET; D . N"))
    assert has_match(s, parse_pattern("N:NOUN >nmod M:NOUN; N .. M"))
    assert not has_match(s, parse_pattern("N:NOUN >nmod M:NOUN; M .. N"))


def test_descendant_depth_bounds():
    s = sentence(PP_OBJECT)  # of(5) is 3 steps below saw(2)
    assert not has_match(s, parse_pattern("V:VERB >>2 P:ADP"))
    assert has_match(s, parse_pattern("V:VERB >>3 P:ADP"))
    assert has_match(s, parse_pattern("V:VERB >> P:ADP"))  # default depth 3


def test_named_wordlist_resolution():
    pat = parse_pattern("N:NOUN[form@targets]", {"targets": ["Sketch"]})
    assert has_match(sentence(PP_SUBJECT), pat)
    with pytest.raises(PatternError):
        parse_pattern("N:NOUN[form@missing]")


def test_binding_order_is_declaration_lexicographic():
    s = sentence(
        "1\ta\ta\tNOUN\t_\t_\t3\tnsubj\t_\t_\n"
        "2\tb\tb\tNOUN\t_\t_\t3\tobj\t_\t_\n"
        "3\tc\tc\tVERB\t_\t_\t0\troot\t_\t_\n\n"
    )
    got = match(s, parse_pattern("V:VERB > X:NOUN"))
    assert got == [{"V": 3, "X": 1}, {"V": 3, "X": 2}]


def test_pattern_validation_errors():
    noun = NodePredicate(upos_in=frozenset({"NOUN"}))
    with pytest.raises(PatternError):
        TreePattern({})  # no nodes
    with pytest.raises(PatternError):
        NodePredicate()  # constraint-free node
    with pytest.raises(PatternError):
        TreePattern({"a": noun, "b": noun})  # disconnected
    with pytest.raises(PatternError):
        TreePattern(
            {"a": noun, "b": noun},
            [PatternEdge("a", "b"), PatternEdge("b", "a")],  # cycle
        )
    with pytest.raises(PatternError):
        TreePattern({"a": noun}, [], [OrderConstraint("a", "a")])
    with pytest.raises(PatternError):
        parse_pattern("V:VERB >nsubj")  # dangling edge


def test_bindings_are_injective():
    s = sentence(
        "1\ta\ta\tNOUN\t_\t_\t2\tnsubj\t_\t_\n"
        "2\tb\tb\tVERB\t_\t_\t0\troot\t_\t_\n\n"
    )
    for binding in match(s, parse_pattern("X:NOUN|VERB >nsubj Y:NOUN|VERB")):
        assert len(set(binding.values())) == len(binding)


def test_oracle_equivalence_sample():
    rng = random.Random(424242)
    for _ in range(800):
        s = random_sentence(rng)
        p = random_pattern(rng)
        assert match(s, p) == oracle_match(s, p)
        assert has_match(s, p) == bool(oracle_match(s, p))


def test_pure_and_compiled_kernels_agree():
    from fict import _matchpure
    from fict._compile import SentenceIndex

    try:
        from fict import _matchcore
    except ImportError:
        pytest.skip("compiled kernel not built")
    rng = random.Random(7)
    for _ in range(500):
        s = random_sentence(rng)
        p = random_pattern(rng)
        sidx = SentenceIndex(s)
        assert sorted(_matchpure.find_matches(sidx, p.compiled(), 0)) == sorted(
            _matchcore.find_matches(sidx, p.compiled(), 0)
        )


@given(data=st.data())
@settings(max_examples=120, deadline=None)
def test_adding_constraint_never_adds_matches(data):
    seed = data.draw(st.integers(0, 10 ** 9))
    rng = random.Random(seed)
    s = random_sentence(rng)
    p = random_pattern(rng)
    base = len(match(s, p))

    name = rng.choice(list(p.nodes))
    pred = p.nodes[name]
    extra_feat = rng.choice(["F=1", "F=2", "G=1"])
    tightened = NodePredicate(
        upos_in=pred.upos_in,
        deprel_in=pred.deprel_in,
        deprel_exact=pred.deprel_exact,
        form_in=pred.form_in,
        lemma_in=pred.lemma_in,
        feats_require=(pred.feats_require or frozenset()) | {extra_feat},
    )
    nodes = dict(p.nodes)
    nodes[name] = tightened
    p2 = TreePattern(nodes, p.edges, p.order)
    assert len(match(s, p2)) <= base
