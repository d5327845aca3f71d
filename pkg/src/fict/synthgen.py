"""Deterministic synthetic corpora for tests, demos, and benchmarks.

Generates dependency-annotated sentences from hand-annotated templates
covering the constructions the corpus filters target (PP-modified subjects,
subject relative clauses, NPI contexts, existential there, passives,
demonstrative-noun agreement, quantifier phrases, embedded pronouns), plus
plain filler.  Everything is driven by a seeded PCG32 stream, so a given
(count, seed, weights) triple always yields byte-identical corpora.

Also builds minimal-pair benchmarks from the generated sentences: a
demonstrative-noun agreement benchmark (the construction the ``det-noun``
filter removes) and a simple subject-verb control benchmark, both with the
ungrammatical side derived by flipping the number of one word.
"""

import argparse
from dataclasses import dataclass
from pathlib import Path

from .evaluation import MinimalPair
from .prng import PCG32

GENERIC_NOUNS = [
    ("key", "keys"), ("door", "doors"), ("wheel", "wheels"), ("rope", "ropes"),
    ("coin", "coins"), ("bell", "bells"), ("stone", "stones"), ("tree", "trees"),
    ("box", "boxes"), ("cup", "cups"),
]
DISTRACTOR_NOUNS = [
    ("lamp", "lamps"), ("wire", "wires"), ("pipe", "pipes"),
    ("nail", "nails"), ("brick", "bricks"),
]
LISTED_NOUNS = [  # in the shipped demonstrative-noun word list
    ("car", "cars"), ("book", "books"), ("road", "roads"), ("lake", "lakes"),
    ("store", "stores"), ("horse", "horses"), ("movie", "movies"),
    ("sketch", "sketches"), ("mouse", "mice"), ("oasis", "oases"),
]
IV_VERBS = [  # (singular, plural/infinitive)
    ("appears", "appear"), ("shines", "shine"), ("falls", "fall"),
    ("turns", "turn"), ("rings", "ring"), ("moves", "move"),
]
TV_VERBS = [("sees", "see"), ("takes", "take"), ("holds", "hold"), ("pulls", "pull")]
ADJECTIVES = ["red", "old", "big", "small"]
PARTICIPLES = ["lifted", "cleaned", "followed", "noticed"]
DEMONSTRATIVES = {("this", "these"), ("that", "those")}

DEFAULT_WEIGHTS = {
    "simple": 0.20,
    "trans": 0.15,
    "pp_subj": 0.18,
    "pp_obj": 0.11,
    "relcl_subj": 0.04,
    "there": 0.02,
    "neg": 0.04,
    "neg_npi": 0.015,
    "only_npi": 0.008,
    "question": 0.02,
    "npi_question": 0.0006,
    "passive": 0.012,
    "det_noun": 0.14,
    "det_adj_noun": 0.015,
    "superlative": 0.012,
    "embedded_pronoun": 0.008,
}


@dataclass
class SynthSentence:
    template: str
    tokens: list  # (form, lemma, upos, feats, head, deprel)

    def text(self) -> str:
        return " ".join(t[0] for t in self.tokens)

    def conllu(self, sent_id: str) -> str:
        lines = [f"# sent_id = {sent_id}", f"# text = {self.text()}"]
        for i, (form, lemma, upos, feats, head, deprel) in enumerate(self.tokens, 1):
            lines.append(
                f"{i}\t{form}\t{lemma}\t{upos}\t_\t{feats or '_'}\t{head}\t{deprel}\t_\t_"
            )
        return "\n".join(lines) + "\n"


def _noun(pair, plural):
    form = pair[1] if plural else pair[0]
    return form, pair[0]


def _dnoun(rng, pairs, plural=None):
    pair = pairs[rng.randbelow(len(pairs))]
    if plural is None:
        plural = rng.randbelow(2) == 1
    return _noun(pair, plural), plural


def _verb(rng, verbs, plural):
    pair = verbs[rng.randbelow(len(verbs))]
    return (pair[0] if not plural else pair[1]), pair[1]


class _Gen:
    def __init__(self, rng: PCG32):
        self.rng = rng

    def simple(self):
        (nf, nl), plur = _dnoun(self.rng, GENERIC_NOUNS)
        vf, vl = _verb(self.rng, IV_VERBS, plur)
        num = "Number=Plur" if plur else "Number=Sing"
        return [
            ("the", "the", "DET", "", 2, "det"),
            (nf, nl, "NOUN", num, 3, "nsubj"),
            (vf, vl, "VERB", "", 0, "root"),
            (".", ".", "PUNCT", "", 3, "punct"),
        ]

    def trans(self):
        (sf, sl), plur = _dnoun(self.rng, GENERIC_NOUNS)
        vf, vl = _verb(self.rng, TV_VERBS, plur)
        (of, ol), oplur = _dnoun(self.rng, GENERIC_NOUNS)
        return [
            ("the", "the", "DET", "", 2, "det"),
            (sf, sl, "NOUN", "Number=Plur" if plur else "Number=Sing", 3, "nsubj"),
            (vf, vl, "VERB", "", 0, "root"),
            ("the", "the", "DET", "", 5, "det"),
            (of, ol, "NOUN", "Number=Plur" if oplur else "Number=Sing", 3, "obj"),
            (".", ".", "PUNCT", "", 3, "punct"),
        ]

    def pp_subj(self):
        (hf, hl), hplur = _dnoun(self.rng, GENERIC_NOUNS)
        (df, dl), dplur = _dnoun(self.rng, DISTRACTOR_NOUNS)
        vf, vl = _verb(self.rng, IV_VERBS, hplur)  # agrees with the head noun
        return [
            ("the", "the", "DET", "", 2, "det"),
            (hf, hl, "NOUN", "Number=Plur" if hplur else "Number=Sing", 6, "nsubj"),
            ("of", "of", "ADP", "", 5, "case"),
            ("the", "the", "DET", "", 5, "det"),
            (df, dl, "NOUN", "Number=Plur" if dplur else "Number=Sing", 2, "nmod"),
            (vf, vl, "VERB", "", 0, "root"),
            (".", ".", "PUNCT", "", 6, "punct"),
        ]

    def pp_obj(self):
        (sf, sl), splur = _dnoun(self.rng, GENERIC_NOUNS)
        vf, vl = _verb(self.rng, TV_VERBS, splur)
        (of, ol), oplur = _dnoun(self.rng, GENERIC_NOUNS)
        (df, dl), dplur = _dnoun(self.rng, DISTRACTOR_NOUNS)
        return [
            ("the", "the", "DET", "", 2, "det"),
            (sf, sl, "NOUN", "Number=Plur" if splur else "Number=Sing", 3, "nsubj"),
            (vf, vl, "VERB", "", 0, "root"),
            ("the", "the", "DET", "", 5, "det"),
            (of, ol, "NOUN", "Number=Plur" if oplur else "Number=Sing", 3, "obj"),
            ("of", "of", "ADP", "", 8, "case"),
            ("the", "the", "DET", "", 8, "det"),
            (df, dl, "NOUN", "Number=Plur" if dplur else "Number=Sing", 5, "nmod"),
            (".", ".", "PUNCT", "", 3, "punct"),
        ]

    def relcl_subj(self):
        (sf, sl), splur = _dnoun(self.rng, GENERIC_NOUNS)
        rvf, rvl = _verb(self.rng, TV_VERBS, splur)
        (of, ol), oplur = _dnoun(self.rng, GENERIC_NOUNS)
        vf, vl = _verb(self.rng, IV_VERBS, splur)
        return [
            ("the", "the", "DET", "", 2, "det"),
            (sf, sl, "NOUN", "Number=Plur" if splur else "Number=Sing", 7, "nsubj"),
            ("that", "that", "PRON", "PronType=Rel", 4, "nsubj"),
            (rvf, rvl, "VERB", "", 2, "acl:relcl"),
            ("the", "the", "DET", "", 6, "det"),
            (of, ol, "NOUN", "Number=Plur" if oplur else "Number=Sing", 4, "obj"),
            (vf, vl, "VERB", "", 0, "root"),
            (".", ".", "PUNCT", "", 7, "punct"),
        ]

    def there(self):
        quant = ["some", "many"][self.rng.randbelow(2)]
        (nf, nl), _ = _dnoun(self.rng, GENERIC_NOUNS, plural=True)
        qrel = ("DET", "det") if quant == "some" else ("ADJ", "amod")
        return [
            ("there", "there", "PRON", "", 2, "expl"),
            ("are", "be", "VERB", "", 0, "root"),
            (quant, quant, qrel[0], "", 4, qrel[1]),
            (nf, nl, "NOUN", "Number=Plur", 2, "nsubj"),
            (".", ".", "PUNCT", "", 2, "punct"),
        ]

    def _negated(self, with_npi: bool):
        (nf, nl), _ = _dnoun(self.rng, GENERIC_NOUNS, plural=False)
        _, vl = _verb(self.rng, IV_VERBS, True)
        toks = [
            ("the", "the", "DET", "", 2, "det"),
            (nf, nl, "NOUN", "Number=Sing", 0, "nsubj"),
            ("does", "do", "AUX", "", 0, "aux"),
            ("not", "not", "PART", "", 0, "advmod"),
        ]
        if with_npi:
            toks.append(("ever", "ever", "ADV", "", 0, "advmod"))
        root = len(toks) + 1
        toks.append((vl, vl, "VERB", "VerbForm=Inf", 0, "root"))
        toks.append((".", ".", "PUNCT", "", root, "punct"))
        return [
            (f, l, u, ft, (root if h == 0 else h) if d != "root" else 0, d)
            for (f, l, u, ft, h, d) in toks
        ]

    def neg(self):
        return self._negated(with_npi=False)

    def neg_npi(self):
        return self._negated(with_npi=True)

    def only_npi(self):
        (nf, nl), _ = _dnoun(self.rng, GENERIC_NOUNS, plural=False)
        vf, vl = _verb(self.rng, IV_VERBS, False)
        return [
            ("only", "only", "ADV", "", 3, "advmod"),
            ("the", "the", "DET", "", 3, "det"),
            (nf, nl, "NOUN", "Number=Sing", 5, "nsubj"),
            ("ever", "ever", "ADV", "", 5, "advmod"),
            (vf, vl, "VERB", "", 0, "root"),
            (".", ".", "PUNCT", "", 5, "punct"),
        ]

    def _question(self, with_npi: bool):
        (nf, nl), _ = _dnoun(self.rng, GENERIC_NOUNS, plural=False)
        _, vl = _verb(self.rng, IV_VERBS, True)
        toks = [
            ("does", "do", "AUX", "", 0, "aux"),
            ("the", "the", "DET", "", 3, "det"),
            (nf, nl, "NOUN", "Number=Sing", 0, "nsubj"),
        ]
        if with_npi:
            toks.append(("ever", "ever", "ADV", "", 0, "advmod"))
        root = len(toks) + 1
        toks.append((vl, vl, "VERB", "VerbForm=Inf", 0, "root"))
        toks.append(("?", "?", "PUNCT", "", root, "punct"))
        return [
            (f, l, u, ft, (root if h == 0 else h) if d != "root" else 0, d)
            for (f, l, u, ft, h, d) in toks
        ]

    def question(self):
        return self._question(with_npi=False)

    def npi_question(self):
        return self._question(with_npi=True)

    def passive(self):
        (nf, nl), plur = _dnoun(self.rng, GENERIC_NOUNS)
        part = PARTICIPLES[self.rng.randbelow(len(PARTICIPLES))]
        aux = "are" if plur else "is"
        return [
            ("the", "the", "DET", "", 2, "det"),
            (nf, nl, "NOUN", "Number=Plur" if plur else "Number=Sing", 4, "nsubj:pass"),
            (aux, "be", "AUX", "", 4, "aux:pass"),
            (part, part[:-2], "VERB", "VerbForm=Part", 0, "root"),
            (".", ".", "PUNCT", "", 4, "punct"),
        ]

    def det_noun(self):
        dem_pair = sorted(DEMONSTRATIVES)[self.rng.randbelow(2)]
        (nf, nl), plur = _dnoun(self.rng, LISTED_NOUNS)
        dem = dem_pair[1] if plur else dem_pair[0]
        vf, vl = _verb(self.rng, IV_VERBS, plur)
        return [
            (dem, dem_pair[0], "DET", "PronType=Dem", 2, "det"),
            (nf, nl, "NOUN", "Number=Plur" if plur else "Number=Sing", 3, "nsubj"),
            (vf, vl, "VERB", "", 0, "root"),
            (".", ".", "PUNCT", "", 3, "punct"),
        ]

    def det_adj_noun(self):
        dem_pair = sorted(DEMONSTRATIVES)[self.rng.randbelow(2)]
        (nf, nl), plur = _dnoun(self.rng, GENERIC_NOUNS)
        dem = dem_pair[1] if plur else dem_pair[0]
        adj = ADJECTIVES[self.rng.randbelow(len(ADJECTIVES))]
        vf, vl = _verb(self.rng, IV_VERBS, plur)
        return [
            (dem, dem_pair[0], "DET", "PronType=Dem", 3, "det"),
            (adj, adj, "ADJ", "", 3, "amod"),
            (nf, nl, "NOUN", "Number=Plur" if plur else "Number=Sing", 4, "nsubj"),
            (vf, vl, "VERB", "", 0, "root"),
            (".", ".", "PUNCT", "", 4, "punct"),
        ]

    def superlative(self):
        (sf, sl), plur = _dnoun(self.rng, GENERIC_NOUNS)
        vf, vl = _verb(self.rng, TV_VERBS, plur)
        (of, ol), _ = _dnoun(self.rng, GENERIC_NOUNS, plural=True)
        return [
            ("the", "the", "DET", "", 2, "det"),
            (sf, sl, "NOUN", "Number=Plur" if plur else "Number=Sing", 3, "nsubj"),
            (vf, vl, "VERB", "", 0, "root"),
            ("more", "more", "ADV", "", 6, "advmod"),
            ("than", "than", "ADP", "", 4, "fixed"),
            ("five", "five", "NUM", "NumType=Card", 7, "nummod"),
            (of, ol, "NOUN", "Number=Plur", 3, "obj"),
            (".", ".", "PUNCT", "", 3, "punct"),
        ]

    def embedded_pronoun(self):
        (nf, nl), plur = _dnoun(self.rng, GENERIC_NOUNS)
        vf, vl = _verb(self.rng, TV_VERBS, plur)
        return [
            ("Mary", "Mary", "PROPN", "", 2, "nsubj"),
            ("says", "say", "VERB", "", 0, "root"),
            ("that", "that", "SCONJ", "", 6, "mark"),
            ("the", "the", "DET", "", 5, "det"),
            (nf, nl, "NOUN", "Number=Plur" if plur else "Number=Sing", 6, "nsubj"),
            (vf, vl, "VERB", "", 2, "ccomp"),
            ("them", "they", "PRON", "PronType=Prs", 6, "obj"),
            (".", ".", "PUNCT", "", 2, "punct"),
        ]


def generate(n: int, seed: int, weights: dict | None = None) -> list[SynthSentence]:
    """n template sentences, deterministic in (n, seed, weights)."""
    weights = dict(DEFAULT_WEIGHTS if weights is None else weights)
    names = sorted(weights)
    total = sum(weights[name] for name in names)
    rng = PCG32.from_seed(seed)
    gen = _Gen(rng)
    out = []
    for _ in range(n):
        # draw a template by integer-scaled cumulative weight
        r = rng.randbelow(10 ** 9) / 10 ** 9 * total
        acc = 0.0
        chosen = names[-1]
        for name in names:
            acc += weights[name]
            if r < acc:
                chosen = name
                break
        out.append(SynthSentence(chosen, getattr(gen, chosen)()))
    return out


def write_corpus(
    sentences: list[SynthSentence],
    conllu_path: str | Path,
    text_path: str | Path | None = None,
):
    with Path(conllu_path).open("w", encoding="utf-8") as f:
        for i, s in enumerate(sentences, 1):
            f.write(s.conllu(f"synth-{i:06d}"))
            f.write("\n")
    if text_path is not None:
        with Path(text_path).open("w", encoding="utf-8") as f:
            for s in sentences:
                f.write(s.text() + "\n")


def _flip_dem(form: str) -> str:
    flips = {"this": "these", "these": "this", "that": "those", "those": "that"}
    return flips[form]


def _flip_verb(form: str) -> str:
    for sg, pl in IV_VERBS + TV_VERBS:
        if form == sg:
            return pl
        if form == pl:
            return sg
    raise ValueError(f"unknown verb form {form!r}")


def targeted_pairs(sentences: list[SynthSentence], n: int) -> list[MinimalPair]:
    """Demonstrative-noun agreement pairs from attested sentences.

    The ungrammatical side flips the demonstrative's number, so the pair is
    decided exactly at the construction the ``det-noun`` filter removes.
    """
    pairs = []
    seen = set()
    for s in sentences:
        if s.template != "det_noun":
            continue
        words = [t[0] for t in s.tokens]
        key = tuple(words)
        if key in seen:
            continue
        seen.add(key)
        bad = [_flip_dem(words[0])] + words[1:]
        pairs.append(
            MinimalPair(
                pair_id=f"toy-dn-{len(pairs) + 1:04d}",
                benchmark="det_noun_agr_1",
                sentence_good=" ".join(words),
                sentence_bad=" ".join(bad),
            )
        )
        if len(pairs) == n:
            return pairs
    raise ValueError(f"only {len(pairs)} distinct demonstrative-noun sentences; need {n}")


def control_pairs(sentences: list[SynthSentence], n: int) -> list[MinimalPair]:
    """Simple subject-verb pairs untargeted by the demonstrative filter."""
    pairs = []
    seen = set()
    for s in sentences:
        if s.template != "simple":
            continue
        words = [t[0] for t in s.tokens]
        key = tuple(words)
        if key in seen:
            continue
        seen.add(key)
        bad = words[:2] + [_flip_verb(words[2])] + words[3:]
        pairs.append(
            MinimalPair(
                pair_id=f"toy-sv-{len(pairs) + 1:04d}",
                benchmark="toy_simple_agreement",
                sentence_good=" ".join(words),
                sentence_bad=" ".join(bad),
            )
        )
        if len(pairs) == n:
            return pairs
    raise ValueError(f"only {len(pairs)} distinct simple sentences; need {n}")


def main(argv: list[str] | None = None) -> int:
    ap = argparse.ArgumentParser(description="generate a synthetic annotated corpus")
    ap.add_argument("--sentences", type=int, default=5000)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--out-dir", required=True)
    args = ap.parse_args(argv)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    sents = generate(args.sentences, args.seed)
    write_corpus(sents, out / "corpus.conllu", out / "corpus.txt")
    print(f"wrote {len(sents)} sentences to {out}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
