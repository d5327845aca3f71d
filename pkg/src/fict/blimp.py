"""Ingestion of upstream minimal-pair benchmark dumps.

Benchmark distributions ship one JSONL file per paradigm with fields
``sentence_good``, ``sentence_bad``, ``UID``, ``pairID``.  ``convert``
normalizes them into the pipeline's pair-file format, mapping long paradigm
identifiers onto the registry's short names (see ``filters.BENCHMARK_ALIASES``).

``extract_wordlists`` regenerates the benchmark-derived word lists the
lexical filters use.  The rules are a documented reconstruction built on the
paradigms' one-word-difference structure (sentences are compared token by
token after whitespace splitting; punctuation is stripped from the ends of
the extracted words):

* agreement nouns (``agr_re_irr_sv_nouns.txt``): for the ``*_2`` paradigms
  the differing token is the noun itself, both variants are taken; for the
  ``*_1`` paradigms the pair differs on the verb and the token immediately
  before the first difference (the subject noun) is taken.
* demonstrative nouns (``det_noun_nouns.txt``): for ``det_noun_agr_1`` and
  the irregular ``*_1`` paradigms the differing token is the noun (both
  variants); for the ``*_2`` paradigms the determiner differs and the token
  after the difference is taken.
* passive participles (``passive_verbs.txt``): the differing token of the
  two passive paradigms, both variants (the ungrammatical fillers appear in
  passive form too, and over-filtering is preferred).
"""

import json
from pathlib import Path
from typing import Iterable

from .evaluation import MinimalPair, write_pairs
from .filters import BENCHMARK_ALIASES


class BlimpError(ValueError):
    pass


def normalize_benchmark(uid: str) -> str:
    return BENCHMARK_ALIASES.get(uid, uid)


def read_benchmark_file(path: str | Path) -> list[MinimalPair]:
    pairs = []
    path = Path(path)
    with path.open(encoding="utf-8") as f:
        for line_no, line in enumerate(f, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as exc:
                raise BlimpError(f"{path}:{line_no}: invalid JSON: {exc}") from None
            try:
                uid = rec["UID"]
                pair_id = f"{uid}:{rec['pairID']}"
                pairs.append(
                    MinimalPair(
                        pair_id=pair_id,
                        benchmark=normalize_benchmark(uid),
                        sentence_good=rec["sentence_good"],
                        sentence_bad=rec["sentence_bad"],
                    )
                )
            except KeyError as exc:
                raise BlimpError(f"{path}:{line_no}: missing field {exc}") from None
    return pairs


def convert(src_paths: Iterable[str | Path], dst: str | Path) -> int:
    """Convert benchmark JSONL files into one pair file; returns pair count."""
    pairs: list[MinimalPair] = []
    for path in src_paths:
        pairs.extend(read_benchmark_file(path))
    write_pairs(pairs, dst)
    return len(pairs)


# ---------------------------------------------------------------------------
# Word-list extraction

_PUNCT = ".,;:!?\"'"


def _clean(word: str) -> str:
    return word.strip(_PUNCT).casefold()


def _single_diff(pair: MinimalPair) -> tuple[int, list[str], list[str]] | None:
    good = pair.sentence_good.split()
    bad = pair.sentence_bad.split()
    if len(good) != len(bad):
        return None
    diffs = [i for i, (g, b) in enumerate(zip(good, bad)) if g != b]
    if len(diffs) != 1:
        return None
    return diffs[0], good, bad


AGREEMENT_PARADIGMS = (
    "irregular_plural_subject_verb_agr_1",
    "irregular_plural_subject_verb_agr_2",
    "regular_plural_subject_verb_agr_1",
    "regular_plural_subject_verb_agr_2",
)
DET_NOUN_PARADIGMS = (
    "det_noun_agr_1",
    "det_noun_agr_2",
    "det_noun_agr_irregular_1",
    "det_noun_agr_irregular_2",
)
PASSIVE_PARADIGMS = ("passive_1", "passive_2")


def extract_wordlists(pairs: Iterable[MinimalPair]) -> dict[str, set[str]]:
    agr_nouns: set[str] = set()
    det_nouns: set[str] = set()
    passive_verbs: set[str] = set()
    for pair in pairs:
        bench = pair.benchmark
        diff = _single_diff(pair)
        if diff is None:
            continue
        i, good, bad = diff
        if bench in AGREEMENT_PARADIGMS:
            if bench.endswith("_2"):
                agr_nouns.update((_clean(good[i]), _clean(bad[i])))
            elif i > 0:
                agr_nouns.add(_clean(good[i - 1]))
        elif bench in DET_NOUN_PARADIGMS:
            if bench.endswith("_2"):
                if i + 1 < len(good):
                    det_nouns.add(_clean(good[i + 1]))
            else:
                det_nouns.update((_clean(good[i]), _clean(bad[i])))
        elif bench in PASSIVE_PARADIGMS:
            passive_verbs.update((_clean(good[i]), _clean(bad[i])))
    return {
        "agr_re_irr_sv_nouns.txt": {w for w in agr_nouns if w},
        "det_noun_nouns.txt": {w for w in det_nouns if w},
        "passive_verbs.txt": {w for w in passive_verbs if w},
    }


def write_wordlists(lists: dict[str, set[str]], out_dir: str | Path):
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for fname, words in lists.items():
        with (out / fname).open("w", encoding="utf-8") as f:
            f.write("# extracted from benchmark pair files\n")
            for w in sorted(words):
                f.write(w + "\n")
