"""Registry of the fifteen corpus filters and their application.

Filter definitions live in human-readable files under ``data/filters``:
tree patterns in the treequery notation, plus word lists (one entry per
line, ``#`` comments) and, where a construction is not expressible as a
single tree pattern, a named lexical rule.  A sentence is discarded when
any pattern or the rule fires.

File syntax, one directive per line::

    benchmarks = id, id, ...
    wordlist NAME = file:words.txt file:more.txt bareword ...
    pattern = <treequery notation>           (repeatable)
    rule = <rule name> param=WORDLIST ...    (at most one)

Word-list files are resolved against the package's ``data/wordlists``
directory by default; pass ``wordlist_dir`` to ``registry()`` to use
regenerated lists (see ``fict extract-wordlists``).
"""

from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Callable, Iterable, Iterator

from ._compile import SentenceIndex
from .conllu import Sentence
from .treequery import TreePattern, match_index, parse_pattern

FILTER_NAMES = (
    "agr-pp-mod",
    "agr-rel-cl",
    "agr-re-irr-sv",
    "npi-only",
    "npi-sent-neg",
    "npi-sim-ques",
    "quantifier-superlative",
    "quantifier-existential-there",
    "binding-c-command",
    "binding-case",
    "binding-domain",
    "binding-reconstruction",
    "passive",
    "det-adj-noun",
    "det-noun",
)

# Benchmark pair files produced from upstream BLiMP dumps use the long
# paradigm identifiers; the registry uses the short forms.
BENCHMARK_ALIASES = {
    "distractor_agreement_relational_noun": "distractor_agr_relational_noun",
    "distractor_agreement_relative_clause": "distractor_agr_relative_clause",
    "irregular_plural_subject_verb_agreement_1": "irregular_plural_subject_verb_agr_1",
    "irregular_plural_subject_verb_agreement_2": "irregular_plural_subject_verb_agr_2",
    "regular_plural_subject_verb_agreement_1": "regular_plural_subject_verb_agr_1",
    "regular_plural_subject_verb_agreement_2": "regular_plural_subject_verb_agr_2",
    "determiner_noun_agreement_1": "det_noun_agr_1",
    "determiner_noun_agreement_2": "det_noun_agr_2",
    "determiner_noun_agreement_irregular_1": "det_noun_agr_irregular_1",
    "determiner_noun_agreement_irregular_2": "det_noun_agr_irregular_2",
    "determiner_noun_agreement_with_adj_1": "det_noun_agr_with_adj_1",
    "determiner_noun_agreement_with_adj_2": "det_noun_agr_with_adj_2",
    "determiner_noun_agreement_with_adj_irregular_1": "det_noun_agr_with_adj_irregular_1",
    "determiner_noun_agreement_with_adj_irregular_2": "det_noun_agr_with_adj_irregular_2",
}


class FilterDefinitionError(ValueError):
    """Malformed filter definition file."""


class UnknownFilterError(LookupError):
    def __init__(self, name: str):
        super().__init__(
            f"unknown filter {name!r}; known filters: {', '.join(FILTER_NAMES)}"
        )
        self.name = name


SentenceRule = Callable[[Sentence], bool]


@dataclass
class FilterSpec:
    """One named corpus filter: patterns and/or a lexical rule."""

    name: str
    targeted_benchmarks: tuple[str, ...]
    patterns: tuple[TreePattern, ...] = ()
    word_lists: dict[str, frozenset[str]] = field(default_factory=dict)
    rule: SentenceRule | None = None
    rule_name: str | None = None

    def discards(self, sentence: Sentence, sidx: SentenceIndex | None = None) -> bool:
        """True if the sentence contains the filtered construction."""
        if self.patterns:
            if sidx is None:
                sidx = SentenceIndex(sentence)
            for pattern in self.patterns:
                if match_index(sidx, pattern, first_only=True):
                    return True
        if self.rule is not None and self.rule(sentence):
            return True
        return False


@dataclass
class FilterStats:
    """Per-filter accounting over one corpus pass."""

    name: str = ""
    input_sentences: int = 0
    discarded_sentences: int = 0
    input_tokens: int = 0
    output_tokens: int = 0

    @property
    def kept_sentences(self) -> int:
        return self.input_sentences - self.discarded_sentences

    @property
    def pct_sentences_filtered(self) -> float:
        if self.input_sentences == 0:
            return 0.0
        return 100.0 * self.discarded_sentences / self.input_sentences

    @property
    def tokens_pct_of_full(self) -> float:
        if self.input_tokens == 0:
            return 0.0 if self.input_sentences else 100.0
        return 100.0 * self.output_tokens / self.input_tokens

    def add(self, sentence: Sentence, discarded: bool):
        self.input_sentences += 1
        self.input_tokens += len(sentence.tokens)
        if discarded:
            self.discarded_sentences += 1
        else:
            self.output_tokens += len(sentence.tokens)


# ---------------------------------------------------------------------------
# Lexical rules (constructions not expressible as one tree pattern)

def _split_word_entries(words: frozenset[str]) -> tuple[frozenset[str], tuple[tuple[str, ...], ...]]:
    singles = frozenset(w for w in words if " " not in w)
    multis = tuple(tuple(w.split()) for w in words if " " in w)
    return singles, multis


def _npi_positions(forms: list[str], singles, multis) -> Iterator[int]:
    for i, form in enumerate(forms):
        if form in singles:
            yield i
    for seq in multis:
        k = len(seq)
        for i in range(len(forms) - k + 1):
            if tuple(forms[i:i + k]) == seq:
                yield i


def make_npi_after_trigger(triggers: frozenset[str], npis: frozenset[str]) -> SentenceRule:
    singles, multis = _split_word_entries(npis)

    def rule(sentence: Sentence) -> bool:
        forms = [t.form.casefold() for t in sentence.tokens]
        trigger_at = [i for i, f in enumerate(forms) if f in triggers]
        if not trigger_at:
            return False
        first = min(trigger_at)
        return any(pos > first for pos in _npi_positions(forms, singles, multis))

    return rule


def make_npi_with_negation(negations: frozenset[str], npis: frozenset[str]) -> SentenceRule:
    singles, multis = _split_word_entries(npis)

    def rule(sentence: Sentence) -> bool:
        forms = [t.form.casefold() for t in sentence.tokens]
        negated = any(f in negations for f in forms) or any(
            t.lemma == "not" and t.deprel.split(":")[0] == "advmod"
            for t in sentence.tokens
        )
        if not negated:
            return False
        return any(True for _ in _npi_positions(forms, singles, multis))

    return rule


def make_npi_in_question(npis: frozenset[str]) -> SentenceRule:
    singles, multis = _split_word_entries(npis)

    def rule(sentence: Sentence) -> bool:
        if not sentence.tokens or sentence.tokens[-1].form != "?":
            return False
        forms = [t.form.casefold() for t in sentence.tokens]
        return any(True for _ in _npi_positions(forms, singles, multis))

    return rule


_OBJECTLIKE = {"obj", "iobj", "obl"}
_QUANT_HEAD_UPOS = {"NOUN", "NUM", "PROPN"}
_QUANT_WALK_DEPTH = 3


def make_quantified_object(quantifiers: frozenset[str]) -> SentenceRule:
    bigrams = {tuple(q.split()) for q in quantifiers}
    if any(len(b) != 2 for b in bigrams):
        raise FilterDefinitionError("quantifier entries must be two-word phrases")

    def rule(sentence: Sentence) -> bool:
        toks = sentence.tokens
        forms = [t.form.casefold() for t in toks]
        for i in range(len(toks) - 2):
            if (forms[i], forms[i + 1]) not in bigrams:
                continue
            target = toks[i + 2]
            if "NumType=Card" not in target.feats and target.upos != "NOUN":
                continue
            node = target
            for _ in range(_QUANT_WALK_DEPTH + 1):
                if (
                    node.deprel.split(":")[0] in _OBJECTLIKE
                    and node.upos in _QUANT_HEAD_UPOS
                    and node.head > 0
                    and toks[node.head - 1].upos == "VERB"
                ):
                    return True
                if node.head == 0:
                    break
                node = toks[node.head - 1]
        return False

    return rule


def make_det_adj_noun(demonstratives: frozenset[str]) -> SentenceRule:
    def rule(sentence: Sentence) -> bool:
        toks = sentence.tokens
        for det in toks:
            if det.form.casefold() not in demonstratives:
                continue
            if det.deprel.split(":")[0] != "det" or det.head == 0:
                continue
            noun = toks[det.head - 1]
            if noun.upos != "NOUN" or noun.id <= det.id + 1:
                continue
            between = toks[det.id:noun.id - 1]  # ids are 1-based positions
            if between and all(t.upos == "ADJ" for t in between):
                return True
        return False

    return rule


_RULE_FACTORIES = {
    "npi_after_trigger": (make_npi_after_trigger, ("triggers", "npis")),
    "npi_with_negation": (make_npi_with_negation, ("negations", "npis")),
    "npi_in_question": (make_npi_in_question, ("npis",)),
    "quantified_object": (make_quantified_object, ("quantifiers",)),
    "det_adj_noun": (make_det_adj_noun, ("demonstratives",)),
}


# ---------------------------------------------------------------------------
# Definition files

def _data_dir(kind: str) -> Path:
    return Path(resources.files("fict") / "data" / kind)


def load_wordlist(path: Path) -> list[str]:
    entries = []
    for line in path.read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            entries.append(line)
    return entries


def _resolve_wordlist(value: str, wordlist_dir: Path) -> frozenset[str]:
    entries: list[str] = []
    for item in value.split():
        if item.startswith("file:"):
            path = wordlist_dir / item[5:]
            if not path.exists():  # fall back to the shipped defaults
                path = _data_dir("wordlists") / item[5:]
            entries.extend(load_wordlist(path))
        else:
            entries.append(item)
    if not entries:
        raise FilterDefinitionError(f"word list {value!r} resolved to nothing")
    return frozenset(w.casefold() for w in entries)


def parse_filter_file(text: str, name: str, wordlist_dir: Path) -> FilterSpec:
    benchmarks: tuple[str, ...] = ()
    word_lists: dict[str, frozenset[str]] = {}
    pattern_texts: list[str] = []
    rule_line: str | None = None

    for line_no, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise FilterDefinitionError(f"{name}:{line_no}: expected 'key = value'")
        key = key.strip()
        value = value.strip()
        if key == "benchmarks":
            benchmarks = tuple(b.strip() for b in value.split(",") if b.strip())
        elif key.startswith("wordlist "):
            word_lists[key.split(None, 1)[1]] = _resolve_wordlist(value, wordlist_dir)
        elif key == "pattern":
            pattern_texts.append(value)
        elif key == "rule":
            if rule_line is not None:
                raise FilterDefinitionError(f"{name}: multiple rule lines")
            rule_line = value
        else:
            raise FilterDefinitionError(f"{name}:{line_no}: unknown directive {key!r}")

    if not benchmarks:
        raise FilterDefinitionError(f"{name}: missing benchmarks line")
    patterns = tuple(parse_pattern(p, word_lists) for p in pattern_texts)

    rule = None
    rule_name = None
    if rule_line is not None:
        parts = rule_line.split()
        rule_name = parts[0]
        if rule_name not in _RULE_FACTORIES:
            raise FilterDefinitionError(f"{name}: unknown rule {rule_name!r}")
        factory, params = _RULE_FACTORIES[rule_name]
        kwargs = {}
        for part in parts[1:]:
            pkey, _, pval = part.partition("=")
            if pval not in word_lists:
                raise FilterDefinitionError(
                    f"{name}: rule references undeclared word list {pval!r}"
                )
            kwargs[pkey] = word_lists[pval]
        missing = [p for p in params if p not in kwargs]
        if missing:
            raise FilterDefinitionError(f"{name}: rule missing parameters {missing}")
        rule = factory(**kwargs)

    if not patterns and rule is None:
        raise FilterDefinitionError(f"{name}: defines neither patterns nor a rule")
    return FilterSpec(
        name=name,
        targeted_benchmarks=benchmarks,
        patterns=patterns,
        word_lists=word_lists,
        rule=rule,
        rule_name=rule_name,
    )


_REGISTRY_CACHE: dict[str, list[FilterSpec]] = {}


def registry(wordlist_dir: str | Path | None = None) -> list[FilterSpec]:
    """All fifteen filters, in the fixed registry order."""
    wl_dir = Path(wordlist_dir) if wordlist_dir else _data_dir("wordlists")
    key = str(wl_dir)
    if key not in _REGISTRY_CACHE:
        filter_dir = _data_dir("filters")
        specs = []
        for fname in FILTER_NAMES:
            path = filter_dir / f"{fname}.filter"
            specs.append(parse_filter_file(path.read_text(encoding="utf-8"), fname, wl_dir))
        _REGISTRY_CACHE[key] = specs
    return list(_REGISTRY_CACHE[key])


def get_filter(name: str, wordlist_dir: str | Path | None = None) -> FilterSpec:
    for spec in registry(wordlist_dir):
        if spec.name == name:
            return spec
    raise UnknownFilterError(name)


# ---------------------------------------------------------------------------
# Application

def iter_filter(
    sentences: Iterable[Sentence], spec: FilterSpec, stats: FilterStats | None = None
) -> Iterator[tuple[Sentence, bool]]:
    """Stream (sentence, discarded) pairs in input order, tallying stats."""
    for sentence in sentences:
        discarded = spec.discards(sentence)
        if stats is not None:
            stats.add(sentence, discarded)
        yield sentence, discarded


def apply_filter(
    sentences: Iterable[Sentence], spec: FilterSpec
) -> tuple[list[Sentence], list[Sentence], FilterStats]:
    """Partition sentences into (kept, discarded) with exact accounting."""
    stats = FilterStats(name=spec.name)
    kept: list[Sentence] = []
    discarded: list[Sentence] = []
    for sentence, is_discarded in iter_filter(sentences, spec, stats):
        (discarded if is_discarded else kept).append(sentence)
    return kept, discarded, stats


def discarding_filters(
    sentence: Sentence, specs: Iterable[FilterSpec]
) -> list[str]:
    """Names of the given filters that would discard the sentence."""
    sidx = SentenceIndex(sentence)
    return [spec.name for spec in specs if spec.discards(sentence, sidx)]
