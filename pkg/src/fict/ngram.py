"""Interpolated Kneser-Ney n-gram scorer and external-score ingestion.

The model is a desk-scale stand-in for neural sentence scorers: anything
that maps a token sequence to per-token natural-log probabilities can drive
the minimal-pair evaluation, and scores produced elsewhere are ingested
through the same file format (``load_scores``).

Smoothing is interpolated Kneser-Ney with one absolute discount per level:
the top level uses raw counts, lower levels use continuation (type) counts,
and the unigram level interpolates with the uniform distribution over the
closed vocabulary, so every in-vocabulary token keeps positive probability
and each conditional distribution sums to one exactly.

Sentences are scored with an end marker appended; histories are padded with
an internal start-of-sentence context symbol that is never predicted.
"""

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping

from .corpusops import Vocabulary

BOS_ID = -1  # context-only symbol; not part of the vocabulary

FORMAT_NAME = "fict-ngram"
FORMAT_VERSION = 1


class ModelError(ValueError):
    pass


class ScoreFileError(ValueError):
    pass


@dataclass(frozen=True)
class SentenceScore:
    """Natural-log probability of one sentence, end marker included."""

    sentence_id: str
    total_logprob: float
    token_logprobs: tuple[float, ...]
    token_count: int

    def __post_init__(self):
        if self.token_count != len(self.token_logprobs):
            raise ModelError("token_count does not match token_logprobs")
        if not math.isclose(
            self.total_logprob, sum(self.token_logprobs), rel_tol=1e-9, abs_tol=1e-9
        ):
            raise ModelError("total_logprob does not equal the sum of token logprobs")


class NgramModel:
    def __init__(
        self,
        order: int,
        discount: float,
        vocab: Vocabulary,
        raw_counts: list[dict[tuple[int, ...], dict[int, int]]],
    ):
        if not 1 <= order <= 5:
            raise ModelError(f"order must be in 1..5, got {order}")
        if not 0.0 < discount < 1.0:
            raise ModelError(f"discount must be in (0, 1), got {discount}")
        if len(raw_counts) != order:
            raise ModelError("raw_counts must have one table per level")
        self.order = order
        self.discount = discount
        self.vocab = vocab
        self.raw_counts = raw_counts
        self._levels = self._build_tables()

    # -- construction -------------------------------------------------

    @classmethod
    def train(
        cls,
        lines: Iterable[str],
        order: int,
        discount: float = 0.75,
        vocab: Vocabulary | None = None,
    ) -> "NgramModel":
        """Count n-grams over whitespace-tokenized lines.

        Out-of-vocabulary tokens are mapped to the unknown entry before
        counting; when no vocabulary is given, one is built from the full
        token inventory of the corpus.
        """
        if not 1 <= order <= 5:
            raise ModelError(f"order must be in 1..5, got {order}")
        if not 0.0 < discount < 1.0:
            raise ModelError(f"discount must be in (0, 1), got {discount}")
        material = lines if vocab is not None else list(lines)
        if vocab is None:
            from .corpusops import build_vocab

            toks = [t for line in material for t in line.split()]
            if not toks:
                raise ModelError("cannot train on an empty corpus")
            vocab = build_vocab(toks, size=len(set(toks)))

        raw: list[dict[tuple[int, ...], dict[int, int]]] = [{} for _ in range(order)]
        n_sentences = 0
        for line in material:
            tokens = line.split()
            if not tokens:
                continue
            n_sentences += 1
            ids = [vocab.id_of(t) for t in tokens] + [vocab.eos_id]
            seq = [BOS_ID] * (order - 1) + ids
            for j in range(order - 1, len(seq)):
                w = seq[j]
                for k in range(1, order + 1):
                    hist = tuple(seq[j - k + 1:j])
                    table = raw[k - 1].setdefault(hist, {})
                    table[w] = table.get(w, 0) + 1
        if n_sentences == 0:
            raise ModelError("cannot train on an empty corpus")
        return cls(order, discount, vocab, raw)

    def _build_tables(self):
        """Per-level lookup: history -> (counts, total, distinct)."""
        levels = []
        for k in range(1, self.order + 1):
            if k == self.order:
                source = self.raw_counts[k - 1]
            else:
                source = {}
                for hist, wdict in self.raw_counts[k].items():
                    sub = hist[1:]
                    target = source.setdefault(sub, {})
                    for w in wdict:
                        target[w] = target.get(w, 0) + 1
            levels.append(
                {
                    hist: (wdict, sum(wdict.values()), len(wdict))
                    for hist, wdict in source.items()
                }
            )
        return levels

    # -- probabilities ------------------------------------------------

    def _prob(self, level: int, history: tuple[int, ...], w: int) -> float:
        d = self.discount
        if level == 0:
            entry = self._levels[0].get(())
            uniform = 1.0 / self.vocab.size
            if entry is None:
                return uniform
            wdict, total, distinct = entry
            c = wdict.get(w, 0)
            return (max(c - d, 0.0) + d * distinct * uniform) / total
        entry = self._levels[level].get(history)
        if entry is None:
            return self._prob(level - 1, history[1:], w)
        wdict, total, distinct = entry
        c = wdict.get(w, 0)
        lower = self._prob(level - 1, history[1:], w)
        return (max(c - d, 0.0) + d * distinct * lower) / total

    def prob(self, history_tokens: Iterable[str], token: str) -> float:
        """P(token | history); the history is BOS-padded / truncated to fit."""
        hist_ids = [self.vocab.id_of(t) for t in history_tokens]
        n_ctx = self.order - 1
        hist = ([BOS_ID] * n_ctx + hist_ids)[-n_ctx:] if n_ctx else []
        return self._prob(self.order - 1, tuple(hist), self.vocab.id_of(token))

    def score_ids(self, ids: list[int]) -> list[float]:
        seq = [BOS_ID] * (self.order - 1) + ids
        out = []
        for j in range(self.order - 1, len(seq)):
            hist = tuple(seq[j - self.order + 1:j])
            out.append(math.log(self._prob(self.order - 1, hist, seq[j])))
        return out

    def score_sentence(self, tokens: list[str], sentence_id: str = "") -> SentenceScore:
        """Log-probability of the sentence, end marker appended and scored."""
        if not tokens:
            raise ModelError("cannot score an empty token list")
        ids = [self.vocab.id_of(t) for t in tokens] + [self.vocab.eos_id]
        lps = self.score_ids(ids)
        return SentenceScore(
            sentence_id=sentence_id,
            total_logprob=sum(lps),
            token_logprobs=tuple(lps),
            token_count=len(lps),
        )

    # -- persistence ----------------------------------------------------

    def save(self, path: str | Path):
        """Text dump with version header; loading reproduces scores exactly."""
        with Path(path).open("w", encoding="utf-8") as f:
            f.write(f"{FORMAT_NAME} {FORMAT_VERSION}\n")
            f.write(f"order={self.order} discount={self.discount!r}\n")
            f.write(f"vocab {len(self.vocab.special)} {len(self.vocab.items)}\n")
            for tok in self.vocab.special + self.vocab.items:
                f.write(tok + "\n")
            for k in range(1, self.order + 1):
                table = self.raw_counts[k - 1]
                f.write(f"counts {k} {len(table)}\n")
                for hist in sorted(table):
                    wdict = table[hist]
                    hist_s = ",".join(map(str, hist))
                    cells = " ".join(f"{w}:{c}" for w, c in sorted(wdict.items()))
                    f.write(f"{hist_s}\t{cells}\n")

    @classmethod
    def load(cls, path: str | Path) -> "NgramModel":
        with Path(path).open(encoding="utf-8") as f:
            header = f.readline().split()
            if header[:1] != [FORMAT_NAME] or int(header[1]) != FORMAT_VERSION:
                raise ModelError(f"not a {FORMAT_NAME} v{FORMAT_VERSION} file: {path}")
            params = dict(kv.split("=") for kv in f.readline().split())
            order = int(params["order"])
            discount = float(params["discount"])
            vline = f.readline().split()
            n_special, n_items = int(vline[1]), int(vline[2])
            special = [f.readline().rstrip("\n") for _ in range(n_special)]
            items = [f.readline().rstrip("\n") for _ in range(n_items)]
            vocab = Vocabulary(items=items, special=tuple(special))
            raw: list[dict[tuple[int, ...], dict[int, int]]] = []
            for k in range(1, order + 1):
                head = f.readline().split()
                if head[:1] != ["counts"] or int(head[1]) != k:
                    raise ModelError(f"malformed counts section in {path}")
                table: dict[tuple[int, ...], dict[int, int]] = {}
                for _ in range(int(head[2])):
                    hist_s, _, cells = f.readline().rstrip("\n").partition("\t")
                    hist = tuple(int(x) for x in hist_s.split(",")) if hist_s else ()
                    table[hist] = {
                        int(w): int(c)
                        for w, c in (cell.split(":") for cell in cells.split())
                    }
                raw.append(table)
        return cls(order, discount, vocab, raw)


# ---------------------------------------------------------------------------
# Perplexity

def perplexity(model: NgramModel, lines: Iterable[str]) -> float:
    """exp(-sum(logprob) / sum(tokens)), end markers in both sums."""
    total_lp = 0.0
    total_tokens = 0
    for line in lines:
        tokens = line.split()
        if not tokens:
            continue
        score = model.score_sentence(tokens)
        total_lp += score.total_logprob
        total_tokens += score.token_count
    if total_tokens == 0:
        raise ModelError("cannot compute perplexity of an empty corpus")
    return math.exp(-total_lp / total_tokens)


def pooled_perplexity(scores: Iterable[SentenceScore]) -> float:
    """Perplexity of a score set: token counts pooled before exponentiation."""
    total_lp = 0.0
    total_tokens = 0
    for s in scores:
        total_lp += s.total_logprob
        total_tokens += s.token_count
    if total_tokens == 0:
        raise ModelError("cannot compute perplexity of an empty score set")
    return math.exp(-total_lp / total_tokens)


# ---------------------------------------------------------------------------
# Score files (one JSON record per line)

def write_scores(scores: Iterable[SentenceScore], path: str | Path):
    with Path(path).open("w", encoding="utf-8") as f:
        for s in scores:
            f.write(
                json.dumps(
                    {
                        "sentence_id": s.sentence_id,
                        "total_logprob": s.total_logprob,
                        "token_count": s.token_count,
                        "token_logprobs": list(s.token_logprobs),
                    }
                )
                + "\n"
            )


def load_scores(path: str | Path) -> dict[str, SentenceScore]:
    """Parse a score file; duplicate ids and non-finite values are errors."""
    out: dict[str, SentenceScore] = {}
    with Path(path).open(encoding="utf-8") as f:
        for line_no, line in enumerate(f, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ScoreFileError(f"{path}:{line_no}: invalid JSON: {exc}") from None
            for field in ("sentence_id", "total_logprob", "token_count"):
                if field not in rec:
                    raise ScoreFileError(f"{path}:{line_no}: missing field {field!r}")
            sid = rec["sentence_id"]
            if sid in out:
                raise ScoreFileError(f"{path}:{line_no}: duplicate sentence_id {sid!r}")
            total = float(rec["total_logprob"])
            if not math.isfinite(total):
                raise ScoreFileError(f"{path}:{line_no}: non-finite logprob for {sid!r}")
            lps = rec.get("token_logprobs")
            if lps is None:
                out[sid] = _score_without_detail(sid, total, int(rec["token_count"]))
                continue
            if any(not math.isfinite(float(x)) for x in lps):
                raise ScoreFileError(f"{path}:{line_no}: non-finite token logprob for {sid!r}")
            out[sid] = SentenceScore(
                sid, total, tuple(float(x) for x in lps), int(rec["token_count"])
            )
    return out


def _score_without_detail(sid: str, total: float, count: int) -> SentenceScore:
    """Score record lacking per-token detail: spread the total evenly."""
    per = total / count
    lps = [per] * count
    lps[-1] = total - per * (count - 1)
    return SentenceScore(sid, total, tuple(lps), count)


class ScoreTable:
    """Sentence scores ingested from a file, looked up by sentence id."""

    def __init__(self, scores: Mapping[str, SentenceScore]):
        self._scores = dict(scores)

    @classmethod
    def from_file(cls, path: str | Path) -> "ScoreTable":
        return cls(load_scores(path))

    def __len__(self) -> int:
        return len(self._scores)

    def __contains__(self, sentence_id: str) -> bool:
        return sentence_id in self._scores

    def get(self, sentence_id: str) -> SentenceScore:
        try:
            return self._scores[sentence_id]
        except KeyError:
            raise ScoreFileError(f"no score for sentence_id {sentence_id!r}") from None
