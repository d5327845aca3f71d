"""Streaming CoNLL-U reader/writer.

Sentences are parsed one block at a time (memory bounded by the largest
sentence, not the corpus).  Every input line is retained verbatim so that
writing a parsed sentence back out reproduces the input bytes exactly:
comments, multiword-token range lines (``3-4``), empty-node lines (``3.1``)
and the unparsed trailing columns (DEPS, MISC) all survive the round trip.
Range and empty-node lines are *not* part of the token view; tree-matching
operates on the basic syntactic words only.

Input accepts LF or CRLF line endings; output always uses LF, so the
byte-identity guarantee applies to LF input.
"""

from dataclasses import dataclass
from typing import Iterable, Iterator, TextIO

N_COLUMNS = 10


class ConlluError(ValueError):
    """Malformed CoNLL-U input; carries the 1-based line number."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


@dataclass(frozen=True, slots=True)
class Token:
    """One syntactic word: the eight annotation columns the filters use."""

    id: int
    form: str
    lemma: str
    upos: str
    xpos: str
    feats: frozenset[str]  # "Key=Value" entries; empty for "_"
    head: int
    deprel: str


@dataclass(frozen=True, slots=True)
class Sentence:
    tokens: tuple[Token, ...]
    raw_lines: tuple[str, ...]
    sent_id: str | None = None

    def __len__(self) -> int:
        return len(self.tokens)

    @property
    def root_id(self) -> int:
        for tok in self.tokens:
            if tok.head == 0:
                return tok.id
        raise ValueError("sentence has no root")

    def text(self) -> str:
        """Surface forms joined by single spaces (pre-tokenized convention)."""
        return " ".join(tok.form for tok in self.tokens)


def parse_feats(field: str) -> frozenset[str]:
    if field == "_" or field == "":
        return frozenset()
    return frozenset(field.split("|"))


def _parse_token(line: str, line_no: int) -> Token:
    cols = line.split("\t")
    if len(cols) != N_COLUMNS:
        raise ConlluError(line_no, f"expected {N_COLUMNS} columns, got {len(cols)}")
    try:
        tid = int(cols[0])
    except ValueError:
        raise ConlluError(line_no, f"non-integer token id {cols[0]!r}") from None
    try:
        head = int(cols[6])
    except ValueError:
        raise ConlluError(line_no, f"non-integer head {cols[6]!r}") from None
    if tid < 1:
        raise ConlluError(line_no, f"token id must be >= 1, got {tid}")
    if head < 0:
        raise ConlluError(line_no, f"head must be >= 0, got {head}")
    if head == tid:
        raise ConlluError(line_no, f"token {tid} is its own head")
    deprel = cols[7]
    if not deprel or deprel == "_":
        raise ConlluError(line_no, f"token {tid} has empty deprel")
    return Token(
        id=tid,
        form=cols[1],
        lemma=cols[2],
        upos=cols[3],
        xpos=cols[4],
        feats=parse_feats(cols[5]),
        head=head,
        deprel=deprel,
    )


def _is_range_or_empty_id(line: str) -> bool:
    first = line.split("\t", 1)[0]
    return "-" in first or "." in first


def _build_sentence(lines: list[str], start_line: int) -> Sentence:
    tokens = []
    sent_id = None
    for offset, line in enumerate(lines):
        if line.startswith("#"):
            if line.startswith("# sent_id"):
                parts = line.split("=", 1)
                if len(parts) == 2:
                    sent_id = parts[1].strip()
            continue
        if _is_range_or_empty_id(line):
            continue  # kept in raw_lines only
        tokens.append(_parse_token(line, start_line + offset))
    if not tokens:
        raise ConlluError(start_line, "sentence block contains no token lines")

    n = len(tokens)
    for i, tok in enumerate(tokens):
        if tok.id != i + 1:
            raise ConlluError(start_line, f"token ids must be 1..{n} without gaps (saw {tok.id} at position {i + 1})")
    roots = [tok.id for tok in tokens if tok.head == 0]
    if len(roots) != 1:
        raise ConlluError(start_line, f"expected exactly one root, found {len(roots)}")
    for tok in tokens:
        if tok.head > n:
            raise ConlluError(start_line, f"token {tok.id} has head {tok.head} outside 1..{n}")
    # Single root + every non-root head in 1..n rules out disconnected parts,
    # but not cycles; walk each head chain to reject them.
    for tok in tokens:
        seen = set()
        cur = tok.id
        while cur != 0:
            if cur in seen:
                raise ConlluError(start_line, f"cyclic head chain through token {tok.id}")
            seen.add(cur)
            cur = tokens[cur - 1].head

    return Sentence(tokens=tuple(tokens), raw_lines=tuple(lines), sent_id=sent_id)


def iter_blocks(stream: Iterable[str]) -> Iterator[tuple[int, list[str]]]:
    """Yield (start_line_no, lines) for each blank-line-separated block."""
    block: list[str] = []
    start = 1
    for line_no, line in enumerate(stream, start=1):
        line = line.rstrip("\n").rstrip("\r")
        if line == "":
            if block:
                yield start, block
                block = []
            continue
        if not block:
            start = line_no
        block.append(line)
    if block:
        yield start, block


class ConlluReader:
    """Iterator over sentences with a choice of error handling.

    In strict mode (default) a malformed block raises ConlluError.  With
    ``skip_malformed=True`` bad blocks are dropped and counted, so that
    ``parsed + skipped`` equals the number of input blocks.
    """

    def __init__(self, stream: Iterable[str], skip_malformed: bool = False):
        self._blocks = iter_blocks(stream)
        self.skip_malformed = skip_malformed
        self.skipped = 0
        self.parsed = 0
        self.errors: list[ConlluError] = []

    def __iter__(self) -> Iterator[Sentence]:
        for start, lines in self._blocks:
            try:
                sent = _build_sentence(lines, start)
            except ConlluError as exc:
                if not self.skip_malformed:
                    raise
                self.skipped += 1
                self.errors.append(exc)
                continue
            self.parsed += 1
            yield sent


def parse_conllu(stream: Iterable[str]) -> Iterator[Sentence]:
    """Lazily parse a character stream; raises ConlluError on bad input."""
    return iter(ConlluReader(stream))


def serialize(sentence: Sentence) -> str:
    """Render one sentence block, each line LF-terminated, no blank line."""
    return "".join(line + "\n" for line in sentence.raw_lines)


def write_conllu(sentences: Iterable[Sentence], out: TextIO) -> int:
    """Write sentences as a CoNLL-U file (blank line after each block)."""
    count = 0
    for sent in sentences:
        out.write(serialize(sent))
        out.write("\n")
        count += 1
    return count
