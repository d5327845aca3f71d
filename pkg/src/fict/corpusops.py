"""Corpus-level transforms: seeded downsampling, vocabulary, accounting.

Downsampling selects a uniform random subset of lines *without replacement*
and emits it in the original order, so filtered corpora of different sizes
can be cut to the same line count under one seed.  Selection uses Floyd's
algorithm over a PCG32 stream (see ``prng``), which makes the chosen index
set a pure function of (seed, line count, target) in any implementation of
the same generator.
"""

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator, Sequence

from .prng import PCG32

UNK = "<unk>"
EOS = "<eos>"


class CorpusError(ValueError):
    pass


@dataclass(frozen=True)
class SampleManifest:
    """Record of one downsampling run; enough to replay it without the RNG."""

    seed: int
    target_lines: int
    source_lines: int
    source_digest: str
    selected_line_indices: tuple[int, ...]

    def to_json(self) -> str:
        return json.dumps(
            {
                "seed": self.seed,
                "target_lines": self.target_lines,
                "source_lines": self.source_lines,
                "source_digest": self.source_digest,
                "selected_line_indices": list(self.selected_line_indices),
            }
        )

    @classmethod
    def from_json(cls, text: str) -> "SampleManifest":
        d = json.loads(text)
        return cls(
            seed=d["seed"],
            target_lines=d["target_lines"],
            source_lines=d["source_lines"],
            source_digest=d["source_digest"],
            selected_line_indices=tuple(d["selected_line_indices"]),
        )


def line_digest(lines: Iterable[str]) -> str:
    """SHA-256 over the lines, each normalized to one trailing newline."""
    h = hashlib.sha256()
    for line in lines:
        h.update(line.rstrip("\n").encode("utf-8"))
        h.update(b"\n")
    return h.hexdigest()


def sample_indices(n: int, target: int, seed: int) -> list[int]:
    """Floyd's uniform sampling of ``target`` distinct indices in [0, n)."""
    if target > n:
        raise CorpusError(f"cannot sample {target} lines from {n}")
    rng = PCG32.from_seed(seed)
    chosen: set[int] = set()
    for j in range(n - target, n):
        t = rng.randbelow(j + 1)
        chosen.add(j if t in chosen else t)
    return sorted(chosen)


def downsample(
    lines: Iterable[str], target_lines: int, seed: int
) -> tuple[list[str], SampleManifest]:
    """Uniform subset of exactly ``target_lines`` lines in original order."""
    data = [line.rstrip("\n") for line in lines]
    indices = sample_indices(len(data), target_lines, seed)
    manifest = SampleManifest(
        seed=seed,
        target_lines=target_lines,
        source_lines=len(data),
        source_digest=line_digest(data),
        selected_line_indices=tuple(indices),
    )
    return [data[i] for i in indices], manifest


def downsample_file(
    src: str | Path, dst: str | Path, target_lines: int, seed: int
) -> SampleManifest:
    """Two-pass streaming variant of ``downsample`` for large corpora."""
    src = Path(src)
    n = 0
    h = hashlib.sha256()
    with src.open(encoding="utf-8") as f:
        for line in f:
            h.update(line.rstrip("\n").encode("utf-8"))
            h.update(b"\n")
            n += 1
    indices = sample_indices(n, target_lines, seed)
    wanted = set(indices)
    with src.open(encoding="utf-8") as f, Path(dst).open("w", encoding="utf-8") as out:
        for i, line in enumerate(f):
            if i in wanted:
                out.write(line.rstrip("\n") + "\n")
    return SampleManifest(
        seed=seed,
        target_lines=target_lines,
        source_lines=n,
        source_digest=h.hexdigest(),
        selected_line_indices=tuple(indices),
    )


def replay(lines: Iterable[str], manifest: SampleManifest) -> Iterator[str]:
    """Re-emit the manifest's selection from the source, without the RNG."""
    data = [line.rstrip("\n") for line in lines]
    if len(data) != manifest.source_lines:
        raise CorpusError(
            f"manifest expects {manifest.source_lines} source lines, got {len(data)}"
        )
    digest = line_digest(data)
    if digest != manifest.source_digest:
        raise CorpusError("source digest does not match manifest")
    for i in manifest.selected_line_indices:
        yield data[i]


class Vocabulary:
    """Frequency-ranked closed vocabulary with unknown and end markers.

    Ranking is by descending frequency, ties broken lexicographically.  The
    file form is one token per line: the special entries first, then items
    in rank order.
    """

    def __init__(self, items: Sequence[str], special: Sequence[str] = (UNK, EOS)):
        self.special = tuple(special)
        self.items = tuple(items)
        seen: set[str] = set()
        for tok in self.special + self.items:
            if tok in seen:
                raise CorpusError(f"duplicate vocabulary entry {tok!r}")
            seen.add(tok)
        self._ids = {tok: i for i, tok in enumerate(self.special + self.items)}
        self.unk_id = self._ids[UNK]
        self.eos_id = self._ids[EOS]

    @property
    def size(self) -> int:
        return len(self.items) + len(self.special)

    def id_of(self, token: str) -> int:
        return self._ids.get(token, self.unk_id)

    def token_of(self, idx: int) -> str:
        joined = self.special + self.items
        return joined[idx]

    def __contains__(self, token: str) -> bool:
        return token in self._ids

    def save(self, path: str | Path):
        with Path(path).open("w", encoding="utf-8") as f:
            for tok in self.special + self.items:
                f.write(tok + "\n")

    @classmethod
    def load(cls, path: str | Path) -> "Vocabulary":
        tokens = [
            line.rstrip("\n") for line in Path(path).open(encoding="utf-8") if line.strip()
        ]
        if UNK not in tokens[:2] or EOS not in tokens[:2]:
            raise CorpusError("vocabulary file must start with the special entries")
        return cls(items=tokens[2:], special=tuple(tokens[:2]))


def build_vocab(tokens: Iterable[str], size: int) -> Vocabulary:
    """Top-``size`` tokens by frequency (ties lexicographic)."""
    if size < 1:
        raise CorpusError("vocabulary size must be >= 1")
    counts: dict[str, int] = {}
    for tok in tokens:
        counts[tok] = counts.get(tok, 0) + 1
    if not counts:
        raise CorpusError("cannot build a vocabulary from an empty corpus")
    # literal marker tokens in the corpus fold into the reserved entries
    ranked = [t for t in sorted(counts, key=lambda t: (-counts[t], t)) if t not in (UNK, EOS)]
    return Vocabulary(items=ranked[:size])


def iter_tokens(lines: Iterable[str]) -> Iterator[str]:
    for line in lines:
        yield from line.split()


def corpus_stats(lines: Iterable[str]) -> dict[str, int]:
    """Exact line/token/type counts under whitespace tokenization."""
    n_lines = 0
    n_tokens = 0
    types: set[str] = set()
    for line in lines:
        n_lines += 1
        for tok in line.split():
            n_tokens += 1
            types.add(tok)
    return {"lines": n_lines, "tokens": n_tokens, "types": len(types)}
