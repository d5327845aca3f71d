#!/usr/bin/env python3
"""Benchmark the compiled matcher kernel against the pure-Python fallback.

Generates a synthetic annotated corpus, runs every registered filter over it
with each kernel, and reports sentence throughput.  The workload mirrors the
pipeline's hot path: one SentenceIndex per sentence, all filters probed
against it.

Usage: python benchmarks/bench_match.py [--sentences 20000] [--seed 3]
"""

import argparse
import time

from fict import _matchpure
from fict._compile import SentenceIndex
from fict.conllu import parse_conllu
from fict.filters import registry
from fict.synthgen import generate

try:
    from fict import _matchcore
except ImportError:
    _matchcore = None


def run_kernel(kernel, sentences, specs) -> tuple[float, int]:
    patterns = [(spec, [p.compiled() for p in spec.patterns]) for spec in specs]
    discarded = 0
    start = time.perf_counter()
    for sentence in sentences:
        sidx = SentenceIndex(sentence)
        for spec, compiled in patterns:
            hit = any(kernel.find_matches(sidx, cp, 1) for cp in compiled)
            if not hit and spec.rule is not None:
                hit = spec.rule(sentence)
            discarded += hit
    return time.perf_counter() - start, discarded


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--sentences", type=int, default=20000)
    ap.add_argument("--seed", type=int, default=3)
    args = ap.parse_args()

    import io

    blocks = "".join(
        s.conllu(f"b{i}") + "\n" for i, s in enumerate(generate(args.sentences, args.seed), 1)
    )
    sentences = list(parse_conllu(io.StringIO(blocks)))
    specs = registry()
    print(f"{len(sentences)} sentences x {len(specs)} filters")

    pure_t, pure_d = run_kernel(_matchpure, sentences, specs)
    print(f"pure:     {pure_t:8.3f}s  {len(sentences) / pure_t:10.0f} sentences/s  "
          f"({pure_d} filter hits)")
    if _matchcore is None:
        print("compiled: not built (python setup.py build_ext --inplace)")
        return
    comp_t, comp_d = run_kernel(_matchcore, sentences, specs)
    assert comp_d == pure_d, "kernels disagree"
    print(f"compiled: {comp_t:8.3f}s  {len(sentences) / comp_t:10.0f} sentences/s  "
          f"({comp_d} filter hits)")
    print(f"speedup:  {pure_t / comp_t:.2f}x")


if __name__ == "__main__":
    main()
