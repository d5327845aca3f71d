"""Command-line pipeline: filter, downsample, stats, train, score, eval, report.

Every stage reads plain files produced by earlier stages and writes plain
files with documented schemas, so each stage can be re-run in isolation and
outputs are byte-stable for a fixed configuration.  Text outputs (CSV,
summaries) start with a provenance comment carrying the configuration digest
and seed; binary-ish artifacts (corpora, models, score files) get a sidecar
``<name>.meta.json`` instead.

Exit codes: 0 success, 1 usage error, 2 data error.

Options may also come from a key=value config file (``--config``); explicit
command-line flags override it.
"""

import argparse
import hashlib
import json
import sys
from pathlib import Path

from . import blimp
from .conllu import ConlluError, ConlluReader, serialize
from .corpusops import (
    CorpusError,
    Vocabulary,
    build_vocab,
    corpus_stats,
    downsample_file,
    iter_tokens,
)
from .evaluation import (
    EvaluationError,
    MissingCellError,
    ModelKey,
    aggregate,
    load_pairs,
    load_results,
    model_pair_scorer,
    table_pair_scorer,
    tse_accuracy,
    write_results,
)
from .filters import FilterStats, UnknownFilterError, registry
from .ngram import (
    ModelError,
    NgramModel,
    ScoreFileError,
    ScoreTable,
    write_scores,
)
from ._compile import SentenceIndex

USAGE_EXIT = 1
DATA_EXIT = 2


class DataError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.exit(USAGE_EXIT, f"{self.prog}: error: {message}\n")


def _read_config(path: str) -> dict[str, str]:
    cfg = {}
    for line_no, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise DataError(f"{path}:{line_no}: expected key=value")
        cfg[key.strip().replace("-", "_")] = value.strip()
    return cfg


def _apply_config(parser: argparse.ArgumentParser, cfg: dict[str, str]):
    defaults = {}
    for action in parser._actions:
        if action.dest in cfg:
            raw = cfg[action.dest]
            if isinstance(action, (argparse._StoreTrueAction, argparse._StoreFalseAction)):
                defaults[action.dest] = raw.lower() in ("1", "true", "yes")
            elif action.type is not None:
                defaults[action.dest] = action.type(raw)
            else:
                defaults[action.dest] = raw
            action.required = False  # satisfied by the config value
    parser.set_defaults(**defaults)


def _config_digest(args: argparse.Namespace) -> str:
    payload = "\n".join(
        f"{k}={args.__dict__[k]!r}" for k in sorted(vars(args)) if k != "func"
    )
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()[:16]


def _provenance(args) -> str:
    seed = getattr(args, "seed", None)
    return f"# fict config={_config_digest(args)} seed={seed if seed is not None else '-'}"


def _meta_sidecar(path: Path, args, command: str, extra: dict | None = None):
    meta = {"command": command, "config_digest": _config_digest(args)}
    seed = getattr(args, "seed", None)
    if seed is not None:
        meta["seed"] = seed
    if extra:
        meta.update(extra)
    sidecar = path.with_name(path.name + ".meta.json")
    sidecar.write_text(json.dumps(meta, sort_keys=True) + "\n", encoding="utf-8")


def _require(path: str | Path, what: str) -> Path:
    p = Path(path)
    if not p.exists():
        raise DataError(f"missing {what}: expected file at {p}")
    return p


# ---------------------------------------------------------------------------
# filter

def cmd_filter(args) -> int:
    corpus_path = _require(args.corpus, "annotated corpus")
    specs = registry(args.wordlist_dir)
    if args.all:
        selected = specs
    else:
        if not args.filters:
            raise DataError("no filters selected; use --filters or --all")
        by_name = {s.name: s for s in specs}
        selected = []
        for name in args.filters.split(","):
            name = name.strip()
            if name not in by_name:
                raise UnknownFilterError(name)
            selected.append(by_name[name])

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    sinks = {}
    stats: dict[str, FilterStats] = {}
    for spec in selected:
        fdir = out_dir / spec.name
        fdir.mkdir(parents=True, exist_ok=True)
        sinks[spec.name] = (
            (fdir / "kept.conllu").open("w", encoding="utf-8"),
            (fdir / "kept.txt").open("w", encoding="utf-8"),
            (fdir / "discarded.conllu").open("w", encoding="utf-8"),
        )
        stats[spec.name] = FilterStats(name=spec.name)

    reader = ConlluReader(
        corpus_path.open(encoding="utf-8"), skip_malformed=args.lenient
    )
    for sentence in reader:
        sidx = SentenceIndex(sentence)
        for spec in selected:
            discarded = spec.discards(sentence, sidx)
            stats[spec.name].add(sentence, discarded)
            kept_f, text_f, disc_f = sinks[spec.name]
            if discarded:
                disc_f.write(serialize(sentence) + "\n")
            else:
                kept_f.write(serialize(sentence) + "\n")
                text_f.write(sentence.text() + "\n")

    for spec in selected:
        for handle in sinks[spec.name]:
            handle.close()
        fdir = out_dir / spec.name
        for name in ("kept.conllu", "kept.txt", "discarded.conllu"):
            _meta_sidecar(fdir / name, args, "filter", {"filter": spec.name})

    stats_path = out_dir / "filter_stats.csv"
    with stats_path.open("w", encoding="utf-8") as f:
        f.write(_provenance(args) + "\n")
        f.write(
            "corpus,input_sentences,discarded_sentences,pct_sentences_filtered,"
            "input_tokens,output_tokens,tokens_pct_of_full\n"
        )
        for spec in selected:
            s = stats[spec.name]
            f.write(
                f"{s.name},{s.input_sentences},{s.discarded_sentences},"
                f"{s.pct_sentences_filtered:.2f},{s.input_tokens},"
                f"{s.output_tokens},{s.tokens_pct_of_full:.2f}\n"
            )
    if args.lenient and reader.skipped:
        print(f"skipped {reader.skipped} malformed sentence blocks", file=sys.stderr)
    print(f"filtered {reader.parsed} sentences through {len(selected)} filters -> {out_dir}")
    return 0


# ---------------------------------------------------------------------------
# downsample / stats

def cmd_downsample(args) -> int:
    src = _require(args.input, "input corpus")
    manifest = downsample_file(src, args.output, args.lines, args.seed)
    manifest_path = Path(args.manifest or args.output + ".manifest.json")
    manifest_path.write_text(manifest.to_json() + "\n", encoding="utf-8")
    _meta_sidecar(Path(args.output), args, "downsample")
    print(f"sampled {manifest.target_lines} of {manifest.source_lines} lines -> {args.output}")
    return 0


def cmd_stats(args) -> int:
    src = _require(args.input, "input corpus")
    with src.open(encoding="utf-8") as f:
        counts = corpus_stats(f)
    line = f"lines={counts['lines']} tokens={counts['tokens']} types={counts['types']}"
    print(line)
    if args.csv:
        with Path(args.csv).open("w", encoding="utf-8") as f:
            f.write(_provenance(args) + "\n")
            f.write("lines,tokens,types\n")
            f.write(f"{counts['lines']},{counts['tokens']},{counts['types']}\n")
    if args.save_vocab:
        with src.open(encoding="utf-8") as f:
            vocab = build_vocab(iter_tokens(f), args.vocab_size)
        vocab.save(args.save_vocab)
        _meta_sidecar(Path(args.save_vocab), args, "stats")
        print(f"vocabulary of {vocab.size} entries -> {args.save_vocab}")
    return 0


# ---------------------------------------------------------------------------
# train / score

def cmd_train(args) -> int:
    src = _require(args.input, "training corpus")
    if args.vocab:
        vocab = Vocabulary.load(_require(args.vocab, "vocabulary file"))
    else:
        with src.open(encoding="utf-8") as f:
            vocab = build_vocab(iter_tokens(f), args.vocab_size)
    with src.open(encoding="utf-8") as f:
        model = NgramModel.train(f, order=args.order, discount=args.discount, vocab=vocab)
    model.save(args.output)
    _meta_sidecar(Path(args.output), args, "train")
    if args.save_vocab:
        vocab.save(args.save_vocab)
    print(f"order-{args.order} model over {vocab.size} types -> {args.output}")
    return 0


def cmd_score(args) -> int:
    if bool(args.pairs) == bool(args.input):
        raise DataError("exactly one of --pairs / --input is required")
    model = NgramModel.load(_require(args.model, "model file"))
    scores = []
    if args.pairs:
        pairs = load_pairs(_require(args.pairs, "pair file"))
        for pair in pairs:
            scores.append(model.score_sentence(pair.sentence_good.split(), pair.good_id))
            scores.append(model.score_sentence(pair.sentence_bad.split(), pair.bad_id))
    else:
        src = _require(args.input, "sentence file")
        with src.open(encoding="utf-8") as f:
            for i, line in enumerate(f, start=1):
                tokens = line.split()
                if tokens:
                    scores.append(model.score_sentence(tokens, f"line-{i:06d}"))
    write_scores(scores, args.output)
    _meta_sidecar(Path(args.output), args, "score")
    print(f"scored {len(scores)} sentences -> {args.output}")
    return 0


# ---------------------------------------------------------------------------
# eval / report

def cmd_eval(args) -> int:
    pairs = load_pairs(_require(args.pairs, "pair file"))
    if not pairs:
        raise DataError(f"pair file {args.pairs} is empty")
    if bool(args.scores) == bool(args.model):
        raise DataError("exactly one of --scores / --model is required")
    if args.scores:
        table = ScoreTable.from_file(_require(args.scores, "score file"))
        scorer = table_pair_scorer(table)
        available = lambda p: p.good_id in table and p.bad_id in table  # noqa: E731
    else:
        model = NgramModel.load(_require(args.model, "model file"))
        scorer = model_pair_scorer(model)
        available = lambda p: True  # noqa: E731

    by_benchmark: dict[str, list] = {}
    for p in pairs:
        by_benchmark.setdefault(p.benchmark, []).append(p)

    key = ModelKey(args.arch, args.corpus_label, args.seed)
    results = []
    missing = []
    for bench in sorted(by_benchmark):
        bench_pairs = by_benchmark[bench]
        absent = [p.pair_id for p in bench_pairs if not available(p)]
        if absent:
            missing.append(
                f"benchmark {bench}: no scores for {len(absent)} of "
                f"{len(bench_pairs)} pairs (e.g. {absent[0]})"
            )
            continue
        results.append(tse_accuracy(scorer, bench_pairs, model=key))

    write_results(results, args.output)
    _meta_sidecar(Path(args.output), args, "eval")
    for line in missing:
        print(f"MISSING {line}", file=sys.stderr)
    print(f"evaluated {len(results)} benchmarks -> {args.output}")
    if missing and not args.lenient:
        raise DataError(f"{len(missing)} benchmark(s) lack scores (strict mode)")
    return 0


def cmd_report(args) -> int:
    results = []
    for path in args.results:
        results.extend(load_results(_require(path, "results file")))
    if not results:
        raise DataError("no results loaded")
    targeted = {s.name: tuple(s.targeted_benchmarks) for s in registry(args.wordlist_dir)}
    tables = aggregate(results, targeted)

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    prov = _provenance(args)

    with (out_dir / "acc_delta_matrix.csv").open("w", encoding="utf-8") as f:
        f.write(prov + "\n")
        f.write(
            "architecture,corpus,benchmark,targeted,mean_delta_pp,n_seeds,"
            "full_mean_acc_pct\n"
        )
        for row in tables.delta_rows:
            full = tables.full_accuracy.get((row["architecture"], row["benchmark"]))
            f.write(
                f"{row['architecture']},{row['corpus']},{row['benchmark']},"
                f"{'*' if row['targeted'] else ''},{row['mean_delta_pp']:.4f},"
                f"{row['n_seeds']},{full:.4f}\n"
            )

    with (out_dir / "pdelta_summary.csv").open("w", encoding="utf-8") as f:
        f.write(prov + "\n")
        f.write(
            "architecture,corpus,benchmark,mean_pd_full,mean_pd_filtered,"
            "mean_pd_diff,pearson_r,n_sign_flips,n_pairs\n"
        )
        for row in tables.pdelta_rows:
            r = row["pearson_r"]
            r_s = f"{r:.6f}" if r == r else "nan"
            f.write(
                f"{row['architecture']},{row['corpus']},{row['benchmark']},"
                f"{row['mean_pd_full']:.6f},{row['mean_pd_filtered']:.6f},"
                f"{row['mean_pd_diff']:.6f},{r_s},{row['n_sign_flips']},"
                f"{row['n_pairs']}\n"
            )

    with (out_dir / "summary.txt").open("w", encoding="utf-8") as f:
        f.write(prov + "\n")
        f.write(f"results: {len(results)} benchmark evaluations\n")
        for (arch, bench), acc in sorted(tables.full_accuracy.items()):
            f.write(f"full accuracy  {arch}  {bench}  {acc:.4f}\n")
        for arch, mean in sorted(tables.targeted_mean_delta.items()):
            f.write(f"mean targeted acc-delta  {arch}  {mean:.4f}\n")
        if tables.missing:
            f.write("missing cells:\n")
            for m in tables.missing:
                f.write(f"  {m}\n")

    if tables.missing:
        for m in tables.missing:
            print(f"MISSING {m}", file=sys.stderr)
        if not args.lenient:
            raise DataError(f"{len(tables.missing)} missing result cell(s) (strict mode)")
    print(f"report -> {out_dir}")
    return 0


# ---------------------------------------------------------------------------
# benchmark ingestion

def cmd_convert_blimp(args) -> int:
    for path in args.input:
        _require(path, "benchmark file")
    n = blimp.convert(args.input, args.output)
    _meta_sidecar(Path(args.output), args, "convert-blimp")
    print(f"converted {n} pairs -> {args.output}")
    return 0


def cmd_extract_wordlists(args) -> int:
    pairs = []
    for path in args.pairs:
        pairs.extend(load_pairs(_require(path, "pair file")))
    lists = blimp.extract_wordlists(pairs)
    blimp.write_wordlists(lists, args.out_dir)
    for fname, words in sorted(lists.items()):
        print(f"{fname}: {len(words)} entries")
    return 0


# ---------------------------------------------------------------------------

def build_parser() -> _Parser:
    parser = _Parser(prog="fict", description=__doc__.split("\n\n")[0])
    parser.add_argument("--config", help="key=value config file; flags override")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("filter", help="apply corpus filters")
    p.add_argument("--corpus", required=True, help="annotated corpus (CoNLL-U)")
    p.add_argument("--filters", help="comma-separated filter names")
    p.add_argument("--all", action="store_true", help="apply every registered filter")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--wordlist-dir", help="override the shipped word lists")
    p.add_argument("--lenient", action="store_true",
                   help="skip and count malformed sentences instead of aborting")
    p.set_defaults(func=cmd_filter)

    p = sub.add_parser("downsample", help="seeded uniform line sampling")
    p.add_argument("--input", required=True)
    p.add_argument("--lines", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--manifest", help="manifest path (default: <output>.manifest.json)")
    p.set_defaults(func=cmd_downsample)

    p = sub.add_parser("stats", help="corpus accounting and vocabulary")
    p.add_argument("--input", required=True)
    p.add_argument("--csv", help="also write counts as CSV")
    p.add_argument("--save-vocab", help="write a frequency-ranked vocabulary")
    p.add_argument("--vocab-size", type=int, default=50000)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("train", help="train the n-gram scorer")
    p.add_argument("--input", required=True, help="one-sentence-per-line text")
    p.add_argument("--order", type=int, default=3)
    p.add_argument("--discount", type=float, default=0.75)
    p.add_argument("--vocab", help="use a prebuilt vocabulary file")
    p.add_argument("--vocab-size", type=int, default=50000)
    p.add_argument("--save-vocab", help="also write the vocabulary used")
    p.add_argument("--output", required=True)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("score", help="score pair files or raw sentences")
    p.add_argument("--model", required=True)
    p.add_argument("--pairs", help="pair file: scores <pair>#good / <pair>#bad")
    p.add_argument("--input", help="plain sentences: scores line-NNNNNN ids")
    p.add_argument("--output", required=True)
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("eval", help="minimal-pair evaluation per benchmark")
    p.add_argument("--pairs", required=True)
    p.add_argument("--scores", help="precomputed score file")
    p.add_argument("--model", help="score pairs directly with a model file")
    p.add_argument("--arch", required=True, help="architecture label")
    p.add_argument("--corpus-label", required=True,
                   help="training corpus label (filter name or 'full')")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--lenient", action="store_true",
                   help="report missing score cells without failing")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("report", help="aggregate results into report tables")
    p.add_argument("--results", nargs="+", required=True)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--wordlist-dir")
    p.add_argument("--lenient", action="store_true")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("convert-blimp", help="normalize benchmark JSONL to a pair file")
    p.add_argument("--input", nargs="+", required=True)
    p.add_argument("--output", required=True)
    p.set_defaults(func=cmd_convert_blimp)

    p = sub.add_parser("extract-wordlists",
                       help="regenerate benchmark-derived filter word lists")
    p.add_argument("--pairs", nargs="+", required=True)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_extract_wordlists)

    return parser


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    if "--config" in argv:
        try:
            cfg_path = argv[argv.index("--config") + 1]
        except IndexError:
            parser.error("--config requires a path")
        try:
            cfg = _read_config(cfg_path)
        except (OSError, DataError) as exc:
            print(f"fict: {exc}", file=sys.stderr)
            return DATA_EXIT
        for action in parser._subparsers._group_actions:
            for sp in action.choices.values():
                _apply_config(sp, cfg)
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except (UnknownFilterError,) as exc:
        print(f"fict: {exc}", file=sys.stderr)
        return USAGE_EXIT
    except (
        DataError, ConlluError, CorpusError, ModelError,
        ScoreFileError, EvaluationError, MissingCellError, blimp.BlimpError,
    ) as exc:
        print(f"fict: {exc}", file=sys.stderr)
        return DATA_EXIT


if __name__ == "__main__":
    raise SystemExit(main())
