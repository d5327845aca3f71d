"""Minimal-pair evaluation and its statistics.

A minimal pair is a grammatical sentence and an ungrammatical near-copy.
A scorer succeeds on a pair when it assigns the grammatical side a strictly
higher log-probability; exact ties count as failures.  Per pair we keep the
probability delta (grammatical minus ungrammatical log-probability), whose
sign gives the judgment and whose magnitude gives its confidence.

Accuracy deltas compare a model trained on a filtered corpus against the
seed-mean of same-architecture models trained on the full corpus:
``delta = acc_filtered - mean(acc_full_per_seed)``.

The statistics kernel (Pearson correlation, paired t-test) is self-contained;
the t-test p-value evaluates the regularized incomplete beta function by
continued fraction, accurate to well below 1e-10.
"""

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Mapping, Sequence

from .ngram import NgramModel, ScoreTable


class EvaluationError(ValueError):
    pass


class DegenerateDataError(EvaluationError):
    """Statistic undefined for this input (constant vector, zero variance)."""


class MissingCellError(EvaluationError):
    """Required result cells absent; aggregation never imputes them."""

    def __init__(self, missing: list[str]):
        super().__init__("missing result cells:\n  " + "\n  ".join(missing))
        self.missing = missing


# ---------------------------------------------------------------------------
# Data types

@dataclass(frozen=True)
class MinimalPair:
    pair_id: str
    benchmark: str
    sentence_good: str
    sentence_bad: str

    def __post_init__(self):
        if not self.benchmark:
            raise EvaluationError(f"pair {self.pair_id!r} has no benchmark")
        if self.sentence_good == self.sentence_bad:
            raise EvaluationError(f"pair {self.pair_id!r} sentences are identical")

    @property
    def good_id(self) -> str:
        return f"{self.pair_id}#good"

    @property
    def bad_id(self) -> str:
        return f"{self.pair_id}#bad"


@dataclass(frozen=True)
class ModelKey:
    architecture: str
    corpus: str  # a filter name or "full"
    seed: int


@dataclass(frozen=True)
class BenchmarkResult:
    model: ModelKey
    benchmark: str
    accuracy: float  # fraction in [0, 1]
    pair_ids: tuple[str, ...]
    p_deltas: tuple[float, ...]

    @property
    def mean_p_delta(self) -> float:
        return sum(self.p_deltas) / len(self.p_deltas)

    @property
    def n_pairs(self) -> int:
        return len(self.p_deltas)


@dataclass(frozen=True)
class AccDelta:
    architecture: str
    corpus: str
    benchmark: str
    delta: float  # same units as the input accuracies


# ---------------------------------------------------------------------------
# Core metrics

def p_delta(score_good: float, score_bad: float) -> float:
    """Log-probability margin of the grammatical sentence."""
    if not (math.isfinite(score_good) and math.isfinite(score_bad)):
        raise EvaluationError("probability delta requires finite log-probabilities")
    return score_good - score_bad


PairScorer = Callable[[MinimalPair], tuple[float, float]]


def tse_accuracy(
    scorer: PairScorer, pairs: Sequence[MinimalPair], model: ModelKey | None = None
) -> BenchmarkResult:
    """Full-sentence minimal-pair accuracy over one benchmark's pairs."""
    if not pairs:
        raise EvaluationError("cannot evaluate an empty pair set")
    benchmarks = {p.benchmark for p in pairs}
    if len(benchmarks) != 1:
        raise EvaluationError(f"pairs span multiple benchmarks: {sorted(benchmarks)}")
    deltas = []
    for pair in pairs:
        good, bad = scorer(pair)
        deltas.append(p_delta(good, bad))
    correct = sum(1 for d in deltas if d > 0)  # ties fail
    return BenchmarkResult(
        model=model if model is not None else ModelKey("", "", 0),
        benchmark=benchmarks.pop(),
        accuracy=correct / len(pairs),
        pair_ids=tuple(p.pair_id for p in pairs),
        p_deltas=tuple(deltas),
    )


def acc_delta(
    acc_filtered: float,
    full_accs_over_seeds: Sequence[float],
    architecture: str = "",
    corpus: str = "",
    benchmark: str = "",
) -> AccDelta:
    """Filtered-model accuracy minus the seed-mean full-model accuracy."""
    if not full_accs_over_seeds:
        raise EvaluationError("need at least one full-corpus accuracy")
    delta = acc_filtered - _mean(full_accs_over_seeds)
    return AccDelta(architecture, corpus, benchmark, delta)


def model_pair_scorer(model: NgramModel) -> PairScorer:
    def scorer(pair: MinimalPair) -> tuple[float, float]:
        good = model.score_sentence(pair.sentence_good.split()).total_logprob
        bad = model.score_sentence(pair.sentence_bad.split()).total_logprob
        return good, bad

    return scorer


def table_pair_scorer(table: ScoreTable) -> PairScorer:
    def scorer(pair: MinimalPair) -> tuple[float, float]:
        return table.get(pair.good_id).total_logprob, table.get(pair.bad_id).total_logprob

    return scorer


# ---------------------------------------------------------------------------
# Statistics kernel

def _mean(xs: Sequence[float]) -> float:
    return math.fsum(xs) / len(xs)


def pearson(x: Sequence[float], y: Sequence[float]) -> float:
    """Product-moment correlation; constant input is an error, not 0."""
    if len(x) != len(y):
        raise EvaluationError("vectors must have equal length")
    if len(x) < 2:
        raise EvaluationError("correlation needs at least two points")
    mx, my = _mean(x), _mean(y)
    sxy = sum((a - mx) * (b - my) for a, b in zip(x, y))
    sxx = sum((a - mx) ** 2 for a in x)
    syy = sum((b - my) ** 2 for b in y)
    if sxx == 0.0 or syy == 0.0:
        raise DegenerateDataError("correlation undefined for a constant vector")
    return sxy / math.sqrt(sxx * syy)


def _betacf(a: float, b: float, x: float) -> float:
    """Continued fraction for the incomplete beta (modified Lentz)."""
    max_iter = 300
    eps = 3e-16
    fpmin = 1e-300
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < fpmin:
        d = fpmin
    d = 1.0 / d
    h = d
    for m in range(1, max_iter + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < fpmin:
            d = fpmin
        c = 1.0 + aa / c
        if abs(c) < fpmin:
            c = fpmin
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < fpmin:
            d = fpmin
        c = 1.0 + aa / c
        if abs(c) < fpmin:
            c = fpmin
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < eps:
            return h
    raise EvaluationError("incomplete beta continued fraction did not converge")


def regularized_incomplete_beta(a: float, b: float, x: float) -> float:
    """I_x(a, b), accurate to ~1e-15 relative (documented bound 1e-10)."""
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    ln_front = (
        math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b)
        + a * math.log(x) + b * math.log1p(-x)
    )
    front = math.exp(ln_front)
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _betacf(a, b, x) / a
    return 1.0 - front * _betacf(b, a, 1.0 - x) / b


def student_t_sf2(t: float, df: int) -> float:
    """Two-sided tail probability of Student's t."""
    if df < 1:
        raise EvaluationError("degrees of freedom must be >= 1")
    x = df / (df + t * t)
    return regularized_incomplete_beta(df / 2.0, 0.5, x)


def paired_t(x: Sequence[float], y: Sequence[float]) -> tuple[float, float]:
    """Paired t-test on differences x - y; returns (t, two-sided p)."""
    if len(x) != len(y):
        raise EvaluationError("vectors must have equal length")
    n = len(x)
    if n < 2:
        raise EvaluationError("paired t-test needs at least two pairs")
    d = [a - b for a, b in zip(x, y)]
    md = _mean(d)
    ss = sum((v - md) ** 2 for v in d)
    if ss == 0.0:
        raise DegenerateDataError("paired t-test undefined: zero-variance differences")
    sd = math.sqrt(ss / (n - 1))
    t = md / (sd / math.sqrt(n))
    return t, student_t_sf2(t, n - 1)


# ---------------------------------------------------------------------------
# Pair and result files

def load_pairs(path: str | Path) -> list[MinimalPair]:
    """Pair file: one JSON record per line with the four pair fields."""
    pairs = []
    seen: set[str] = set()
    with Path(path).open(encoding="utf-8") as f:
        for line_no, line in enumerate(f, start=1):
            line = line.strip()
            if not line:
                continue
            rec = json.loads(line)
            for fname in ("pair_id", "benchmark", "sentence_good", "sentence_bad"):
                if fname not in rec:
                    raise EvaluationError(f"{path}:{line_no}: missing field {fname!r}")
            if rec["pair_id"] in seen:
                raise EvaluationError(f"{path}:{line_no}: duplicate pair_id {rec['pair_id']!r}")
            seen.add(rec["pair_id"])
            pairs.append(
                MinimalPair(
                    rec["pair_id"], rec["benchmark"],
                    rec["sentence_good"], rec["sentence_bad"],
                )
            )
    return pairs


def write_pairs(pairs: Iterable[MinimalPair], path: str | Path):
    with Path(path).open("w", encoding="utf-8") as f:
        for p in pairs:
            f.write(
                json.dumps(
                    {
                        "pair_id": p.pair_id,
                        "benchmark": p.benchmark,
                        "sentence_good": p.sentence_good,
                        "sentence_bad": p.sentence_bad,
                    }
                )
                + "\n"
            )


def write_results(results: Iterable[BenchmarkResult], path: str | Path):
    with Path(path).open("w", encoding="utf-8") as f:
        for r in results:
            f.write(
                json.dumps(
                    {
                        "architecture": r.model.architecture,
                        "corpus": r.model.corpus,
                        "seed": r.model.seed,
                        "benchmark": r.benchmark,
                        "accuracy": r.accuracy,
                        "pair_ids": list(r.pair_ids),
                        "p_deltas": list(r.p_deltas),
                    }
                )
                + "\n"
            )


def load_results(path: str | Path) -> list[BenchmarkResult]:
    results = []
    with Path(path).open(encoding="utf-8") as f:
        for line in f:
            line = line.strip()
            if not line:
                continue
            rec = json.loads(line)
            results.append(
                BenchmarkResult(
                    model=ModelKey(rec["architecture"], rec["corpus"], int(rec["seed"])),
                    benchmark=rec["benchmark"],
                    accuracy=float(rec["accuracy"]),
                    pair_ids=tuple(rec["pair_ids"]),
                    p_deltas=tuple(float(v) for v in rec["p_deltas"]),
                )
            )
    return results


# ---------------------------------------------------------------------------
# Aggregation

@dataclass
class ReportTables:
    """Aggregated report: accuracy matrix, targeted means, margin summary."""

    # (architecture, benchmark) -> seed-mean full accuracy (percent)
    full_accuracy: dict[tuple[str, str], float] = field(default_factory=dict)
    # rows: architecture, corpus, benchmark, targeted, mean_delta_pp, n_seeds
    delta_rows: list[dict] = field(default_factory=list)
    # architecture -> mean delta over targeted (F = F(B)) cells
    targeted_mean_delta: dict[str, float] = field(default_factory=dict)
    # rows: architecture, benchmark, corpus, mean_pd_full, mean_pd_filtered,
    #       mean_pd_diff, pearson_r, n_sign_flips, n_pairs
    pdelta_rows: list[dict] = field(default_factory=list)
    missing: list[str] = field(default_factory=list)


def _corpus_sort_key(corpus: str, registry_order: Mapping[str, int]) -> tuple:
    return (0, registry_order[corpus]) if corpus in registry_order else (1, corpus)


def aggregate(
    results: Sequence[BenchmarkResult],
    targeted_benchmarks: Mapping[str, Sequence[str]],
    strict: bool = False,
) -> ReportTables:
    """Seed-averaged accuracy-delta matrix and margin summaries.

    ``targeted_benchmarks`` maps filter name -> benchmarks it targets (the
    registry provides this).  Cells whose full-corpus baseline is absent are
    reported in ``missing`` (and raised under ``strict``), never imputed.
    """
    tables = ReportTables()
    registry_order = {name: i for i, name in enumerate(targeted_benchmarks)}

    by_cell: dict[tuple[str, str, str], list[BenchmarkResult]] = {}
    for r in results:
        by_cell.setdefault(
            (r.model.architecture, r.model.corpus, r.benchmark), []
        ).append(r)
    for cell in by_cell.values():
        cell.sort(key=lambda r: r.model.seed)

    archs = sorted({r.model.architecture for r in results})
    benchmarks = sorted({r.benchmark for r in results})
    corpora = sorted(
        {r.model.corpus for r in results},
        key=lambda c: _corpus_sort_key(c, registry_order),
    )

    for arch in archs:
        for bench in benchmarks:
            full = by_cell.get((arch, "full", bench))
            if full:
                tables.full_accuracy[(arch, bench)] = 100.0 * _mean(
                    [r.accuracy for r in full]
                )

    targeted_deltas: dict[str, list[float]] = {arch: [] for arch in archs}
    for arch in archs:
        for corpus in corpora:
            if corpus == "full":
                continue
            for bench in benchmarks:
                cell = by_cell.get((arch, corpus, bench))
                if not cell:
                    continue
                baseline = tables.full_accuracy.get((arch, bench))
                targeted = bench in targeted_benchmarks.get(corpus, ())
                if baseline is None:
                    tables.missing.append(
                        f"full baseline for architecture={arch} benchmark={bench}"
                    )
                    continue
                deltas = [100.0 * r.accuracy - baseline for r in cell]
                mean_delta = _mean(deltas)
                tables.delta_rows.append(
                    {
                        "architecture": arch,
                        "corpus": corpus,
                        "benchmark": bench,
                        "targeted": targeted,
                        "mean_delta_pp": mean_delta,
                        "n_seeds": len(cell),
                    }
                )
                if targeted:
                    targeted_deltas[arch].append(mean_delta)

    for arch in archs:
        if targeted_deltas[arch]:
            tables.targeted_mean_delta[arch] = _mean(targeted_deltas[arch])

    # margin (probability-delta) summary for targeted filter/benchmark pairs
    for arch in archs:
        for corpus in corpora:
            if corpus == "full":
                continue
            for bench in targeted_benchmarks.get(corpus, ()):
                cell = by_cell.get((arch, corpus, bench))
                full = by_cell.get((arch, "full", bench))
                if not cell:
                    continue
                if not full:
                    tables.missing.append(
                        f"full margins for architecture={arch} benchmark={bench}"
                    )
                    continue
                filt_vec = _seed_mean_pdeltas(cell)
                full_vec = _seed_mean_pdeltas(full)
                if set(filt_vec) != set(full_vec):
                    tables.missing.append(
                        f"pair mismatch between full and {corpus} for "
                        f"architecture={arch} benchmark={bench}"
                    )
                    continue
                ids = sorted(full_vec)
                fv = [full_vec[i] for i in ids]
                gv = [filt_vec[i] for i in ids]
                try:
                    r_val = pearson(fv, gv)
                except DegenerateDataError:
                    r_val = float("nan")
                tables.pdelta_rows.append(
                    {
                        "architecture": arch,
                        "corpus": corpus,
                        "benchmark": bench,
                        "mean_pd_full": _mean(fv),
                        "mean_pd_filtered": _mean(gv),
                        "mean_pd_diff": _mean(gv) - _mean(fv),
                        "pearson_r": r_val,
                        "n_sign_flips": sum(
                            1 for a, b in zip(fv, gv)
                            if (a > 0) != (b > 0) or (a == 0) != (b == 0)
                        ),
                        "n_pairs": len(ids),
                    }
                )

    if strict and tables.missing:
        raise MissingCellError(tables.missing)
    return tables


def _seed_mean_pdeltas(cell: Sequence[BenchmarkResult]) -> dict[str, float]:
    sums: dict[str, float] = {}
    counts: dict[str, int] = {}
    for r in cell:
        for pid, pd in zip(r.pair_ids, r.p_deltas):
            sums[pid] = sums.get(pid, 0.0) + pd
            counts[pid] = counts.get(pid, 0) + 1
    return {pid: sums[pid] / counts[pid] for pid in sums}
