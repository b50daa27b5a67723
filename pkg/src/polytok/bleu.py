"""Corpus-level BLEU: clipped n-gram precisions, geometric mean, and an
exponential brevity penalty. Single reference per hypothesis; no
smoothing, so a zero corpus-level precision yields score zero."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass

from .errors import InputError


@dataclass(frozen=True)
class BleuReport:
    precisions: tuple[tuple[int, int], ...]  # (matches, total) per order
    bp: float
    hyp_len: int
    ref_len: int
    score: float
    order: int = 4

    def precision_values(self) -> list[float]:
        return [m / t if t else 0.0 for m, t in self.precisions]


def _ngram_counts(tokens, n: int) -> Counter:
    return Counter(tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1))


def clipped_ngram_matches(hyp, ref, n: int) -> tuple[int, int]:
    """Matches are clipped per n-gram at the reference count; the total is
    the number of hypothesis n-grams."""
    if n < 1:
        raise ValueError("n-gram order must be positive")
    total = max(0, len(hyp) - n + 1)
    if total == 0:
        return 0, 0
    hyp_counts = _ngram_counts(hyp, n)
    ref_counts = _ngram_counts(ref, n)
    matches = sum(min(count, ref_counts[ngram]) for ngram, count in hyp_counts.items())
    return matches, total


def corpus_bleu(pairs, order: int = 4) -> BleuReport:
    """Score a corpus of (hypothesis, reference) token sequences.

    Matches, totals, and lengths are summed over the whole corpus before
    any division, so the result is corpus-level, not sentence-averaged.
    """
    pairs = list(pairs)
    if not pairs:
        raise InputError("cannot score an empty corpus")
    if order < 1:
        raise ValueError("order must be positive")
    matches = [0] * order
    totals = [0] * order
    hyp_len = 0
    ref_len = 0
    for hyp, ref in pairs:
        hyp_len += len(hyp)
        ref_len += len(ref)
        for n in range(1, order + 1):
            m, t = clipped_ngram_matches(hyp, ref, n)
            matches[n - 1] += m
            totals[n - 1] += t

    if hyp_len == 0:
        bp = 0.0
    elif hyp_len >= ref_len:
        bp = 1.0
    else:
        bp = math.exp(1.0 - ref_len / hyp_len)

    if any(m == 0 for m in matches):
        score = 0.0
    else:
        log_sum = sum(math.log(m / t) for m, t in zip(matches, totals))
        score = bp * math.exp(log_sum / order)

    return BleuReport(
        precisions=tuple(zip(matches, totals)),
        bp=bp,
        hyp_len=hyp_len,
        ref_len=ref_len,
        score=score,
        order=order,
    )


def format_report(report: BleuReport) -> str:
    """One-line summary in the classic evaluation-script style."""
    precs = "/".join(f"{100.0 * p:.1f}" for p in report.precision_values())
    ratio = report.hyp_len / report.ref_len if report.ref_len else 0.0
    return (
        f"BLEU = {100.0 * report.score:.2f}, {precs} "
        f"(BP={report.bp:.3f}, ratio={ratio:.3f}, "
        f"hyp_len={report.hyp_len}, ref_len={report.ref_len})"
    )
