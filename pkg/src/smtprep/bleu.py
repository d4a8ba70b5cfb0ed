"""Corpus BLEU (geometric mean of clipped n-gram precisions x brevity penalty)
and an add-one-smoothed sentence-level variant for use as an MBR loss.

Single reference per segment. Scores are fractions in [0, 1]; the CLI prints
them x100 per the usual reporting convention.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass


@dataclass(frozen=True)
class BleuReport:
    precisions: tuple[float, ...]  # p_1..p_N
    brevity_penalty: float
    score: float
    hyp_len: int
    ref_len: int


def _ngrams(tokens, n: int) -> Counter:
    return Counter(tuple(tokens[i:i + n]) for i in range(len(tokens) - n + 1))


def _clipped_counts(hyp, ref, n: int) -> tuple[int, int]:
    hyp_counts = _ngrams(hyp, n)
    if not hyp_counts:
        return 0, 0
    ref_counts = _ngrams(ref, n)
    clipped = sum(min(c, ref_counts[g]) for g, c in hyp_counts.items())
    return clipped, sum(hyp_counts.values())


def modified_precision(hypotheses, references, n: int) -> tuple[int, int]:
    """Corpus-wide (clipped match count, total hypothesis n-gram count)."""
    if len(hypotheses) != len(references):
        raise ValueError(
            f"{len(hypotheses)} hypotheses vs {len(references)} references"
        )
    matches = total = 0
    for hyp, ref in zip(hypotheses, references):
        m, t = _clipped_counts(tuple(hyp), tuple(ref), n)
        matches += m
        total += t
    return matches, total


def brevity_penalty(hyp_len: int, ref_len: int) -> float:
    if hyp_len == 0:
        return 0.0
    if hyp_len >= ref_len:
        return 1.0
    return math.exp(1.0 - ref_len / hyp_len)


def corpus_bleu(hypotheses, references, max_n: int = 4) -> BleuReport:
    if max_n < 1:
        raise ValueError("max_n must be >= 1")
    if not hypotheses:
        raise ValueError("empty corpus")
    hyps = [tuple(h) for h in hypotheses]
    refs = [tuple(r) for r in references]
    precisions = []
    for n in range(1, max_n + 1):
        matches, total = modified_precision(hyps, refs, n)
        precisions.append(matches / total if total else 0.0)
    hyp_len = sum(len(h) for h in hyps)
    ref_len = sum(len(r) for r in refs)
    bp = brevity_penalty(hyp_len, ref_len)
    if any(p == 0.0 for p in precisions):
        score = 0.0
    else:
        score = bp * math.exp(sum(math.log(p) for p in precisions) / max_n)
    return BleuReport(tuple(precisions), bp, score, hyp_len, ref_len)


def sentence_bleu_smoothed(hyp, ref, max_n: int = 4) -> float:
    """Sentence BLEU with add-one smoothing on the n >= 2 precisions.

    p_1 stays unsmoothed, so hypotheses sharing no token with the reference
    score exactly 0.
    """
    hyp = tuple(hyp)
    ref = tuple(ref)
    if not hyp or not ref:
        raise ValueError("hypothesis and reference must be non-empty")
    log_sum = 0.0
    for n in range(1, max_n + 1):
        matches, total = _clipped_counts(hyp, ref, n)
        if n >= 2:
            matches, total = matches + 1, total + 1
        if matches == 0:
            return 0.0
        log_sum += math.log(matches / total)
    return brevity_penalty(len(hyp), len(ref)) * math.exp(log_sum / max_n)


def format_bleu_report(report: BleuReport) -> str:
    precisions = "/".join(f"{100.0 * p:.1f}" for p in report.precisions)
    ratio = report.hyp_len / report.ref_len if report.ref_len else 0.0
    return (
        f"BLEU = {100.0 * report.score:.2f} ({precisions}, "
        f"BP={report.brevity_penalty:.3f}, ratio={ratio:.3f}, "
        f"hyp_len={report.hyp_len}, ref_len={report.ref_len})"
    )
