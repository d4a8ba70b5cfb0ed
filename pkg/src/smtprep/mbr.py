"""Minimum Bayes-risk selection over an n-best list.

Risk of a hypothesis is its expected loss under the softmax posterior of the
model scores, with loss(h, h') = 1 - smoothed sentence BLEU of h against h'.
Identical hypothesis strings have loss exactly 0 by definition, independent
of smoothing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .bleu import sentence_bleu_smoothed
from .corpus import CorpusFormatError, write_lines


@dataclass(frozen=True)
class NBestEntry:
    hypothesis: tuple[str, ...]
    model_score: float


@dataclass(frozen=True)
class NBestList:
    segment_id: int
    entries: tuple[NBestEntry, ...]

    def __post_init__(self):
        if not self.entries:
            raise ValueError(f"segment {self.segment_id}: empty n-best list")


@dataclass(frozen=True)
class Posterior:
    weights: tuple[float, ...]
    scale_alpha: float


def posterior_from_scores(scores, alpha: float = 1.0) -> Posterior:
    """Max-shifted softmax of alpha * scores."""
    if alpha <= 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    scores = list(scores)
    if not scores:
        raise ValueError("no scores")
    top = max(scores)
    exps = [math.exp(alpha * (s - top)) for s in scores]
    z = sum(exps)
    return Posterior(tuple(e / z for e in exps), alpha)


def mbr_select(nbest: NBestList, alpha: float = 1.0) -> tuple[int, list[float]]:
    """Index of the minimum-expected-loss hypothesis (ties: lowest index),
    plus all expected losses."""
    entries = nbest.entries
    posterior = posterior_from_scores([e.model_score for e in entries], alpha)
    n = len(entries)
    loss = [[0.0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            if entries[i].hypothesis != entries[j].hypothesis:
                loss[i][j] = 1.0 - sentence_bleu_smoothed(
                    entries[i].hypothesis, entries[j].hypothesis
                )
    expected = [
        sum(posterior.weights[j] * loss[i][j] for j in range(n)) for i in range(n)
    ]
    best = min(range(n), key=lambda i: (expected[i], i))
    return best, expected


# ---------------------------------------------------------------------------
# n-best files: `segment_id ||| hypothesis tokens ||| model_score`


def read_nbest_file(path) -> list[NBestList]:
    segments: list[tuple[int, list[NBestEntry]]] = []
    seen: set[int] = set()
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, 1):
            line = line.rstrip("\n")
            if not line.strip():
                continue
            parts = [p.strip() for p in line.split("|||")]
            if len(parts) != 3:
                raise CorpusFormatError(
                    f"{path}:{lineno}: expected `segment ||| tokens ||| score`"
                )
            try:
                seg = int(parts[0])
                score = float(parts[2])
            except ValueError:
                raise CorpusFormatError(
                    f"{path}:{lineno}: non-numeric segment id or score"
                ) from None
            tokens = tuple(parts[1].split())
            if not tokens:
                raise CorpusFormatError(f"{path}:{lineno}: empty hypothesis")
            if segments and segments[-1][0] == seg:
                segments[-1][1].append(NBestEntry(tokens, score))
            else:
                if seg in seen:
                    raise CorpusFormatError(
                        f"{path}:{lineno}: segment {seg} is not contiguous"
                    )
                seen.add(seg)
                segments.append((seg, [NBestEntry(tokens, score)]))
    return [NBestList(seg, tuple(entries)) for seg, entries in segments]


def rerank_file(path, alpha: float = 1.0) -> list[tuple[int, tuple[str, ...]]]:
    """(segment_id, selected hypothesis) per segment, in file order."""
    out = []
    for nbest in read_nbest_file(path):
        idx, _ = mbr_select(nbest, alpha)
        out.append((nbest.segment_id, nbest.entries[idx].hypothesis))
    return out


def write_selected(path, selected):
    write_lines(path, (" ".join(tokens) for _, tokens in selected))
