"""Back-off n-gram language model with MLE or interpolated Witten-Bell smoothing.

Probabilities are stored and exposed in log10, ARPA-style: seen n-grams carry
their (smoothed) conditional probability, contexts carry a back-off weight,
and unseen n-grams are scored as bow(context) + P(word | shorter context).
Witten-Bell interpolation is folded into the stored probabilities at training
time, with bow(h) = T(h) / (c(h) + T(h)), which reproduces the interpolated
model exactly. Under MLE there are no back-off weights and anything unseen
scores -inf. Witten-Bell is a closed-form stand-in for a toolkit-default
smoother; it needs no held-out tuning.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass

BOS = "<s>"
EOS = "</s>"
UNK = "<unk>"

MLE = "mle"
WITTEN_BELL = "witten-bell"

PLACEHOLDER_LOGPROB = -99.0  # conventional stand-in for context-only entries

NEG_INF = float("-inf")


@dataclass(frozen=True)
class NGramLM:
    order: int
    smoothing: str
    vocab: frozenset[str]  # predicted tokens plus <s>, </s>, <unk>
    probabilities: dict[tuple[str, ...], float]  # log10 P(last | rest)
    backoffs: dict[tuple[str, ...], float]  # log10 back-off weight per context

    def prediction_vocab(self) -> frozenset[str]:
        """Everything the model can predict: vocab minus the start pad."""
        return self.vocab - {BOS}

    def logprob(self, word: str, context=()) -> float:
        """log10 P(word | context), using at most the last order-1 context tokens."""
        ctx = tuple(context)
        if self.order > 1:
            ctx = ctx[-(self.order - 1):]
        else:
            ctx = ()
        return self._lookup(ctx + (word,))

    def _lookup(self, ngram: tuple[str, ...]) -> float:
        p = self.probabilities.get(ngram)
        if p is not None:
            return p
        if len(ngram) == 1 or self.smoothing == MLE:
            return NEG_INF
        bow = self.backoffs.get(ngram[:-1], 0.0)
        return bow + self._lookup(ngram[1:])


def train_lm(corpus, order: int, smoothing: str = WITTEN_BELL) -> NGramLM:
    """Count padded n-gram events and freeze a queryable model.

    Each sentence is padded with order-1 <s> tokens and one terminating </s>;
    every predicted position contributes one event at each order 1..order.
    """
    if order < 1:
        raise ValueError(f"order must be >= 1, got {order}")
    if smoothing not in (MLE, WITTEN_BELL):
        raise ValueError(f"unknown smoothing {smoothing!r}")
    sentences = [tuple(s) for s in corpus]
    if not sentences:
        raise ValueError("cannot train on an empty corpus")

    counts: dict[tuple[str, ...], int] = defaultdict(int)
    context_counts: dict[tuple[str, ...], int] = defaultdict(int)
    continuations: dict[tuple[str, ...], set[str]] = defaultdict(set)
    for toks in sentences:
        padded = (BOS,) * (order - 1) + toks + (EOS,)
        for i in range(order - 1, len(padded)):
            w = padded[i]
            for k in range(1, order + 1):
                ctx = padded[i - k + 1:i]
                counts[ctx + (w,)] += 1
                context_counts[ctx] += 1
                continuations[ctx].add(w)

    pred_vocab = set(continuations[()])
    pred_vocab.add(UNK)
    vocab = frozenset(pred_vocab | {BOS})

    probabilities: dict[tuple[str, ...], float] = {}
    backoffs: dict[tuple[str, ...], float] = {}

    if smoothing == MLE:
        for ngram, c in counts.items():
            probabilities[ngram] = math.log10(c / context_counts[ngram[:-1]])
    else:
        uniform = 1.0 / len(pred_vocab)

        def wb_prob(ctx: tuple[str, ...], w: str) -> float:
            c = context_counts.get(ctx, 0)
            t = len(continuations.get(ctx, ()))
            if ctx:
                lower = wb_prob(ctx[1:], w)
                if c + t == 0:
                    return lower
                return (counts.get(ctx + (w,), 0) + t * lower) / (c + t)
            return (counts.get((w,), 0) + t * uniform) / (c + t)

        for ngram in counts:
            probabilities[ngram] = math.log10(wb_prob(ngram[:-1], ngram[-1]))
        probabilities[(UNK,)] = math.log10(wb_prob((), UNK))
        for ctx, c in context_counts.items():
            if not ctx:
                continue
            t = len(continuations[ctx])
            backoffs[ctx] = math.log10(t / (c + t))

    return NGramLM(order, smoothing, vocab, dict(probabilities), dict(backoffs))


def sequence_logprob(lm: NGramLM, sentence) -> float:
    """Total log10 probability of a token sequence, </s>-terminated.

    Tokens outside the vocabulary are mapped to <unk>; under MLE that makes
    the result -inf (the sentinel, not an error).
    """
    toks = tuple(t if t in lm.vocab else UNK for t in sentence)
    padded = (BOS,) * (lm.order - 1) + toks + (EOS,)
    total = 0.0
    for i in range(lm.order - 1, len(padded)):
        lp = lm.logprob(padded[i], padded[:i])
        if lp == NEG_INF:
            return NEG_INF
        total += lp
    return total


def perplexity(lm: NGramLM, corpus) -> float:
    """10^(-mean log10 prob per predicted token); </s> counts as predicted."""
    total_lp = 0.0
    predicted = 0
    n_sentences = 0
    for sentence in corpus:
        toks = tuple(sentence)
        n_sentences += 1
        predicted += len(toks) + 1
        lp = sequence_logprob(lm, toks)
        if lp == NEG_INF:
            return math.inf
        total_lp += lp
    if n_sentences == 0:
        raise ValueError("cannot compute perplexity of an empty corpus")
    return 10.0 ** (-total_lp / predicted)


# ---------------------------------------------------------------------------
# ARPA-style model files


def write_arpa(path, lm: NGramLM):
    """`\\data\\` header, then per-order `log10prob<TAB>ngram<TAB>log10backoff?`."""
    per_order: dict[int, dict[tuple[str, ...], tuple[float, float | None]]] = {
        k: {} for k in range(1, lm.order + 1)
    }
    for ngram, p in lm.probabilities.items():
        per_order[len(ngram)][ngram] = (p, None)
    for ctx, bow in lm.backoffs.items():
        prob, _ = per_order[len(ctx)].get(ctx, (PLACEHOLDER_LOGPROB, None))
        per_order[len(ctx)][ctx] = (prob, bow)

    with open(path, "w", encoding="utf-8") as f:
        f.write("\\data\\\n")
        for k in range(1, lm.order + 1):
            f.write(f"ngram {k}={len(per_order[k])}\n")
        for k in range(1, lm.order + 1):
            f.write(f"\n\\{k}-grams:\n")
            for ngram in sorted(per_order[k]):
                prob, bow = per_order[k][ngram]
                line = f"{prob:.7f}\t{' '.join(ngram)}"
                if bow is not None:
                    line += f"\t{bow:.7f}"
                f.write(line + "\n")
        f.write("\n\\end\\\n")


def read_arpa(path) -> NGramLM:
    """Read a model file back; smoothing is inferred from the file contents
    (back-off weights or an <unk> unigram imply witten-bell, else mle)."""
    probabilities: dict[tuple[str, ...], float] = {}
    backoffs: dict[tuple[str, ...], float] = {}
    declared: dict[int, int] = {}
    order = 0
    section = None
    with open(path, encoding="utf-8") as f:
        for lineno, raw in enumerate(f, 1):
            line = raw.rstrip("\n")
            if not line.strip():
                continue
            if line == "\\data\\":
                section = "data"
                continue
            if line == "\\end\\":
                section = "end"
                continue
            if line.startswith("\\") and line.endswith("-grams:"):
                section = int(line[1:-len("-grams:")])
                order = max(order, section)
                continue
            if section == "data":
                name, _, count = line.partition("=")
                declared[int(name.split()[1])] = int(count)
                continue
            if not isinstance(section, int):
                raise ValueError(f"{path}:{lineno}: content outside any section")
            fields = line.split("\t")
            if len(fields) not in (2, 3):
                raise ValueError(f"{path}:{lineno}: expected 2 or 3 tab-separated fields")
            ngram = tuple(fields[1].split(" "))
            if len(ngram) != section:
                raise ValueError(f"{path}:{lineno}: {len(ngram)}-gram in \\{section}-grams:")
            prob = float(fields[0])
            if prob != PLACEHOLDER_LOGPROB:
                probabilities[ngram] = prob
            if len(fields) == 3:
                backoffs[ngram] = float(fields[2])
    if order == 0:
        raise ValueError(f"{path}: no n-gram sections found")
    vocab = {ng[0] for ng in probabilities if len(ng) == 1}
    vocab |= {BOS, EOS, UNK}
    smoothing = WITTEN_BELL if backoffs or (UNK,) in probabilities else MLE
    return NGramLM(order, smoothing, frozenset(vocab), probabilities, backoffs)
