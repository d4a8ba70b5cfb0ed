import math
import random

import pytest

from smtprep.bleu import (BleuReport, corpus_bleu, format_bleu_report,
                          modified_precision, sentence_bleu_smoothed)

HYP = "the cat sat on mat".split()
REF = "the cat sat on the mat".split()

# independent closed-form value for HYP/REF: counts verified by hand
# (p = 5/5, 3/4, 2/3, 1/2; BP = e^(1 - 6/5))
EXPECTED_HYP_REF = math.exp(1 - 6 / 5) * (1.0 * 0.75 * (2 / 3) * 0.5) ** 0.25


def test_modified_precision_clipping():
    assert modified_precision([["the", "the", "the"]], [["the", "cat"]], 1) == (1, 3)


def test_modified_precision_identity():
    assert modified_precision([HYP], [HYP], 1) == (5, 5)
    assert modified_precision([HYP], [HYP], 4) == (2, 2)


def test_modified_precision_hyp_shorter_than_n():
    assert modified_precision([["a", "b"]], [["a", "b"]], 3) == (0, 0)


def test_modified_precision_rejects_length_mismatch():
    with pytest.raises(ValueError):
        modified_precision([HYP], [], 1)


def test_corpus_bleu_identity_is_one():
    corpus = [HYP, REF, ["x"]]
    report = corpus_bleu(corpus, corpus)
    assert report.score == 1.0
    assert report.brevity_penalty == 1.0
    assert report.precisions == (1.0, 1.0, 1.0, 1.0)


def test_corpus_bleu_hand_worked_example():
    report = corpus_bleu([HYP], [REF])
    assert report.precisions == (1.0, 0.75, pytest.approx(2 / 3), 0.5)
    assert report.brevity_penalty == pytest.approx(math.exp(1 - 6 / 5))
    assert report.score == pytest.approx(EXPECTED_HYP_REF)
    assert report.score == pytest.approx(0.5789, abs=1e-4)
    assert (report.hyp_len, report.ref_len) == (5, 6)


def test_corpus_bleu_disjoint_vocab_scores_zero():
    report = corpus_bleu([["a", "b"]], [["x", "y"]])
    assert report.score == 0.0
    assert report.precisions[0] == 0.0


def test_corpus_bleu_zero_precision_reports_others():
    # bigram precision is 0 but p1 is still reported
    report = corpus_bleu([["b", "a"]], [["a", "x", "b"]])
    assert report.score == 0.0
    assert report.precisions[0] == 1.0
    assert report.precisions[1] == 0.0


def test_corpus_bleu_rejects_empty():
    with pytest.raises(ValueError):
        corpus_bleu([], [])


def test_brevity_penalty_is_one_when_hyp_longer():
    report = corpus_bleu([["a", "b", "c"]], [["a", "b"]])
    assert report.brevity_penalty == 1.0


def test_corpus_bleu_invariant_under_segment_permutation():
    rng = random.Random(4)
    hyps = [[rng.choice("abcd") for _ in range(rng.randint(1, 6))] for _ in range(20)]
    refs = [[rng.choice("abcd") for _ in range(rng.randint(1, 6))] for _ in range(20)]
    base = corpus_bleu(hyps, refs)
    order = list(range(20))
    rng.shuffle(order)
    shuffled = corpus_bleu([hyps[i] for i in order], [refs[i] for i in order])
    assert shuffled == base


def test_score_monotone_in_each_precision():
    def score(ps, bp=0.9):
        return bp * math.exp(sum(math.log(p) for p in ps) / len(ps))

    base = (0.8, 0.6, 0.4, 0.2)
    for i in range(4):
        bumped = tuple(p + 0.1 if j == i else p for j, p in enumerate(base))
        assert score(bumped) > score(base)


# --- smoothed sentence BLEU ----------------------------------------------


def test_sentence_smoothed_identity_dominates_same_length():
    ref = ["a", "b", "c", "d"]
    identity = sentence_bleu_smoothed(ref, ref)
    for hyp in (["a", "b", "c", "x"], ["b", "a", "c", "d"], ["x", "y", "z", "w"]):
        assert identity >= sentence_bleu_smoothed(hyp, ref)


def test_sentence_smoothed_disjoint_is_zero():
    assert sentence_bleu_smoothed(["a", "b"], ["x", "y"]) == 0.0


def test_sentence_smoothed_hand_computation():
    # p1 = 1/2 unsmoothed; p2 = (0+1)/(1+1); p3 = p4 = (0+1)/(0+1); BP = 1
    expected = (0.5 * 0.5 * 1.0 * 1.0) ** 0.25
    assert sentence_bleu_smoothed(["a", "b"], ["a", "c"]) == pytest.approx(expected)


def test_sentence_smoothed_rejects_empty():
    with pytest.raises(ValueError):
        sentence_bleu_smoothed([], ["a"])


def test_sentence_smoothed_in_unit_interval():
    rng = random.Random(9)
    for _ in range(200):
        hyp = [rng.choice("abc") for _ in range(rng.randint(1, 8))]
        ref = [rng.choice("abc") for _ in range(rng.randint(1, 8))]
        assert 0.0 <= sentence_bleu_smoothed(hyp, ref) <= 1.0


# --- report formatting ------------------------------------------------------


def test_format_bleu_report():
    report = corpus_bleu([HYP], [REF])
    line = format_bleu_report(report)
    assert line.startswith("BLEU = 57.89 (100.0/75.0/66.7/50.0, BP=0.819")
    assert "hyp_len=5" in line and "ref_len=6" in line


def test_format_identity_is_100():
    line = format_bleu_report(corpus_bleu([HYP], [HYP]))
    assert line.startswith("BLEU = 100.00")


def test_report_invariant_fields():
    report = BleuReport((1.0, 1.0), 1.0, 1.0, 4, 4)
    assert 0.0 <= report.score <= 1.0
