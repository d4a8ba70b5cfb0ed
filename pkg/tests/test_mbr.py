import math
import random

import pytest

from smtprep.bleu import sentence_bleu_smoothed
from smtprep.corpus import CorpusFormatError
from smtprep.mbr import (NBestEntry, NBestList, mbr_select,
                         posterior_from_scores, read_nbest_file, rerank_file,
                         write_selected)


def nbest(hyps, scores=None, segment_id=0):
    scores = scores if scores is not None else [0.0] * len(hyps)
    return NBestList(segment_id, tuple(
        NBestEntry(tuple(h.split()), s) for h, s in zip(hyps, scores)
    ))


def oracle_select(entries, alpha):
    """Independent re-implementation: naive (unshifted) softmax + double loop."""
    weights = [math.exp(alpha * e.model_score) for e in entries]
    z = sum(weights)
    weights = [w / z for w in weights]
    best_i, best_risk = 0, None
    for i, hi in enumerate(entries):
        risk = 0.0
        for j, hj in enumerate(entries):
            if hi.hypothesis == hj.hypothesis:
                continue
            risk += weights[j] * (1.0 - sentence_bleu_smoothed(hi.hypothesis, hj.hypothesis))
        if best_risk is None or risk < best_risk:
            best_i, best_risk = i, risk
    return best_i


def test_posterior_uniform_for_equal_scores():
    assert posterior_from_scores([3.0] * 4).weights == (0.25, 0.25, 0.25, 0.25)


def test_posterior_single_entry():
    assert posterior_from_scores([-7.5]).weights == (1.0,)


def test_posterior_hand_softmax():
    p = posterior_from_scores([0.0, math.log(3.0)], alpha=1.0)
    assert p.weights == pytest.approx((0.25, 0.75))
    assert p.scale_alpha == 1.0


def test_posterior_rejects_bad_alpha():
    with pytest.raises(ValueError):
        posterior_from_scores([1.0], alpha=0.0)
    with pytest.raises(ValueError):
        posterior_from_scores([1.0], alpha=-1.0)


def test_posterior_sums_to_one():
    rng = random.Random(12)
    for _ in range(50):
        scores = [rng.uniform(-100, 10) for _ in range(rng.randint(1, 20))]
        assert sum(posterior_from_scores(scores, 2.0).weights) == pytest.approx(1.0)


def test_mbr_single_hypothesis():
    idx, losses = mbr_select(nbest(["a b"]))
    assert idx == 0
    assert losses == [0.0]


def test_mbr_identical_hypotheses_zero_loss():
    idx, losses = mbr_select(nbest(["a b", "a b", "a b"]))
    assert idx == 0
    assert losses == [0.0, 0.0, 0.0]


def test_mbr_majority_neighborhood_wins():
    idx, losses = mbr_select(nbest(["a b c", "a b d", "x y z"]))
    assert idx == 0
    assert losses[0] < losses[2] and losses[1] < losses[2]


def test_mbr_losses_in_unit_interval():
    rng = random.Random(6)
    for _ in range(30):
        hyps = [" ".join(rng.choice("abcd") for _ in range(rng.randint(1, 5)))
                for _ in range(rng.randint(1, 10))]
        scores = [rng.uniform(-5, 5) for _ in hyps]
        _, losses = mbr_select(nbest(hyps, scores))
        assert all(0.0 <= e <= 1.0 for e in losses)


def test_mbr_matches_bruteforce_oracle():
    rng = random.Random(99)
    for _ in range(60):
        n = rng.randint(1, 15)
        hyps = [" ".join(rng.choice("abcdef") for _ in range(rng.randint(1, 6)))
                for _ in range(n)]
        scores = [rng.uniform(-3, 3) for _ in range(n)]
        alpha = rng.choice([0.5, 1.0, 2.0])
        lst = nbest(hyps, scores)
        idx, _ = mbr_select(lst, alpha)
        assert idx == oracle_select(lst.entries, alpha)


def test_mbr_selection_invariant_under_score_shift():
    rng = random.Random(314)
    for _ in range(40):
        n = rng.randint(1, 12)
        hyps = [" ".join(rng.choice("abcd") for _ in range(rng.randint(1, 5)))
                for _ in range(n)]
        scores = [rng.uniform(-4, 4) for _ in range(n)]
        shift = rng.uniform(-50, 50)
        base, _ = mbr_select(nbest(hyps, scores))
        shifted, _ = mbr_select(nbest(hyps, [s + shift for s in scores]))
        assert base == shifted


def test_empty_nbest_rejected():
    with pytest.raises(ValueError):
        NBestList(0, ())


# --- files -------------------------------------------------------------------


NBEST_TEXT = """\
0 ||| the cat sat ||| -1.5
0 ||| the cat sits ||| -2.0
0 ||| a dog ||| -9.0
1 ||| hello there ||| -0.5
"""


def test_read_nbest_file(tmp_path):
    path = tmp_path / "nbest.txt"
    path.write_text(NBEST_TEXT)
    lists = read_nbest_file(path)
    assert [l.segment_id for l in lists] == [0, 1]
    assert len(lists[0].entries) == 3
    assert lists[0].entries[0] == NBestEntry(("the", "cat", "sat"), -1.5)


def test_read_nbest_rejects_noncontiguous(tmp_path):
    path = tmp_path / "nbest.txt"
    path.write_text("0 ||| a ||| 0\n1 ||| b ||| 0\n0 ||| c ||| 0\n")
    with pytest.raises(CorpusFormatError, match="contiguous"):
        read_nbest_file(path)


def test_read_nbest_rejects_malformed(tmp_path):
    path = tmp_path / "nbest.txt"
    path.write_text("0 ||| only two fields\n")
    with pytest.raises(CorpusFormatError, match=":1"):
        read_nbest_file(path)


def test_rerank_file_and_write(tmp_path):
    path = tmp_path / "nbest.txt"
    path.write_text(NBEST_TEXT)
    selected = rerank_file(path, alpha=1.0)
    assert [seg for seg, _ in selected] == [0, 1]
    assert selected[0][1] in {("the", "cat", "sat"), ("the", "cat", "sits")}
    assert selected[1][1] == ("hello", "there")
    out = tmp_path / "out.txt"
    write_selected(out, selected)
    assert out.read_text().count("\n") == 2
