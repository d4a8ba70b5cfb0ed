import random

import pytest

from smtprep.corpus import CorpusFormatError
from smtprep.symmetrize import GDF, GDFA, grow_diag_final, intersect, union_align

from util import make_alignment


def test_intersect_examples():
    a = make_alignment({(0, 0), (1, 1)}, 2, 2)
    assert intersect(a, a).points == {(0, 0), (1, 1)}
    assert intersect(make_alignment({(0, 0)}, 2, 2),
                     make_alignment({(1, 1)}, 2, 2)).points == set()
    assert intersect(make_alignment({(0, 0), (1, 0)}, 2, 2),
                     make_alignment({(0, 0), (1, 1)}, 2, 2)).points == {(0, 0)}


def test_union_examples():
    a = make_alignment({(0, 0), (1, 1)}, 2, 2)
    assert union_align(a, a).points == a.points
    assert union_align(make_alignment({(0, 0)}, 2, 2),
                       make_alignment({(1, 1)}, 2, 2)).points == {(0, 0), (1, 1)}
    empty = make_alignment(set(), 2, 2)
    assert union_align(empty, empty).points == set()


def test_dimension_mismatch_rejected():
    with pytest.raises(CorpusFormatError):
        intersect(make_alignment(set(), 2, 2), make_alignment(set(), 2, 3))
    with pytest.raises(CorpusFormatError):
        grow_diag_final(make_alignment(set(), 2, 2), make_alignment(set(), 3, 2))


def test_gdf_identical_inputs_fixed():
    a = make_alignment({(0, 0), (1, 1)}, 2, 2)
    assert grow_diag_final(a, a, GDF).points == a.points
    assert grow_diag_final(a, a, GDFA).points == a.points


def test_gdf_grow_from_intersection():
    # classical OR growth: (1,0) has an unaligned source word and neighbors
    # (0,0), so GROW-DIAG adds it; then (1,1) via the diagonal
    a2b = make_alignment({(0, 0), (1, 1)}, 2, 2)
    b2a = make_alignment({(0, 0), (1, 0)}, 2, 2)
    assert grow_diag_final(a2b, b2a, GDF).points == {(0, 0), (1, 0), (1, 1)}


def test_gdf_final_fills_empty_intersection():
    a2b = make_alignment({(0, 1)}, 2, 2)
    b2a = make_alignment({(1, 0)}, 2, 2)
    assert grow_diag_final(a2b, b2a, GDF).points == {(0, 1), (1, 0)}


def test_final_and_requires_both_unaligned():
    a2b = make_alignment({(0, 0), (0, 2)}, 1, 3)
    b2a = make_alignment({(0, 0)}, 1, 3)
    # (0,2) is not an 8-neighbor of (0,0); src word 0 is aligned, tgt 2 is not
    assert grow_diag_final(a2b, b2a, GDF).points == {(0, 0), (0, 2)}
    assert grow_diag_final(a2b, b2a, GDFA).points == {(0, 0)}


def test_unknown_mode_rejected():
    a = make_alignment(set(), 1, 1)
    with pytest.raises(ValueError):
        grow_diag_final(a, a, "union")


def _random_alignment(rng, src_len, tgt_len, density=0.25):
    points = {(s, t) for s in range(src_len) for t in range(tgt_len)
              if rng.random() < density}
    return make_alignment(points, src_len, tgt_len)


def test_sandwich_property_randomized():
    rng = random.Random(42)
    for _ in range(500):
        src_len = rng.randint(1, 10)
        tgt_len = rng.randint(1, 10)
        a2b = _random_alignment(rng, src_len, tgt_len)
        b2a = _random_alignment(rng, src_len, tgt_len)
        inter = intersect(a2b, b2a).points
        union = union_align(a2b, b2a).points
        for mode in (GDF, GDFA):
            gdf = grow_diag_final(a2b, b2a, mode).points
            assert inter <= gdf <= union


def test_commutativity_of_set_ops():
    rng = random.Random(7)
    for _ in range(100):
        a = _random_alignment(rng, 6, 6)
        b = _random_alignment(rng, 6, 6)
        assert intersect(a, b).points == intersect(b, a).points
        assert union_align(a, b).points == union_align(b, a).points


def test_gdf_deterministic():
    rng = random.Random(3)
    for _ in range(100):
        a = _random_alignment(rng, 8, 8)
        b = _random_alignment(rng, 8, 8)
        first = grow_diag_final(a, b, GDF)
        second = grow_diag_final(a, b, GDF)
        assert first.points == second.points
        assert first.to_line() == second.to_line()


def test_gdf_collapses_when_intersection_is_union():
    rng = random.Random(11)
    for _ in range(50):
        a = _random_alignment(rng, 6, 6)
        assert grow_diag_final(a, a, GDF).points == a.points
