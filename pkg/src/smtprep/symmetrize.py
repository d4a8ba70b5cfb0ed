"""Symmetrization of two directional word alignments.

Both inputs must already be in source-major orientation, i.e. the
target-to-source alignment's points are given as (src, tgt) too.
"""

from __future__ import annotations

from .corpus import AlignmentSet, CorpusFormatError

GDF = "gdf"
GDFA = "gdfa"

_NEIGHBORS = ((-1, 0), (0, -1), (1, 0), (0, 1), (-1, -1), (-1, 1), (1, -1), (1, 1))


def _check_dims(a2b: AlignmentSet, b2a: AlignmentSet):
    if (a2b.src_len, a2b.tgt_len) != (b2a.src_len, b2a.tgt_len):
        raise CorpusFormatError(
            f"dimension mismatch: {a2b.src_len}x{a2b.tgt_len} vs {b2a.src_len}x{b2a.tgt_len}"
        )


def intersect(a2b: AlignmentSet, b2a: AlignmentSet) -> AlignmentSet:
    _check_dims(a2b, b2a)
    return AlignmentSet(a2b.points & b2a.points, a2b.src_len, a2b.tgt_len)


def union_align(a2b: AlignmentSet, b2a: AlignmentSet) -> AlignmentSet:
    _check_dims(a2b, b2a)
    return AlignmentSet(a2b.points | b2a.points, a2b.src_len, a2b.tgt_len)


def grow_diag_final(a2b: AlignmentSet, b2a: AlignmentSet, mode: str = GDF) -> AlignmentSet:
    """Symmetrize with the grow-diag-final heuristic.

    Starts from the intersection. GROW-DIAG sweeps the union points in
    row-major (src, tgt) order to a fixpoint, adding any point that
    8-neighbors a current point and whose source or target word is still
    unaligned. FINAL adds remaining union points whose source or target word
    is unaligned ("gdf"), or whose source AND target words are both
    unaligned ("gdfa").
    """
    if mode not in (GDF, GDFA):
        raise ValueError(f"unknown symmetrization mode {mode!r}")
    _check_dims(a2b, b2a)
    union = sorted(a2b.points | b2a.points)
    aligned = set(a2b.points & b2a.points)
    src_cov = {s for s, _ in aligned}
    tgt_cov = {t for _, t in aligned}

    def add(s, t):
        aligned.add((s, t))
        src_cov.add(s)
        tgt_cov.add(t)

    changed = True
    while changed:
        changed = False
        for s, t in union:
            if (s, t) in aligned:
                continue
            if s in src_cov and t in tgt_cov:
                continue
            if any((s + ds, t + dt) in aligned for ds, dt in _NEIGHBORS):
                add(s, t)
                changed = True

    for s, t in union:
        if (s, t) in aligned:
            continue
        if mode == GDFA:
            ok = s not in src_cov and t not in tgt_cov
        else:
            ok = s not in src_cov or t not in tgt_cov
        if ok:
            add(s, t)

    return AlignmentSet(frozenset(aligned), a2b.src_len, a2b.tgt_len)
