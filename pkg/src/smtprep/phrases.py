"""Alignment-consistent phrase-pair extraction with orientation statistics.

A phrase pair is a source span and a target span such that (a) at least one
alignment point falls inside the span rectangle and (b) no alignment point
links a word inside either span to a word outside the other span. Rectangles
padded with unaligned boundary rows/columns satisfy the same predicate and
are extracted too.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .corpus import SentencePair

MONO = "mono"
SWAP = "swap"
DISCONTINUOUS = "discontinuous"


@dataclass(frozen=True)
class ExtractConfig:
    max_phrase_len: int = 7

    def __post_init__(self):
        if self.max_phrase_len < 1:
            raise ValueError("max_phrase_len must be >= 1")


@dataclass(frozen=True)
class PhrasePair:
    src_span: tuple[int, int]  # inclusive
    tgt_span: tuple[int, int]  # inclusive
    src_tokens: tuple[str, ...]
    tgt_tokens: tuple[str, ...]


@dataclass
class OrientationCounts:
    """mono/swap/discontinuous counts w.r.t. the previous and next phrase."""

    prev_mono: int = 0
    prev_swap: int = 0
    prev_disc: int = 0
    next_mono: int = 0
    next_swap: int = 0
    next_disc: int = 0

    def add(self, prev_orient: str, next_orient: str):
        self.prev_mono += prev_orient == MONO
        self.prev_swap += prev_orient == SWAP
        self.prev_disc += prev_orient == DISCONTINUOUS
        self.next_mono += next_orient == MONO
        self.next_swap += next_orient == SWAP
        self.next_disc += next_orient == DISCONTINUOUS


@dataclass
class PhraseEntry:
    count: int = 0
    p_tgt_given_src: float = 0.0
    p_src_given_tgt: float = 0.0
    orientation: OrientationCounts = field(default_factory=OrientationCounts)


@dataclass
class PhraseTable:
    entries: dict[tuple[tuple[str, ...], tuple[str, ...]], PhraseEntry]

    def __len__(self):
        return len(self.entries)


def distortion(prev_src_end: int, cur_src_start: int) -> int:
    """Source-side jump distance between consecutive phrases; 0 when adjacent."""
    return abs(cur_src_start - (prev_src_end + 1))


def extract_phrase_pairs(pair: SentencePair, cfg: ExtractConfig) -> list[PhrasePair]:
    """All consistent phrase pairs with both side lengths <= max_phrase_len.

    Output is sorted by (src_start, src_end, tgt_start, tgt_end).
    """
    align = pair.alignment
    if not align.points:
        return []
    src_len, tgt_len = align.src_len, align.tgt_len
    max_len = cfg.max_phrase_len
    src_tokens = pair.source.tokens
    tgt_tokens = pair.target.tokens

    by_src: list[list[int]] = [[] for _ in range(src_len)]
    tgt_smin = [src_len] * tgt_len
    tgt_smax = [-1] * tgt_len
    for s, t in align.points:
        by_src[s].append(t)
        tgt_smin[t] = min(tgt_smin[t], s)
        tgt_smax[t] = max(tgt_smax[t], s)
    tgt_aligned = [tgt_smax[t] >= 0 for t in range(tgt_len)]

    out = []
    for s1 in range(src_len):
        tmin, tmax = tgt_len, -1
        for s2 in range(s1, min(s1 + max_len, src_len)):
            for t in by_src[s2]:
                tmin = min(tmin, t)
                tmax = max(tmax, t)
            if tmax < 0:
                continue  # no point inside yet
            # every aligned word in the minimal target span must map back inside
            if any(tgt_aligned[t] and (tgt_smin[t] < s1 or tgt_smax[t] > s2)
                   for t in range(tmin, tmax + 1)):
                continue
            # widen over unaligned target columns on both sides
            t1 = tmin
            while t1 >= 0 and (t1 == tmin or not tgt_aligned[t1]):
                if tmax - t1 + 1 > max_len:
                    break
                t2 = tmax
                while t2 < tgt_len and (t2 == tmax or not tgt_aligned[t2]):
                    if t2 - t1 + 1 > max_len:
                        break
                    out.append(PhrasePair(
                        (s1, s2), (t1, t2),
                        tuple(src_tokens[s1:s2 + 1]),
                        tuple(tgt_tokens[t1:t2 + 1]),
                    ))
                    t2 += 1
                t1 -= 1
    out.sort(key=lambda p: (p.src_span, p.tgt_span))
    return out


def phrase_orientation(pair: SentencePair, phrase: PhrasePair) -> tuple[str, str]:
    """Orientation of a phrase w.r.t. its previous and next target neighbor.

    Looks for the alignment point at the relevant corner: top-left mono /
    top-right swap for the previous side, bottom-right mono / bottom-left swap
    for the next side. The first target phrase counts as mono w.r.t. prev, the
    last as mono w.r.t. next.
    """
    points = pair.alignment.points
    s1, s2 = phrase.src_span
    t1, t2 = phrase.tgt_span

    if t1 == 0:
        prev = MONO
    elif (s1 - 1, t1 - 1) in points:
        prev = MONO
    elif (s2 + 1, t1 - 1) in points:
        prev = SWAP
    else:
        prev = DISCONTINUOUS

    if t2 == pair.alignment.tgt_len - 1:
        nxt = MONO
    elif (s2 + 1, t2 + 1) in points:
        nxt = MONO
    elif (s1 - 1, t2 + 1) in points:
        nxt = SWAP
    else:
        nxt = DISCONTINUOUS

    return prev, nxt


def estimate_phrase_table(corpus, cfg: ExtractConfig, workers: int = 1) -> PhraseTable:
    """Relative-frequency phrase table with msd-bidirectional orientation counts.

    Extraction runs per sentence pair (optionally in parallel); aggregation is
    a deterministic order-preserving reduction, so the result is independent
    of the worker count.
    """
    from .parallel import parallel_map

    pairs = list(corpus)
    extracted = parallel_map(lambda p: extract_phrase_pairs(p, cfg), pairs, workers)
    entries: dict[tuple[tuple[str, ...], tuple[str, ...]], PhraseEntry] = {}
    for pair, phrases in zip(pairs, extracted):
        for phrase in phrases:
            key = (phrase.src_tokens, phrase.tgt_tokens)
            entry = entries.setdefault(key, PhraseEntry())
            entry.count += 1
            entry.orientation.add(*phrase_orientation(pair, phrase))

    src_totals: dict[tuple[str, ...], int] = {}
    tgt_totals: dict[tuple[str, ...], int] = {}
    for (src, tgt), entry in entries.items():
        src_totals[src] = src_totals.get(src, 0) + entry.count
        tgt_totals[tgt] = tgt_totals.get(tgt, 0) + entry.count
    for (src, tgt), entry in entries.items():
        entry.p_tgt_given_src = entry.count / src_totals[src]
        entry.p_src_given_tgt = entry.count / tgt_totals[tgt]
    return PhraseTable(entries)


def format_phrase_table(table: PhraseTable) -> list[str]:
    """`src ||| tgt ||| p_t_given_s p_s_given_t ||| mp sp dp mn sn dn ||| count`."""
    lines = []
    for (src, tgt), e in table.entries.items():
        o = e.orientation
        lines.append(
            f"{' '.join(src)} ||| {' '.join(tgt)} ||| "
            f"{e.p_tgt_given_src:.6f} {e.p_src_given_tgt:.6f} ||| "
            f"{o.prev_mono} {o.prev_swap} {o.prev_disc} "
            f"{o.next_mono} {o.next_swap} {o.next_disc} ||| {e.count}"
        )
    return sorted(lines)


def write_phrase_table(path, table: PhraseTable):
    from .corpus import write_lines

    write_lines(path, format_phrase_table(table))
