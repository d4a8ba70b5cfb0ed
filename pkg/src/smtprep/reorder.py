"""Head-local reordering rules learned from dependency parses and alignments.

A rule rewrites the order of one head token and its dependent subtrees, keyed
by their POS pattern. Notation: `NN&` is the head token, `IN~k` the k-th
dependent subtree counting left to right in the source. Example rule file
line (tab-separated count and probability):

    IN~1_NN&_VB~2 ==> NN&_IN~1_VB~2	17	0.850000

Identity outcomes are counted during extraction so that each pattern's
probabilities reflect how often it is NOT reordered; this inflates rule
counts relative to extractors that log only non-identity events.
"""

from __future__ import annotations

import math
import statistics
from collections import defaultdict
from dataclasses import dataclass, field

from .corpus import AlignmentSet, CorpusFormatError, DepTree, Sentence, write_lines

HEAD = "head"
SUBTREE = "subtree"

Permutation = tuple[int, ...]


@dataclass(frozen=True)
class RuleElement:
    pos: str
    kind: str  # HEAD or SUBTREE
    slot: int | None = None  # 1-based, subtrees only

    def __post_init__(self):
        if self.kind not in (HEAD, SUBTREE):
            raise ValueError(f"bad rule element kind {self.kind!r}")
        if self.kind == SUBTREE and (self.slot is None or self.slot < 1):
            raise ValueError("subtree element needs a slot >= 1")
        if self.kind == HEAD and self.slot is not None:
            raise ValueError("head element carries no slot")
        if not self.pos or any(c.isspace() for c in self.pos) or set("&~_") & set(self.pos):
            raise ValueError(f"POS tag {self.pos!r} unusable in rule notation")

    def __str__(self):
        return f"{self.pos}&" if self.kind == HEAD else f"{self.pos}~{self.slot}"


def parse_element(text: str) -> RuleElement:
    if text.endswith("&"):
        return RuleElement(text[:-1], HEAD)
    pos, sep, slot = text.rpartition("~")
    if not sep or not slot.isdigit():
        raise CorpusFormatError(f"bad rule element {text!r}")
    return RuleElement(pos, SUBTREE, int(slot))


def pattern_str(elements) -> str:
    return "_".join(str(e) for e in elements)


def parse_pattern(text: str) -> tuple[RuleElement, ...]:
    return tuple(parse_element(part) for part in text.split("_"))


@dataclass(frozen=True)
class ReorderRule:
    lhs: tuple[RuleElement, ...]
    rhs: tuple[RuleElement, ...]

    def __post_init__(self):
        for side, name in ((self.lhs, "lhs"), (self.rhs, "rhs")):
            if sum(e.kind == HEAD for e in side) != 1:
                raise ValueError(f"{name} must contain exactly one head element")
        if sorted(map(str, self.lhs)) != sorted(map(str, self.rhs)):
            raise ValueError("rhs is not a permutation of lhs")
        slots = [e.slot for e in self.lhs if e.kind == SUBTREE]
        if slots != list(range(1, len(slots) + 1)):
            raise ValueError(f"lhs subtree slots must be 1..{len(slots)} in order, got {slots}")

    def is_identity(self) -> bool:
        return self.lhs == self.rhs

    def __str__(self):
        return f"{pattern_str(self.lhs)} ==> {pattern_str(self.rhs)}"


@dataclass(frozen=True)
class RuleEntry:
    rhs: tuple[RuleElement, ...]
    count: int
    probability: float


@dataclass
class RuleTable:
    """Scored rules grouped by lhs pattern; entries sorted best-first."""

    rules: dict[str, list[RuleEntry]]
    min_count: int = 2
    min_prob: float = 0.5

    def __len__(self):
        return sum(len(v) for v in self.rules.values())

    def best(self, lhs_pattern: str) -> RuleEntry | None:
        entries = self.rules.get(lhs_pattern)
        return entries[0] if entries else None


# ---------------------------------------------------------------------------
# local tree units


@dataclass(frozen=True)
class LocalUnit:
    """One reorderable unit at a head: the head token or a dependent subtree."""

    node_id: int
    is_head: bool
    positions: tuple[int, ...]  # 0-based token positions, sorted
    pos_tag: str

    @property
    def src_pos(self) -> int:
        return self.positions[0]


def local_units(tree: DepTree, head_id: int) -> list[LocalUnit]:
    """The head token and its dependent subtrees, in source order (leftmost token)."""
    units = [LocalUnit(head_id, True, (head_id - 1,), tree.node(head_id).pos)]
    for dep in tree.children(head_id):
        positions = tuple(i - 1 for i in tree.descendants(dep))
        units.append(LocalUnit(dep, False, positions, tree.node(dep).pos))
    units.sort(key=lambda u: u.src_pos)
    return units


def _lhs_elements(units: list[LocalUnit]) -> tuple[RuleElement, ...]:
    elements = []
    slot = 0
    for u in units:
        if u.is_head:
            elements.append(RuleElement(u.pos_tag, HEAD))
        else:
            slot += 1
            elements.append(RuleElement(u.pos_tag, SUBTREE, slot))
    return tuple(elements)


def project_subtree_positions(tree: DepTree, head_id: int,
                              alignment: AlignmentSet) -> list[tuple[LocalUnit, float]]:
    """Rank each local unit by the median target index its tokens align to.

    Median is the lower of the two middle values for even counts; unaligned
    units rank +inf and keep their source-relative order (stable key).
    Returns (unit, rank) pairs sorted by (rank, source position).
    """
    src_to_tgts = defaultdict(list)
    for s, t in alignment.points:
        src_to_tgts[s].append(t)
    ranked = []
    for unit in local_units(tree, head_id):
        targets = [t for p in unit.positions for t in src_to_tgts.get(p, ())]
        rank = statistics.median_low(targets) if targets else math.inf
        ranked.append((unit, rank))
    ranked.sort(key=lambda ur: (ur[1], ur[0].src_pos))
    return ranked


# ---------------------------------------------------------------------------
# learning


def extract_rules(corpus) -> list[ReorderRule]:
    """One rule instance per head with dependents, identity outcomes included."""
    instances = []
    for idx, pair in enumerate(corpus):
        tree = pair.source_tree
        if tree is None:
            raise CorpusFormatError(f"sentence {idx + 1}: missing source dependency tree")
        for head_id in range(1, len(tree) + 1):
            units = local_units(tree, head_id)
            if len(units) < 2:
                continue  # no dependents, nothing to reorder
            lhs = _lhs_elements(units)
            element_of = {u.node_id: el for u, el in zip(units, lhs)}
            projected = project_subtree_positions(tree, head_id, pair.alignment)
            rhs = tuple(element_of[u.node_id] for u, _ in projected)
            instances.append(ReorderRule(lhs, rhs))
    return instances


def score_rules(instances, min_count: int = 2, min_prob: float = 0.5) -> RuleTable:
    """Relative-frequency scoring; entries under min_count are dropped after
    probabilities are computed, so surviving probabilities stay honest."""
    by_lhs: dict[str, dict[str, tuple[tuple[RuleElement, ...], int]]] = {}
    for rule in instances:
        lhs_key = pattern_str(rule.lhs)
        rhs_key = pattern_str(rule.rhs)
        group = by_lhs.setdefault(lhs_key, {})
        _, n = group.get(rhs_key, (rule.rhs, 0))
        group[rhs_key] = (rule.rhs, n + 1)

    rules: dict[str, list[RuleEntry]] = {}
    for lhs_key, group in by_lhs.items():
        total = sum(n for _, n in group.values())
        entries = [
            RuleEntry(rhs, n, n / total)
            for rhs_key, (rhs, n) in group.items()
            if n >= min_count
        ]
        if entries:
            entries.sort(key=lambda e: (-e.probability, -e.count, pattern_str(e.rhs)))
            rules[lhs_key] = entries
    return RuleTable(rules, min_count=min_count, min_prob=min_prob)


# ---------------------------------------------------------------------------
# application


def apply_rules(sentence, tree: DepTree, table: RuleTable) -> tuple[Sentence, Permutation]:
    """Reorder a sentence top-down by the best rule at each head.

    A rule fires when its lhs pattern is in the table, the best-scoring rhs
    is non-identity and its probability reaches table.min_prob; firing lays
    the local units out contiguously in rhs order. Where nothing fires the
    tokens keep their source positions (each unit's internal reordering is
    written back into the unit's own slots), so an empty table is the
    identity even on non-projective trees.
    """
    tokens = sentence.tokens
    if len(tokens) != len(tree):
        raise CorpusFormatError(f"{len(tokens)} tokens for a {len(tree)}-node tree")

    def order(node_id: int) -> list[int]:
        units = local_units(tree, node_id)
        if len(units) < 2:
            return [node_id - 1]
        seqs = [[node_id - 1] if u.is_head else order(u.node_id) for u in units]

        lhs = _lhs_elements(units)
        lhs_key = pattern_str(lhs)
        best = table.best(lhs_key)
        if best is not None and best.probability >= table.min_prob and best.rhs != lhs:
            by_element = {str(el): i for i, el in enumerate(lhs)}
            out: list[int] = []
            for el in best.rhs:
                out.extend(seqs[by_element[str(el)]])
            return out

        slots = sorted(p for u in units for p in u.positions)
        slot_index = {p: i for i, p in enumerate(slots)}
        placed = [0] * len(slots)
        for unit, seq in zip(units, seqs):
            for src_pos, tok_idx in zip(unit.positions, seq):
                placed[slot_index[src_pos]] = tok_idx
        return placed

    perm = tuple(order(tree.root))
    reordered = Sentence(tuple(tokens[i] for i in perm))
    return reordered, perm


def is_permutation(perm: Permutation, n: int) -> bool:
    return len(perm) == n and sorted(perm) == list(range(n))


def invert_permutation(perm: Permutation) -> Permutation:
    inv = [0] * len(perm)
    for out_pos, src_idx in enumerate(perm):
        inv[src_idx] = out_pos
    return tuple(inv)


def remap_alignment(alignment: AlignmentSet, perm: Permutation) -> AlignmentSet:
    """Rewrite source indices after reordering by perm (output pos i holds perm[i])."""
    inv = invert_permutation(perm)
    return AlignmentSet(
        frozenset((inv[s], t) for s, t in alignment.points),
        alignment.src_len, alignment.tgt_len,
    )


def crossing_score(alignment: AlignmentSet) -> float:
    """Normalized Kendall-tau distance: fraction of out-of-order point pairs."""
    pts = sorted(alignment.points)
    crossings = 0
    total = 0
    for i in range(len(pts)):
        s1, t1 = pts[i]
        for j in range(i + 1, len(pts)):
            s2, t2 = pts[j]
            if s1 < s2:
                total += 1
                crossings += t1 > t2
    return crossings / total if total else 0.0


# ---------------------------------------------------------------------------
# serialization


def format_rule_table(table: RuleTable) -> list[str]:
    lines = []
    for lhs_key in sorted(table.rules):
        for e in table.rules[lhs_key]:
            lines.append(f"{lhs_key} ==> {pattern_str(e.rhs)}\t{e.count}\t{e.probability:.6f}")
    return lines


def write_rule_table(path, table: RuleTable):
    write_lines(path, format_rule_table(table))


def read_rule_table(path, min_count: int = 2, min_prob: float = 0.5) -> RuleTable:
    rules: dict[str, list[RuleEntry]] = {}
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, 1):
            line = line.rstrip("\n")
            if not line.strip():
                continue
            try:
                rule_part, count_s, prob_s = line.split("\t")
                lhs_s, arrow, rhs_s = rule_part.partition(" ==> ")
                if not arrow:
                    raise ValueError("missing ==> separator")
                lhs = parse_pattern(lhs_s)
                rhs = parse_pattern(rhs_s)
                ReorderRule(lhs, rhs)  # validates permutation/slots
                entry = RuleEntry(rhs, int(count_s), float(prob_s))
            except (ValueError, CorpusFormatError) as e:
                raise CorpusFormatError(f"{path}:{lineno}: bad rule line ({e})") from None
            rules.setdefault(pattern_str(lhs), []).append(entry)
    for entries in rules.values():
        entries.sort(key=lambda e: (-e.probability, -e.count, pattern_str(e.rhs)))
    return RuleTable(rules, min_count=min_count, min_prob=min_prob)
