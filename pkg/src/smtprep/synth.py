"""Synthetic parallel corpus with known head-local reorderings.

A tiny English-ish grammar emits dependency-parsed sentences; the target side
is the same sentence rendered through a fixed toy lexicon in an order obtained
by applying three hidden unit permutations directly on the templates:

    clause      [PP NN VP]  ->  [NN PP VP]
    noun phrase [JJ NN]     ->  [NN JJ]
    verb phrase [VB RB]     ->  [RB VB]

The alignment of each pair is the induced bijection. The target-order
construction is template-driven and does not go through the rule machinery,
so learned-rule recovery can be checked against it.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .corpus import (AlignmentSet, DepNode, DepTree, Sentence, SentencePair,
                     TaggedSentence)

# lhs ==> rhs in rule-table notation, for checking recovery
HIDDEN_RULES = {
    "IN~1_NN&_VB~2": "NN&_IN~1_VB~2",
    "JJ~1_NN&": "NN&_JJ~1",
    "VB&_RB~1": "RB~1_VB&",
}

NOUNS = ["house", "cat", "dog", "book", "man", "tree", "road", "child"]
VERBS = ["burned", "sat", "ran", "fell", "slept", "jumped"]
ADJECTIVES = ["big", "red", "old", "small"]
ADVERBS = ["quickly", "slowly", "quietly"]
PREPOSITIONS = ["in", "on", "at", "near"]

LEXICON = {
    "house": "ghar", "cat": "billi", "dog": "kutta", "book": "kitaab",
    "man": "aadmi", "tree": "ped", "road": "sadak", "child": "baccha",
    "burned": "jala", "sat": "baitha", "ran": "bhaga", "fell": "gira",
    "slept": "soya", "jumped": "kooda",
    "big": "bada", "red": "lal", "old": "purana", "small": "chota",
    "quickly": "jaldi", "slowly": "dheere", "quietly": "chupchap",
    "in": "mein", "on": "par", "at": "pe", "near": "paas",
}

HEAD_UNIT = -1  # marker inside order lists; other entries index children


@dataclass
class _Node:
    pos: str
    token: str
    label: str
    children: list["_Node"] = field(default_factory=list)
    src_order: list[int] = field(default_factory=lambda: [HEAD_UNIT])
    tgt_order: list[int] = field(default_factory=lambda: [HEAD_UNIT])
    src_pos: int = -1


def _np(rng: random.Random, p_adj: float) -> _Node:
    node = _Node("NN", rng.choice(NOUNS), "obj")
    if rng.random() < p_adj:
        node.children = [_Node("JJ", rng.choice(ADJECTIVES), "amod")]
        node.src_order = [0, HEAD_UNIT]
        node.tgt_order = [HEAD_UNIT, 0]  # hidden: JJ~1_NN& ==> NN&_JJ~1
    return node


def _pp(rng: random.Random, p_adj: float) -> _Node:
    node = _Node("IN", rng.choice(PREPOSITIONS), "prep")
    node.children = [_np(rng, p_adj)]
    node.src_order = [HEAD_UNIT, 0]
    node.tgt_order = [HEAD_UNIT, 0]  # identity
    return node


def _vp(rng: random.Random, p_adv: float) -> _Node:
    node = _Node("VB", rng.choice(VERBS), "vmod")
    if rng.random() < p_adv:
        node.children = [_Node("RB", rng.choice(ADVERBS), "advmod")]
        node.src_order = [HEAD_UNIT, 0]
        node.tgt_order = [0, HEAD_UNIT]  # hidden: VB&_RB~1 ==> RB~1_VB&
    return node


def _sentence(rng: random.Random, p_pp: float, p_adj: float, p_adv: float) -> _Node:
    root = _Node("NN", rng.choice(NOUNS), "root")
    if rng.random() < p_pp:
        root.children = [_pp(rng, p_adj), _vp(rng, p_adv)]
        root.src_order = [0, HEAD_UNIT, 1]
        root.tgt_order = [HEAD_UNIT, 0, 1]  # hidden: IN~1_NN&_VB~2 ==> NN&_IN~1_VB~2
    else:
        root.children = [_vp(rng, p_adv)]
        root.src_order = [HEAD_UNIT, 0]
        root.tgt_order = [HEAD_UNIT, 0]  # identity
    return root


def _assign_positions(node: _Node, tokens: list[str], tags: list[str]):
    for unit in node.src_order:
        if unit == HEAD_UNIT:
            node.src_pos = len(tokens)
            tokens.append(node.token)
            tags.append(node.pos)
        else:
            _assign_positions(node.children[unit], tokens, tags)


def _collect_heads(node: _Node, heads: dict[int, int], labels: dict[int, str]):
    labels[node.src_pos] = node.label
    for child in node.children:
        heads[child.src_pos] = node.src_pos + 1  # 1-based head id
        _collect_heads(child, heads, labels)


def _target_positions(node: _Node) -> list[int]:
    out: list[int] = []
    for unit in node.tgt_order:
        if unit == HEAD_UNIT:
            out.append(node.src_pos)
        else:
            out.extend(_target_positions(node.children[unit]))
    return out


def generate_pair(rng: random.Random, p_pp: float = 0.85, p_adj: float = 0.6,
                  p_adv: float = 0.6) -> SentencePair:
    root = _sentence(rng, p_pp, p_adj, p_adv)
    tokens: list[str] = []
    tags: list[str] = []
    _assign_positions(root, tokens, tags)
    heads: dict[int, int] = {root.src_pos: 0}
    labels: dict[int, str] = {}
    _collect_heads(root, heads, labels)
    tree = DepTree(tuple(
        DepNode(tokens[i], tags[i], heads[i], labels[i]) for i in range(len(tokens))
    ))
    tgt_positions = _target_positions(root)
    target = Sentence(tuple(LEXICON[tokens[p]] for p in tgt_positions))
    alignment = AlignmentSet(
        frozenset((p, t) for t, p in enumerate(tgt_positions)),
        len(tokens), len(target),
    )
    source = TaggedSentence(tuple(tokens), tuple(tags))
    return SentencePair(source, target, alignment, tree)


def generate_corpus(n: int, seed: int = 0, **kwargs) -> list[SentencePair]:
    rng = random.Random(seed)
    return [generate_pair(rng, **kwargs) for _ in range(n)]
