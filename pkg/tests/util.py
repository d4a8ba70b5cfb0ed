"""Shared test fixtures: tiny hand-built sentence pairs and trees."""

from smtprep.corpus import (AlignmentSet, DepNode, DepTree, Sentence,
                            SentencePair, TaggedSentence)


def make_pair(src_tokens, tgt_tokens, points, src_pos=None, tree=None):
    source = (TaggedSentence(tuple(src_tokens), tuple(src_pos))
              if src_pos is not None else Sentence(tuple(src_tokens)))
    target = Sentence(tuple(tgt_tokens))
    alignment = AlignmentSet(frozenset(points), len(src_tokens), len(tgt_tokens))
    return SentencePair(source, target, alignment, tree)


def make_tree(heads, pos=None, forms=None, labels=None):
    n = len(heads)
    pos = pos or ["X"] * n
    forms = forms or [f"w{i}" for i in range(n)]
    labels = labels or ["dep"] * n
    return DepTree(tuple(
        DepNode(forms[i], pos[i], heads[i], labels[i]) for i in range(n)
    ))


def make_alignment(points, src_len, tgt_len):
    return AlignmentSet(frozenset(points), src_len, tgt_len)
