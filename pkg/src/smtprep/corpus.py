"""Corpus data types and file readers/writers.

File conventions (the usual aligner/parser plain-text formats):

* text corpus      -- UTF-8, one sentence per line, tokens separated by single spaces
* alignment file   -- one line per sentence pair of space-separated "i-j" pairs,
                      0-based, source index first; empty line = no links
* POS sidecar      -- one line per sentence of space-separated tags, one per token
* dependency file  -- blank-line-separated sentence blocks, one node per line:
                      ID FORM POS HEAD DEPREL (tab- or space-separated);
                      IDs 1-based and contiguous, HEAD 0 marks the root
* dictionary       -- "source_root<TAB>target_root" per line; repeated source
                      roots accumulate translations in file order
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field


class CorpusFormatError(ValueError):
    """Malformed or inconsistent input data; message names file/line where known."""


def _loc(path, lineno):
    if path is None:
        return f"line {lineno}" if lineno is not None else "input"
    return f"{path}:{lineno}" if lineno is not None else str(path)


@dataclass(frozen=True)
class Sentence:
    """A tokenized sentence: at least one token, tokens free of whitespace."""

    tokens: tuple[str, ...]

    def __post_init__(self):
        if isinstance(self.tokens, list):
            object.__setattr__(self, "tokens", tuple(self.tokens))
        if len(self.tokens) == 0:
            raise CorpusFormatError("empty sentence")
        for tok in self.tokens:
            if not tok or any(c.isspace() for c in tok):
                raise CorpusFormatError(f"bad token {tok!r}: empty or contains whitespace")

    def __len__(self):
        return len(self.tokens)

    def __iter__(self):
        return iter(self.tokens)

    def __getitem__(self, i):
        return self.tokens[i]

    def text(self) -> str:
        return " ".join(self.tokens)


@dataclass(frozen=True)
class TaggedSentence:
    """A sentence plus one POS tag per token (open tagset)."""

    tokens: tuple[str, ...]
    pos: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "tokens", tuple(self.tokens))
        object.__setattr__(self, "pos", tuple(self.pos))
        Sentence(self.tokens)  # token invariants
        if len(self.pos) != len(self.tokens):
            raise CorpusFormatError(
                f"{len(self.pos)} tags for {len(self.tokens)} tokens"
            )
        if any(not t for t in self.pos):
            raise CorpusFormatError("empty POS tag")

    def __len__(self):
        return len(self.tokens)

    def sentence(self) -> Sentence:
        return Sentence(self.tokens)

    def text(self) -> str:
        return " ".join(self.tokens)


@dataclass(frozen=True)
class AlignmentSet:
    """Word-alignment links for one sentence pair, as 0-based (src, tgt) points."""

    points: frozenset[tuple[int, int]]
    src_len: int
    tgt_len: int

    def __post_init__(self):
        object.__setattr__(self, "points", frozenset(self.points))
        for s, t in self.points:
            if not (0 <= s < self.src_len):
                raise CorpusFormatError(
                    f"alignment point ({s},{t}): source index out of range [0,{self.src_len})"
                )
            if not (0 <= t < self.tgt_len):
                raise CorpusFormatError(
                    f"alignment point ({s},{t}): target index out of range [0,{self.tgt_len})"
                )

    def __len__(self):
        return len(self.points)

    def __contains__(self, point):
        return point in self.points

    def __iter__(self):
        return iter(self.points)

    def sorted_points(self) -> list[tuple[int, int]]:
        return sorted(self.points)

    def to_line(self) -> str:
        return " ".join(f"{s}-{t}" for s, t in self.sorted_points())


@dataclass(frozen=True)
class DepNode:
    form: str
    pos: str
    head: int  # 0 = artificial root, else 1-based node id
    label: str


@dataclass(frozen=True)
class DepTree:
    """Dependency parse: one head per node, single root, acyclic, fully connected.

    Node ids are 1-based; ``head == 0`` marks the root.
    """

    nodes: tuple[DepNode, ...]

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))
        n = len(self.nodes)
        if n == 0:
            raise CorpusFormatError("empty dependency tree")
        roots = [i + 1 for i, nd in enumerate(self.nodes) if nd.head == 0]
        if len(roots) != 1:
            raise CorpusFormatError(f"tree must have exactly one root, found {len(roots)}")
        for i, nd in enumerate(self.nodes):
            if not (0 <= nd.head <= n):
                raise CorpusFormatError(f"node {i + 1}: head {nd.head} out of range")
        # reachability from the root implies acyclicity here (one parent per node)
        kids = self.children_map()
        seen = set()
        stack = [roots[0]]
        while stack:
            cur = stack.pop()
            if cur in seen:
                raise CorpusFormatError("cycle in dependency tree")
            seen.add(cur)
            stack.extend(kids[cur])
        if len(seen) != n:
            missing = sorted(set(range(1, n + 1)) - seen)
            raise CorpusFormatError(f"nodes unreachable from root: {missing}")

    def __len__(self):
        return len(self.nodes)

    @property
    def root(self) -> int:
        for i, nd in enumerate(self.nodes):
            if nd.head == 0:
                return i + 1
        raise AssertionError("validated tree has a root")

    def node(self, node_id: int) -> DepNode:
        return self.nodes[node_id - 1]

    def children_map(self) -> dict[int, list[int]]:
        kids: dict[int, list[int]] = {i: [] for i in range(0, len(self.nodes) + 1)}
        for i, nd in enumerate(self.nodes):
            kids[nd.head].append(i + 1)
        return kids

    def children(self, node_id: int) -> list[int]:
        return [i + 1 for i, nd in enumerate(self.nodes) if nd.head == node_id]

    def descendants(self, node_id: int) -> list[int]:
        """node_id plus everything below it, in node-id order."""
        kids = self.children_map()
        out = []
        stack = [node_id]
        while stack:
            cur = stack.pop()
            out.append(cur)
            stack.extend(kids[cur])
        return sorted(out)

    def tokens(self) -> tuple[str, ...]:
        return tuple(nd.form for nd in self.nodes)


@dataclass(frozen=True)
class BilingualDictionary:
    """Source root -> target roots, first entry preferred. Lookup is case-folded."""

    entries: dict[str, tuple[str, ...]]

    def __post_init__(self):
        for k, v in self.entries.items():
            if not k:
                raise CorpusFormatError("empty dictionary key")
            if not v or any(not t for t in v):
                raise CorpusFormatError(f"dictionary entry {k!r} has an empty translation")

    def lookup(self, source_root: str) -> tuple[str, ...]:
        return self.entries.get(source_root.casefold(), ())

    def __len__(self):
        return len(self.entries)


@dataclass(frozen=True)
class SentencePair:
    source: Sentence | TaggedSentence
    target: Sentence | TaggedSentence
    alignment: AlignmentSet
    source_tree: DepTree | None = None

    def __post_init__(self):
        if self.alignment.src_len != len(self.source.tokens):
            raise CorpusFormatError(
                f"alignment src_len {self.alignment.src_len} != {len(self.source.tokens)} source tokens"
            )
        if self.alignment.tgt_len != len(self.target.tokens):
            raise CorpusFormatError(
                f"alignment tgt_len {self.alignment.tgt_len} != {len(self.target.tokens)} target tokens"
            )
        if self.source_tree is not None and len(self.source_tree) != len(self.source.tokens):
            raise CorpusFormatError(
                f"tree has {len(self.source_tree)} nodes for {len(self.source.tokens)} source tokens"
            )


@dataclass(frozen=True)
class ParallelCorpus:
    pairs: tuple[SentencePair, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "pairs", tuple(self.pairs))

    def __len__(self):
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)

    def __getitem__(self, i):
        return self.pairs[i]


# ---------------------------------------------------------------------------
# parsing / reading


def parse_alignment_line(line: str, src_len: int, tgt_len: int,
                         path=None, lineno=None) -> AlignmentSet:
    """Parse one "i-j i-j ..." line; duplicates collapse, empty line = no links."""
    points = set()
    for tok in line.split():
        left, sep, right = tok.partition("-")
        if not sep:
            raise CorpusFormatError(f"{_loc(path, lineno)}: malformed alignment pair {tok!r}")
        try:
            s, t = int(left), int(right)
        except ValueError:
            raise CorpusFormatError(
                f"{_loc(path, lineno)}: malformed alignment pair {tok!r}"
            ) from None
        if not (0 <= s < src_len) or not (0 <= t < tgt_len):
            raise CorpusFormatError(
                f"{_loc(path, lineno)}: alignment pair {tok!r} out of bounds "
                f"for {src_len}x{tgt_len} sentence pair"
            )
        points.add((s, t))
    return AlignmentSet(frozenset(points), src_len, tgt_len)


def read_sentences(path) -> list[Sentence]:
    out = []
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, 1):
            toks = line.split()
            if not toks:
                raise CorpusFormatError(f"{_loc(path, lineno)}: empty sentence")
            out.append(Sentence(tuple(toks)))
    return out


def read_pos_file(path) -> list[tuple[str, ...]]:
    out = []
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, 1):
            tags = tuple(line.split())
            if not tags:
                raise CorpusFormatError(f"{_loc(path, lineno)}: empty tag line")
            out.append(tags)
    return out


def read_dependency_file(path) -> list[DepTree]:
    """Read blank-line-separated CoNLL-style blocks (ID FORM POS HEAD DEPREL)."""
    trees = []
    block: list[tuple[int, str]] = []  # (lineno, line)

    def flush():
        if not block:
            return
        sent_index = len(trees)  # 0-based sentence index for messages
        nodes = []
        for expect_id, (lineno, line) in enumerate(block, 1):
            fields = line.split("\t") if "\t" in line else line.split()
            if len(fields) != 5:
                raise CorpusFormatError(
                    f"{_loc(path, lineno)} (sentence {sent_index}): "
                    f"expected 5 fields, got {len(fields)}"
                )
            sid, form, pos, head, label = fields
            try:
                sid_i, head_i = int(sid), int(head)
            except ValueError:
                raise CorpusFormatError(
                    f"{_loc(path, lineno)} (sentence {sent_index}): non-integer ID/HEAD"
                ) from None
            if sid_i != expect_id:
                raise CorpusFormatError(
                    f"{_loc(path, lineno)} (sentence {sent_index}): "
                    f"non-contiguous ID {sid_i}, expected {expect_id}"
                )
            nodes.append(DepNode(form, pos, head_i, label))
        try:
            trees.append(DepTree(tuple(nodes)))
        except CorpusFormatError as e:
            raise CorpusFormatError(f"{path} sentence {sent_index}: {e}") from None
        block.clear()

    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, 1):
            line = line.rstrip("\n")
            if not line.strip():
                flush()
            else:
                block.append((lineno, line))
    flush()
    return trees


def read_dictionary(path) -> BilingualDictionary:
    entries: dict[str, list[str]] = {}
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, 1):
            line = line.rstrip("\n")
            if not line.strip():
                continue
            src, sep, tgt = line.partition("\t")
            if not sep:
                raise CorpusFormatError(f"{_loc(path, lineno)}: no TAB separator")
            src, tgt = src.strip(), tgt.strip()
            if not src or not tgt:
                raise CorpusFormatError(f"{_loc(path, lineno)}: empty dictionary field")
            entries.setdefault(src.casefold(), []).append(tgt)
    return BilingualDictionary({k: tuple(v) for k, v in entries.items()})


def read_alignment_file(path, src_lens, tgt_lens) -> list[AlignmentSet]:
    """Read one alignment line per pair; lengths give per-sentence bounds."""
    out = []
    with open(path, encoding="utf-8") as f:
        lines = f.read().split("\n")
        if lines and lines[-1] == "":
            lines.pop()
    if len(lines) != len(src_lens):
        raise CorpusFormatError(
            f"{path}: {len(lines)} alignment lines for {len(src_lens)} sentence pairs"
        )
    for i, line in enumerate(lines):
        out.append(parse_alignment_line(line, src_lens[i], tgt_lens[i], path, i + 1))
    return out


def read_parallel_corpus(src_path, tgt_path, align_path,
                         src_pos_path=None, tgt_pos_path=None,
                         src_dep_path=None) -> ParallelCorpus:
    """Read and cross-validate a sentence-parallel bundle of files.

    All files must agree on the number of sentences; every per-sentence length
    invariant (tags vs tokens, alignment bounds, tree size) is checked.
    """
    src = read_sentences(src_path)
    tgt = read_sentences(tgt_path)
    if len(src) != len(tgt):
        raise CorpusFormatError(
            f"{src_path} has {len(src)} sentences but {tgt_path} has {len(tgt)}"
        )

    def check_count(name, n):
        if n != len(src):
            raise CorpusFormatError(
                f"{name} has {n} entries but {src_path} has {len(src)} sentences"
            )

    alignments = read_alignment_file(
        align_path, [len(s) for s in src], [len(t) for t in tgt]
    )

    src_pos = tgt_pos = None
    if src_pos_path is not None:
        src_pos = read_pos_file(src_pos_path)
        check_count(src_pos_path, len(src_pos))
    if tgt_pos_path is not None:
        tgt_pos = read_pos_file(tgt_pos_path)
        check_count(tgt_pos_path, len(tgt_pos))

    trees = None
    if src_dep_path is not None:
        trees = read_dependency_file(src_dep_path)
        check_count(src_dep_path, len(trees))

    pairs = []
    for i in range(len(src)):
        try:
            source: Sentence | TaggedSentence = src[i]
            if src_pos is not None:
                source = TaggedSentence(src[i].tokens, src_pos[i])
            target: Sentence | TaggedSentence = tgt[i]
            if tgt_pos is not None:
                target = TaggedSentence(tgt[i].tokens, tgt_pos[i])
            tree = trees[i] if trees is not None else None
            pairs.append(SentencePair(source, target, alignments[i], tree))
        except CorpusFormatError as e:
            raise CorpusFormatError(f"sentence {i + 1}: {e}") from None
    return ParallelCorpus(tuple(pairs))


# ---------------------------------------------------------------------------
# writing


def write_lines(path, lines):
    with open(path, "w", encoding="utf-8") as f:
        for line in lines:
            f.write(line)
            f.write("\n")


def write_sentences(path, sentences):
    write_lines(path, (" ".join(s.tokens) for s in sentences))


def write_alignment_file(path, alignments):
    write_lines(path, (a.to_line() for a in alignments))


def write_dependency_file(path, trees):
    with open(path, "w", encoding="utf-8") as f:
        for tree in trees:
            for i, nd in enumerate(tree.nodes, 1):
                f.write(f"{i}\t{nd.form}\t{nd.pos}\t{nd.head}\t{nd.label}\n")
            f.write("\n")


def ensure_parent_dir(path):
    parent = os.path.dirname(os.path.abspath(path))
    os.makedirs(parent, exist_ok=True)
