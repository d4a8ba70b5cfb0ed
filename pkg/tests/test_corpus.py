import pytest
from hypothesis import given, strategies as st

from smtprep.corpus import (AlignmentSet, CorpusFormatError, DepNode, DepTree,
                            Sentence, TaggedSentence, parse_alignment_line,
                            read_dependency_file, read_dictionary,
                            read_parallel_corpus, read_sentences,
                            write_alignment_file)

from util import make_tree


def test_parse_alignment_basic():
    a = parse_alignment_line("0-0 1-1", 2, 2)
    assert a.points == {(0, 0), (1, 1)}
    assert (a.src_len, a.tgt_len) == (2, 2)


def test_parse_alignment_empty_line():
    assert parse_alignment_line("", 3, 4).points == frozenset()


def test_parse_alignment_collapses_duplicates():
    a = parse_alignment_line("0-0 0-0 1-0", 2, 1)
    assert a.points == {(0, 0), (1, 0)}


@pytest.mark.parametrize("line", ["0:0", "x-1", "0-", "-1-0"])
def test_parse_alignment_malformed(line):
    with pytest.raises(CorpusFormatError):
        parse_alignment_line(line, 3, 3)


def test_parse_alignment_out_of_bounds_names_token():
    with pytest.raises(CorpusFormatError, match=r"0-5"):
        parse_alignment_line("0-0 0-5", 3, 3, path="a.txt", lineno=7)


def test_sentence_invariants():
    with pytest.raises(CorpusFormatError):
        Sentence(())
    with pytest.raises(CorpusFormatError):
        Sentence(("a b",))
    with pytest.raises(CorpusFormatError):
        Sentence(("",))
    s = Sentence(("a", "b"))
    assert len(s) == 2 and s.text() == "a b"


def test_tagged_sentence_requires_matching_tags():
    with pytest.raises(CorpusFormatError):
        TaggedSentence(("a", "b"), ("NN",))
    t = TaggedSentence(("a", "b"), ("NN", "VB"))
    assert t.pos == ("NN", "VB")


def test_alignment_bounds_checked():
    with pytest.raises(CorpusFormatError):
        AlignmentSet(frozenset({(0, 3)}), 2, 3)
    with pytest.raises(CorpusFormatError):
        AlignmentSet(frozenset({(2, 0)}), 2, 3)


# --- dependency trees ---------------------------------------------------


def test_read_dependency_file(tmp_path):
    path = tmp_path / "dep.txt"
    path.write_text(
        "1\tin\tIN\t2\tprep\n"
        "2\thouse\tNN\t0\troot\n"
        "3\tburned\tVB\t2\tvmod\n"
        "\n"
    )
    trees = read_dependency_file(path)
    assert len(trees) == 1
    tree = trees[0]
    assert tree.root == 2
    assert tree.children(2) == [1, 3]
    assert tree.tokens() == ("in", "house", "burned")


def test_read_dependency_space_separated(tmp_path):
    path = tmp_path / "dep.txt"
    path.write_text("1 in IN 2 prep\n2 house NN 0 root\n3 burned VB 2 vmod\n")
    assert read_dependency_file(path)[0].root == 2


def test_dependency_self_loop_is_cycle(tmp_path):
    path = tmp_path / "dep.txt"
    path.write_text("1\ta\tX\t1\tself\n")
    with pytest.raises(CorpusFormatError, match="sentence 0"):
        read_dependency_file(path)


def test_dependency_empty_file(tmp_path):
    path = tmp_path / "dep.txt"
    path.write_text("")
    assert read_dependency_file(path) == []


def test_dependency_multiple_roots(tmp_path):
    path = tmp_path / "dep.txt"
    path.write_text("1\ta\tX\t0\troot\n2\tb\tX\t0\troot\n")
    with pytest.raises(CorpusFormatError, match="root"):
        read_dependency_file(path)


def test_dependency_cycle_two_nodes(tmp_path):
    path = tmp_path / "dep.txt"
    path.write_text("1\ta\tX\t2\tdep\n2\tb\tX\t1\tdep\n")
    with pytest.raises(CorpusFormatError):
        read_dependency_file(path)


def test_dependency_noncontiguous_ids(tmp_path):
    path = tmp_path / "dep.txt"
    path.write_text("1\ta\tX\t0\troot\n3\tb\tX\t1\tdep\n")
    with pytest.raises(CorpusFormatError, match="non-contiguous"):
        read_dependency_file(path)


def test_tree_descendants():
    tree = make_tree([2, 0, 2, 3])
    assert tree.descendants(2) == [1, 2, 3, 4]
    assert tree.descendants(3) == [3, 4]
    assert tree.descendants(1) == [1]


@given(st.integers(min_value=1, max_value=12).flatmap(
    lambda n: st.tuples(st.just(n), st.lists(
        st.integers(min_value=1, max_value=n), min_size=n - 1, max_size=n - 1))))
def test_valid_head_arrays_always_accepted(case):
    # attach node i (2-based) to some earlier node: single root, acyclic
    n, raw = case
    heads = [0] + [min(h, i + 1) for i, h in enumerate(raw)]
    tree = make_tree(heads)
    assert tree.root == 1
    assert sorted(p for c in tree.children_map().values() for p in c) == list(range(1, n + 1))


def test_direct_tree_construction_rejects_bad_heads():
    with pytest.raises(CorpusFormatError):
        DepTree((DepNode("a", "X", 5, "dep"),))


# --- parallel corpus ----------------------------------------------------


def _write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def test_read_parallel_corpus_ok(tmp_path):
    src = _write(tmp_path, "src", "a b\nc\n")
    tgt = _write(tmp_path, "tgt", "x y\nz\n")
    aln = _write(tmp_path, "aln", "0-0 1-1\n0-0\n")
    corpus = read_parallel_corpus(src, tgt, aln)
    assert len(corpus) == 2
    assert corpus[0].alignment.points == {(0, 0), (1, 1)}


def test_read_parallel_corpus_line_count_mismatch(tmp_path):
    src = _write(tmp_path, "src", "a\nb\nc\n")
    tgt = _write(tmp_path, "tgt", "x\ny\n")
    aln = _write(tmp_path, "aln", "\n\n\n")
    with pytest.raises(CorpusFormatError) as exc:
        read_parallel_corpus(src, tgt, aln)
    assert "src" in str(exc.value) and "tgt" in str(exc.value)


def test_read_parallel_corpus_alignment_out_of_bounds(tmp_path):
    src = _write(tmp_path, "src", "a b c\n")
    tgt = _write(tmp_path, "tgt", "x y z\n")
    aln = _write(tmp_path, "aln", "0-5\n")
    with pytest.raises(CorpusFormatError, match="0-5"):
        read_parallel_corpus(src, tgt, aln)


def test_read_parallel_corpus_pos_and_trees(tmp_path):
    src = _write(tmp_path, "src", "in house burned\n")
    tgt = _write(tmp_path, "tgt", "ghar mein jala\n")
    aln = _write(tmp_path, "aln", "0-1 1-0 2-2\n")
    pos = _write(tmp_path, "pos", "IN NN VB\n")
    dep = _write(tmp_path, "dep", "1\tin\tIN\t2\tprep\n2\thouse\tNN\t0\troot\n3\tburned\tVB\t2\tvmod\n")
    corpus = read_parallel_corpus(src, tgt, aln, src_pos_path=pos, src_dep_path=dep)
    assert corpus[0].source.pos == ("IN", "NN", "VB")
    assert corpus[0].source_tree.root == 2


def test_read_parallel_corpus_tree_length_mismatch(tmp_path):
    src = _write(tmp_path, "src", "a b\n")
    tgt = _write(tmp_path, "tgt", "x\n")
    aln = _write(tmp_path, "aln", "\n")
    dep = _write(tmp_path, "dep", "1\ta\tX\t0\troot\n")
    with pytest.raises(CorpusFormatError, match="sentence 1"):
        read_parallel_corpus(src, tgt, aln, src_dep_path=dep)


def test_pos_sidecar_length_mismatch(tmp_path):
    src = _write(tmp_path, "src", "a b\n")
    tgt = _write(tmp_path, "tgt", "x\n")
    aln = _write(tmp_path, "aln", "\n")
    pos = _write(tmp_path, "pos", "NN\n")
    with pytest.raises(CorpusFormatError):
        read_parallel_corpus(src, tgt, aln, src_pos_path=pos)


def test_alignment_file_roundtrip(tmp_path):
    src = _write(tmp_path, "src", "a b c\nd e\n")
    tgt = _write(tmp_path, "tgt", "x y\nz w v\n")
    # duplicates and unsorted input collapse to sorted canonical form
    aln = _write(tmp_path, "aln", "2-1 0-0 2-1\n1-2 0-0\n")
    corpus = read_parallel_corpus(src, tgt, aln)
    out = tmp_path / "aln2"
    write_alignment_file(out, [p.alignment for p in corpus])
    assert out.read_text() == "0-0 2-1\n0-0 1-2\n"
    corpus2 = read_parallel_corpus(src, tgt, str(out))
    assert [p.alignment.points for p in corpus2] == [p.alignment.points for p in corpus]


# --- dictionary ---------------------------------------------------------


def test_read_dictionary_single(tmp_path):
    d = read_dictionary(_write(tmp_path, "dict", "book\tkitaab\n"))
    assert d.lookup("book") == ("kitaab",)


def test_read_dictionary_preserves_order(tmp_path):
    d = read_dictionary(_write(tmp_path, "dict", "book\tkitaab\nbook\tpustak\n"))
    assert d.lookup("book") == ("kitaab", "pustak")


def test_read_dictionary_case_folded(tmp_path):
    d = read_dictionary(_write(tmp_path, "dict", "Book\tkitaab\n"))
    assert d.lookup("book") == ("kitaab",)
    assert d.lookup("BOOK") == ("kitaab",)


def test_read_dictionary_rejects_missing_tab(tmp_path):
    with pytest.raises(CorpusFormatError, match=":1"):
        read_dictionary(_write(tmp_path, "dict", "book kitaab\n"))


def test_read_dictionary_rejects_empty_field(tmp_path):
    with pytest.raises(CorpusFormatError):
        read_dictionary(_write(tmp_path, "dict", "book\t\n"))


def test_read_sentences_rejects_empty_line(tmp_path):
    with pytest.raises(CorpusFormatError, match=":2"):
        read_sentences(_write(tmp_path, "src", "a\n\nb\n"))
