"""Command-line front-end.

Exit codes: 0 success, 1 input/validation failure, 2 usage error. Diagnostics
go to stderr; data goes to files or stdout.
"""

from __future__ import annotations

import argparse
import sys

from . import bleu as bleu_mod
from . import corpus as corpus_mod
from . import lm as lm_mod
from . import mbr as mbr_mod
from . import postedit, reorder, viz
from .corpus import CorpusFormatError
from .phrases import ExtractConfig, estimate_phrase_table, write_phrase_table
from .pipeline import PipelineError, load_config, run_pipeline
from .symmetrize import GDF, GDFA, grow_diag_final


def _read_lines(path):
    with open(path, encoding="utf-8") as f:
        lines = f.read().split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    return lines


def _infer_len(lines, index):
    longest = -1
    for line in lines:
        for token in line.split():
            left, sep, right = token.partition("-")
            if sep and left.lstrip("-").isdigit() and right.lstrip("-").isdigit():
                longest = max(longest, int((left, right)[index]))
    return longest + 1


def cmd_symmetrize(args) -> int:
    a2b_lines = _read_lines(args.a2b)
    b2a_lines = _read_lines(args.b2a)
    if len(a2b_lines) != len(b2a_lines):
        raise CorpusFormatError(
            f"{args.a2b} has {len(a2b_lines)} lines but {args.b2a} has {len(b2a_lines)}"
        )
    if args.src:
        src_lens = [len(s) for s in corpus_mod.read_sentences(args.src)]
    else:
        src_lens = None
    if args.tgt:
        tgt_lens = [len(s) for s in corpus_mod.read_sentences(args.tgt)]
    else:
        tgt_lens = None
    for lens, name, n in ((src_lens, args.src, len(a2b_lines)),
                          (tgt_lens, args.tgt, len(a2b_lines))):
        if lens is not None and len(lens) != n:
            raise CorpusFormatError(f"{name}: expected {n} sentences, got {len(lens)}")

    merged = []
    for i, (la, lb) in enumerate(zip(a2b_lines, b2a_lines), 1):
        src_len = src_lens[i - 1] if src_lens else _infer_len((la, lb), 0)
        tgt_len = tgt_lens[i - 1] if tgt_lens else _infer_len((la, lb), 1)
        a2b = corpus_mod.parse_alignment_line(la, src_len, tgt_len, args.a2b, i)
        b2a = corpus_mod.parse_alignment_line(lb, src_len, tgt_len, args.b2a, i)
        merged.append(grow_diag_final(a2b, b2a, args.mode))
    corpus_mod.write_alignment_file(args.out, merged)
    print(f"symmetrized {len(merged)} sentence pairs -> {args.out}", file=sys.stderr)
    return 0


def cmd_extract_phrases(args) -> int:
    corpus = corpus_mod.read_parallel_corpus(args.src, args.tgt, args.align)
    table = estimate_phrase_table(corpus, ExtractConfig(args.max_phrase_len),
                                  workers=args.workers)
    write_phrase_table(args.out, table)
    print(f"extracted {len(table)} phrase pairs -> {args.out}", file=sys.stderr)
    return 0


def cmd_learn_rules(args) -> int:
    corpus = corpus_mod.read_parallel_corpus(
        args.src, args.tgt, args.align, src_pos_path=args.src_pos,
        src_dep_path=args.dep)
    instances = reorder.extract_rules(corpus)
    table = reorder.score_rules(instances, args.min_count, args.min_prob)
    reorder.write_rule_table(args.out, table)
    print(f"learned {len(table)} rules over {len(table.rules)} patterns "
          f"from {len(instances)} instances -> {args.out}", file=sys.stderr)
    return 0


def cmd_apply_rules(args) -> int:
    sentences = corpus_mod.read_sentences(args.src)
    trees = corpus_mod.read_dependency_file(args.dep)
    if len(trees) != len(sentences):
        raise CorpusFormatError(
            f"{args.dep} has {len(trees)} trees for {len(sentences)} sentences"
        )
    table = reorder.read_rule_table(args.rules, min_prob=args.min_prob)
    reordered = []
    perms = []
    for i, (sentence, tree) in enumerate(zip(sentences, trees), 1):
        try:
            out_sentence, perm = reorder.apply_rules(sentence, tree, table)
        except CorpusFormatError as e:
            raise CorpusFormatError(f"sentence {i}: {e}") from None
        reordered.append(out_sentence)
        perms.append(perm)
    corpus_mod.write_sentences(args.out, reordered)
    if args.perm_out:
        corpus_mod.write_lines(args.perm_out, (" ".join(map(str, p)) for p in perms))
    n = sum(p != tuple(range(len(p))) for p in perms)
    print(f"reordered {n}/{len(perms)} sentences -> {args.out}", file=sys.stderr)
    return 0


def cmd_train_lm(args) -> int:
    sentences = corpus_mod.read_sentences(args.corpus)
    model = lm_mod.train_lm([s.tokens for s in sentences], args.order, args.smoothing)
    lm_mod.write_arpa(args.out, model)
    print(f"trained order-{model.order} {model.smoothing} model on "
          f"{len(sentences)} sentences -> {args.out}", file=sys.stderr)
    return 0


def cmd_ppl(args) -> int:
    model = lm_mod.read_arpa(args.model)
    sentences = corpus_mod.read_sentences(args.corpus)
    ppl = lm_mod.perplexity(model, [s.tokens for s in sentences])
    print(f"Perplexity = {ppl:.4f}")
    return 0


def cmd_score_bleu(args) -> int:
    hyps = [s.tokens for s in corpus_mod.read_sentences(args.hyp)]
    refs = [s.tokens for s in corpus_mod.read_sentences(args.ref)]
    report = bleu_mod.corpus_bleu(hyps, refs, args.max_n)
    print(bleu_mod.format_bleu_report(report))
    if args.plot:
        viz.render_bleu_figure(args.plot, report)
        print(f"figure -> {args.plot}", file=sys.stderr)
    return 0


def cmd_strip_eos(args) -> int:
    sentences = corpus_mod.read_sentences(args.input)
    markers = frozenset(args.markers.split())
    if not markers:
        raise ValueError("--markers must name at least one marker token")
    stripped, records = postedit.strip_eos_corpus(sentences, markers)
    corpus_mod.write_sentences(args.output, stripped)
    postedit.write_eos_records(args.records, records)
    print(f"removed {len(records)} markers -> {args.output}", file=sys.stderr)
    return 0


def cmd_restore_eos(args) -> int:
    sentences = corpus_mod.read_sentences(args.input)
    records = postedit.read_eos_records(args.records)
    restored = postedit.restore_eos_corpus(sentences, records)
    corpus_mod.write_sentences(args.output, restored)
    print(f"restored {len(records)} markers -> {args.output}", file=sys.stderr)
    return 0


def _read_vocab(path):
    vocab = set()
    for line in _read_lines(path):
        vocab.update(line.split())
    return vocab


def cmd_oov_substitute(args) -> int:
    sentences = corpus_mod.read_sentences(args.input)
    dictionary = corpus_mod.read_dictionary(args.dict)
    src_vocab = _read_vocab(args.src_vocab)
    tgt_vocab = _read_vocab(args.tgt_vocab)
    rewritten = []
    report_lines = []
    replaced = 0
    for i, sentence in enumerate(sentences):
        positions = postedit.detect_oov(sentence, tgt_vocab, src_vocab)
        out_sentence, rep = postedit.substitute_oov(sentence, positions, dictionary)
        rewritten.append(out_sentence)
        for a in rep.actions:
            replaced += a.action == postedit.REPLACED
            report_lines.append(
                f"{i}\t{a.position}\t{a.source_token}\t{a.action}\t"
                f"{a.replacement if a.replacement is not None else '-'}"
            )
    corpus_mod.write_sentences(args.output, rewritten)
    corpus_mod.write_lines(args.report, report_lines)
    print(f"substituted {replaced} unknown words -> {args.output}", file=sys.stderr)
    return 0


def cmd_mbr_rerank(args) -> int:
    selected = mbr_mod.rerank_file(args.nbest, args.alpha)
    if args.out:
        mbr_mod.write_selected(args.out, selected)
        print(f"selected {len(selected)} hypotheses -> {args.out}", file=sys.stderr)
    else:
        for _, tokens in selected:
            print(" ".join(tokens))
    return 0


def cmd_pipeline(args) -> int:
    cfg = load_config(args.config, out_dir=args.out_dir, workers=args.workers)
    report = run_pipeline(cfg)
    for stage in report.stages:
        print(f"[{stage.name}] {stage.seconds:.3f}s "
              + " ".join(f"{k}={v}" for k, v in stage.metrics.items()),
              file=sys.stderr)
    print(f"pipeline done: BLEU = {100.0 * report.final_bleu:.2f}, "
          f"outputs in {cfg.out_dir}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="smtprep",
        description="Source-side preordering and SMT preprocessing toolkit.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("symmetrize", help="merge two directional alignments")
    p.add_argument("--a2b", required=True, help="source-to-target alignment file")
    p.add_argument("--b2a", required=True,
                   help="target-to-source alignment file, already in (src,tgt) order")
    p.add_argument("--mode", choices=[GDF, GDFA], default=GDF)
    p.add_argument("--out", required=True)
    p.add_argument("--src", help="source corpus, for exact sentence lengths")
    p.add_argument("--tgt", help="target corpus, for exact sentence lengths")
    p.set_defaults(handler=cmd_symmetrize)

    p = sub.add_parser("extract-phrases", help="extract a phrase table")
    p.add_argument("--src", required=True)
    p.add_argument("--tgt", required=True)
    p.add_argument("--align", required=True)
    p.add_argument("--max-phrase-len", type=int, default=7)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", required=True)
    p.set_defaults(handler=cmd_extract_phrases)

    p = sub.add_parser("learn-rules", help="learn reordering rules")
    p.add_argument("--src", required=True)
    p.add_argument("--tgt", required=True)
    p.add_argument("--align", required=True)
    p.add_argument("--dep", required=True, help="source dependency parses")
    p.add_argument("--src-pos", help="optional POS sidecar for validation")
    p.add_argument("--min-count", type=int, default=2)
    p.add_argument("--min-prob", type=float, default=0.5)
    p.add_argument("--out", required=True)
    p.set_defaults(handler=cmd_learn_rules)

    p = sub.add_parser("apply-rules", help="reorder source text with a rule table")
    p.add_argument("--src", required=True)
    p.add_argument("--dep", required=True)
    p.add_argument("--rules", required=True)
    p.add_argument("--min-prob", type=float, default=0.5)
    p.add_argument("--out", required=True)
    p.add_argument("--perm-out", help="sidecar permutation file")
    p.set_defaults(handler=cmd_apply_rules)

    p = sub.add_parser("train-lm", help="train an n-gram language model")
    p.add_argument("--corpus", required=True)
    p.add_argument("--order", type=int, default=5)
    p.add_argument("--smoothing", choices=[lm_mod.MLE, lm_mod.WITTEN_BELL],
                   default=lm_mod.WITTEN_BELL)
    p.add_argument("--out", required=True)
    p.set_defaults(handler=cmd_train_lm)

    p = sub.add_parser("ppl", help="perplexity of a corpus under a model")
    p.add_argument("--model", required=True)
    p.add_argument("--corpus", required=True)
    p.set_defaults(handler=cmd_ppl)

    p = sub.add_parser("score-bleu", help="corpus BLEU of hypothesis vs reference")
    p.add_argument("--hyp", required=True)
    p.add_argument("--ref", required=True)
    p.add_argument("--max-n", type=int, default=4)
    p.add_argument("--plot", help="write a PNG figure of the score breakdown")
    p.set_defaults(handler=cmd_score_bleu)

    p = sub.add_parser("strip-eos", help="remove declarative end-of-sentence markers")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--records", required=True, help="sidecar index<TAB>marker file")
    p.add_argument("--markers", default=".", help="space-separated marker tokens")
    p.set_defaults(handler=cmd_strip_eos)

    p = sub.add_parser("restore-eos", help="re-append recorded markers")
    p.add_argument("--input", required=True)
    p.add_argument("--records", required=True)
    p.add_argument("--output", required=True)
    p.set_defaults(handler=cmd_restore_eos)

    p = sub.add_parser("oov-substitute",
                       help="replace passed-through source words via a dictionary")
    p.add_argument("--input", required=True)
    p.add_argument("--dict", required=True)
    p.add_argument("--src-vocab", required=True, help="corpus or word list")
    p.add_argument("--tgt-vocab", required=True, help="corpus or word list")
    p.add_argument("--output", required=True)
    p.add_argument("--report", required=True)
    p.set_defaults(handler=cmd_oov_substitute)

    p = sub.add_parser("mbr-rerank", help="minimum Bayes-risk n-best selection")
    p.add_argument("--nbest", required=True)
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--out", help="output file (default: stdout)")
    p.set_defaults(handler=cmd_mbr_rerank)

    p = sub.add_parser("pipeline", help="run the full preprocessing pipeline")
    p.add_argument("--config", required=True, help="key=value config file")
    p.add_argument("--out-dir", help="override the config's out_dir")
    p.add_argument("--workers", type=int, help="override the config's worker count")
    p.set_defaults(handler=cmd_pipeline)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 2
    try:
        return args.handler(args)
    except PipelineError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except (CorpusFormatError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
