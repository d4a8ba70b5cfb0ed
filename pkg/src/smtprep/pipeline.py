"""Config-driven end-to-end preprocessing pipeline.

Stages: strip-eos -> (symmetrize) -> learn-rules -> apply-rules ->
extract-phrases + train-lm -> score-bleu -> oov-substitute -> restore-eos,
with a delimited report and a rendered figure at the end.

Input contract: the alignment, POS and dependency sidecars must describe the
EOS-STRIPPED corpora (stripping changes token counts; parses and alignments
are produced downstream of it). Validation rejects mismatches.

Everything written under out_dir is a pure function of the inputs and the
config: two runs produce byte-identical files at any worker count. Stage
timings are therefore reported on stderr only, never persisted.
"""

from __future__ import annotations

import os
import statistics
import time
from dataclasses import dataclass, field

from . import bleu as bleu_mod
from . import corpus as corpus_mod
from . import lm as lm_mod
from . import postedit, reorder, viz
from .corpus import CorpusFormatError, Sentence
from .parallel import parallel_map
from .phrases import ExtractConfig, estimate_phrase_table, write_phrase_table
from .symmetrize import GDF, GDFA, grow_diag_final


class PipelineError(Exception):
    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"stage {stage!r} failed: {cause}")
        self.stage = stage
        self.cause = cause


@dataclass
class PipelineConfig:
    src: str
    tgt: str
    src_dep: str
    out_dir: str
    align: str | None = None
    a2b: str | None = None
    b2a: str | None = None
    sym_mode: str = GDF
    src_pos: str | None = None
    tgt_pos: str | None = None
    dictionary: str | None = None
    hyp: str | None = None
    ref: str | None = None
    ref_reorder: str | None = None
    max_phrase_len: int = 7
    lm_order: int = 5
    smoothing: str = lm_mod.WITTEN_BELL
    rule_min_count: int = 2
    rule_min_prob: float = 0.5
    eos_markers: frozenset[str] = postedit.DEFAULT_EOS_MARKERS
    mbr_alpha: float = 1.0
    workers: int = 1
    distortion_limit: int = -1  # recorded for documentation; no decoder here

    def validate(self):
        if self.lm_order < 1:
            raise ValueError(f"lm_order must be >= 1, got {self.lm_order}")
        if self.max_phrase_len < 1:
            raise ValueError(f"max_phrase_len must be >= 1, got {self.max_phrase_len}")
        if self.rule_min_count < 1:
            raise ValueError(f"rule_min_count must be >= 1, got {self.rule_min_count}")
        if not 0.0 <= self.rule_min_prob <= 1.0:
            raise ValueError(f"rule_min_prob must be in [0,1], got {self.rule_min_prob}")
        if self.workers < 1:
            raise ValueError(f"workers must be >= 1, got {self.workers}")
        if self.mbr_alpha <= 0:
            raise ValueError(f"mbr_alpha must be positive, got {self.mbr_alpha}")
        if self.distortion_limit < -1:
            raise ValueError("distortion_limit must be >= 0, or -1 for unlimited")
        if self.smoothing not in (lm_mod.MLE, lm_mod.WITTEN_BELL):
            raise ValueError(f"unknown smoothing {self.smoothing!r}")
        if self.sym_mode not in (GDF, GDFA):
            raise ValueError(f"unknown sym_mode {self.sym_mode!r}")
        if not self.eos_markers:
            raise ValueError("eos_markers must not be empty")
        if (self.align is None) == (self.a2b is None and self.b2a is None):
            raise ValueError("provide either align or both a2b and b2a")
        if self.align is None and (self.a2b is None or self.b2a is None):
            raise ValueError("provide either align or both a2b and b2a")
        if (self.hyp is None) != (self.ref is None):
            raise ValueError("hyp and ref must be provided together")
        if self.hyp is None and self.ref_reorder is None:
            raise ValueError("provide hyp+ref, or ref_reorder, for the scoring stage")
        for name in ("src", "tgt", "src_dep", "align", "a2b", "b2a", "src_pos",
                     "tgt_pos", "dictionary", "hyp", "ref", "ref_reorder"):
            path = getattr(self, name)
            if path is not None and not os.path.exists(path):
                raise ValueError(f"{name}: no such file: {path}")


_PATH_KEYS = ("src", "tgt", "src_dep", "out_dir", "align", "a2b", "b2a",
              "src_pos", "tgt_pos", "dictionary", "hyp", "ref", "ref_reorder")
_INT_KEYS = ("max_phrase_len", "lm_order", "rule_min_count", "workers",
             "distortion_limit")
_FLOAT_KEYS = ("rule_min_prob", "mbr_alpha")
_STR_KEYS = ("smoothing", "sym_mode")


def load_config(path, out_dir=None, workers=None) -> PipelineConfig:
    """Parse a key=value config file (# comments); relative paths resolve
    against the config file's directory."""
    base = os.path.dirname(os.path.abspath(path))
    raw: dict[str, str] = {}
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            key, value = key.strip(), value.strip()
            if not sep or not key or not value:
                raise ValueError(f"{path}:{lineno}: expected key=value")
            if key in raw:
                raise ValueError(f"{path}:{lineno}: duplicate key {key!r}")
            raw[key] = value

    kwargs: dict = {}
    for key, value in raw.items():
        if key in _PATH_KEYS:
            kwargs[key] = value if os.path.isabs(value) else os.path.join(base, value)
        elif key in _INT_KEYS:
            kwargs[key] = int(value)
        elif key in _FLOAT_KEYS:
            kwargs[key] = float(value)
        elif key in _STR_KEYS:
            kwargs[key] = value
        elif key == "eos_markers":
            kwargs[key] = frozenset(value.split())
        else:
            raise ValueError(f"{path}: unknown config key {key!r}")

    for required in ("src", "tgt", "src_dep", "out_dir"):
        if required not in kwargs:
            raise ValueError(f"{path}: missing required key {required!r}")
    if out_dir is not None:
        kwargs["out_dir"] = out_dir
    if workers is not None:
        kwargs["workers"] = workers
    cfg = PipelineConfig(**kwargs)
    cfg.validate()
    return cfg


@dataclass
class StageResult:
    name: str
    seconds: float
    metrics: dict[str, object] = field(default_factory=dict)


@dataclass
class PipelineReport:
    stages: list[StageResult] = field(default_factory=list)
    final_bleu: float | None = None

    def stage(self, name: str) -> StageResult:
        for s in self.stages:
            if s.name == name:
                return s
        raise KeyError(name)


def _fmt_value(value) -> str:
    if isinstance(value, bool):
        return str(int(value))
    if isinstance(value, float):
        return f"{value:.6f}"
    return str(value)


def write_report_tsv(path, report: PipelineReport):
    lines = []
    for stage in report.stages:
        for metric, value in stage.metrics.items():
            lines.append(f"{stage.name}\t{metric}\t{_fmt_value(value)}")
    corpus_mod.write_lines(path, lines)


class _StageRunner:
    def __init__(self, report: PipelineReport):
        self.report = report

    def run(self, name, fn):
        start = time.perf_counter()
        try:
            metrics = fn()
        except Exception as e:  # noqa: BLE001 - stage name must reach the user
            raise PipelineError(name, e) from e
        self.report.stages.append(
            StageResult(name, time.perf_counter() - start, metrics or {})
        )


def run_pipeline(cfg: PipelineConfig) -> PipelineReport:
    cfg.validate()
    os.makedirs(cfg.out_dir, exist_ok=True)
    out = lambda name: os.path.join(cfg.out_dir, name)  # noqa: E731

    report = PipelineReport()
    report.stages.append(StageResult("config", 0.0, {
        "distortion_limit": cfg.distortion_limit,
        "lm_order": cfg.lm_order,
        "smoothing": cfg.smoothing,
        "max_phrase_len": cfg.max_phrase_len,
        "rule_min_count": cfg.rule_min_count,
        "rule_min_prob": cfg.rule_min_prob,
        "mbr_alpha": cfg.mbr_alpha,
        "eos_markers": " ".join(sorted(cfg.eos_markers)),
    }))
    runner = _StageRunner(report)
    state: dict = {}

    def strip_stage():
        metrics = {}
        for name, path in (("src", cfg.src), ("tgt", cfg.tgt),
                           ("hyp", cfg.hyp), ("ref", cfg.ref)):
            if path is None:
                continue
            sentences = corpus_mod.read_sentences(path)
            stripped, records = postedit.strip_eos_corpus(sentences, cfg.eos_markers)
            corpus_mod.write_sentences(out(f"{name}.stripped.txt"), stripped)
            postedit.write_eos_records(out(f"{name}.eos.tsv"), records)
            state[f"{name}_stripped"] = stripped
            state[f"{name}_records"] = records
            metrics[f"{name}_markers_removed"] = len(records)
        return metrics

    runner.run("strip-eos", strip_stage)

    align_path = cfg.align

    if cfg.a2b is not None:
        def symmetrize_stage():
            src_lens = [len(s) for s in state["src_stripped"]]
            tgt_lens = [len(s) for s in state["tgt_stripped"]]
            a2b = corpus_mod.read_alignment_file(cfg.a2b, src_lens, tgt_lens)
            b2a = corpus_mod.read_alignment_file(cfg.b2a, src_lens, tgt_lens)
            merged = parallel_map(
                lambda pair: grow_diag_final(pair[0], pair[1], cfg.sym_mode),
                zip(a2b, b2a), cfg.workers)
            corpus_mod.write_alignment_file(out("align.sym.txt"), merged)
            return {"mode": cfg.sym_mode,
                    "links": sum(len(a.points) for a in merged)}

        runner.run("symmetrize", symmetrize_stage)
        align_path = out("align.sym.txt")

    def load_stage():
        state["corpus"] = corpus_mod.read_parallel_corpus(
            out("src.stripped.txt"), out("tgt.stripped.txt"), align_path,
            src_pos_path=cfg.src_pos, tgt_pos_path=cfg.tgt_pos,
            src_dep_path=cfg.src_dep)
        return {"sentence_pairs": len(state["corpus"])}

    runner.run("load-corpus", load_stage)

    def learn_stage():
        instances = reorder.extract_rules(state["corpus"])
        table = reorder.score_rules(instances, cfg.rule_min_count, cfg.rule_min_prob)
        reorder.write_rule_table(out("rules.txt"), table)
        state["rules"] = table
        return {"instances": len(instances), "patterns": len(table.rules),
                "entries": len(table)}

    runner.run("learn-rules", learn_stage)

    def apply_stage():
        table = state["rules"]
        results = parallel_map(
            lambda pair: reorder.apply_rules(pair.source, pair.source_tree, table),
            state["corpus"], cfg.workers)
        reordered = [r for r, _ in results]
        perms = [p for _, p in results]
        corpus_mod.write_sentences(out("src.reordered.txt"), reordered)
        corpus_mod.write_lines(out("src.perm.txt"),
                               (" ".join(map(str, p)) for p in perms))
        before = [reorder.crossing_score(p.alignment) for p in state["corpus"]]
        remapped = [reorder.remap_alignment(p.alignment, perm)
                    for p, perm in zip(state["corpus"], perms)]
        after = [reorder.crossing_score(a) for a in remapped]
        state["reordered"] = reordered
        state["remapped_alignments"] = remapped
        n_changed = sum(perm != tuple(range(len(perm))) for perm in perms)
        return {"sentences": len(perms), "reordered_sentences": n_changed,
                "crossing_before": statistics.mean(before) if before else 0.0,
                "crossing_after": statistics.mean(after) if after else 0.0}

    runner.run("apply-rules", apply_stage)

    def phrases_stage():
        pairs = [
            corpus_mod.SentencePair(sent, pair.target, alignment)
            for pair, sent, alignment in zip(
                state["corpus"], state["reordered"], state["remapped_alignments"])
        ]
        table = estimate_phrase_table(
            pairs, ExtractConfig(cfg.max_phrase_len), workers=cfg.workers)
        write_phrase_table(out("phrases.txt"), table)
        return {"entries": len(table),
                "extractions": sum(e.count for e in table.entries.values())}

    runner.run("extract-phrases", phrases_stage)

    def lm_stage():
        model = lm_mod.train_lm(
            [p.target.tokens for p in state["corpus"]], cfg.lm_order, cfg.smoothing)
        lm_mod.write_arpa(out("lm.arpa"), model)
        ppl = lm_mod.perplexity(model, [p.target.tokens for p in state["corpus"]])
        return {"order": model.order, "smoothing": model.smoothing,
                "vocab": len(model.prediction_vocab()),
                "train_perplexity": ppl}

    runner.run("train-lm", lm_stage)

    def bleu_stage():
        if cfg.hyp is not None:
            hyps = [s.tokens for s in state["hyp_stripped"]]
            refs = [s.tokens for s in state["ref_stripped"]]
            against = "hyp-vs-ref"
        else:
            hyps = [s.tokens for s in state["reordered"]]
            refs = [s.tokens for s in corpus_mod.read_sentences(cfg.ref_reorder)]
            against = "reordered-vs-ref_reorder"
        result = bleu_mod.corpus_bleu(hyps, refs)
        state["bleu"] = result
        metrics = {"input": against, "bleu": result.score}
        for n, p in enumerate(result.precisions, 1):
            metrics[f"p{n}"] = p
        metrics["brevity_penalty"] = result.brevity_penalty
        metrics["hyp_len"] = result.hyp_len
        metrics["ref_len"] = result.ref_len
        return metrics

    runner.run("score-bleu", bleu_stage)

    def oov_stage():
        if cfg.hyp is None:
            state["post_oov"] = state["reordered"]
            return {"skipped": 1}
        dictionary = (corpus_mod.read_dictionary(cfg.dictionary)
                      if cfg.dictionary else corpus_mod.BilingualDictionary({}))
        src_vocab = postedit.vocabulary_of(state["src_stripped"])
        tgt_vocab = postedit.vocabulary_of(state["tgt_stripped"])

        def substitute(sentence):
            positions = postedit.detect_oov(sentence, tgt_vocab, src_vocab)
            return postedit.substitute_oov(sentence, positions, dictionary)

        results = parallel_map(substitute, state["hyp_stripped"], cfg.workers)
        state["post_oov"] = [s for s, _ in results]
        corpus_mod.write_sentences(out("hyp.oov.txt"), state["post_oov"])
        lines = []
        totals = {postedit.REPLACED: 0, postedit.TRANSLITERATED: 0, postedit.KEPT: 0}
        for i, (_, rep) in enumerate(results):
            for a in rep.actions:
                totals[a.action] += 1
                lines.append(f"{i}\t{a.position}\t{a.source_token}\t{a.action}\t"
                             f"{a.replacement if a.replacement is not None else '-'}")
        corpus_mod.write_lines(out("oov.report.tsv"), lines)
        return {"flagged": sum(totals.values()),
                "replaced": totals[postedit.REPLACED],
                "transliterated": totals[postedit.TRANSLITERATED],
                "kept": totals[postedit.KEPT]}

    runner.run("oov-substitute", oov_stage)

    def restore_stage():
        records = state["ref_records"] if cfg.hyp is not None else state["src_records"]
        restored = postedit.restore_eos_corpus(state["post_oov"], records)
        corpus_mod.write_sentences(out("output.txt"), restored)
        return {"markers_restored": len(records)}

    runner.run("restore-eos", restore_stage)

    def report_stage():
        apply_metrics = report.stage("apply-rules").metrics
        counts = [
            ("rules", report.stage("learn-rules").metrics["entries"]),
            ("phrases", report.stage("extract-phrases").metrics["entries"]),
            ("reordered", apply_metrics["reordered_sentences"]),
            ("oov replaced", report.stage("oov-substitute").metrics.get("replaced", 0)),
            ("eos stripped", sum(
                v for k, v in report.stage("strip-eos").metrics.items()
                if k.endswith("_markers_removed"))),
        ]
        viz.render_report_figure(
            out("report.png"), bleu=state.get("bleu"),
            crossing_before=apply_metrics["crossing_before"],
            crossing_after=apply_metrics["crossing_after"],
            counts=counts)
        return {"figure": "report.png"}

    runner.run("report", report_stage)

    report.final_bleu = state["bleu"].score
    write_report_tsv(out("report.tsv"), report)
    return report
