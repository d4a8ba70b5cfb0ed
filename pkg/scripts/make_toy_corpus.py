#!/usr/bin/env python3
"""Regenerate the bundled toy corpus under data/toy/ (committed to the repo).

The corpus is a small synthetic parallel set with known reorderings: raw text
carries declarative end-of-sentence markers ("." / Hindi danda), while the
alignment, POS and dependency sidecars describe the stripped text, matching
the pipeline's input contract. The hypothesis file plays the role of decoder
output: target-language text with a few source words passed through untranslated.
"""

import os
import random
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from smtprep.corpus import write_alignment_file, write_dependency_file, write_lines
from smtprep.postedit import default_lemmatizer
from smtprep.synth import LEXICON, generate_corpus

N_SENTENCES = 40
SEED = 7
P_DECLARATIVE = 0.8
P_OOV = 0.35

DANDA = "।"


def main():
    out_dir = os.path.join(os.path.dirname(__file__), "..", "data", "toy")
    os.makedirs(out_dir, exist_ok=True)
    path = lambda name: os.path.join(out_dir, name)  # noqa: E731

    pairs = generate_corpus(N_SENTENCES, seed=SEED)
    rng = random.Random(SEED + 1)

    raw_src, raw_tgt, raw_ref, hyps = [], [], [], []
    for pair in pairs:
        declarative = rng.random() < P_DECLARATIVE
        src_tokens = list(pair.source.tokens)
        tgt_tokens = list(pair.target.tokens)

        hyp = list(tgt_tokens)
        if rng.random() < P_OOV:
            tgt_pos = rng.randrange(len(hyp))
            src_pos = next(s for s, t in pair.alignment.points if t == tgt_pos)
            hyp[tgt_pos] = pair.source.tokens[src_pos]
        hyps.append(" ".join(hyp))

        raw_src.append(" ".join(src_tokens + ["."] if declarative else src_tokens))
        tgt_line = " ".join(tgt_tokens + [DANDA] if declarative else tgt_tokens)
        raw_tgt.append(tgt_line)
        raw_ref.append(tgt_line)

    write_lines(path("src.txt"), raw_src)
    write_lines(path("tgt.txt"), raw_tgt)
    write_lines(path("ref.txt"), raw_ref)
    write_lines(path("hyp.txt"), hyps)
    write_alignment_file(path("align.txt"), [p.alignment for p in pairs])
    write_lines(path("src.pos"), (" ".join(p.source.pos) for p in pairs))
    write_dependency_file(path("src.dep"), [p.source_tree for p in pairs])

    dictionary = sorted(
        {default_lemmatizer(src): tgt for src, tgt in LEXICON.items()}.items()
    )
    write_lines(path("dict.tsv"), (f"{src}\t{tgt}" for src, tgt in dictionary))

    with open(path("pipeline.cfg"), "w", encoding="utf-8") as f:
        f.write(
            "# bundled toy pipeline configuration; paths are relative to this file\n"
            "src = src.txt\n"
            "tgt = tgt.txt\n"
            "align = align.txt\n"
            "src_pos = src.pos\n"
            "src_dep = src.dep\n"
            "dictionary = dict.tsv\n"
            "hyp = hyp.txt\n"
            "ref = ref.txt\n"
            "out_dir = out\n"
            "eos_markers = . ।\n"
            "lm_order = 5\n"
            "smoothing = witten-bell\n"
            "max_phrase_len = 4\n"
            "rule_min_count = 2\n"
            "rule_min_prob = 0.5\n"
            "mbr_alpha = 1.0\n"
            "distortion_limit = -1\n"
            "workers = 1\n"
        )
    print(f"wrote toy corpus ({N_SENTENCES} sentences) under {out_dir}")


if __name__ == "__main__":
    main()
