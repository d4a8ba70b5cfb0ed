"""smtprep: source-side preordering and SMT preprocessing toolkit.

Learns head-local reordering rules from dependency parses and word alignments
and applies them as a translation preprocessing step, plus the surrounding
machinery: alignment symmetrization, phrase extraction with lexicalized
orientation counts, an n-gram language model, BLEU scoring, end-of-sentence
marker handling, dictionary-based unknown-word substitution, and minimum
Bayes-risk n-best reranking.
"""

__version__ = "0.1.0"
