"""Pre/post-processing: declarative end-of-sentence marker handling and
dictionary-based substitution of unknown words.

Only markers in the configured declarative set (default {"."}; add the Hindi
danda "।" where needed) are ever stripped. "?" and "!" pass through
untouched, as does a sentence that consists of nothing but a marker.
"""

from __future__ import annotations

from dataclasses import dataclass

from .corpus import BilingualDictionary, CorpusFormatError, Sentence, write_lines

DEFAULT_EOS_MARKERS = frozenset({"."})

REPLACED = "replaced"
TRANSLITERATED = "transliterated"
KEPT = "kept"


@dataclass(frozen=True)
class EosRecord:
    sentence_index: int
    removed_marker: str


@dataclass(frozen=True)
class OovAction:
    position: int
    source_token: str
    action: str  # REPLACED / TRANSLITERATED / KEPT
    replacement: str | None = None


@dataclass(frozen=True)
class OovReport:
    actions: tuple[OovAction, ...]

    def __post_init__(self):
        last = -1
        for a in self.actions:
            if a.position <= last:
                raise ValueError("OOV action positions must be strictly increasing")
            last = a.position


def strip_eos(sentence: Sentence, markers=DEFAULT_EOS_MARKERS,
              sentence_index: int = 0) -> tuple[Sentence, EosRecord | None]:
    """Drop a terminal declarative marker; a marker-only sentence stays intact."""
    tokens = sentence.tokens
    if len(tokens) >= 2 and tokens[-1] in markers:
        record = EosRecord(sentence_index, tokens[-1])
        return Sentence(tokens[:-1]), record
    return sentence, None


def restore_eos(sentence: Sentence, record: EosRecord | None) -> Sentence:
    if record is None:
        return sentence
    return Sentence(sentence.tokens + (record.removed_marker,))


def strip_eos_corpus(sentences, markers=DEFAULT_EOS_MARKERS):
    stripped = []
    records = []
    for i, sent in enumerate(sentences):
        out, record = strip_eos(sent, markers, i)
        stripped.append(out)
        if record is not None:
            records.append(record)
    return stripped, records


def restore_eos_corpus(sentences, records):
    by_index = {}
    for r in records:
        if r.sentence_index in by_index:
            raise CorpusFormatError(f"duplicate EOS record for sentence {r.sentence_index}")
        by_index[r.sentence_index] = r
    for idx in by_index:
        if not 0 <= idx < len(sentences):
            raise CorpusFormatError(f"EOS record index {idx} out of range")
    return [restore_eos(s, by_index.get(i)) for i, s in enumerate(sentences)]


def write_eos_records(path, records):
    write_lines(path, (f"{r.sentence_index}\t{r.removed_marker}" for r in records))


def read_eos_records(path) -> list[EosRecord]:
    records = []
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, 1):
            line = line.rstrip("\n")
            if not line:
                continue
            idx, sep, marker = line.partition("\t")
            if not sep or not marker:
                raise CorpusFormatError(f"{path}:{lineno}: expected index<TAB>marker")
            records.append(EosRecord(int(idx), marker))
    return records


# ---------------------------------------------------------------------------
# unknown words


def default_lemmatizer(token: str) -> str:
    """Identity plus a naive plural/-ing/-ed suffix stripper."""
    if token.endswith("ing") and len(token) > 4:
        return token[:-3]
    if token.endswith("ed") and len(token) > 3:
        return token[:-2]
    if token.endswith("ies") and len(token) > 4:
        return token[:-3] + "y"
    if token.endswith("es") and len(token) > 3 and token[-3] in "sxzh":
        return token[:-2]
    if token.endswith("s") and len(token) > 2 and not token.endswith("ss"):
        return token[:-1]
    return token


def detect_oov(output: Sentence, target_vocab, source_vocab) -> list[int]:
    """Positions of passed-through source words: absent from the target
    vocabulary but present in the source vocabulary."""
    return [
        i for i, tok in enumerate(output.tokens)
        if tok not in target_vocab and tok in source_vocab
    ]


def substitute_oov(output: Sentence, positions, dictionary: BilingualDictionary,
                   lemmatizer=default_lemmatizer,
                   transliterator=None) -> tuple[Sentence, OovReport]:
    """Replace flagged tokens by the preferred dictionary translation of their
    root; fall back to the transliterator when configured, else keep."""
    tokens = list(output.tokens)
    actions = []
    for pos in positions:
        if not 0 <= pos < len(tokens):
            raise ValueError(f"OOV position {pos} out of range")
        token = tokens[pos]
        translations = dictionary.lookup(lemmatizer(token))
        if translations:
            tokens[pos] = translations[0]
            actions.append(OovAction(pos, token, REPLACED, translations[0]))
        elif transliterator is not None:
            tokens[pos] = transliterator(token)
            actions.append(OovAction(pos, token, TRANSLITERATED, tokens[pos]))
        else:
            actions.append(OovAction(pos, token, KEPT))
    return Sentence(tuple(tokens)), OovReport(tuple(actions))


def vocabulary_of(sentences) -> set[str]:
    vocab = set()
    for s in sentences:
        vocab.update(s.tokens if hasattr(s, "tokens") else s)
    return vocab
