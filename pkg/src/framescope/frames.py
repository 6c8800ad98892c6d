"""Frame lexicons and their matching against tweet text.

A frame lexicon is an ordered set of one-to-three-token entries. Matching is
greedy left to right with longer entries tried first, and a matched span is
consumed, so "front line" never also counts "front" or "line". The token
stream used for matching is deliberately light: lowercased tokens with only
the short-token filter applied, no stopword or domain removal, because frame
entries themselves can be common words.
"""

from __future__ import annotations

import hashlib
import logging
import os
from collections import Counter
from dataclasses import dataclass
from importlib import resources

from .corpus import Corpus
from .textprep import MIN_TOKEN_LEN, PreprocessConfig, preprocess, tokenize
from .topicmodel import LdaModel, infer

log = logging.getLogger(__name__)

MAX_ENTRY_TOKENS = 3

# Canonical presentation order for the builtin frames.
FRAME_ORDER = ("war", "family", "storm", "monster", "tsunami")


class LexiconError(ValueError):
    pass


@dataclass(frozen=True)
class FrameLexicon:
    name: str
    entries: tuple[tuple[str, ...], ...]

    def __post_init__(self):
        if not self.name:
            raise LexiconError("lexicon name must be non-empty")
        if not self.entries:
            raise LexiconError(f"{self.name}: lexicon has no entries")
        seen = set()
        for entry in self.entries:
            if not 1 <= len(entry) <= MAX_ENTRY_TOKENS:
                raise LexiconError(
                    f"{self.name}: entry {' '.join(entry)!r} must have 1 to "
                    f"{MAX_ENTRY_TOKENS} tokens"
                )
            if any(not tok for tok in entry):
                raise LexiconError(f"{self.name}: empty token in entry")
            if entry in seen:
                raise LexiconError(
                    f"{self.name}: duplicate entry {' '.join(entry)!r}"
                )
            seen.add(entry)

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def displays(self) -> tuple[str, ...]:
        return tuple(" ".join(e) for e in self.entries)

    @property
    def hash(self) -> str:
        """Order-independent digest; identifies the entry set across runs."""
        joined = "\n".join(sorted(self.displays))
        return hashlib.sha256(joined.encode("utf-8")).hexdigest()


def _parse_lexicon_text(name: str, text: str) -> FrameLexicon:
    entries: list[tuple[str, ...]] = []
    seen: set[tuple[str, ...]] = set()
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        entry = tuple(line.lower().split())
        if entry in seen:
            log.warning("%s: duplicate lexicon entry %r ignored", name, line)
            continue
        seen.add(entry)
        entries.append(entry)
    return FrameLexicon(name=name, entries=tuple(entries))


def builtin_lexicon(name: str) -> FrameLexicon:
    key = name.lower()
    if key not in FRAME_ORDER:
        raise LexiconError(
            f"unknown builtin lexicon {name!r}; have {', '.join(FRAME_ORDER)}"
        )
    ref = resources.files("framescope.data.lexicons").joinpath(f"{key}.txt")
    return _parse_lexicon_text(key, ref.read_text(encoding="utf-8"))


def builtin_lexicons() -> list[FrameLexicon]:
    return [builtin_lexicon(name) for name in FRAME_ORDER]


def load_lexicon(source: str) -> FrameLexicon:
    """A builtin frame name, or a path to a lexicon file."""
    if source.lower() in FRAME_ORDER and not os.path.exists(source):
        return builtin_lexicon(source)
    if not os.path.exists(source):
        raise LexiconError(f"no builtin lexicon or file named {source!r}")
    name = os.path.splitext(os.path.basename(source))[0].lower()
    with open(source, encoding="utf-8") as fh:
        return _parse_lexicon_text(name, fh.read())


def matching_tokens(text: str) -> list[str]:
    """The token stream frames are matched on: tokenized, short tokens out."""
    return [tok for tok in tokenize(text) if len(tok) >= MIN_TOKEN_LEN]


def _entry_index(lexicon: FrameLexicon) -> dict[str, list[tuple[str, ...]]]:
    by_first: dict[str, list[tuple[str, ...]]] = {}
    for entry in lexicon.entries:
        by_first.setdefault(entry[0], []).append(entry)
    for cands in by_first.values():
        cands.sort(key=lambda e: (-len(e), e))
    return by_first


def _scan(tokens: list[str],
          by_first: dict[str, list[tuple[str, ...]]]) -> Counter[str]:
    """Greedy longest-first occurrence counts; matched spans are consumed."""
    counts: Counter[str] = Counter()
    i = 0
    n = len(tokens)
    while i < n:
        advanced = False
        for entry in by_first.get(tokens[i], ()):
            span = len(entry)
            if tuple(tokens[i:i + span]) == entry:
                counts[" ".join(entry)] += 1
                i += span
                advanced = True
                break
        if not advanced:
            i += 1
    return counts


@dataclass(frozen=True)
class FrameMatch:
    frame: str
    doc_id: str
    counts: tuple[tuple[str, int], ...]  # (entry display, occurrences)

    @property
    def total(self) -> int:
        return sum(c for _, c in self.counts)


def match(tokens: list[str], lexicon: FrameLexicon,
          doc_id: str = "") -> FrameMatch | None:
    counts = _scan(tokens, _entry_index(lexicon))
    if not counts:
        return None
    ordered = tuple(sorted(counts.items(), key=lambda kv: (-kv[1], kv[0])))
    return FrameMatch(frame=lexicon.name, doc_id=doc_id, counts=ordered)


@dataclass(frozen=True)
class FrameCoverage:
    frame: str
    n_docs: int
    n_matched: int
    n_multi: int  # documents with two or more entry occurrences
    term_profile: tuple[tuple[str, int, float], ...]  # entry, count, share

    @property
    def pct(self) -> float:
        return self.n_matched / self.n_docs

    @property
    def total_occurrences(self) -> int:
        return sum(c for _, c, _ in self.term_profile)


def coverage(corpus: Corpus, lexicon: FrameLexicon) -> FrameCoverage:
    """Corpus-level match statistics and the ranked entry profile."""
    if len(corpus) == 0:
        raise LexiconError("coverage of an empty corpus is undefined")
    by_first = _entry_index(lexicon)
    n_matched = 0
    n_multi = 0
    entry_counts: Counter[str] = Counter()
    for tweet in corpus:
        counts = _scan(matching_tokens(tweet.text), by_first)
        if counts:
            n_matched += 1
            if sum(counts.values()) >= 2:
                n_multi += 1
            entry_counts.update(counts)

    grand_total = sum(entry_counts.values())
    profile = tuple(
        (entry, count, count / grand_total)
        for entry, count in sorted(entry_counts.items(),
                                   key=lambda kv: (-kv[1], kv[0]))
    )
    return FrameCoverage(frame=lexicon.name, n_docs=len(corpus),
                         n_matched=n_matched, n_multi=n_multi,
                         term_profile=profile)


def render_profile_entry(entry: str, count: int, share: float) -> str:
    return f"{entry} ({share * 100:.2f}%, {count})"


def truncate(lexicon: FrameLexicon, corpus: Corpus, n: int) -> FrameLexicon:
    """Keep the ``n`` entries occurring most often in ``corpus``.

    Ties break lexicographically on the entry display form. Asking for more
    entries than exist returns the lexicon unchanged with a warning.
    """
    if n < 1:
        raise LexiconError("truncation size must be positive")
    if n >= len(lexicon):
        if n > len(lexicon):
            log.warning("%s: asked for top %d of %d entries; keeping all",
                        lexicon.name, n, len(lexicon))
        return lexicon
    occurrences: Counter[str] = Counter({d: 0 for d in lexicon.displays})
    cov = coverage(corpus, lexicon)
    for entry, count, _ in cov.term_profile:
        occurrences[entry] = count
    ranked = sorted(occurrences.items(), key=lambda kv: (-kv[1], kv[0]))
    keep = [tuple(entry.split()) for entry, _ in ranked[:n]]
    return FrameLexicon(name=lexicon.name, entries=tuple(keep))


@dataclass(frozen=True)
class ContingencyMatrix:
    """Binary document-by-frame incidence, all documents as rows."""

    frames: tuple[str, ...]
    doc_ids: tuple[str, ...]
    rows: tuple[tuple[int, ...], ...]

    def column_sums(self) -> tuple[int, ...]:
        return tuple(sum(col) for col in zip(*self.rows))

    def to_csv(self) -> str:
        lines = ["doc_id," + ",".join(self.frames)]
        for doc_id, row in zip(self.doc_ids, self.rows):
            lines.append(doc_id + "," + ",".join(str(v) for v in row))
        return "\n".join(lines) + "\n"


def contingency(corpus: Corpus, lexicons: list[FrameLexicon]) -> ContingencyMatrix:
    """One row per document, one binary column per frame, order preserved."""
    if len(lexicons) < 2:
        raise LexiconError("contingency needs at least two frames")
    names = [lex.name for lex in lexicons]
    if len(set(names)) != len(names):
        raise LexiconError("contingency frames must have distinct names")
    if len(corpus) == 0:
        raise LexiconError("contingency of an empty corpus is undefined")
    indexes = [_entry_index(lex) for lex in lexicons]
    rows: list[tuple[int, ...]] = []
    for tweet in corpus:
        tokens = matching_tokens(tweet.text)
        rows.append(tuple(1 if _scan(tokens, idx) else 0 for idx in indexes))
    return ContingencyMatrix(frames=tuple(names),
                             doc_ids=tuple(t.id for t in corpus),
                             rows=tuple(rows))


def frame_topic_profile(model: LdaModel, corpus: Corpus, lexicon: FrameLexicon,
                        prep: PreprocessConfig) -> list[float]:
    """Mean topic mixture of the documents that mention the frame.

    Documents are selected on the matching token stream, then preprocessed
    with the full modeling pipeline and folded into the model one by one.
    """
    if len(corpus) == 0:
        raise LexiconError("frame_topic_profile of an empty corpus is undefined")
    by_first = _entry_index(lexicon)
    K = model.n_topics
    acc = [0.0] * K
    n = 0
    for tweet in corpus:
        if not _scan(matching_tokens(tweet.text), by_first):
            continue
        result = infer(model, preprocess(tweet.text, prep))
        for k in range(K):
            acc[k] += result.probs[k]
        n += 1
    if n == 0:
        raise LexiconError(
            f"no document matches frame {lexicon.name!r}; profile is undefined"
        )
    return [x / n for x in acc]
