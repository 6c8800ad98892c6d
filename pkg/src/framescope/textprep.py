"""Tokenization, stopword handling, vocabulary and bag-of-words building.

Two token pipelines exist on purpose. The modeling pipeline (``preprocess``)
lowercases, strips URLs and @/# markers, drops tokens shorter than three
characters, then removes stopwords and collection-domain terms. The raw
frequency pipeline (``analytics_tokens``) applies only the stopword list, so
short high-frequency words like "us" stay visible in corpus-level listings.
"""

from __future__ import annotations

import hashlib
import math
import re
from collections import Counter
from dataclasses import dataclass
from importlib import resources

_URL_RE = re.compile(r"(?:https?://|www\.)\S+", re.IGNORECASE)
# Runs of letters/digits; underscores and all punctuation split tokens, so
# "@who" and "#flattenthecurve" keep their bodies and "don't" splits in two.
_TOKEN_RE = re.compile(r"[^\W_]+")

MIN_TOKEN_LEN = 3


def tokenize(text: str) -> list[str]:
    """Lowercased alphanumeric tokens with URLs removed and digits dropped."""
    text = _URL_RE.sub(" ", text).lower()
    return [tok for tok in _TOKEN_RE.findall(text) if not tok.isdigit()]


def load_wordlist(path: str) -> frozenset[str]:
    """One lowercase term per line; blank lines and '#' comments ignored."""
    terms: set[str] = set()
    with open(path, encoding="utf-8") as fh:
        for raw in fh:
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            terms.add(line.lower())
    return frozenset(terms)


def _bundled_wordlist(name: str) -> frozenset[str]:
    ref = resources.files("framescope.data").joinpath(name)
    terms: set[str] = set()
    for raw in ref.read_text(encoding="utf-8").splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        terms.add(line.lower())
    return frozenset(terms)


def default_stopwords() -> frozenset[str]:
    return _bundled_wordlist("stopwords.txt")


def default_domain_terms() -> frozenset[str]:
    return _bundled_wordlist("domain_exclusions.txt")


@dataclass(frozen=True)
class PreprocessConfig:
    stopwords: frozenset[str]
    domain_terms: frozenset[str]
    min_len: int = MIN_TOKEN_LEN

    @classmethod
    def default(cls) -> "PreprocessConfig":
        return cls(stopwords=default_stopwords(), domain_terms=default_domain_terms())


def preprocess(text: str, cfg: PreprocessConfig) -> list[str]:
    """Modeling tokens: tokenize, length filter, stopwords, domain terms."""
    return [
        tok
        for tok in tokenize(text)
        if len(tok) >= cfg.min_len
        and tok not in cfg.stopwords
        and tok not in cfg.domain_terms
    ]


def analytics_tokens(text: str, stopwords: frozenset[str]) -> list[str]:
    """Raw frequency tokens: tokenize and remove stopwords, nothing else."""
    return [tok for tok in tokenize(text) if tok not in stopwords]


@dataclass(frozen=True)
class Vocabulary:
    """Lexicographically indexed term set with document frequencies."""

    terms: tuple[str, ...]
    doc_freq: tuple[int, ...]
    total_docs: int

    def __post_init__(self):
        object.__setattr__(self, "_index", {t: i for i, t in enumerate(self.terms)})

    def __len__(self) -> int:
        return len(self.terms)

    def __contains__(self, term: str) -> bool:
        return term in self._index

    def index(self, term: str) -> int:
        return self._index[term]

    def get(self, term: str) -> int | None:
        return self._index.get(term)

    @property
    def hash(self) -> str:
        """Stable digest of the ordered term list; binds models to vocabularies."""
        h = hashlib.sha256("\n".join(self.terms).encode("utf-8"))
        return h.hexdigest()


def build_vocabulary(docs: list[list[str]]) -> Vocabulary:
    """Index every distinct term across ``docs`` in lexicographic order."""
    if not docs or all(len(d) == 0 for d in docs):
        raise ValueError("cannot build a vocabulary from an empty token stream")
    df: Counter[str] = Counter()
    for doc in docs:
        df.update(set(doc))
    terms = tuple(sorted(df))
    return Vocabulary(terms=terms,
                      doc_freq=tuple(df[t] for t in terms),
                      total_docs=len(docs))


@dataclass(frozen=True)
class BagOfWords:
    """Sparse term counts for one document, sorted by term index."""

    pairs: tuple[tuple[int, int], ...]  # (term index, count), index ascending
    n_oov: int

    @property
    def n_tokens(self) -> int:
        return sum(c for _, c in self.pairs)


def to_bow(tokens: list[str], vocab: Vocabulary) -> BagOfWords:
    """Count in-vocabulary tokens; out-of-vocabulary tokens are counted, not kept."""
    counts: Counter[int] = Counter()
    oov = 0
    for tok in tokens:
        idx = vocab.get(tok)
        if idx is None:
            oov += 1
        else:
            counts[idx] += 1
    return BagOfWords(pairs=tuple(sorted(counts.items())), n_oov=oov)


@dataclass(frozen=True)
class WeightedBag:
    """tf-idf weighted variant of a bag; weights are non-negative floats."""

    pairs: tuple[tuple[int, float], ...]


def tfidf_weight(bags: list[BagOfWords], vocab: Vocabulary) -> list[WeightedBag]:
    """weight(term, doc) = count * ln(total_docs / doc_freq(term)).

    A term present in every document gets weight zero everywhere.
    """
    n = vocab.total_docs
    idf = [math.log(n / df) if df > 0 else 0.0 for df in vocab.doc_freq]
    out: list[WeightedBag] = []
    for bag in bags:
        out.append(WeightedBag(pairs=tuple((i, c * idf[i]) for i, c in bag.pairs)))
    return out


def weighted_to_counts(weighted: list[WeightedBag]) -> list[BagOfWords]:
    """Round tf-idf weights to integer pseudo-counts; zero-weight terms drop out.

    Lets the count-based trainer consume the weighted variant of a corpus.
    """
    out: list[BagOfWords] = []
    for wbag in weighted:
        pairs = tuple((i, int(round(w))) for i, w in wbag.pairs if int(round(w)) > 0)
        out.append(BagOfWords(pairs=pairs, n_oov=0))
    return out


def top_terms(docs: list[list[str]], k: int) -> list[tuple[str, int]]:
    """The ``k`` most frequent terms; ties broken lexicographically."""
    if k < 1:
        raise ValueError("k must be positive")
    counts: Counter[str] = Counter()
    for doc in docs:
        counts.update(doc)
    ranked = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    return ranked[:k]


def render_term_count(term: str, count: int) -> str:
    return f"{term} ({count})"
