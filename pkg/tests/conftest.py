"""Shared fixtures and small builders used across the test suite."""

from __future__ import annotations

import random
from datetime import datetime, timedelta, timezone

import pytest

from framescope.corpus import Corpus, Tweet
from framescope.textprep import build_vocabulary, to_bow

BASE_TS = datetime(2020, 3, 20, 10, 0, 0, tzinfo=timezone.utc)


def make_tweet(tid: str, author: str = "author", minutes: int = 0,
               text: str = "text #covid19", retweet: bool = False,
               lang: str | None = None) -> Tweet:
    return Tweet(id=tid, author_id=author,
                 created_at=BASE_TS + timedelta(minutes=minutes), text=text,
                 is_retweet=retweet, lang=lang)


def make_corpus(tweets, label: str = "") -> Corpus:
    return Corpus(tweets=tuple(tweets), label=label)


def planted_docs(n_topics: int, n_docs: int, doc_len: int,
                 pool_size: int, seed: int):
    """Documents drawn from fully disjoint per-topic vocabularies."""
    rng = random.Random(seed)
    pools = [
        [f"t{k}w{i:03d}" for i in range(pool_size)] for k in range(n_topics)
    ]
    docs: list[list[str]] = []
    truth: list[int] = []
    for d in range(n_docs):
        k = d % n_topics
        truth.append(k)
        pool = pools[k]
        docs.append([pool[rng.randrange(pool_size)] for _ in range(doc_len)])
    return docs, truth, pools


def bags_for(docs):
    vocab = build_vocabulary(docs)
    return vocab, [to_bow(doc, vocab) for doc in docs]


def purity(predicted: list[int], truth: list[int], n_topics: int) -> float:
    """Cluster purity: majority true label per predicted cluster."""
    table: dict[int, dict[int, int]] = {}
    for p, t in zip(predicted, truth):
        table.setdefault(p, {}).setdefault(t, 0)
        table[p][t] += 1
    agreeing = sum(max(row.values()) for row in table.values())
    return agreeing / len(predicted)


@pytest.fixture
def default_prep():
    from framescope.textprep import PreprocessConfig

    return PreprocessConfig.default()
