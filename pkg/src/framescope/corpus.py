"""Tweet corpus ingestion and collection-filtering rules.

A corpus is built from a JSONL export and reduced by three rules applied in a
fixed order: keep tweets carrying at least one collection hashtag, drop
retweets, then keep each author's earliest tweet. The order matters (a retweet
can shadow an original by the same author), so the combined pipeline is
exposed as a single function.
"""

from __future__ import annotations

import json
import logging
import re
from dataclasses import dataclass
from datetime import date, datetime, timezone

log = logging.getLogger(__name__)

# Collection tags for the corpus this toolkit was built around. Matching is
# case-insensitive and requires the '#' prefix on the token.
DEFAULT_HASHTAGS = (
    "covid19",
    "coronavirus",
    "ncov2019",
    "2019ncov",
    "ncov",
    "ncov19",
)


class CorpusError(ValueError):
    """Raised for malformed input files or rule preconditions."""


@dataclass(frozen=True)
class Tweet:
    id: str
    author_id: str
    created_at: datetime
    text: str
    is_retweet: bool
    lang: str | None = None


@dataclass(frozen=True)
class LoadReport:
    """What happened while reading a JSONL file."""

    total_lines: int
    parsed: int
    malformed: tuple[tuple[int, str], ...]  # (1-based line number, reason)

    @property
    def n_malformed(self) -> int:
        return len(self.malformed)


@dataclass(frozen=True)
class Corpus:
    """An ordered, immutable collection of tweets.

    Order is the file order of the source. ``sorted_by_time`` records whether
    timestamps are non-decreasing; rules that rely on time order check it.
    """

    tweets: tuple[Tweet, ...]
    label: str = ""
    load_report: LoadReport | None = None

    def __len__(self) -> int:
        return len(self.tweets)

    def __iter__(self):
        return iter(self.tweets)

    @property
    def sorted_by_time(self) -> bool:
        ts = [t.created_at for t in self.tweets]
        return all(a <= b for a, b in zip(ts, ts[1:]))

    def day_counts(self) -> dict[date, int]:
        """Tweets per UTC day, keyed by date, in ascending date order."""
        counts: dict[date, int] = {}
        for t in self.tweets:
            d = t.created_at.astimezone(timezone.utc).date()
            counts[d] = counts.get(d, 0) + 1
        return dict(sorted(counts.items()))

    def replace(self, tweets: tuple[Tweet, ...], label: str | None = None) -> "Corpus":
        return Corpus(tweets=tweets, label=self.label if label is None else label,
                      load_report=self.load_report)


@dataclass(frozen=True)
class LedgerRow:
    day: date
    collected: int  # cumulative
    retained: int  # cumulative


@dataclass(frozen=True)
class CollectionLedger:
    """Cumulative per-day account of collected vs retained tweets."""

    rows: tuple[LedgerRow, ...]

    def to_csv(self) -> str:
        lines = ["date,collected,retained"]
        for r in self.rows:
            lines.append(f"{r.day.isoformat()},{r.collected},{r.retained}")
        return "\n".join(lines) + "\n"


_REQUIRED_FIELDS = ("id", "author_id", "created_at", "text", "is_retweet")


def _parse_timestamp(raw: str) -> datetime:
    # 3.10's fromisoformat rejects a trailing 'Z'; normalize it first.
    if raw.endswith(("Z", "z")):
        raw = raw[:-1] + "+00:00"
    ts = datetime.fromisoformat(raw)
    if ts.tzinfo is None:
        ts = ts.replace(tzinfo=timezone.utc)
    return ts.astimezone(timezone.utc)


def _parse_line(raw: str, seen_ids: set[str]) -> Tweet:
    obj = json.loads(raw)
    if not isinstance(obj, dict):
        raise ValueError("not a JSON object")
    missing = [f for f in _REQUIRED_FIELDS if f not in obj]
    if missing:
        raise ValueError(f"missing fields: {', '.join(missing)}")
    tid = obj["id"]
    if isinstance(tid, bool) or not isinstance(tid, (str, int)) or str(tid) == "":
        raise ValueError("id must be a non-empty string or integer")
    tid = str(tid)
    if tid in seen_ids:
        raise ValueError(f"duplicate id {tid!r}")
    author = str(obj["author_id"])
    if author == "":
        raise ValueError("empty author_id")
    text = obj["text"]
    if not isinstance(text, str) or not text.strip():
        raise ValueError("empty text")
    if not isinstance(obj["is_retweet"], bool):
        raise ValueError("is_retweet must be a boolean")
    try:
        ts = _parse_timestamp(str(obj["created_at"]))
    except ValueError as exc:
        raise ValueError(f"bad created_at: {exc}") from None
    lang = obj.get("lang")
    if lang is not None and not isinstance(lang, str):
        raise ValueError("lang must be a string when present")
    return Tweet(id=tid, author_id=author, created_at=ts, text=text,
                 is_retweet=obj["is_retweet"], lang=lang)


def load_corpus(path: str, label: str = "") -> Corpus:
    """Read a JSONL corpus, keeping file order.

    Malformed lines are counted with their line numbers and reasons instead of
    being silently dropped; more than 1% malformed lines is treated as a
    broken export and raises :class:`CorpusError`.
    """
    tweets: list[Tweet] = []
    malformed: list[tuple[int, str]] = []
    seen_ids: set[str] = set()
    total = 0
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            if not raw.strip():
                continue
            total += 1
            try:
                tweet = _parse_line(raw, seen_ids)
            except (ValueError, json.JSONDecodeError) as exc:
                malformed.append((lineno, str(exc)))
                continue
            seen_ids.add(tweet.id)
            tweets.append(tweet)

    if total == 0:
        log.warning("%s: empty corpus file", path)
    if malformed and len(malformed) > 0.01 * total:
        head = "; ".join(f"line {n}: {msg}" for n, msg in malformed[:20])
        raise CorpusError(
            f"{path}: {len(malformed)} of {total} lines malformed (>1%): {head}"
        )
    if malformed:
        log.warning("%s: %d malformed line(s): %s", path, len(malformed),
                    "; ".join(f"line {n}: {msg}" for n, msg in malformed))

    corpus = Corpus(tweets=tuple(tweets), label=label,
                    load_report=LoadReport(total, len(tweets), tuple(malformed)))
    if not corpus.sorted_by_time:
        log.warning("%s: tweets are not sorted by created_at", path)
    return corpus


def save_corpus(corpus: Corpus, path: str) -> None:
    """Write the corpus back out as JSONL, one tweet per line, file order."""
    with open(path, "w", encoding="utf-8") as fh:
        for t in corpus:
            obj = {
                "id": t.id,
                "author_id": t.author_id,
                "created_at": t.created_at.isoformat(),
                "text": t.text,
                "is_retweet": t.is_retweet,
            }
            if t.lang is not None:
                obj["lang"] = t.lang
            fh.write(json.dumps(obj, ensure_ascii=False, sort_keys=True) + "\n")


def _hashtag_pattern(hashtags: tuple[str, ...] | list[str]) -> re.Pattern[str]:
    tags = [t.lstrip("#").lower() for t in hashtags]
    if not tags or any(t == "" for t in tags):
        raise CorpusError("hashtag set must be non-empty")
    alternation = "|".join(re.escape(t) for t in tags)
    # A tag is its own token: '#' not preceded by a word character or another
    # '#', and the tag not followed by more word characters ("#ncov" must not
    # fire inside "#ncovidiot" or "abc#ncov").
    return re.compile(rf"(?<![\w#])#(?:{alternation})(?![\w])", re.IGNORECASE)


def filter_by_hashtags(corpus: Corpus,
                       hashtags: tuple[str, ...] | list[str] = DEFAULT_HASHTAGS) -> Corpus:
    """Keep tweets whose text contains at least one collection hashtag."""
    pattern = _hashtag_pattern(tuple(hashtags))
    kept = tuple(t for t in corpus if pattern.search(t.text))
    return corpus.replace(kept)


def filter_by_language(corpus: Corpus, lang: str) -> Corpus:
    """Keep tweets whose lang tag equals ``lang``; untagged tweets are kept."""
    kept = tuple(t for t in corpus if t.lang is None or t.lang == lang)
    return corpus.replace(kept)


def drop_retweets(corpus: Corpus) -> Corpus:
    return corpus.replace(tuple(t for t in corpus if not t.is_retweet))


def dedup_by_author(corpus: Corpus) -> Corpus:
    """Keep each author's earliest tweet (ties resolved by file order).

    Requires the corpus to be sorted by created_at; earliest-wins is not well
    defined otherwise.
    """
    if not corpus.sorted_by_time:
        raise CorpusError("dedup_by_author requires a corpus sorted by created_at")
    seen: set[str] = set()
    kept: list[Tweet] = []
    for t in corpus:
        if t.author_id in seen:
            continue
        seen.add(t.author_id)
        kept.append(t)
    return corpus.replace(tuple(kept))


def sort_by_time(corpus: Corpus) -> Corpus:
    """Stable sort by created_at (ties keep file order)."""
    return corpus.replace(tuple(sorted(corpus.tweets, key=lambda t: t.created_at)))


def collection_pipeline(corpus: Corpus,
                        hashtags: tuple[str, ...] | list[str] = DEFAULT_HASHTAGS,
                        lang: str | None = None) -> Corpus:
    """Apply the collection rules in their fixed order.

    hashtag filter -> optional language filter -> drop retweets -> dedup by
    author. Reordering changes results, so callers go through here.
    """
    out = filter_by_hashtags(corpus, hashtags)
    if lang is not None:
        out = filter_by_language(out, lang)
    out = drop_retweets(out)
    return dedup_by_author(out)


def build_ledger(collected: Corpus, retained: Corpus) -> CollectionLedger:
    """Cumulative per-day ledger of collected vs retained tweet counts.

    ``retained`` must cover no day outside ``collected``'s day range.
    """
    got = collected.day_counts()
    kept = retained.day_counts()
    extra = sorted(set(kept) - set(got))
    if extra:
        days = ", ".join(d.isoformat() for d in extra)
        raise CorpusError(f"retained corpus has days absent from collected: {days}")
    rows: list[LedgerRow] = []
    cum_got = 0
    cum_kept = 0
    for day, n in got.items():
        cum_got += n
        cum_kept += kept.get(day, 0)
        rows.append(LedgerRow(day=day, collected=cum_got, retained=cum_kept))
    return CollectionLedger(rows=tuple(rows))


def write_ledger(ledger: CollectionLedger, path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(ledger.to_csv())
