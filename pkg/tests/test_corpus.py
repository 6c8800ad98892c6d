"""Corpus loading and the collection-filtering rules."""

import json
from datetime import date

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from framescope.corpus import (
    CorpusError,
    build_ledger,
    collection_pipeline,
    dedup_by_author,
    drop_retweets,
    filter_by_hashtags,
    filter_by_language,
    load_corpus,
    save_corpus,
    sort_by_time,
)

from conftest import make_corpus, make_tweet


def write_jsonl(path, rows):
    with open(path, "w", encoding="utf-8") as fh:
        for row in rows:
            fh.write(json.dumps(row) + "\n")


def row(tid, author="a", ts="2020-03-20T10:00:00+00:00", text="hi #covid19",
        retweet=False, **extra):
    base = {"id": tid, "author_id": author, "created_at": ts, "text": text,
            "is_retweet": retweet}
    base.update(extra)
    return base


class TestLoad:
    def test_loads_three_lines(self, tmp_path):
        path = tmp_path / "c.jsonl"
        write_jsonl(path, [row("1"), row("2", author="b"), row("3", author="c")])
        corpus = load_corpus(str(path))
        assert len(corpus) == 3
        assert [t.id for t in corpus] == ["1", "2", "3"]
        assert corpus.load_report.n_malformed == 0

    def test_empty_file_warns(self, tmp_path, caplog):
        path = tmp_path / "c.jsonl"
        path.write_text("")
        with caplog.at_level("WARNING"):
            corpus = load_corpus(str(path))
        assert len(corpus) == 0
        assert any("empty" in r.message for r in caplog.records)

    def test_malformed_minority_reported(self, tmp_path):
        rows = [row(str(i), author=f"a{i}") for i in range(99)]
        path = tmp_path / "c.jsonl"
        write_jsonl(path, rows)
        with open(path, "a", encoding="utf-8") as fh:
            fh.write("{not json\n")
        corpus = load_corpus(str(path))
        assert len(corpus) == 99
        assert corpus.load_report.n_malformed == 1
        assert corpus.load_report.malformed[0][0] == 100  # line number

    def test_malformed_majority_is_hard_error(self, tmp_path):
        path = tmp_path / "c.jsonl"
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(json.dumps(row("1")) + "\n")
            fh.write("broken 1\n")
            fh.write("broken 2\n")
        with pytest.raises(CorpusError) as err:
            load_corpus(str(path))
        assert "line 2" in str(err.value)
        assert "line 3" in str(err.value)

    def test_missing_fields_are_malformed(self, tmp_path):
        path = tmp_path / "c.jsonl"
        bad = {"id": "1", "text": "hi"}
        write_jsonl(path, [bad] + [row(str(i), author=f"a{i}") for i in range(200)])
        corpus = load_corpus(str(path))
        assert corpus.load_report.n_malformed == 1
        assert "missing fields" in corpus.load_report.malformed[0][1]

    def test_duplicate_ids_are_malformed(self, tmp_path):
        path = tmp_path / "c.jsonl"
        write_jsonl(path, [row(str(i), author=f"a{i}") for i in range(200)]
                    + [row("0", author="zz")])
        corpus = load_corpus(str(path))
        assert corpus.load_report.n_malformed == 1
        assert "duplicate" in corpus.load_report.malformed[0][1]

    def test_zulu_and_offset_timestamps(self, tmp_path):
        path = tmp_path / "c.jsonl"
        write_jsonl(path, [
            row("1", ts="2020-03-20T10:00:00Z"),
            row("2", author="b", ts="2020-03-20T12:00:00+02:00"),
        ])
        corpus = load_corpus(str(path))
        # identical instants once normalized to UTC
        assert corpus.tweets[0].created_at == corpus.tweets[1].created_at

    def test_round_trip(self, tmp_path):
        path = tmp_path / "c.jsonl"
        write_jsonl(path, [row("1", lang="en"), row("2", author="b")])
        corpus = load_corpus(str(path))
        out = tmp_path / "out.jsonl"
        save_corpus(corpus, str(out))
        again = load_corpus(str(out))
        assert again.tweets == corpus.tweets


class TestHashtagFilter:
    def test_default_tags_match(self):
        kept = filter_by_hashtags(make_corpus([
            make_tweet("1", text="news update #covid19"),
            make_tweet("2", "b", text="storm season #weather"),
            make_tweet("3", "c", text="watch out #nCoV2019"),
            make_tweet("4", "d", text="all caps #CORONAVIRUS"),
        ]))
        assert [t.id for t in kept] == ["1", "3", "4"]

    def test_tag_must_be_own_token(self):
        kept = filter_by_hashtags(make_corpus([
            make_tweet("1", text="#ncovidiot ranting"),
            make_tweet("2", "b", text="abc#ncov is not a tag"),
            make_tweet("3", "c", text="ends with #ncov"),
            make_tweet("4", "d", text="plain ncov without hash"),
        ]))
        assert [t.id for t in kept] == ["3"]

    def test_custom_tags(self):
        kept = filter_by_hashtags(
            make_corpus([make_tweet("1", text="go #TeamA"),
                         make_tweet("2", "b", text="go #teamb")]),
            hashtags=("teama",),
        )
        assert [t.id for t in kept] == ["1"]

    def test_empty_corpus(self):
        corpus = make_corpus([])
        assert len(filter_by_hashtags(corpus)) == 0

    def test_empty_tagset_rejected(self):
        with pytest.raises(CorpusError):
            filter_by_hashtags(make_corpus([make_tweet("1")]), hashtags=())

    def test_result_is_subset_in_order(self):
        corpus = make_corpus([
            make_tweet(str(i), f"a{i}",
                       text=("#covid19 yes" if i % 3 else "no tag here"))
            for i in range(12)
        ])
        kept = filter_by_hashtags(corpus)
        ids = [t.id for t in corpus if "#covid19" in t.text]
        assert [t.id for t in kept] == ids


class TestRetweetsAndDedup:
    def test_drop_retweets(self):
        corpus = make_corpus([
            make_tweet("1", retweet=True),
            make_tweet("2", "b"),
            make_tweet("3", "c", retweet=True),
        ])
        assert [t.id for t in drop_retweets(corpus)] == ["2"]

    def test_dedup_keeps_earliest_per_author(self):
        corpus = make_corpus([
            make_tweet("1", "a", minutes=0),
            make_tweet("2", "b", minutes=1),
            make_tweet("3", "a", minutes=2),
            make_tweet("4", "c", minutes=3),
            make_tweet("5", "b", minutes=4),
        ])
        assert [t.id for t in dedup_by_author(corpus)] == ["1", "2", "4"]

    def test_dedup_tie_keeps_file_order(self):
        corpus = make_corpus([
            make_tweet("first", "a", minutes=0),
            make_tweet("second", "a", minutes=0),
        ])
        assert [t.id for t in dedup_by_author(corpus)] == ["first"]

    def test_dedup_requires_sorted_corpus(self):
        corpus = make_corpus([
            make_tweet("1", "a", minutes=5),
            make_tweet("2", "b", minutes=0),
        ])
        with pytest.raises(CorpusError):
            dedup_by_author(corpus)

    def test_pipeline_order_retweet_shadowing(self):
        # The author's earliest post is a retweet. Dropping retweets first
        # keeps their later original; deduping first would discard it.
        corpus = make_corpus([
            make_tweet("rt", "a", minutes=0, retweet=True),
            make_tweet("orig", "a", minutes=10),
        ])
        assert [t.id for t in collection_pipeline(corpus)] == ["orig"]
        reversed_order = drop_retweets(dedup_by_author(corpus))
        assert [t.id for t in reversed_order] == []

    def test_language_filter_keeps_untagged(self):
        corpus = make_corpus([
            make_tweet("1", "a", lang="en"),
            make_tweet("2", "b", lang="es"),
            make_tweet("3", "c"),
        ])
        assert [t.id for t in filter_by_language(corpus, "en")] == ["1", "3"]


class TestLedger:
    def test_single_day(self):
        raw = make_corpus([make_tweet(str(i), f"a{i}") for i in range(10)])
        kept = make_corpus([make_tweet(str(i), f"a{i}") for i in range(7)])
        ledger = build_ledger(raw, kept)
        assert len(ledger.rows) == 1
        assert (ledger.rows[0].collected, ledger.rows[0].retained) == (10, 7)

    def test_cumulative_two_days(self):
        day = 24 * 60
        raw = make_corpus(
            [make_tweet(f"d1-{i}", f"a{i}") for i in range(25)]
            + [make_tweet(f"d2-{i}", f"b{i}", minutes=day) for i in range(25)]
        )
        kept = make_corpus(
            [make_tweet(f"d1-{i}", f"a{i}") for i in range(20)]
            + [make_tweet(f"d2-{i}", f"b{i}", minutes=day) for i in range(20)]
        )
        ledger = build_ledger(raw, kept)
        assert [(r.collected, r.retained) for r in ledger.rows] == [(25, 20), (50, 40)]
        assert ledger.rows[0].day == date(2020, 3, 20)

    def test_empty_corpora(self):
        ledger = build_ledger(make_corpus([]), make_corpus([]))
        assert ledger.rows == ()

    def test_day_without_retained_repeats_cumulative(self):
        day = 24 * 60
        raw = make_corpus([make_tweet("1", "a"),
                           make_tweet("2", "b", minutes=day)])
        kept = make_corpus([make_tweet("1", "a")])
        ledger = build_ledger(raw, kept)
        assert [(r.collected, r.retained) for r in ledger.rows] == [(1, 1), (2, 1)]

    def test_retained_day_outside_collected_is_error(self):
        day = 24 * 60
        raw = make_corpus([make_tweet("1", "a")])
        kept = make_corpus([make_tweet("2", "b", minutes=3 * day)])
        with pytest.raises(CorpusError):
            build_ledger(raw, kept)

    def test_csv_shape(self):
        raw = make_corpus([make_tweet("1", "a")])
        ledger = build_ledger(raw, raw)
        assert ledger.to_csv() == "date,collected,retained\n2020-03-20,1,1\n"

    def test_monotone_and_bounded(self):
        day = 24 * 60
        raw = make_corpus([
            make_tweet(str(i), f"a{i}", minutes=(i % 5) * day + i)
            for i in range(50)
        ])
        raw = sort_by_time(raw)
        kept = collection_pipeline(raw)
        ledger = build_ledger(raw, kept)
        collected = [r.collected for r in ledger.rows]
        retained = [r.retained for r in ledger.rows]
        assert collected == sorted(collected)
        assert retained == sorted(retained)
        assert all(r <= c for c, r in zip(collected, retained))


@settings(max_examples=200, deadline=None)
@given(st.lists(
    st.tuples(
        st.sampled_from(["a", "b", "c", "d", "e"]),  # author
        st.integers(min_value=0, max_value=500),  # minute offset
        st.booleans(),  # retweet
        st.booleans(),  # carries a collection tag
    ),
    max_size=40,
))
def test_dedup_idempotent_and_pipeline_stable(entries):
    tweets = [
        make_tweet(str(i), author, minutes=minute, retweet=rt,
                   text="words #covid19" if tagged else "words only")
        for i, (author, minute, rt, tagged) in enumerate(entries)
    ]
    corpus = sort_by_time(make_corpus(tweets))
    once = dedup_by_author(corpus)
    twice = dedup_by_author(once)
    assert once.tweets == twice.tweets
    authors = [t.author_id for t in once]
    assert len(authors) == len(set(authors))

    ran = collection_pipeline(corpus)
    again = collection_pipeline(corpus)
    assert ran.tweets == again.tweets
    # pipeline output is a subset of its input rows
    assert set(t.id for t in ran) <= set(t.id for t in corpus)
