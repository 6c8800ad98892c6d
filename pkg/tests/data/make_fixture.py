"""Regenerates the synthetic corpus fixture used by the end-to-end tests.

Run from the repository root:

    python3 tests/data/make_fixture.py

The output is fully determined by FIXTURE_SEED. Regenerate it only together
with the golden outputs under tests/golden/ (see tests/data/make_golden.py),
since the acceptance suite compares pipeline output against those bytes.
"""

from __future__ import annotations

import json
import os
import random
import sys
from datetime import datetime, timedelta, timezone

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "..", "src"))

from framescope.frames import builtin_lexicon  # noqa: E402

FIXTURE_SEED = 20200320
N_LINES = 1000
OUT_PATH = os.path.join(os.path.dirname(__file__), "synthetic_tweets.jsonl")

START = datetime(2020, 3, 20, 0, 4, 0, tzinfo=timezone.utc)

THEMES = {
    "reporting": [
        "cases", "deaths", "report", "update", "numbers", "data",
        "officials", "confirmed", "toll", "figures", "daily", "increase",
        "total", "record", "announced", "hospitals",
    ],
    "community": [
        "neighbors", "volunteers", "groceries", "deliver", "kindness",
        "helping", "masks", "sewing", "donations", "pantry", "elderly",
        "checking", "street", "community", "together", "thanks",
    ],
    "politics": [
        "government", "minister", "policy", "lockdown", "measures",
        "economy", "parliament", "debate", "briefing", "restrictions",
        "borders", "travel", "election", "mayor", "council", "budget",
    ],
    "reaction": [
        "scared", "worried", "hope", "anxious", "bored", "quarantine",
        "distancing", "online", "streaming", "cooking", "baking", "garden",
        "walks", "reading", "music", "tired",
    ],
}
THEME_WEIGHTS = [("reporting", 30), ("community", 25), ("politics", 25),
                 ("reaction", 20)]

# (candidate entry, weight); only candidates present in the builtin lexicon
# are used, and at least four must survive so rank-frequency fits have points
FRAME_CANDIDATES = {
    "war": [("war", 6), ("fight", 5), ("battle", 4), ("enemy", 3),
            ("front line", 2), ("weapon", 1), ("victory", 1), ("combat", 1)],
    "family": [("family", 6), ("home", 5), ("mother", 3), ("child", 2),
               ("father", 2), ("sister", 1), ("grandmother", 1)],
    "storm": [("storm", 4), ("thunder", 2), ("lightning", 2),
              ("hurricane", 1)],
    "monster": [("monster", 4), ("beast", 2), ("creature", 2), ("ogre", 1)],
    "tsunami": [("tsunami", 4), ("wave", 3), ("flood", 2),
                ("earthquake", 1)],
}
FRAME_RATES = {"war": 0.10, "family": 0.12, "storm": 0.02,
               "monster": 0.015, "tsunami": 0.02}

DEFAULT_TAG_VARIANTS = [
    "#COVID19", "#covid19", "#Covid19",
    "#coronavirus", "#Coronavirus", "#CoronaVirus", "#CORONAVIRUS",
    "#nCoV", "#NCOV19", "#ncov2019", "#2019nCoV", "#2019ncov",
]
OTHER_TAGS = ["#stayhome", "#lockdown2020", "#flattenthecurve", "#wfh",
              "#quarantinelife"]
MENTIONS = ["@newsdesk", "@cityhall", "@drsmith", "@localpaper",
            "@wardseven"]
URLS = [
    "https://t.co/a1b2c3", "https://t.co/d4e5f6", "https://t.co/g7h8i9",
    "http://example.org/brief", "https://news.example.com/live",
    "www.cityhealth.example/stats",
]
UNICODE_WORDS = ["café", "señora", "zürich", "naïve"]


def frame_entries():
    usable = {}
    for frame, candidates in FRAME_CANDIDATES.items():
        displays = set(builtin_lexicon(frame).displays)
        kept = [(entry, w) for entry, w in candidates if entry in displays]
        if len(kept) < 4:
            missing = [e for e, _ in candidates if e not in displays]
            raise SystemExit(
                f"{frame}: only {len(kept)} candidates in lexicon; "
                f"not members: {missing}"
            )
        usable[frame] = kept
    return usable


def weighted_choice(rng, pairs):
    total = sum(w for _, w in pairs)
    roll = rng.randrange(total)
    for value, w in pairs:
        roll -= w
        if roll < 0:
            return value
    return pairs[-1][0]


def build_text(rng, injections):
    theme = weighted_choice(rng, THEME_WEIGHTS)
    pool = THEMES[theme]
    words = [pool[rng.randrange(len(pool))]
             for _ in range(rng.randrange(5, 10))]

    for frame, entries in injections.items():
        if rng.random() >= FRAME_RATES[frame]:
            continue
        hits = 2 if rng.random() < 0.3 else 1
        for _ in range(hits):
            entry = weighted_choice(rng, entries)
            pos = rng.randrange(len(words) + 1)
            words[pos:pos] = entry.split()

    if rng.random() < 0.06:
        words.insert(rng.randrange(len(words) + 1),
                     UNICODE_WORDS[rng.randrange(len(UNICODE_WORDS))])
    if rng.random() < 0.25:
        words.insert(0, MENTIONS[rng.randrange(len(MENTIONS))])

    if rng.random() < 0.90:
        tags = [DEFAULT_TAG_VARIANTS[rng.randrange(len(DEFAULT_TAG_VARIANTS))]]
        if rng.random() < 0.2:
            tags.append(OTHER_TAGS[rng.randrange(len(OTHER_TAGS))])
    elif rng.random() < 0.5:
        tags = [OTHER_TAGS[rng.randrange(len(OTHER_TAGS))]]
    else:
        tags = []
    words.extend(tags)

    if rng.random() < 0.20:
        words.append(URLS[rng.randrange(len(URLS))])
    return " ".join(words)


def vacuous_text(rng):
    # hashtag-matched but empty after preprocessing
    return (DEFAULT_TAG_VARIANTS[rng.randrange(len(DEFAULT_TAG_VARIANTS))]
            + " " + URLS[rng.randrange(len(URLS))])


def main():
    rng = random.Random(FIXTURE_SEED)
    injections = frame_entries()
    ts = START
    lines = []
    for i in range(N_LINES):
        ts = ts + timedelta(minutes=rng.randrange(10, 29))
        author = f"user{min(rng.randrange(620), rng.randrange(620)):03d}"
        text = vacuous_text(rng) if rng.random() < 0.01 else \
            build_text(rng, injections)
        obj = {
            "id": str(1240000000000000000 + i * 37 + rng.randrange(10)),
            "author_id": author,
            "created_at": ts.strftime("%Y-%m-%dT%H:%M:%SZ"),
            "text": text,
            "is_retweet": rng.random() < 0.08,
        }
        roll = rng.random()
        if roll < 0.80:
            obj["lang"] = "en"
        elif roll < 0.87:
            obj["lang"] = "es"
        elif roll < 0.92:
            obj["lang"] = "fr"
        lines.append(json.dumps(obj, ensure_ascii=False))

    with open(OUT_PATH, "w", encoding="utf-8", newline="") as fh:
        fh.write("\n".join(lines) + "\n")
    span = (ts.date() - START.date()).days + 1
    print(f"wrote {len(lines)} lines spanning {span} days -> {OUT_PATH}")


if __name__ == "__main__":
    main()
