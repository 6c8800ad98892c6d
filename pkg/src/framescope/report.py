"""Report assembly: one corpus in, one structured bundle out.

A report is a plain dict with a fixed schema; JSON, Markdown and CSV renders
are all derived from it. Everything is ordered deterministically, so
rebuilding a report from the same corpus, models and labels reproduces the
serialized outputs byte for byte. Stored values keep full precision;
percentages are rounded to two decimals only when rendered.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass

from .corpus import Corpus
from .frames import (
    FrameLexicon,
    contingency,
    coverage,
    frame_topic_profile,
    render_profile_entry,
    truncate,
)
from .stats import DegenerateInputError, cochran_q, zipf_fit
from .textprep import (
    PreprocessConfig,
    analytics_tokens,
    build_vocabulary,
    preprocess,
    render_term_count,
    to_bow,
    top_terms,
)
from .topicmodel import LdaModel, coherence, format_topic_terms, top_topic_terms

REPORT_FORMAT_VERSION = 1
LABELS_FORMAT_VERSION = 1


class ReportError(ValueError):
    pass


@dataclass(frozen=True)
class ReportConfig:
    cutoffs: tuple[int, ...] = (30, 50)
    n_top_terms: int = 30
    n_topic_terms: int = 10
    coherence_top_n: int = 10
    profile_top: int = 20  # entries shown in rendered profiles

    def __post_init__(self):
        if any(c < 1 for c in self.cutoffs):
            raise ValueError("cutoffs must be positive")
        if list(self.cutoffs) != sorted(set(self.cutoffs)):
            raise ValueError("cutoffs must be strictly ascending")


def atomic_write_text(path: str, text: str) -> None:
    """Write-then-rename so readers never observe a half-written file."""
    tmp = f"{path}.tmp{os.getpid()}"
    with open(tmp, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    os.replace(tmp, path)


# -- topic labels -------------------------------------------------------------

def parse_labels(obj: object, n_topics: int | None = None) -> dict[int, dict]:
    """Validate a labels payload into {topic id: {label, author, timestamp}}.

    Accepts both the full file shape ({"format_version": .., "labels": {..}})
    and a bare mapping. Values may be plain strings or objects with a
    ``label`` plus optional ``author``/``timestamp``.
    """
    if not isinstance(obj, dict):
        raise ReportError("labels payload must be a JSON object")
    if "labels" in obj and not isinstance(obj.get("labels"), str):
        version = obj.get("format_version")
        if version is not None and version != LABELS_FORMAT_VERSION:
            raise ReportError(f"unsupported labels format version {version!r}")
        mapping = obj["labels"]
    else:
        mapping = {k: v for k, v in obj.items() if k != "format_version"}
    if not isinstance(mapping, dict):
        raise ReportError("labels mapping must be a JSON object")

    out: dict[int, dict] = {}
    for key, value in mapping.items():
        try:
            topic_id = int(key)
        except (TypeError, ValueError):
            raise ReportError(f"topic id {key!r} is not an integer") from None
        if topic_id < 0:
            raise ReportError(f"topic id {topic_id} is negative")
        if n_topics is not None and topic_id >= n_topics:
            raise ReportError(
                f"topic id {topic_id} out of range for a {n_topics}-topic model"
            )
        if isinstance(value, str):
            entry = {"label": value}
        elif isinstance(value, dict):
            entry = dict(value)
        else:
            raise ReportError(f"label for topic {topic_id} must be text")
        label = entry.get("label")
        if not isinstance(label, str) or not label.strip():
            raise ReportError(f"label for topic {topic_id} must be non-empty")
        out[topic_id] = {
            "label": label.strip(),
            "author": entry.get("author"),
            "timestamp": entry.get("timestamp"),
        }
    return out


def load_labels(path: str, n_topics: int | None = None) -> dict[int, dict]:
    try:
        with open(path, encoding="utf-8") as fh:
            payload = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ReportError(f"{path}: not valid JSON: {exc}") from None
    return parse_labels(payload, n_topics=n_topics)


def save_labels(labels: dict[int, dict], path: str) -> None:
    payload = {
        "format_version": LABELS_FORMAT_VERSION,
        "labels": {
            str(tid): {k: v for k, v in entry.items() if v is not None}
            for tid, entry in sorted(labels.items())
        },
    }
    atomic_write_text(path, json.dumps(payload, sort_keys=True, indent=2,
                                       ensure_ascii=False) + "\n")


# -- report assembly ----------------------------------------------------------

def model_key(model: LdaModel) -> str:
    return f"k{model.config.n_topics}"


def build_report(corpus: Corpus, models: dict[str, LdaModel],
                 lexicons: list[FrameLexicon], prep: PreprocessConfig,
                 labels: dict[str, dict[int, dict]] | None = None,
                 cfg: ReportConfig | None = None) -> dict:
    """Assemble the full corpus report as a serializable dict.

    Every model must have been trained on the preprocessed form of exactly
    this corpus; the vocabulary digests are compared and a mismatch is an
    error rather than a silently wrong report.
    """
    cfg = cfg or ReportConfig()
    labels = labels or {}
    if len(corpus) == 0:
        raise ReportError("cannot report on an empty corpus")
    if not models:
        raise ReportError("at least one model is required")
    if not lexicons:
        raise ReportError("at least one frame lexicon is required")
    names = [lex.name for lex in lexicons]
    if len(set(names)) != len(names):
        raise ReportError("frame lexicons must have distinct names")
    for key in labels:
        if key not in models:
            raise ReportError(f"labels given for unknown model {key!r}")

    model_docs = [preprocess(t.text, prep) for t in corpus]
    vocab = build_vocabulary(model_docs)
    for key, model in sorted(models.items()):
        if model.vocab.hash != vocab.hash:
            raise ReportError(
                f"model {key!r} was not trained on this corpus: vocabulary "
                f"digest {model.vocab.hash[:12]} != corpus {vocab.hash[:12]}"
            )

    raw_docs = [analytics_tokens(t.text, prep.stopwords) for t in corpus]
    ranked_terms = top_terms(raw_docs, cfg.n_top_terms)
    bags = [to_bow(doc, vocab) for doc in model_docs]

    models_section: dict[str, dict] = {}
    for key in sorted(models, key=lambda k: models[k].config.n_topics):
        model = models[key]
        model_labels = labels.get(key, {})
        for tid in model_labels:
            if tid >= model.config.n_topics:
                raise ReportError(
                    f"label for topic {tid} out of range in model {key!r}"
                )
        topic_terms = top_topic_terms(model, cfg.n_topic_terms)
        topics = []
        for k in range(model.config.n_topics):
            entry = model_labels.get(k)
            topics.append({
                "id": k,
                "label": entry["label"] if entry else None,
                "terms": [{"term": t, "weight": w} for t, w in topic_terms[k]],
            })
        models_section[key] = {
            "n_topics": model.config.n_topics,
            "passes": model.config.passes,
            "alpha": model.config.alpha_value,
            "beta": model.config.beta,
            "seed": model.config.seed,
            "coherence": coherence(model, bags, cfg.coherence_top_n),
            "topics": topics,
        }

    frames_section = []
    for lex in lexicons:
        cov_rows = []
        for cutoff in cfg.cutoffs:
            cut_lex = truncate(lex, corpus, cutoff)
            cov = coverage(corpus, cut_lex)
            cov_rows.append({
                "cutoff": str(cutoff),
                "lexicon_size": len(cut_lex),
                "n_matched": cov.n_matched,
                "pct": cov.pct,
                "n_multi": cov.n_multi,
            })
        full_cov = coverage(corpus, lex)
        cov_rows.append({
            "cutoff": "full",
            "lexicon_size": len(lex),
            "n_matched": full_cov.n_matched,
            "pct": full_cov.pct,
            "n_multi": full_cov.n_multi,
        })

        profile_counts = [count for _, count, _ in full_cov.term_profile]
        zipf_obj = None
        zipf_note = None
        if len([c for c in profile_counts if c > 0]) >= 3:
            fit = zipf_fit(profile_counts)
            zipf_obj = {"slope": fit.slope, "intercept": fit.intercept,
                        "r_squared": fit.r_squared, "n_points": fit.n_points}
        else:
            zipf_note = "fewer than three matched entries; no fit"

        topic_profiles = {}
        for key in sorted(models, key=lambda k: models[k].config.n_topics):
            if full_cov.n_matched == 0:
                topic_profiles[key] = None
            else:
                topic_profiles[key] = frame_topic_profile(
                    models[key], corpus, lex, prep
                )

        frames_section.append({
            "frame": lex.name,
            "lexicon_size": len(lex),
            "lexicon_hash": lex.hash,
            "coverage": cov_rows,
            "term_profile": [
                {"entry": e, "count": c, "share": s}
                for e, c, s in full_cov.term_profile
            ],
            "zipf": zipf_obj,
            "zipf_note": zipf_note,
            "topic_profile": topic_profiles,
        })

    cochran_obj = None
    cochran_note = None
    if len(lexicons) >= 2:
        table = contingency(corpus, lexicons)
        try:
            result = cochran_q([list(row) for row in table.rows])
            cochran_obj = {
                "statistic": result.statistic,
                "df": result.df,
                "p_value": result.p_value,
                "k": result.k,
                "n_rows": result.n_rows,
                "n_informative": result.n_informative,
            }
        except DegenerateInputError as exc:
            cochran_note = str(exc)
    else:
        cochran_note = "fewer than two frames; no test"

    return {
        "format_version": REPORT_FORMAT_VERSION,
        "kind": "framescope-report",
        "corpus": {
            "label": corpus.label,
            "n_docs": len(corpus),
            "n_model_tokens": sum(len(d) for d in model_docs),
            "vocab_size": len(vocab),
            "vocab_hash": vocab.hash,
        },
        "top_terms": [{"term": t, "count": c} for t, c in ranked_terms],
        "models": models_section,
        "frames": frames_section,
        "cochran": cochran_obj,
        "cochran_note": cochran_note,
        "config": {
            "cutoffs": list(cfg.cutoffs),
            "n_top_terms": cfg.n_top_terms,
            "n_topic_terms": cfg.n_topic_terms,
            "coherence_top_n": cfg.coherence_top_n,
            "profile_top": cfg.profile_top,
        },
    }


def report_to_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def write_report_json(report: dict, path: str) -> None:
    atomic_write_text(path, report_to_json(report))


def _pct(x: float) -> str:
    return f"{x * 100:.2f}%"


def _p_value(p: float) -> str:
    return "p < 0.001" if p < 0.001 else f"p = {p:.3f}"


def render_report_markdown(report: dict) -> str:
    """Human-readable view; numbers are presentation-rounded here only."""
    out: list[str] = []
    corpus = report["corpus"]
    title = corpus["label"] or "corpus"
    out.append(f"# Frame analysis report: {title}")
    out.append("")
    out.append(f"- Documents: {corpus['n_docs']}")
    out.append(f"- Modeling tokens: {corpus['n_model_tokens']}")
    out.append(f"- Vocabulary size: {corpus['vocab_size']}")
    out.append("")

    out.append("## Most frequent terms")
    out.append("")
    out.append(", ".join(render_term_count(t["term"], t["count"])
                         for t in report["top_terms"]))
    out.append("")

    model_keys = sorted(report["models"],
                        key=lambda k: report["models"][k]["n_topics"])
    for key in model_keys:
        section = report["models"][key]
        out.append(f"## Topics ({section['n_topics']} topics)")
        out.append("")
        for topic in section["topics"]:
            label = topic["label"] if topic["label"] else "unlabeled"
            terms = format_topic_terms(
                [(t["term"], t["weight"]) for t in topic["terms"]]
            )
            out.append(f"- Topic #{topic['id']} ({label}): {terms}")
        out.append("")
        scores = ", ".join(f"{s:.2f}" for s in section["coherence"])
        out.append(f"Coherence by topic: {scores}")
        out.append("")

    out.append("## Frame coverage")
    out.append("")
    cutoffs = [str(c) for c in report["config"]["cutoffs"]] + ["full"]
    header = "| Frame | " + " | ".join(
        f"matched@{c} | pct@{c}" for c in cutoffs
    ) + " | multi-term | documents |"
    sep = "|" + "---|" * (2 * len(cutoffs) + 3)
    out.append(header)
    out.append(sep)
    for frame in report["frames"]:
        by_cutoff = {row["cutoff"]: row for row in frame["coverage"]}
        cells = []
        for c in cutoffs:
            row = by_cutoff[c]
            cells.append(str(row["n_matched"]))
            cells.append(_pct(row["pct"]))
        out.append(
            f"| {frame['frame'].upper()} | " + " | ".join(cells)
            + f" | {by_cutoff['full']['n_multi']} | {corpus['n_docs']} |"
        )
    out.append("")

    out.append("## Frame term profiles")
    out.append("")
    profile_top = report["config"]["profile_top"]
    for frame in report["frames"]:
        shown = frame["term_profile"][:profile_top]
        rendered = ", ".join(
            render_profile_entry(e["entry"], e["count"], e["share"])
            for e in shown
        )
        out.append(f"- {frame['frame'].upper()}: {rendered if rendered else '(no matches)'}")
    out.append("")

    out.append("## Rank-frequency fits")
    out.append("")
    out.append("| Frame | slope | intercept | R^2 | points |")
    out.append("|---|---|---|---|---|")
    for frame in report["frames"]:
        fit = frame["zipf"]
        if fit is None:
            out.append(f"| {frame['frame'].upper()} | - | - | - | "
                       f"{frame['zipf_note']} |")
        else:
            out.append(
                f"| {frame['frame'].upper()} | {fit['slope']:.3f} | "
                f"{fit['intercept']:.3f} | {fit['r_squared']:.3f} | "
                f"{fit['n_points']} |"
            )
    out.append("")

    for key in model_keys:
        n_topics = report["models"][key]["n_topics"]
        out.append(f"## Frame-topic profiles ({n_topics} topics)")
        out.append("")
        topic_header = " | ".join(f"topic {k}" for k in range(n_topics))
        out.append(f"| Frame | {topic_header} |")
        out.append("|" + "---|" * (n_topics + 1))
        for frame in report["frames"]:
            profile = frame["topic_profile"].get(key)
            if profile is None:
                cells = " | ".join("-" for _ in range(n_topics))
            else:
                cells = " | ".join(_pct(v) for v in profile)
            out.append(f"| {frame['frame'].upper()} | {cells} |")
        out.append("")

    out.append("## Frame-use homogeneity")
    out.append("")
    if report["cochran"] is None:
        out.append(f"Not computed: {report['cochran_note']}")
    else:
        c = report["cochran"]
        out.append(
            f"Cochran's Q = {c['statistic']:,.2f}, df = {c['df']}, "
            f"{_p_value(c['p_value'])} "
            f"({c['n_informative']} of {c['n_rows']} documents informative)"
        )
    out.append("")
    return "\n".join(out)


def report_csv_files(report: dict) -> dict[str, str]:
    """Delimited side files derived from the report, full precision."""
    files: dict[str, str] = {}

    lines = ["term,count"]
    for t in report["top_terms"]:
        lines.append(f"{t['term']},{t['count']}")
    files["top_terms.csv"] = "\n".join(lines) + "\n"

    lines = ["frame,cutoff,lexicon_size,n_matched,pct,n_multi"]
    for frame in report["frames"]:
        for row in frame["coverage"]:
            lines.append(
                f"{frame['frame']},{row['cutoff']},{row['lexicon_size']},"
                f"{row['n_matched']},{row['pct']!r},{row['n_multi']}"
            )
    files["coverage.csv"] = "\n".join(lines) + "\n"

    lines = ["frame,entry,count,share"]
    for frame in report["frames"]:
        for e in frame["term_profile"]:
            lines.append(f"{frame['frame']},{e['entry']},{e['count']},{e['share']!r}")
    files["profile.csv"] = "\n".join(lines) + "\n"

    lines = ["frame,slope,intercept,r_squared,n_points"]
    for frame in report["frames"]:
        fit = frame["zipf"]
        if fit is None:
            continue
        lines.append(
            f"{frame['frame']},{fit['slope']!r},{fit['intercept']!r},"
            f"{fit['r_squared']!r},{fit['n_points']}"
        )
    files["zipf.csv"] = "\n".join(lines) + "\n"

    lines = ["model,topic,label,rank,term,weight"]
    for key in sorted(report["models"],
                      key=lambda k: report["models"][k]["n_topics"]):
        for topic in report["models"][key]["topics"]:
            label = topic["label"] or ""
            for rank, t in enumerate(topic["terms"], start=1):
                lines.append(
                    f"{key},{topic['id']},{label},{rank},{t['term']},"
                    f"{t['weight']!r}"
                )
    files["topics.csv"] = "\n".join(lines) + "\n"

    lines = ["model,frame,topic,share"]
    for key in sorted(report["models"],
                      key=lambda k: report["models"][k]["n_topics"]):
        for frame in report["frames"]:
            profile = frame["topic_profile"].get(key)
            if profile is None:
                continue
            for k, v in enumerate(profile):
                lines.append(f"{key},{frame['frame']},{k},{v!r}")
    files["frame_topics.csv"] = "\n".join(lines) + "\n"

    return files


# -- corpus comparison --------------------------------------------------------

def compare_corpora(reports: list[dict]) -> dict:
    """Side-by-side frame usage across corpora sharing the same lexicons.

    Produces one row per corpus (full-lexicon coverage percentages, corpus
    size, Cochran's Q) plus a grouped dataset keyed by frame for charting.
    """
    if len(reports) < 2:
        raise ReportError("comparison needs at least two reports")
    reference = [(f["frame"], f["lexicon_hash"]) for f in reports[0]["frames"]]
    for rep in reports[1:]:
        got = [(f["frame"], f["lexicon_hash"]) for f in rep["frames"]]
        if got != reference:
            raise ReportError(
                "reports use different frame lexicons; comparison would be "
                "meaningless"
            )
    labels = [rep["corpus"]["label"] or f"corpus-{i}"
              for i, rep in enumerate(reports)]
    if len(set(labels)) != len(labels):
        raise ReportError("corpus labels must be distinct for comparison")

    frames = [name for name, _ in reference]
    rows = []
    for label, rep in zip(labels, reports):
        full = {
            f["frame"]: next(r for r in f["coverage"] if r["cutoff"] == "full")
            for f in rep["frames"]
        }
        cochran = rep["cochran"]
        rows.append({
            "corpus": label,
            "n_docs": rep["corpus"]["n_docs"],
            "pct": {name: full[name]["pct"] for name in frames},
            "n_matched": {name: full[name]["n_matched"] for name in frames},
            "cochran_q": cochran["statistic"] if cochran else None,
            "df": cochran["df"] if cochran else None,
            "p_value": cochran["p_value"] if cochran else None,
        })

    grouped = [
        {
            "frame": name,
            "values": [
                {"corpus": row["corpus"], "pct": row["pct"][name]}
                for row in rows
            ],
        }
        for name in frames
    ]
    return {
        "format_version": REPORT_FORMAT_VERSION,
        "kind": "framescope-comparison",
        "frames": frames,
        "rows": rows,
        "grouped": grouped,
    }


def render_comparison_markdown(comparison: dict) -> str:
    frames = comparison["frames"]
    out = ["# Corpus comparison", ""]
    header = "| Corpus | " + " | ".join(f.upper() for f in frames)
    header += " | documents | Cochran's Q | p |"
    out.append(header)
    out.append("|" + "---|" * (len(frames) + 4))
    for row in comparison["rows"]:
        cells = " | ".join(_pct(row["pct"][f]) for f in frames)
        if row["cochran_q"] is None:
            q_cell, p_cell = "-", "-"
        else:
            q_cell = f"{row['cochran_q']:,.2f} (df = {row['df']})"
            p_cell = _p_value(row["p_value"])
        out.append(
            f"| {row['corpus']} | {cells} | {row['n_docs']} | {q_cell} | {p_cell} |"
        )
    out.append("")
    return "\n".join(out)


def comparison_csv(comparison: dict) -> str:
    frames = comparison["frames"]
    header = "corpus,n_docs," + ",".join(f"{f}_pct" for f in frames)
    header += ",cochran_q,df,p_value"
    lines = [header]
    for row in comparison["rows"]:
        pcts = ",".join(repr(row["pct"][f]) for f in frames)
        q = "" if row["cochran_q"] is None else repr(row["cochran_q"])
        df = "" if row["df"] is None else str(row["df"])
        p = "" if row["p_value"] is None else repr(row["p_value"])
        lines.append(f"{row['corpus']},{row['n_docs']},{pcts},{q},{df},{p}")
    return "\n".join(lines) + "\n"
