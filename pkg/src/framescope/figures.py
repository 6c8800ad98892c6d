"""Figure rendering for reports and comparisons.

Figures are a presentation layer over the structured report dict; nothing in
here feeds back into the data outputs. The Agg backend is forced so rendering
works headless.
"""

from __future__ import annotations

import math
import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)


def _save(fig, path: str) -> str:
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def render_top_terms_figure(report: dict, path: str) -> str:
    terms = report["top_terms"]
    names = [t["term"] for t in terms][::-1]
    counts = [t["count"] for t in terms][::-1]
    fig, ax = plt.subplots(figsize=(8, max(3, 0.28 * len(names))))
    ax.barh(names, counts, color="#4878a8")
    ax.set_xlabel("occurrences")
    ax.set_title("Most frequent corpus terms")
    fig.tight_layout()
    return _save(fig, path)


def render_coverage_figure(report: dict, path: str) -> str:
    frames = [f["frame"].upper() for f in report["frames"]]
    cutoffs = [str(c) for c in report["config"]["cutoffs"]] + ["full"]
    fig, ax = plt.subplots(figsize=(8, 4.5))
    width = 0.8 / len(cutoffs)
    for ci, cutoff in enumerate(cutoffs):
        xs = [i + ci * width for i in range(len(frames))]
        ys = []
        for f in report["frames"]:
            row = next(r for r in f["coverage"] if r["cutoff"] == cutoff)
            ys.append(row["pct"] * 100)
        ax.bar(xs, ys, width=width, label=f"top {cutoff}" if cutoff != "full" else "full")
    ax.set_xticks([i + 0.4 - width / 2 for i in range(len(frames))])
    ax.set_xticklabels(frames)
    ax.set_ylabel("% of documents")
    ax.set_title("Frame coverage by lexicon cutoff")
    ax.legend()
    fig.tight_layout()
    return _save(fig, path)


def render_frame_topics_figure(report: dict, key: str, path: str) -> str:
    section = report["models"][key]
    n_topics = section["n_topics"]
    frames = [f for f in report["frames"] if f["topic_profile"].get(key)]
    fig, ax = plt.subplots(figsize=(max(7, 0.8 * n_topics), 4.5))
    width = 0.8 / max(1, len(frames))
    for fi, frame in enumerate(frames):
        profile = frame["topic_profile"][key]
        xs = [k + fi * width for k in range(n_topics)]
        ax.bar(xs, [v * 100 for v in profile], width=width,
               label=frame["frame"].upper())
    ax.set_xticks([k + 0.4 - width / 2 for k in range(n_topics)])
    ax.set_xticklabels([f"topic {k}" for k in range(n_topics)], rotation=45,
                       ha="right")
    ax.set_ylabel("mean topic share (%)")
    ax.set_title(f"Frame-topic profiles ({n_topics} topics)")
    ax.legend()
    fig.tight_layout()
    return _save(fig, path)


def render_zipf_figure(report: dict, path: str) -> str:
    frames = [f for f in report["frames"] if f["zipf"] is not None]
    if not frames:
        frames = report["frames"]
    cols = min(3, len(frames))
    rows = math.ceil(len(frames) / cols)
    fig, axes = plt.subplots(rows, cols, figsize=(4 * cols, 3.2 * rows),
                             squeeze=False)
    for idx, frame in enumerate(frames):
        ax = axes[idx // cols][idx % cols]
        counts = sorted((e["count"] for e in frame["term_profile"]),
                        reverse=True)
        counts = [c for c in counts if c > 0]
        ranks = list(range(1, len(counts) + 1))
        if counts:
            ax.loglog(ranks, counts, "o", markersize=3, color="#4878a8")
        fit = frame["zipf"]
        if fit is not None and counts:
            ys = [math.exp(fit["intercept"] + fit["slope"] * math.log(r))
                  for r in ranks]
            ax.loglog(ranks, ys, "-", color="#b04a4a",
                      label=f"slope {fit['slope']:.2f}")
            ax.legend(fontsize=8)
        ax.set_title(frame["frame"].upper(), fontsize=10)
        ax.set_xlabel("rank")
        ax.set_ylabel("occurrences")
    for idx in range(len(frames), rows * cols):
        axes[idx // cols][idx % cols].axis("off")
    fig.tight_layout()
    return _save(fig, path)


def render_topic_terms_figure(report: dict, key: str, path: str) -> str:
    section = report["models"][key]
    topics = section["topics"]
    cols = min(4, len(topics))
    rows = math.ceil(len(topics) / cols)
    fig, axes = plt.subplots(rows, cols, figsize=(3.6 * cols, 2.8 * rows),
                             squeeze=False)
    for idx, topic in enumerate(topics):
        ax = axes[idx // cols][idx % cols]
        names = [t["term"] for t in topic["terms"]][::-1]
        weights = [t["weight"] for t in topic["terms"]][::-1]
        ax.barh(names, weights, color="#4878a8")
        label = topic["label"] or "unlabeled"
        ax.set_title(f"#{topic['id']} ({label})", fontsize=9)
        ax.tick_params(labelsize=7)
    for idx in range(len(topics), rows * cols):
        axes[idx // cols][idx % cols].axis("off")
    fig.tight_layout()
    return _save(fig, path)


def render_report_figures(report: dict, out_dir: str) -> list[str]:
    """Render the full figure set for a report into ``out_dir``."""
    os.makedirs(out_dir, exist_ok=True)
    paths = [
        render_top_terms_figure(report, os.path.join(out_dir, "top_terms.png")),
        render_coverage_figure(report, os.path.join(out_dir, "coverage.png")),
        render_zipf_figure(report, os.path.join(out_dir, "zipf.png")),
    ]
    for key in sorted(report["models"],
                      key=lambda k: report["models"][k]["n_topics"]):
        paths.append(render_topic_terms_figure(
            report, key, os.path.join(out_dir, f"topics_{key}.png")))
        paths.append(render_frame_topics_figure(
            report, key, os.path.join(out_dir, f"frame_topics_{key}.png")))
    return paths


def render_comparison_figure(comparison: dict, path: str) -> str:
    frames = comparison["frames"]
    rows = comparison["rows"]
    fig, ax = plt.subplots(figsize=(8, 4.5))
    width = 0.8 / max(1, len(rows))
    for ri, row in enumerate(rows):
        xs = [i + ri * width for i in range(len(frames))]
        ys = [row["pct"][f] * 100 for f in frames]
        ax.bar(xs, ys, width=width, label=row["corpus"])
    ax.set_xticks([i + 0.4 - width / 2 for i in range(len(frames))])
    ax.set_xticklabels([f.upper() for f in frames])
    ax.set_ylabel("% of documents")
    ax.set_title("Frame coverage across corpora")
    ax.legend()
    fig.tight_layout()
    return _save(fig, path)


def render_ledger_figure(rows, path: str) -> str:
    """Cumulative collected vs retained counts over collection days."""
    days = [r.day.isoformat() for r in rows]
    fig, ax = plt.subplots(figsize=(8, 4))
    ax.plot(days, [r.collected for r in rows], marker="o", label="collected")
    ax.plot(days, [r.retained for r in rows], marker="o", label="retained")
    ax.set_ylabel("cumulative tweets")
    ax.tick_params(axis="x", rotation=45)
    ax.legend()
    fig.tight_layout()
    return _save(fig, path)
