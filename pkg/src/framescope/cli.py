"""Command line entry points.

Subcommands mirror the pipeline stages: filter, train, frames, report,
compare, export-vis, serve. Every command is re-runnable: given unchanged
inputs and the same seed it rewrites byte-identical outputs.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

from . import __version__
from .corpus import (
    DEFAULT_HASHTAGS,
    CorpusError,
    build_ledger,
    collection_pipeline,
    load_corpus,
    save_corpus,
    sort_by_time,
    write_ledger,
)
from .frames import (
    LexiconError,
    builtin_lexicons,
    contingency,
    coverage,
    frame_topic_profile,
    load_lexicon,
)
from .report import (
    ReportConfig,
    ReportError,
    atomic_write_text,
    build_report,
    compare_corpora,
    comparison_csv,
    load_labels,
    model_key,
    parse_labels,
    render_comparison_markdown,
    render_report_markdown,
    report_csv_files,
    save_labels,
    write_report_json,
)
from .stats import DegenerateInputError, cochran_q
from .textprep import (
    PreprocessConfig,
    build_vocabulary,
    load_wordlist,
    preprocess,
    tfidf_weight,
    to_bow,
    weighted_to_counts,
)
from .topicmodel import (
    LdaConfig,
    LdaModel,
    ModelFormatError,
    coherence,
    export_vis,
    format_topic_terms,
    top_topic_terms,
    train,
    write_vis,
)

log = logging.getLogger(__name__)

DEFAULT_SEED = 42


class CliError(ValueError):
    pass


def _resolve_seed(value: int | None) -> int:
    if value is not None:
        return value
    env = os.environ.get("FRAMESCOPE_SEED")
    if env:
        try:
            return int(env)
        except ValueError:
            raise CliError(f"FRAMESCOPE_SEED is not an integer: {env!r}") from None
    return DEFAULT_SEED


def _prep_config(args) -> PreprocessConfig:
    default = PreprocessConfig.default()
    stopwords = (load_wordlist(args.stopwords)
                 if getattr(args, "stopwords", None) else default.stopwords)
    domain = (load_wordlist(args.exclusions)
              if getattr(args, "exclusions", None) else default.domain_terms)
    return PreprocessConfig(stopwords=stopwords, domain_terms=domain)


def _load_lexicons(sources: list[str] | None) -> list:
    if not sources:
        return builtin_lexicons()
    return [load_lexicon(src) for src in sources]


def _load_sorted_corpus(path: str, label: str = ""):
    corpus = load_corpus(path, label=label)
    if not corpus.sorted_by_time:
        log.warning("%s: sorting tweets by timestamp before applying rules", path)
        corpus = sort_by_time(corpus)
    return corpus


def cmd_filter(args) -> int:
    raw = _load_sorted_corpus(args.input)
    tags = tuple(args.tags) if args.tags else DEFAULT_HASHTAGS
    filtered = collection_pipeline(raw, hashtags=tags, lang=args.lang)
    save_corpus(filtered, args.output)
    ledger = build_ledger(raw, filtered)
    ledger_path = args.ledger or f"{args.output}.ledger.csv"
    write_ledger(ledger, ledger_path)
    if args.figure:
        from .figures import render_ledger_figure

        render_ledger_figure(ledger.rows, args.figure)
    print(f"kept {len(filtered)} of {len(raw)} tweets -> {args.output}")
    print(f"ledger -> {ledger_path}")
    return 0


def _prepare_bags(corpus, prep: PreprocessConfig):
    docs = [preprocess(t.text, prep) for t in corpus]
    vocab = build_vocabulary(docs)
    bags = [to_bow(doc, vocab) for doc in docs]
    return docs, vocab, bags


def cmd_train(args) -> int:
    corpus = load_corpus(args.input)
    if len(corpus) == 0:
        raise CliError(f"{args.input}: corpus is empty; nothing to train on")
    prep = _prep_config(args)
    _, vocab, bags = _prepare_bags(corpus, prep)
    if args.tfidf:
        bags = weighted_to_counts(tfidf_weight(bags, vocab))
    cfg = LdaConfig(n_topics=args.topics, passes=args.passes, alpha=args.alpha,
                    beta=args.beta, seed=_resolve_seed(args.seed))
    model = train(bags, vocab, cfg)
    model.save(args.output)

    scores = coherence(model, bags, args.coherence_top)
    coherence_path = f"{os.path.splitext(args.output)[0]}.coherence.csv"
    lines = ["topic,coherence"]
    lines.extend(f"{k},{s!r}" for k, s in enumerate(scores))
    atomic_write_text(coherence_path, "\n".join(lines) + "\n")

    for k, terms in enumerate(top_topic_terms(model, args.topic_terms)):
        print(f"Topic #{k}: {format_topic_terms(terms)}")
    print(f"model -> {args.output}")
    print(f"coherence -> {coherence_path}")
    return 0


def cmd_frames(args) -> int:
    corpus = load_corpus(args.input)
    lexicons = _load_lexicons(args.lexicon)
    os.makedirs(args.output, exist_ok=True)

    cov_lines = ["frame,n_matched,pct,n_multi"]
    prof_lines = ["frame,entry,count,share"]
    for lex in lexicons:
        cov = coverage(corpus, lex)
        cov_lines.append(f"{lex.name},{cov.n_matched},{cov.pct!r},{cov.n_multi}")
        for entry, count, share in cov.term_profile:
            prof_lines.append(f"{lex.name},{entry},{count},{share!r}")
    atomic_write_text(os.path.join(args.output, "coverage.csv"),
                      "\n".join(cov_lines) + "\n")
    atomic_write_text(os.path.join(args.output, "profile.csv"),
                      "\n".join(prof_lines) + "\n")

    if len(lexicons) >= 2:
        table = contingency(corpus, lexicons)
        atomic_write_text(os.path.join(args.output, "contingency.csv"),
                          table.to_csv())
        try:
            result = cochran_q([list(r) for r in table.rows])
            payload = {
                "statistic": result.statistic,
                "df": result.df,
                "p_value": result.p_value,
                "k": result.k,
                "n_rows": result.n_rows,
                "n_informative": result.n_informative,
            }
        except DegenerateInputError as exc:
            payload = {"error": str(exc)}
        atomic_write_text(os.path.join(args.output, "cochran.json"),
                          json.dumps(payload, sort_keys=True, indent=2) + "\n")
    print(f"frame outputs -> {args.output}")
    return 0


def _parse_label_args(label_args: list[str] | None,
                      models: dict[str, LdaModel]) -> dict[str, dict[int, dict]]:
    if not label_args:
        return {}
    out: dict[str, dict[int, dict]] = {}
    for spec in label_args:
        if "=" in spec:
            key, _, path = spec.partition("=")
        elif len(models) == 1:
            key, path = next(iter(models)), spec
        else:
            raise CliError(
                f"--labels needs KEY=PATH with several models; got {spec!r}"
            )
        if key not in models:
            raise CliError(
                f"--labels references unknown model {key!r}; "
                f"have {', '.join(sorted(models))}"
            )
        out[key] = load_labels(path, n_topics=models[key].config.n_topics)
    return out


def cmd_report(args) -> int:
    corpus = load_corpus(args.input, label=args.label)
    prep = _prep_config(args)
    lexicons = _load_lexicons(args.lexicon)

    models: dict[str, LdaModel] = {}
    for path in args.model:
        model = LdaModel.load(path)
        key = model_key(model)
        if key in models:
            raise CliError(f"two models with {model.config.n_topics} topics given")
        models[key] = model

    labels = _parse_label_args(args.labels, models)
    cutoffs = tuple(int(c) for c in args.cutoffs.split(",")) if args.cutoffs else (30, 50)
    cfg = ReportConfig(cutoffs=cutoffs, n_top_terms=args.top_terms)

    report = build_report(corpus, models, lexicons, prep, labels=labels, cfg=cfg)
    os.makedirs(args.output, exist_ok=True)
    write_report_json(report, os.path.join(args.output, "report.json"))
    atomic_write_text(os.path.join(args.output, "report.md"),
                      render_report_markdown(report))
    for name, text in report_csv_files(report).items():
        atomic_write_text(os.path.join(args.output, name), text)
    if not args.no_figures:
        from .figures import render_report_figures

        render_report_figures(report, os.path.join(args.output, "figures"))
    print(f"report -> {args.output}")
    return 0


def cmd_compare(args) -> int:
    reports = []
    for path in args.reports:
        with open(path, encoding="utf-8") as fh:
            payload = json.load(fh)
        if payload.get("kind") != "framescope-report":
            raise CliError(f"{path}: not a report file")
        reports.append(payload)
    comparison = compare_corpora(reports)
    os.makedirs(args.output, exist_ok=True)
    atomic_write_text(
        os.path.join(args.output, "comparison.json"),
        json.dumps(comparison, sort_keys=True, indent=2, ensure_ascii=False) + "\n",
    )
    atomic_write_text(os.path.join(args.output, "comparison.md"),
                      render_comparison_markdown(comparison))
    atomic_write_text(os.path.join(args.output, "comparison.csv"),
                      comparison_csv(comparison))
    if not args.no_figures:
        from .figures import render_comparison_figure

        render_comparison_figure(
            comparison, os.path.join(args.output, "comparison.png"))
    print(f"comparison -> {args.output}")
    return 0


def cmd_export_vis(args) -> int:
    model = LdaModel.load(args.model)
    vis = export_vis(model)
    frames_payload = None
    if args.input:
        corpus = load_corpus(args.input)
        prep = _prep_config(args)
        frames_payload = []
        for lex in _load_lexicons(args.lexicon):
            try:
                profile = frame_topic_profile(model, corpus, lex, prep)
            except LexiconError:
                profile = None
            frames_payload.append({"frame": lex.name, "profile": profile})
    write_vis(vis, args.output, frames=frames_payload)
    print(f"vis data -> {args.output}")
    return 0


# -- serve --------------------------------------------------------------------

_FALLBACK_PAGE = """<!DOCTYPE html>
<html><head><title>framescope</title></head>
<body>
<h1>framescope API</h1>
<p>No UI bundle was found. Endpoints:</p>
<ul>
<li><code>GET /api/vis</code></li>
<li><code>GET /api/labels</code></li>
<li><code>PUT /api/labels</code></li>
</ul>
</body></html>
"""

_CONTENT_TYPES = {
    ".html": "text/html; charset=utf-8",
    ".js": "text/javascript; charset=utf-8",
    ".mjs": "text/javascript; charset=utf-8",
    ".css": "text/css; charset=utf-8",
    ".json": "application/json; charset=utf-8",
    ".svg": "image/svg+xml",
    ".png": "image/png",
    ".ico": "image/x-icon",
    ".map": "application/json; charset=utf-8",
}


class ExplorerHandler(BaseHTTPRequestHandler):
    """Static UI plus the vis/labels API the explorer talks to."""

    server_version = "framescope"
    vis_path: str
    labels_path: str
    ui_dir: str | None
    n_topics: int
    write_lock: threading.Lock

    def log_message(self, fmt, *fmt_args):  # route through logging, not stderr
        log.debug("%s - %s", self.address_string(), fmt % fmt_args)

    def _send(self, code: int, body: bytes, content_type: str) -> None:
        self.send_response(code)
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(len(body)))
        self.send_header("Cache-Control", "no-store")
        self.end_headers()
        self.wfile.write(body)

    def _send_json(self, code: int, obj) -> None:
        body = json.dumps(obj, sort_keys=True).encode("utf-8")
        self._send(code, body, "application/json; charset=utf-8")

    def do_GET(self):  # noqa: N802 (http.server API)
        path = self.path.split("?", 1)[0]
        if path == "/api/vis":
            try:
                with open(self.vis_path, "rb") as fh:
                    body = fh.read()
            except OSError:
                self._send_json(404, {"error": "vis data not found"})
                return
            self._send(200, body, "application/json; charset=utf-8")
            return
        if path == "/api/labels":
            if os.path.exists(self.labels_path):
                with open(self.labels_path, "rb") as fh:
                    body = fh.read()
                self._send(200, body, "application/json; charset=utf-8")
            else:
                self._send_json(200, {"format_version": 1, "labels": {}})
            return
        self._serve_static(path)

    def _serve_static(self, path: str) -> None:
        if path == "/":
            path = "/index.html"
        if self.ui_dir is None:
            if path == "/index.html":
                self._send(200, _FALLBACK_PAGE.encode("utf-8"),
                           "text/html; charset=utf-8")
            else:
                self._send_json(404, {"error": "not found"})
            return
        root = os.path.realpath(self.ui_dir)
        target = os.path.realpath(os.path.join(root, path.lstrip("/")))
        if not (target == root or target.startswith(root + os.sep)):
            self._send_json(403, {"error": "forbidden"})
            return
        if not os.path.isfile(target):
            self._send_json(404, {"error": "not found"})
            return
        ext = os.path.splitext(target)[1].lower()
        ctype = _CONTENT_TYPES.get(ext, "application/octet-stream")
        with open(target, "rb") as fh:
            self._send(200, fh.read(), ctype)

    def do_PUT(self):  # noqa: N802
        path = self.path.split("?", 1)[0]
        if path != "/api/labels":
            self._send_json(404, {"error": "not found"})
            return
        try:
            length = int(self.headers.get("Content-Length", "0"))
        except ValueError:
            self._send_json(400, {"error": "bad Content-Length"})
            return
        raw = self.rfile.read(length) if length else b""
        try:
            payload = json.loads(raw.decode("utf-8"))
            labels = parse_labels(payload, n_topics=self.n_topics)
        except (ValueError, UnicodeDecodeError) as exc:
            self._send_json(400, {"error": str(exc)})
            return
        with self.write_lock:
            save_labels(labels, self.labels_path)
        self._send_json(200, {"saved": len(labels)})


def make_server(vis_path: str, labels_path: str, ui_dir: str | None = None,
                host: str = "127.0.0.1", port: int = 0) -> ThreadingHTTPServer:
    """Build (but do not start) the explorer HTTP server."""
    with open(vis_path, encoding="utf-8") as fh:
        vis = json.load(fh)
    n_topics = int(vis["n_topics"])

    handler = type("BoundExplorerHandler", (ExplorerHandler,), {
        "vis_path": vis_path,
        "labels_path": labels_path,
        "ui_dir": ui_dir,
        "n_topics": n_topics,
        "write_lock": threading.Lock(),
    })
    return ThreadingHTTPServer((host, port), handler)


def _default_ui_dir() -> str | None:
    candidate = os.path.join(os.getcwd(), "frontend", "dist")
    return candidate if os.path.isdir(candidate) else None


def cmd_serve(args) -> int:
    ui_dir = args.ui_dir if args.ui_dir else _default_ui_dir()
    if ui_dir is not None and not os.path.isdir(ui_dir):
        raise CliError(f"--ui-dir {ui_dir!r} is not a directory")
    server = make_server(args.vis, args.labels, ui_dir=ui_dir,
                         host=args.host, port=args.port)
    host, port = server.server_address[:2]
    print(f"serving on http://{host}:{port}/ (ui: {ui_dir or 'builtin page'})")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
    return 0


# -- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="framescope",
        description="Corpus filtering, topic modeling and frame analysis "
                    "for tweet corpora.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("filter", help="apply the collection rules to a JSONL corpus")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--ledger", help="ledger CSV path (default: <output>.ledger.csv)")
    p.add_argument("--tags", action="append",
                   help="collection hashtag (repeatable; default builtin set)")
    p.add_argument("--lang", help="keep only tweets tagged with this language")
    p.add_argument("--figure", help="also render the ledger curve to this PNG")
    p.set_defaults(func=cmd_filter)

    p = sub.add_parser("train", help="train a topic model on a filtered corpus")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True, help="model JSON path")
    p.add_argument("--topics", type=int, default=4)
    p.add_argument("--passes", type=int, default=6)
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--beta", type=float, default=0.01)
    p.add_argument("--seed", type=int, default=None,
                   help="RNG seed (default: FRAMESCOPE_SEED or 42)")
    p.add_argument("--stopwords", help="stopword file overriding the builtin list")
    p.add_argument("--exclusions", help="domain exclusion file overriding the builtin list")
    p.add_argument("--tfidf", action="store_true",
                   help="train on tf-idf weighted pseudo-counts")
    p.add_argument("--coherence-top", type=int, default=10)
    p.add_argument("--topic-terms", type=int, default=10,
                   help="terms to print per topic")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("frames", help="frame coverage, profiles and Cochran's Q")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True, help="output directory")
    p.add_argument("--lexicon", action="append",
                   help="builtin frame name or lexicon file (repeatable; "
                        "default: all builtin frames)")
    p.set_defaults(func=cmd_frames)

    p = sub.add_parser("report", help="assemble the full corpus report")
    p.add_argument("--input", required=True)
    p.add_argument("--model", action="append", required=True,
                   help="trained model JSON (repeatable)")
    p.add_argument("--labels", action="append",
                   help="topic labels as KEY=PATH, e.g. k4=labels.json "
                        "(bare PATH allowed with a single model)")
    p.add_argument("--lexicon", action="append")
    p.add_argument("--cutoffs", default="30,50",
                   help="comma-separated lexicon cutoffs (default 30,50)")
    p.add_argument("--top-terms", type=int, default=30)
    p.add_argument("--label", default="", help="corpus label used in the report")
    p.add_argument("--stopwords")
    p.add_argument("--exclusions")
    p.add_argument("--output", required=True, help="output directory")
    p.add_argument("--no-figures", action="store_true")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("compare", help="compare two or more report.json files")
    p.add_argument("reports", nargs="+")
    p.add_argument("--output", required=True, help="output directory")
    p.add_argument("--no-figures", action="store_true")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("export-vis", help="export explorer data for a model")
    p.add_argument("--model", required=True)
    p.add_argument("--output", required=True, help="vis JSON path")
    p.add_argument("--input", help="corpus JSONL for frame-topic overlays")
    p.add_argument("--lexicon", action="append")
    p.add_argument("--stopwords")
    p.add_argument("--exclusions")
    p.set_defaults(func=cmd_export_vis)

    p = sub.add_parser("serve", help="serve the explorer UI and label API")
    p.add_argument("--vis", required=True, help="vis JSON from export-vis")
    p.add_argument("--labels", required=True, help="labels JSON path (created on demand)")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8765)
    p.add_argument("--ui-dir", help="static UI bundle directory")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    # Root stays at WARNING so third-party INFO chatter (matplotlib) is
    # dropped at the source; our own INFO records still propagate.
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(message)s")
    logging.getLogger("framescope").setLevel(logging.INFO)
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (CliError, CorpusError, LexiconError, ReportError, ModelFormatError,
            DegenerateInputError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"error: {exc.filename or exc}: no such file", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
