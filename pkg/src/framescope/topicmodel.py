"""Latent Dirichlet Allocation via collapsed Gibbs sampling.

The sampler is written in plain Python on top of ``random.Random`` so that a
given (corpus, config, seed) triple reproduces bit-identical count tables on
any platform and Python version. numpy enters only for the eigendecomposition
behind the 2-D topic map.

Training state is four integer tables: topic-term counts ``n_kw`` (K x V),
per-topic totals ``n_k``, document-topic counts ``n_dk`` (D x K), and the
token-level assignments. One sweep resamples every token from

    p(z = k) ~ (n_dk[d][k] + alpha) * (n_kw[k][w] + beta) / (n_k[k] + V*beta)

with the token's own assignment removed from the counts first.

Held-out documents are folded in against frozen topic-term counts: the
document's local counts are Gibbs-resampled for ``infer_iters`` sweeps and the
topic mixture is averaged over the sweeps after ``burn_in``.
"""

from __future__ import annotations

import json
import math
import os
import random
from dataclasses import dataclass

import numpy as np

from .textprep import BagOfWords, Vocabulary

MODEL_FORMAT_VERSION = 1
VIS_FORMAT_VERSION = 1

# Per topic, the vis export ships the union of this many top terms by
# probability and by lift; enough that a 30-term client-side ranking is exact
# at both ends of the relevance scale.
_VIS_TERMS_PER_TOPIC = 50


class ModelFormatError(ValueError):
    """Raised when a serialized model cannot be loaded safely."""


@dataclass(frozen=True)
class LdaConfig:
    """Sampler hyperparameters. ``alpha=None`` resolves to 1/n_topics."""

    n_topics: int = 4
    passes: int = 6
    alpha: float | None = None
    beta: float = 0.01
    seed: int = 42
    infer_iters: int = 50
    burn_in: int = 25

    def __post_init__(self):
        if self.n_topics < 2:
            raise ValueError("n_topics must be at least 2")
        if self.passes < 1:
            raise ValueError("passes must be positive")
        if self.alpha is not None and self.alpha <= 0:
            raise ValueError("alpha must be positive")
        if self.beta <= 0:
            raise ValueError("beta must be positive")
        if self.infer_iters < 1:
            raise ValueError("infer_iters must be positive")
        if not 0 <= self.burn_in < self.infer_iters:
            raise ValueError("burn_in must lie in [0, infer_iters)")

    @property
    def alpha_value(self) -> float:
        return 1.0 / self.n_topics if self.alpha is None else self.alpha

    def to_dict(self) -> dict:
        return {
            "n_topics": self.n_topics,
            "passes": self.passes,
            "alpha": self.alpha_value,
            "beta": self.beta,
            "seed": self.seed,
            "infer_iters": self.infer_iters,
            "burn_in": self.burn_in,
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "LdaConfig":
        return cls(n_topics=obj["n_topics"], passes=obj["passes"],
                   alpha=obj["alpha"], beta=obj["beta"], seed=obj["seed"],
                   infer_iters=obj["infer_iters"], burn_in=obj["burn_in"])


@dataclass
class LdaModel:
    """Trained sampler state. All count tables are plain int lists."""

    config: LdaConfig
    vocab: Vocabulary
    n_kw: list[list[int]]  # K x V topic-term counts
    n_k: list[int]  # per-topic token totals
    n_dk: list[list[int]]  # D x K document-topic counts
    doc_lengths: list[int]
    assignments: list[list[int]]  # per document, one topic id per token
    n_skipped_empty: int = 0

    @property
    def n_topics(self) -> int:
        return self.config.n_topics

    @property
    def n_docs(self) -> int:
        return len(self.n_dk)

    def validate_counts(self) -> None:
        """Check the count-table conservation identities; raise if broken."""
        K = self.n_topics
        V = len(self.vocab)
        for k in range(K):
            row_sum = sum(self.n_kw[k])
            if row_sum != self.n_k[k]:
                raise ModelFormatError(
                    f"topic {k}: term counts sum to {row_sum}, expected {self.n_k[k]}"
                )
        for d, row in enumerate(self.n_dk):
            if sum(row) != self.doc_lengths[d]:
                raise ModelFormatError(
                    f"document {d}: topic counts sum to {sum(row)}, "
                    f"expected length {self.doc_lengths[d]}"
                )
        total = sum(self.n_k)
        if total != sum(self.doc_lengths):
            raise ModelFormatError("token totals disagree between n_k and doc lengths")
        if any(len(row) != V for row in self.n_kw):
            raise ModelFormatError("n_kw width disagrees with vocabulary size")
        if any(c < 0 for row in self.n_kw for c in row):
            raise ModelFormatError("negative count in n_kw")

    def topic_term_dist(self) -> list[list[float]]:
        """Smoothed topic-term probabilities; each row sums to 1."""
        beta = self.config.beta
        vbeta = len(self.vocab) * beta
        return [
            [(c + beta) / (self.n_k[k] + vbeta) for c in self.n_kw[k]]
            for k in range(self.n_topics)
        ]

    def doc_topic_dist(self) -> list[list[float]]:
        """Smoothed document-topic probabilities; each row sums to 1."""
        alpha = self.config.alpha_value
        kalpha = self.n_topics * alpha
        return [
            [(c + alpha) / (self.doc_lengths[d] + kalpha) for c in self.n_dk[d]]
            for d in range(self.n_docs)
        ]

    def save(self, path: str) -> None:
        payload = {
            "format_version": MODEL_FORMAT_VERSION,
            "kind": "framescope-lda-model",
            "config": self.config.to_dict(),
            "vocab": {
                "terms": list(self.vocab.terms),
                "doc_freq": list(self.vocab.doc_freq),
                "total_docs": self.vocab.total_docs,
                "hash": self.vocab.hash,
            },
            "n_kw": self.n_kw,
            "n_k": self.n_k,
            "n_dk": self.n_dk,
            "doc_lengths": self.doc_lengths,
            "assignments": self.assignments,
            "n_skipped_empty": self.n_skipped_empty,
        }
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, sort_keys=True, separators=(",", ":"))
            fh.write("\n")

    @classmethod
    def load(cls, path: str) -> "LdaModel":
        try:
            with open(path, encoding="utf-8") as fh:
                payload = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ModelFormatError(f"{path}: not a valid model file: {exc}") from None
        if not isinstance(payload, dict):
            raise ModelFormatError(f"{path}: not a valid model file")
        if payload.get("kind") != "framescope-lda-model":
            raise ModelFormatError(f"{path}: not a model file")
        version = payload.get("format_version")
        if version != MODEL_FORMAT_VERSION:
            raise ModelFormatError(
                f"{path}: unsupported model format version {version!r}"
            )
        try:
            vocab_obj = payload["vocab"]
            vocab = Vocabulary(terms=tuple(vocab_obj["terms"]),
                               doc_freq=tuple(vocab_obj["doc_freq"]),
                               total_docs=vocab_obj["total_docs"])
            if vocab.hash != vocab_obj["hash"]:
                raise ModelFormatError(f"{path}: vocabulary hash mismatch")
            model = cls(
                config=LdaConfig.from_dict(payload["config"]),
                vocab=vocab,
                n_kw=[list(map(int, row)) for row in payload["n_kw"]],
                n_k=list(map(int, payload["n_k"])),
                n_dk=[list(map(int, row)) for row in payload["n_dk"]],
                doc_lengths=list(map(int, payload["doc_lengths"])),
                assignments=[list(map(int, row)) for row in payload["assignments"]],
                n_skipped_empty=int(payload["n_skipped_empty"]),
            )
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, ModelFormatError):
                raise
            raise ModelFormatError(f"{path}: corrupt model file: {exc}") from None
        model.validate_counts()
        return model


def _expand(bag: BagOfWords) -> list[int]:
    toks: list[int] = []
    for idx, count in bag.pairs:
        toks.extend([idx] * count)
    return toks


def _sweep(doc_tokens, assignments, n_kw, n_k, n_dk, alpha, beta, vbeta, K, rng):
    rand = rng.random
    cum = [0.0] * K
    krange = range(K)
    for d, toks in enumerate(doc_tokens):
        zd = assignments[d]
        ndk = n_dk[d]
        for pos, w in enumerate(toks):
            k_old = zd[pos]
            ndk[k_old] -= 1
            n_kw[k_old][w] -= 1
            n_k[k_old] -= 1
            acc = 0.0
            for k in krange:
                acc += (ndk[k] + alpha) * (n_kw[k][w] + beta) / (n_k[k] + vbeta)
                cum[k] = acc
            u = rand() * acc
            k_new = 0
            while cum[k_new] < u:
                k_new += 1
            zd[pos] = k_new
            ndk[k_new] += 1
            n_kw[k_new][w] += 1
            n_k[k_new] += 1


def train(bags: list[BagOfWords], vocab: Vocabulary, cfg: LdaConfig,
          on_pass=None) -> LdaModel:
    """Run collapsed Gibbs over ``bags`` for ``cfg.passes`` full sweeps.

    Empty bags are kept as zero rows so document indexing survives, and
    counted in ``n_skipped_empty``. ``on_pass(i, model)`` is called after each
    sweep with the live model, for callers that track convergence or verify
    the count tables mid-run.
    """
    if not bags:
        raise ValueError("cannot train on an empty corpus")
    V = len(vocab)
    if V == 0:
        raise ValueError("cannot train with an empty vocabulary")
    for bag in bags:
        for idx, count in bag.pairs:
            if not 0 <= idx < V:
                raise ValueError(f"term index {idx} outside vocabulary of size {V}")
            if count <= 0:
                raise ValueError("bag counts must be positive")

    K = cfg.n_topics
    alpha = cfg.alpha_value
    beta = cfg.beta
    vbeta = V * beta
    rng = random.Random(cfg.seed)

    doc_tokens = [_expand(bag) for bag in bags]
    n_skipped = sum(1 for toks in doc_tokens if not toks)

    n_kw = [[0] * V for _ in range(K)]
    n_k = [0] * K
    n_dk = [[0] * K for _ in doc_tokens]
    assignments: list[list[int]] = []
    randrange = rng.randrange
    for d, toks in enumerate(doc_tokens):
        zd = [0] * len(toks)
        ndk = n_dk[d]
        for pos, w in enumerate(toks):
            k = randrange(K)
            zd[pos] = k
            ndk[k] += 1
            n_kw[k][w] += 1
            n_k[k] += 1
        assignments.append(zd)

    model = LdaModel(config=cfg, vocab=vocab, n_kw=n_kw, n_k=n_k, n_dk=n_dk,
                     doc_lengths=[len(t) for t in doc_tokens],
                     assignments=assignments, n_skipped_empty=n_skipped)

    for i in range(cfg.passes):
        _sweep(doc_tokens, assignments, n_kw, n_k, n_dk, alpha, beta, vbeta, K, rng)
        if on_pass is not None:
            on_pass(i, model)
    return model


@dataclass(frozen=True)
class InferenceResult:
    probs: tuple[float, ...]
    n_oov: int
    no_evidence: bool  # true when nothing survived vocabulary lookup


def infer(model: LdaModel, tokens: list[str]) -> InferenceResult:
    """Fold a tokenized document into the trained model.

    Out-of-vocabulary tokens are dropped (and counted); a document with no
    surviving tokens gets the uniform mixture and ``no_evidence=True``. The
    generator is re-seeded per call, so results depend only on the model and
    the document, not on call order.
    """
    K = model.n_topics
    idxs = []
    n_oov = 0
    for tok in tokens:
        w = model.vocab.get(tok)
        if w is None:
            n_oov += 1
        else:
            idxs.append(w)
    if not idxs:
        return InferenceResult(probs=tuple([1.0 / K] * K), n_oov=n_oov,
                               no_evidence=True)

    cfg = model.config
    alpha = cfg.alpha_value
    beta = cfg.beta
    vbeta = len(model.vocab) * beta
    rng = random.Random(f"{cfg.seed}:infer")

    # Topic-term counts are frozen during fold-in, so the term-dependent
    # factor is constant per distinct term; precompute it.
    wrow_cache: dict[int, list[float]] = {}
    for w in set(idxs):
        wrow_cache[w] = [
            (model.n_kw[k][w] + beta) / (model.n_k[k] + vbeta) for k in range(K)
        ]
    rows = [wrow_cache[w] for w in idxs]

    randrange = rng.randrange
    rand = rng.random
    ndk = [0] * K
    z = [0] * len(idxs)
    for pos in range(len(idxs)):
        k = randrange(K)
        z[pos] = k
        ndk[k] += 1

    cum = [0.0] * K
    krange = range(K)
    theta_acc = [0.0] * K
    n_samples = 0
    denom = len(idxs) + K * alpha
    for it in range(cfg.infer_iters):
        for pos, wrow in enumerate(rows):
            k_old = z[pos]
            ndk[k_old] -= 1
            acc = 0.0
            for k in krange:
                acc += (ndk[k] + alpha) * wrow[k]
                cum[k] = acc
            u = rand() * acc
            k_new = 0
            while cum[k_new] < u:
                k_new += 1
            z[pos] = k_new
            ndk[k_new] += 1
        if it >= cfg.burn_in:
            for k in krange:
                theta_acc[k] += (ndk[k] + alpha) / denom
            n_samples += 1

    return InferenceResult(probs=tuple(x / n_samples for x in theta_acc),
                           n_oov=n_oov, no_evidence=False)


def top_topic_terms(model: LdaModel, n: int) -> list[list[tuple[str, float]]]:
    """Per topic, the ``n`` highest-probability terms (ties lexicographic)."""
    if n < 1:
        raise ValueError("n must be positive")
    phi = model.topic_term_dist()
    terms = model.vocab.terms
    out = []
    for k in range(model.n_topics):
        ranked = sorted(zip(terms, phi[k]), key=lambda tw: (-tw[1], tw[0]))
        out.append([(t, w) for t, w in ranked[:n]])
    return out


def format_topic_terms(topic_terms: list[tuple[str, float]]) -> str:
    """Render one topic's terms as "0.008 pandemic, 0.005 news, ..."."""
    return ", ".join(f"{w:.3f} {t}" for t, w in topic_terms)


def coherence(model: LdaModel, bags: list[BagOfWords], top_n: int = 10) -> list[float]:
    """Per-topic coherence from document co-occurrence of the top terms.

    For each topic's top ``top_n`` terms ranked by probability, the score sums
    ln((D(w_i, w_j) + 1) / D(w_j)) over rank pairs i < j, where D counts
    documents in ``bags``. Closer to zero means the topic's terms co-occur.
    """
    if top_n < 2:
        raise ValueError("top_n must be at least 2")
    if top_n > len(model.vocab):
        raise ValueError("top_n exceeds vocabulary size")
    postings: dict[int, set[int]] = {}
    for d, bag in enumerate(bags):
        for idx, _ in bag.pairs:
            postings.setdefault(idx, set()).add(d)

    top = top_topic_terms(model, top_n)
    scores: list[float] = []
    for k in range(model.n_topics):
        term_idxs = [model.vocab.index(t) for t, _ in top[k]]
        score = 0.0
        for j in range(1, len(term_idxs)):
            wj = term_idxs[j]
            docs_j = postings.get(wj, set())
            if not docs_j:
                raise ValueError(
                    f"term {model.vocab.terms[wj]!r} never occurs in the "
                    "reference documents"
                )
            for i in range(j):
                wi = term_idxs[i]
                co = len(postings.get(wi, set()) & docs_j)
                score += math.log((co + 1) / len(docs_j))
        scores.append(score)
    return scores


@dataclass(frozen=True)
class VisData:
    """Everything the topic explorer needs, in one serializable bundle."""

    topics: tuple[dict, ...]  # id, x, y, prevalence
    terms: tuple[dict, ...]  # term, p, saliency (whole vocabulary)
    phi: tuple[tuple[int, int, float], ...]  # (topic id, term index, value)
    n_topics: int

    def to_dict(self) -> dict:
        return {
            "format_version": VIS_FORMAT_VERSION,
            "n_topics": self.n_topics,
            "topics": list(self.topics),
            "terms": list(self.terms),
            "phi": [list(t) for t in self.phi],
        }


def _js_divergence(p: list[float], q: list[float]) -> float:
    """Jensen-Shannon divergence, natural log; symmetric, in [0, ln 2]."""
    div = 0.0
    for pi, qi in zip(p, q):
        mi = 0.5 * (pi + qi)
        if pi > 0.0:
            div += 0.5 * pi * math.log(pi / mi)
        if qi > 0.0:
            div += 0.5 * qi * math.log(qi / mi)
    return div


def js_distance_matrix(phi: list[list[float]]) -> list[list[float]]:
    n = len(phi)
    dist = [[0.0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            d = _js_divergence(phi[i], phi[j])
            dist[i][j] = d
            dist[j][i] = d
    return dist


def classical_mds_2d(dist: list[list[float]]) -> list[tuple[float, float]]:
    """Embed a distance matrix in 2-D by double centering + eigendecomposition.

    Keeps the top two positive eigenvalues; a missing positive direction
    yields a zero coordinate column. Each kept eigenvector is flipped so its
    largest-magnitude entry is positive, which pins the reflection.
    """
    n = len(dist)
    if n == 1:
        return [(0.0, 0.0)]
    d2 = np.asarray(dist, dtype=float) ** 2
    j = np.eye(n) - np.full((n, n), 1.0 / n)
    b = -0.5 * j @ d2 @ j
    b = 0.5 * (b + b.T)  # symmetrize away rounding drift
    eigvals, eigvecs = np.linalg.eigh(b)
    order = np.argsort(eigvals)[::-1]
    coords = np.zeros((n, 2))
    for dim in range(2):
        if dim >= n:
            break
        lam = eigvals[order[dim]]
        if lam <= 1e-12:
            continue
        vec = eigvecs[:, order[dim]]
        pivot = int(np.argmax(np.abs(vec)))
        if vec[pivot] < 0:
            vec = -vec
        coords[:, dim] = vec * math.sqrt(lam)
    return [(float(x), float(y)) for x, y in coords]


def export_vis(model: LdaModel) -> VisData:
    """Topic-map coordinates, marginal term stats, and sparse topic-term rows.

    Topic prevalence is the share of corpus tokens assigned to the topic.
    Term saliency follows the usual distinctiveness weighting: p(w) times the
    KL divergence of p(topic | w) from the prevalence prior. The phi triplets
    cover, per topic, the union of the top terms by probability and by lift,
    so client-side relevance rankings are exact at both extremes.
    """
    K = model.n_topics
    V = len(model.vocab)
    phi = model.topic_term_dist()
    total_tokens = sum(model.n_k)
    if total_tokens == 0:
        raise ValueError("model has no assigned tokens")
    prevalence = [model.n_k[k] / total_tokens for k in range(K)]

    p_w = [0.0] * V
    for k in range(K):
        pk = prevalence[k]
        row = phi[k]
        for w in range(V):
            p_w[w] += pk * row[w]

    terms = []
    for w in range(V):
        sal = 0.0
        if p_w[w] > 0.0:
            for k in range(K):
                pkw = prevalence[k] * phi[k][w] / p_w[w]
                if pkw > 0.0 and prevalence[k] > 0.0:
                    sal += pkw * math.log(pkw / prevalence[k])
        terms.append({"term": model.vocab.terms[w], "p": p_w[w],
                      "saliency": p_w[w] * sal})

    coords = classical_mds_2d(js_distance_matrix(phi))
    topics = [
        {"id": k, "x": coords[k][0], "y": coords[k][1],
         "prevalence": prevalence[k]}
        for k in range(K)
    ]

    triplets: list[tuple[int, int, float]] = []
    keep_n = min(_VIS_TERMS_PER_TOPIC, V)
    for k in range(K):
        row = phi[k]
        by_prob = sorted(range(V), key=lambda w: (-row[w], model.vocab.terms[w]))
        by_lift = sorted(
            range(V),
            key=lambda w: (-(row[w] / p_w[w] if p_w[w] > 0 else 0.0),
                           model.vocab.terms[w]),
        )
        chosen = sorted(set(by_prob[:keep_n]) | set(by_lift[:keep_n]))
        triplets.extend((k, w, row[w]) for w in chosen)

    return VisData(topics=tuple(topics), terms=tuple(terms),
                   phi=tuple(triplets), n_topics=K)


def write_vis(vis: VisData, path: str, frames: list[dict] | None = None) -> None:
    """Serialize vis data; optional per-frame topic profiles ride along."""
    payload = vis.to_dict()
    if frames is not None:
        payload["frames"] = frames
    tmp = f"{path}.tmp{os.getpid()}"
    with open(tmp, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, sort_keys=True, separators=(",", ":"))
        fh.write("\n")
    os.replace(tmp, path)
