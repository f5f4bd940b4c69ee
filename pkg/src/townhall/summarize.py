"""Feedback-weighted extractive summarization.

Sentences become nodes of an undirected graph whose edge weights come from a
configurable similarity function (token-overlap "vanilla", a BM25 utility
with a=1.2 / b=0.75, or TF-IDF cosine). Every edge is then scaled by 1.10
when either endpoint prompted attendee feedback and by 0.90 otherwise, the
nodes are scored with a weighted PageRank fixed point, and the top-scoring
sentences are selected greedily until they cover roughly 30% of the raw word
count, then re-emitted in transcript order.

All operations are deterministic: pair iteration, per-pair token order, and
tie-breaking are fixed, so identical inputs yield byte-identical results.
"""

from __future__ import annotations

import math
from collections import Counter
from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np

from .align import AugmentedTranscript
from .model import TranscriptSentence

SIMILARITIES = ("bm25", "vanilla", "cosine")

TokenSeq = Sequence[str]


@dataclass(frozen=True)
class Bm25Params:
    a: float = 1.2
    b: float = 0.75

    def __post_init__(self):
        if self.a <= 0:
            raise ValueError("a must be positive")
        if not 0 <= self.b <= 1:
            raise ValueError("b must be in [0, 1]")


@dataclass(frozen=True)
class FeedbackWeightConfig:
    eps_hit: float = 1.10
    eps_miss: float = 0.90

    def __post_init__(self):
        if not self.eps_hit > self.eps_miss > 0:
            raise ValueError("require eps_hit > eps_miss > 0")


@dataclass(frozen=True)
class RankConfig:
    similarity: str = "bm25"
    damping: float = 0.85
    tol: float = 1e-6
    max_iters: int = 200

    def __post_init__(self):
        if self.similarity not in SIMILARITIES:
            raise ValueError(f"unknown similarity {self.similarity!r}")
        if not 0 < self.damping < 1:
            raise ValueError("damping must be in (0, 1)")
        if self.tol <= 0:
            raise ValueError("tol must be positive")


@dataclass(frozen=True)
class SelectionConfig:
    budget_ratio: float = 0.30

    def __post_init__(self):
        if not 0 < self.budget_ratio <= 1:
            raise ValueError("budget_ratio must be in (0, 1]")


@dataclass
class CorpusStats:
    """Per-corpus statistics backing BM25 and TF-IDF."""

    n_sentences: int
    doc_freq: dict[str, int]
    mu_dl: float  # average content-token length over all sentences

    @classmethod
    def from_token_lists(cls, token_lists: "list[Sequence[str]]") -> "CorpusStats":
        df: Counter = Counter()
        for toks in token_lists:
            df.update(set(toks))
        n = len(token_lists)
        mu = sum(len(t) for t in token_lists) / n if n else 0.0
        return cls(n_sentences=n, doc_freq=dict(df), mu_dl=mu)

    @classmethod
    def from_sentences(cls, sentences: list[TranscriptSentence]) -> "CorpusStats":
        return cls.from_token_lists([s.content_tokens for s in sentences])

    def idf(self, token: str) -> float:
        n_w = self.doc_freq.get(token, 0)
        return math.log((self.n_sentences - n_w + 0.5) / (n_w + 0.5) + 1.0)


def sim_vanilla(tokens_i: TokenSeq, tokens_j: TokenSeq) -> float:
    """Shared distinct tokens over summed log lengths; 0 when either side has
    fewer than 2 content tokens (guards the vanishing denominator)."""
    if len(tokens_i) < 2 or len(tokens_j) < 2:
        return 0.0
    denom = math.log(len(tokens_i)) + math.log(len(tokens_j))
    if denom <= 0:
        return 0.0
    common = len(set(tokens_i) & set(tokens_j))
    return common / denom


def sim_bm25(
    tokens_i: TokenSeq,
    tokens_j: TokenSeq,
    stats: CorpusStats,
    p: Bm25Params = Bm25Params(),
) -> float:
    """BM25 score of S_j against the distinct tokens of S_i (directional)."""
    if not tokens_i or not tokens_j or stats.mu_dl <= 0:
        return 0.0
    tf_j = Counter(tokens_j)
    norm = p.a * (1 - p.b + p.b * len(tokens_j) / stats.mu_dl)
    total = 0.0
    for w in sorted(set(tokens_i)):  # fixed summation order
        f = tf_j.get(w, 0)
        if f == 0:
            continue
        total += stats.idf(w) * (f * (p.a + 1)) / (f + norm)
    return max(total, 0.0)


def sim_cosine(tokens_i: TokenSeq, tokens_j: TokenSeq, stats: CorpusStats) -> float:
    """Cosine of TF-IDF vectors over content tokens; in [0, 1]."""
    if not tokens_i or not tokens_j:
        return 0.0
    tf_i, tf_j = Counter(tokens_i), Counter(tokens_j)
    dot = 0.0
    for w in sorted(set(tokens_i) & set(tokens_j)):
        dot += tf_i[w] * tf_j[w] * stats.idf(w) ** 2
    norm_i = math.sqrt(sum((f * stats.idf(w)) ** 2 for w, f in sorted(tf_i.items())))
    norm_j = math.sqrt(sum((f * stats.idf(w)) ** 2 for w, f in sorted(tf_j.items())))
    if norm_i == 0 or norm_j == 0:
        return 0.0
    return dot / (norm_i * norm_j)


@dataclass
class SentenceGraph:
    """Weighted undirected graph over sentence ids; zero-weight pairs omitted."""

    nodes: tuple[str, ...]
    edges: dict[tuple[str, str], float] = field(default_factory=dict)

    def weight(self, a: str, b: str) -> float:
        return self.edges.get((a, b) if a < b else (b, a), 0.0)


def build_graph(
    sentences: list[TranscriptSentence],
    cfg: RankConfig = RankConfig(),
    fw: FeedbackWeightConfig = FeedbackWeightConfig(),
    bm25_params: Bm25Params = Bm25Params(),
) -> SentenceGraph:
    """Pairwise-similarity graph with the feedback factor applied per edge.

    BM25 is directional, so it is symmetrized by the arithmetic mean of the
    two directions before weighting.
    """
    if len(sentences) < 2:
        raise ValueError("graph needs at least 2 sentences")
    stats = CorpusStats.from_sentences(sentences)
    edges: dict[tuple[str, str], float] = {}
    for i, si in enumerate(sentences):
        for sj in sentences[i + 1 :]:
            ti, tj = si.content_tokens, sj.content_tokens
            if cfg.similarity == "vanilla":
                sim = sim_vanilla(ti, tj)
            elif cfg.similarity == "bm25":
                sim = (sim_bm25(ti, tj, stats, bm25_params) + sim_bm25(tj, ti, stats, bm25_params)) / 2
            else:
                sim = sim_cosine(ti, tj, stats)
            if sim <= 0:
                continue
            eps = fw.eps_hit if (si.prompted_feedback or sj.prompted_feedback) else fw.eps_miss
            weight = sim * eps
            if weight > 0:
                key = (si.sentence_id, sj.sentence_id)
                edges[key if key[0] < key[1] else (key[1], key[0])] = weight
    return SentenceGraph(nodes=tuple(s.sentence_id for s in sentences), edges=edges)


@dataclass
class RankResult:
    scores: dict[str, float]
    converged: bool
    iterations: int


def rank(graph: SentenceGraph, cfg: RankConfig = RankConfig()) -> RankResult:
    """Weighted-PageRank fixed point over the sentence graph.

    score(i) = (1 - d) + d * sum_j w_ji / sum_k w_jk * score(j), iterated
    from a uniform 1.0 until the largest absolute change drops below tol.
    Isolated nodes settle at (1 - d). On non-convergence the current scores
    are returned with the flag set false.
    """
    nodes = sorted(graph.nodes)
    n = len(nodes)
    if n == 0:
        return RankResult(scores={}, converged=True, iterations=0)
    pos = {node: i for i, node in enumerate(nodes)}
    W = np.zeros((n, n))
    for (a, b), w in graph.edges.items():
        W[pos[a], pos[b]] = w
        W[pos[b], pos[a]] = w
    out_sum = W.sum(axis=1)
    M = np.zeros_like(W)
    nonzero = out_sum > 0
    M[:, nonzero] = W[:, nonzero] / out_sum[nonzero]

    d = cfg.damping
    x = np.ones(n)
    converged = False
    iterations = 0
    for iterations in range(1, cfg.max_iters + 1):
        x_next = (1 - d) + d * (M @ x)
        delta = float(np.max(np.abs(x_next - x)))
        x = x_next
        if delta < cfg.tol:
            converged = True
            break
    return RankResult(
        scores={node: float(x[pos[node]]) for node in nodes},
        converged=converged,
        iterations=iterations,
    )


@dataclass(frozen=True)
class SelectedSentence:
    sentence_id: str
    score: float
    segment_id: str | None

    def to_doc(self) -> dict:
        return {"sentence_id": self.sentence_id, "score": self.score, "segment_id": self.segment_id}


@dataclass
class SummaryResult:
    """Selected sentences (in transcript order) plus budget accounting."""

    selected: list[SelectedSentence]
    total_words: int
    budget_words: int
    config: dict
    converged: bool

    def to_doc(self) -> dict:
        return {
            "selected": [s.to_doc() for s in self.selected],
            "total_words": self.total_words,
            "budget_words": self.budget_words,
            "config": self.config,
            "converged": self.converged,
        }

    @classmethod
    def from_doc(cls, doc: dict) -> "SummaryResult":
        return cls(
            selected=[
                SelectedSentence(d["sentence_id"], float(d["score"]), d["segment_id"])
                for d in doc["selected"]
            ],
            total_words=int(doc["total_words"]),
            budget_words=int(doc["budget_words"]),
            config=doc["config"],
            converged=bool(doc["converged"]),
        )


def budget_words_for(total_words: int, budget_ratio: float) -> int:
    # epsilon shields the ceil from float noise in ratio * total
    return max(math.ceil(budget_ratio * total_words - 1e-9), 1)


def select(
    scores: dict[str, float],
    sentences: list[TranscriptSentence],
    cfg: SelectionConfig = SelectionConfig(),
    segment_of: dict[str, str] | None = None,
    config_echo: dict | None = None,
    converged: bool = True,
) -> SummaryResult:
    """Greedy selection by descending score until the word budget is met.

    Ties break on earlier start time, then sentence id; the chosen prefix is
    re-sorted into transcript order for presentation.
    """
    if not sentences:
        raise ValueError("empty transcript")
    missing = [s.sentence_id for s in sentences if s.sentence_id not in scores]
    if missing:
        raise ValueError(f"scores missing for sentences {missing[:3]}")
    segment_of = segment_of or {}

    total_words = sum(s.word_count for s in sentences)
    budget = budget_words_for(total_words, cfg.budget_ratio)

    by_score = sorted(sentences, key=lambda s: (-scores[s.sentence_id], s.start_ms, s.sentence_id))
    chosen: list[TranscriptSentence] = []
    covered = 0
    for sent in by_score:
        if covered >= budget:
            break
        chosen.append(sent)
        covered += sent.word_count

    chosen.sort(key=lambda s: (s.start_ms, s.sentence_id))
    return SummaryResult(
        selected=[
            SelectedSentence(
                sentence_id=s.sentence_id,
                score=scores[s.sentence_id],
                segment_id=segment_of.get(s.sentence_id),
            )
            for s in chosen
        ],
        total_words=total_words,
        budget_words=budget,
        config=dict(config_echo or {}),
        converged=converged,
    )


def config_echo_doc(
    rank_cfg: RankConfig,
    fw: FeedbackWeightConfig,
    sel: SelectionConfig,
    bm25_params: Bm25Params,
) -> dict:
    return {
        "similarity": rank_cfg.similarity,
        "damping": rank_cfg.damping,
        "tol": rank_cfg.tol,
        "max_iters": rank_cfg.max_iters,
        "eps_hit": fw.eps_hit,
        "eps_miss": fw.eps_miss,
        "budget_ratio": sel.budget_ratio,
        "a": bm25_params.a,
        "b": bm25_params.b,
    }


def summarize_transcript(
    augmented: AugmentedTranscript,
    rank_cfg: RankConfig = RankConfig(),
    fw: FeedbackWeightConfig = FeedbackWeightConfig(),
    sel: SelectionConfig = SelectionConfig(),
    bm25_params: Bm25Params = Bm25Params(),
) -> SummaryResult:
    """Graph + rank + select over an augmented transcript."""
    sentences = list(augmented.sentences)
    graph = build_graph(sentences, rank_cfg, fw, bm25_params)
    ranked = rank(graph, rank_cfg)
    segment_of = {
        sid: seg.segment_id for seg in augmented.segments for sid in seg.sentence_ids
    }
    return select(
        ranked.scores,
        sentences,
        sel,
        segment_of=segment_of,
        config_echo=config_echo_doc(rank_cfg, fw, sel, bm25_params),
        converged=ranked.converged,
    )
