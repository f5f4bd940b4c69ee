"""Multi-word topic extraction and segment labeling.

Candidate phrases are stopword-delimited runs of content tokens (up to four
tokens; longer runs are split). Candidates cluster by token-set overlap with
single-link merging, clusters are ranked on a complete graph whose edge
weights favor clusters whose mentions sit close together in the token
stream, and each segment is labeled with the best-ranked cluster that has a
mention inside it.
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import Segment, TranscriptSentence
from .summarize import RankConfig, SentenceGraph, rank
from .tokens import STOPWORDS, split_tokens


@dataclass(frozen=True)
class TopicConfig:
    overlap_threshold: float = 0.25
    max_phrase_tokens: int = 4
    top_k: int = 10  # length of the emitted topic list

    def __post_init__(self):
        if not 0 < self.overlap_threshold <= 1:
            raise ValueError("overlap_threshold must be in (0, 1]")
        if self.max_phrase_tokens < 1:
            raise ValueError("max_phrase_tokens must be >= 1")


@dataclass(frozen=True)
class CandidatePhrase:
    """A normalized phrase with every occurrence recorded.

    `positions` are first-token offsets counted over the full token stream of
    the transcript (stopwords included); `occurrence_sentences` pairs with
    `positions` index-by-index.
    """

    tokens: tuple[str, ...]
    positions: tuple[int, ...]
    occurrence_sentences: tuple[str, ...]

    @property
    def source_sentences(self) -> frozenset[str]:
        return frozenset(self.occurrence_sentences)

    @property
    def earliest_position(self) -> int:
        return self.positions[0]

    @property
    def text(self) -> str:
        return " ".join(self.tokens)


@dataclass(frozen=True)
class TopicCluster:
    members: tuple[CandidatePhrase, ...]
    representative: CandidatePhrase
    score: float

    @property
    def label(self) -> str:
        return self.representative.text

    def positions(self) -> list[int]:
        return [p for m in self.members for p in m.positions]

    def sentence_ids(self) -> frozenset[str]:
        return frozenset(sid for m in self.members for sid in m.occurrence_sentences)


def extract_candidates(
    sentences: list[TranscriptSentence],
    cfg: TopicConfig = TopicConfig(),
) -> list[CandidatePhrase]:
    """Stopword-delimited phrase candidates, merged across the transcript."""
    occurrences: dict[tuple[str, ...], list[tuple[int, str]]] = {}
    offset = 0  # global token offset, stopwords included
    for sent in sentences:
        toks = split_tokens(sent.raw_text)
        run_start = None
        for i, tok in enumerate(toks + [None]):  # sentinel flushes the last run
            if tok is not None and tok not in STOPWORDS:
                if run_start is None:
                    run_start = i
                continue
            if run_start is not None:
                run = toks[run_start:i]
                for chunk_off in range(0, len(run), cfg.max_phrase_tokens):
                    chunk = tuple(run[chunk_off : chunk_off + cfg.max_phrase_tokens])
                    pos = offset + run_start + chunk_off
                    occurrences.setdefault(chunk, []).append((pos, sent.sentence_id))
                run_start = None
        offset += len(toks)

    candidates = []
    for tokens, occ in occurrences.items():
        occ.sort()
        candidates.append(
            CandidatePhrase(
                tokens=tokens,
                positions=tuple(p for p, _ in occ),
                occurrence_sentences=tuple(sid for _, sid in occ),
            )
        )
    candidates.sort(key=lambda c: (c.earliest_position, c.tokens))
    return candidates


def _overlap_coefficient(a: frozenset, b: frozenset) -> float:
    if not a or not b:
        return 0.0
    return len(a & b) / min(len(a), len(b))


def cluster_candidates(
    candidates: list[CandidatePhrase],
    threshold: float = 0.25,
) -> list[TopicCluster]:
    """Single-link agglomeration on token-set overlap; permutation-invariant."""
    order = sorted(candidates, key=lambda c: (c.earliest_position, c.tokens))
    parent = list(range(len(order)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    token_sets = [frozenset(c.tokens) for c in order]
    for i in range(len(order)):
        for j in range(i + 1, len(order)):
            if _overlap_coefficient(token_sets[i], token_sets[j]) >= threshold:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[max(ri, rj)] = min(ri, rj)

    groups: dict[int, list[CandidatePhrase]] = {}
    for i, cand in enumerate(order):
        groups.setdefault(find(i), []).append(cand)

    clusters = []
    for root in sorted(groups):
        members = tuple(sorted(groups[root], key=lambda c: (c.earliest_position, c.tokens)))
        clusters.append(TopicCluster(members=members, representative=members[0], score=0.0))
    clusters.sort(key=lambda c: (c.representative.earliest_position, c.representative.tokens))
    return clusters


def rank_topics(
    clusters: list[TopicCluster],
    rank_cfg: RankConfig = RankConfig(),
) -> list[TopicCluster]:
    """Score clusters with the same fixed-point iteration used for sentences.

    The cluster graph is complete; an edge's weight sums 1/|pos_a - pos_b|
    over all cross-cluster occurrence position pairs, so clusters mentioned
    near each other reinforce each other. Returned in descending score order.
    """
    if not clusters:
        return []
    ids = [f"c{i:04d}" for i in range(len(clusters))]
    positions = [c.positions() for c in clusters]
    edges: dict[tuple[str, str], float] = {}
    for i in range(len(clusters)):
        for j in range(i + 1, len(clusters)):
            w = 0.0
            for pa in positions[i]:
                for pb in positions[j]:
                    dist = abs(pa - pb)
                    if dist > 0:
                        w += 1.0 / dist
            if w > 0:
                edges[(ids[i], ids[j])] = w
    scores = rank(SentenceGraph(nodes=tuple(ids), edges=edges), rank_cfg).scores

    rescored = [
        TopicCluster(members=c.members, representative=c.representative, score=scores[ids[i]])
        for i, c in enumerate(clusters)
    ]
    rescored.sort(key=lambda c: (-c.score, c.representative.earliest_position, c.representative.tokens))
    return rescored


def label_segments(segments: list[Segment], ranked: list[TopicCluster]) -> list[Segment]:
    """Set each segment's topic to the best-ranked cluster mentioned in it."""
    out = []
    for seg in segments:
        sids = set(seg.sentence_ids)
        topic = None
        for cluster in ranked:
            if cluster.sentence_ids() & sids:
                topic = cluster.label
                break
        out.append(seg.with_updates(topic=topic))
    return out


def extract_topics(
    sentences: list[TranscriptSentence],
    cfg: TopicConfig = TopicConfig(),
    rank_cfg: RankConfig = RankConfig(),
) -> list[TopicCluster]:
    """Candidates -> clusters -> ranking, in one call."""
    candidates = extract_candidates(sentences, cfg)
    clusters = cluster_candidates(candidates, cfg.overlap_threshold)
    return rank_topics(clusters, rank_cfg)


def topics_doc(meeting_id: str, ranked: list[TopicCluster], top_k: int) -> dict:
    return {
        "meeting_id": meeting_id,
        "topics": [
            {"rank": i + 1, "topic": c.label, "score": c.score}
            for i, c in enumerate(ranked[:top_k])
        ],
    }
