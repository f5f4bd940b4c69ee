"""Summary and transcript quality metrics, plus the similarity ablation harness.

Metric tokenization reuses the shared splitter but keeps stopwords, per the
usual ROUGE/BLEU conventions; similarity tokenization elsewhere drops them.
"""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass, replace
from pathlib import Path

from .errors import ParseError
from .ingest import parse_transcript
from .model import TranscriptSentence
from .summarize import (
    Bm25Params,
    FeedbackWeightConfig,
    RankConfig,
    SelectionConfig,
    build_graph,
    rank,
    select,
)
from .tokens import split_tokens

SIMILARITY_ROWS = ("bm25", "cosine", "vanilla")


@dataclass(frozen=True)
class RougeScore:
    n: int
    precision: float
    recall: float
    f1: float
    degenerate: bool = False

    def to_doc(self) -> dict:
        return {
            "n": self.n,
            "precision": self.precision,
            "recall": self.recall,
            "f1": self.f1,
            "degenerate": self.degenerate,
        }


@dataclass(frozen=True)
class BleuScore:
    n: int
    cumulative: float
    brevity_penalty: float
    degenerate: bool = False

    def to_doc(self) -> dict:
        return {
            "n": self.n,
            "cumulative": self.cumulative,
            "brevity_penalty": self.brevity_penalty,
            "degenerate": self.degenerate,
        }


def _ngrams(tokens: list[str], n: int) -> Counter:
    return Counter(tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1))


def rouge_n(candidate: str, reference: str, n: int) -> RougeScore:
    """Clipped n-gram precision/recall/F1 of candidate against reference."""
    if n < 1:
        raise ValueError("n must be >= 1")
    cand = _ngrams(split_tokens(candidate), n)
    ref = _ngrams(split_tokens(reference), n)
    total_cand = sum(cand.values())
    total_ref = sum(ref.values())
    if total_cand == 0 or total_ref == 0:
        return RougeScore(n=n, precision=0.0, recall=0.0, f1=0.0, degenerate=True)
    match = sum(min(c, ref[g]) for g, c in cand.items())
    precision = match / total_cand
    recall = match / total_ref
    f1 = 2 * precision * recall / (precision + recall) if precision + recall > 0 else 0.0
    return RougeScore(n=n, precision=precision, recall=recall, f1=f1)


def bleu_n(candidate: str, reference: str, n: int) -> BleuScore:
    """Cumulative BLEU-n: geometric mean of clipped modified precisions with
    uniform weights, times the standard brevity penalty."""
    if n < 1:
        raise ValueError("n must be >= 1")
    cand_tokens = split_tokens(candidate)
    ref_tokens = split_tokens(reference)
    c, r = len(cand_tokens), len(ref_tokens)
    if c == 0 or r == 0 or c < n:
        return BleuScore(n=n, cumulative=0.0, brevity_penalty=1.0, degenerate=True)

    bp = min(1.0, math.exp(1 - r / c))
    log_sum = 0.0
    for k in range(1, n + 1):
        cand_grams = _ngrams(cand_tokens, k)
        ref_grams = _ngrams(ref_tokens, k)
        match = sum(min(cnt, ref_grams[g]) for g, cnt in cand_grams.items())
        total = sum(cand_grams.values())
        if match == 0:
            return BleuScore(n=n, cumulative=0.0, brevity_penalty=bp)
        log_sum += math.log(match / total) / n
    return BleuScore(n=n, cumulative=bp * math.exp(log_sum), brevity_penalty=bp)


@dataclass(frozen=True)
class CorpusEntry:
    entry_id: str
    sentences: tuple[TranscriptSentence, ...]
    reference: str


@dataclass
class AblationReport:
    """Macro-averaged ROUGE for each similarity function over one corpus."""

    corpus_id: str
    rows: dict[str, dict[str, RougeScore]]  # similarity -> {"rouge_1": ..., "rouge_2": ...}
    config: dict

    def to_doc(self) -> dict:
        return {
            "corpus_id": self.corpus_id,
            "rows": {
                sim: {key: score.to_doc() for key, score in scores.items()}
                for sim, scores in self.rows.items()
            },
            "config": self.config,
        }


def load_corpus_dir(path: Path) -> list[CorpusEntry]:
    """Read `<stem>.transcript.json` + `<stem>.reference.txt` pairs."""
    entries = []
    for transcript_path in sorted(path.glob("*.transcript.json")):
        stem = transcript_path.name[: -len(".transcript.json")]
        reference_path = path / f"{stem}.reference.txt"
        if not reference_path.exists():
            raise ParseError(f"missing reference for corpus entry {stem!r}")
        sentences = parse_transcript(transcript_path.read_bytes())
        entries.append(
            CorpusEntry(
                entry_id=stem,
                sentences=tuple(sentences),
                reference=reference_path.read_text(encoding="utf-8"),
            )
        )
    if not entries:
        raise ParseError(f"no corpus entries under {path}")
    return entries


def _summary_text_for(sentences: list[TranscriptSentence], rank_cfg, fw, sel, bm25_params) -> str:
    graph = build_graph(list(sentences), rank_cfg, fw, bm25_params)
    ranked = rank(graph, rank_cfg)
    result = select(ranked.scores, list(sentences), sel)
    by_id = {s.sentence_id: s for s in sentences}
    return " ".join(by_id[entry.sentence_id].raw_text for entry in result.selected)


def run_ablation(
    entries: list[CorpusEntry],
    rank_cfg: RankConfig = RankConfig(),
    fw: FeedbackWeightConfig = FeedbackWeightConfig(),
    sel: SelectionConfig = SelectionConfig(),
    bm25_params: Bm25Params = Bm25Params(),
    corpus_id: str = "corpus",
) -> AblationReport:
    """Summarize every entry under each similarity function and macro-average
    ROUGE-1/2 against the references. All non-similarity config is shared."""
    if not entries:
        raise ValueError("ablation needs at least one (transcript, reference) pair")
    ordered = sorted(entries, key=lambda e: e.entry_id)

    rows: dict[str, dict[str, RougeScore]] = {}
    for sim in SIMILARITY_ROWS:
        cfg = replace(rank_cfg, similarity=sim)
        per_n: dict[int, list[RougeScore]] = {1: [], 2: []}
        for entry in ordered:
            candidate = _summary_text_for(entry.sentences, cfg, fw, sel, bm25_params)
            for n in (1, 2):
                per_n[n].append(rouge_n(candidate, entry.reference, n))
        rows[sim] = {
            f"rouge_{n}": RougeScore(
                n=n,
                precision=sum(s.precision for s in scores) / len(scores),
                recall=sum(s.recall for s in scores) / len(scores),
                f1=sum(s.f1 for s in scores) / len(scores),
            )
            for n, scores in per_n.items()
        }

    return AblationReport(
        corpus_id=corpus_id,
        rows=rows,
        config={
            "damping": rank_cfg.damping,
            "tol": rank_cfg.tol,
            "max_iters": rank_cfg.max_iters,
            "eps_hit": fw.eps_hit,
            "eps_miss": fw.eps_miss,
            "budget_ratio": sel.budget_ratio,
            "a": bm25_params.a,
            "b": bm25_params.b,
        },
    )


def ablation_table(report: AblationReport) -> str:
    """Aligned plain-text table of the ablation, percentages to two decimals."""
    header = (
        f"{'Similarity':<12}"
        f"{'R1-P':>8}{'R1-R':>8}{'R1-F1':>8}"
        f"{'R2-P':>8}{'R2-R':>8}{'R2-F1':>8}"
    )
    lines = [f"corpus: {report.corpus_id}", header, "-" * len(header)]
    for sim in SIMILARITY_ROWS:
        r1 = report.rows[sim]["rouge_1"]
        r2 = report.rows[sim]["rouge_2"]
        lines.append(
            f"{sim:<12}"
            f"{100 * r1.precision:>8.2f}{100 * r1.recall:>8.2f}{100 * r1.f1:>8.2f}"
            f"{100 * r2.precision:>8.2f}{100 * r2.recall:>8.2f}{100 * r2.f1:>8.2f}"
        )
    return "\n".join(lines)


def metrics_table(rouge_scores: list[RougeScore], bleu_scores: list[BleuScore]) -> str:
    """Aligned plain-text table for a single candidate/reference pair."""
    lines = [f"{'Metric':<10}{'Value':>10}{'P':>10}{'R':>10}{'BP':>10}"]
    for s in rouge_scores:
        lines.append(f"{'ROUGE-' + str(s.n):<10}{s.f1:>10.4f}{s.precision:>10.4f}{s.recall:>10.4f}{'':>10}")
    for s in bleu_scores:
        lines.append(f"{'BLEU-' + str(s.n):<10}{s.cumulative:>10.4f}{'':>10}{'':>10}{s.brevity_penalty:>10.4f}")
    return "\n".join(lines)


def load_ami_style_corpus(path: Path) -> list[CorpusEntry]:
    """Optional hook for a locally supplied benchmark corpus.

    Accepts either the `.transcript.json`/`.reference.txt` layout or plain
    `<stem>.txt` transcripts (one sentence per line) with `<stem>.ref.txt`
    references, which is the common flattened export of meeting corpora.
    """
    if list(path.glob("*.transcript.json")):
        return load_corpus_dir(path)
    entries = []
    for txt in sorted(path.glob("*.txt")):
        if txt.name.endswith(".ref.txt"):
            continue
        ref = path / (txt.name[: -len(".txt")] + ".ref.txt")
        if not ref.exists():
            continue
        lines = [ln.strip() for ln in txt.read_text(encoding="utf-8").splitlines() if ln.strip()]
        doc = {
            "sentences": [
                {"start_ms": i * 1000, "end_ms": i * 1000 + 900, "text": ln}
                for i, ln in enumerate(lines)
            ]
        }
        sentences = parse_transcript(json.dumps(doc).encode("utf-8"))
        entries.append(
            CorpusEntry(
                entry_id=txt.name[: -len(".txt")],
                sentences=tuple(sentences),
                reference=ref.read_text(encoding="utf-8"),
            )
        )
    if not entries:
        raise ParseError(f"no corpus entries under {path}")
    return entries
