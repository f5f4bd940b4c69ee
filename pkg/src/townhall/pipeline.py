"""The shared ingest -> align -> topics -> summarize pipeline.

Both the CLI and the HTTP service run meetings through this module, so the
two fronts produce byte-identical documents for identical inputs and config.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from .align import AugmentedTranscript, WindowConfig, build_augmented
from .ingest import DebounceConfig, debounce, parse_events, parse_transcript
from .model import (
    ClickerEvent,
    MeetingRecord,
    TagVocabulary,
    bind_vocabulary,
)
from .summarize import (
    Bm25Params,
    FeedbackWeightConfig,
    RankConfig,
    SelectionConfig,
    SummaryResult,
    summarize_transcript,
)
from .topics import TopicCluster, TopicConfig, extract_topics, label_segments, topics_doc


@dataclass(frozen=True)
class PipelineConfig:
    window: WindowConfig = field(default_factory=WindowConfig)
    debounce: DebounceConfig = field(default_factory=DebounceConfig)
    rank: RankConfig = field(default_factory=RankConfig)
    weights: FeedbackWeightConfig = field(default_factory=FeedbackWeightConfig)
    selection: SelectionConfig = field(default_factory=SelectionConfig)
    bm25: Bm25Params = field(default_factory=Bm25Params)
    topics: TopicConfig = field(default_factory=TopicConfig)

    def with_overrides(self, **kw) -> "PipelineConfig":
        """Apply flat overrides (similarity, budget_ratio, eps_hit, ...).

        Unknown keys raise; values are validated by the owning config type
        before any work happens.
        """
        cfg = self
        mapping = {
            "similarity": ("rank", "similarity"),
            "damping": ("rank", "damping"),
            "tol": ("rank", "tol"),
            "max_iters": ("rank", "max_iters"),
            "eps_hit": ("weights", "eps_hit"),
            "eps_miss": ("weights", "eps_miss"),
            "budget_ratio": ("selection", "budget_ratio"),
            "cooldown_ms": ("debounce", "cooldown_ms"),
            "top_k": ("topics", "top_k"),
        }
        for key, value in kw.items():
            if value is None:
                continue
            if key not in mapping:
                raise ValueError(f"unknown config override {key!r}")
            group, attr = mapping[key]
            cfg = replace(cfg, **{group: replace(getattr(cfg, group), **{attr: value})})
        return cfg


@dataclass
class PipelineResult:
    record: MeetingRecord
    events: list[ClickerEvent]  # all raw events, with counted flags
    augmented: AugmentedTranscript
    ranked_topics: list[TopicCluster]
    summary: SummaryResult
    config: PipelineConfig

    def augmented_doc(self) -> dict:
        return self.augmented.to_doc()

    def topics_listing(self) -> dict:
        return topics_doc(self.record.meeting_id, self.ranked_topics, self.config.topics.top_k)

    def summary_doc(self) -> dict:
        return self.summary.to_doc()


def augment_meeting(
    record: MeetingRecord,
    transcript_bytes: bytes,
    events_bytes: bytes,
    vocab_org: TagVocabulary,
    vocab_att: TagVocabulary,
    cfg: PipelineConfig = PipelineConfig(),
) -> tuple[AugmentedTranscript, list[ClickerEvent], list[TopicCluster]]:
    """Parse, debounce, align, and topic-label one meeting."""
    sentences = parse_transcript(transcript_bytes)
    events = parse_events(events_bytes)
    late = [e for e in events if e.t_ms > record.duration_ms]
    if late:
        raise ValueError(
            f"event at {late[0].t_ms} ms is beyond the meeting duration {record.duration_ms} ms"
        )
    events = debounce(events, cfg.debounce)
    labeled = bind_vocabulary(events, vocab_org, vocab_att)

    augmented = build_augmented(
        meeting_id=record.meeting_id,
        duration_ms=record.duration_ms,
        sentences=sentences,
        labeled_events=labeled,
        cfg=cfg.window,
        attendee_labels=vocab_att.labels,
    )
    ranked = extract_topics(list(augmented.sentences), cfg.topics, cfg.rank)
    labeled_segments = label_segments(list(augmented.segments), ranked)
    augmented = replace(augmented, segments=tuple(labeled_segments))
    return augmented, events, ranked


def run_pipeline(
    record: MeetingRecord,
    transcript_bytes: bytes,
    events_bytes: bytes,
    vocab_org: TagVocabulary,
    vocab_att: TagVocabulary,
    cfg: PipelineConfig = PipelineConfig(),
) -> PipelineResult:
    """Full pipeline including the default-config summary."""
    augmented, events, ranked = augment_meeting(
        record, transcript_bytes, events_bytes, vocab_org, vocab_att, cfg
    )
    summary = summarize_transcript(augmented, cfg.rank, cfg.weights, cfg.selection, cfg.bm25)
    return PipelineResult(
        record=record,
        events=events,
        augmented=augmented,
        ranked_topics=ranked,
        summary=summary,
        config=cfg,
    )


def summarize_augmented(augmented: AugmentedTranscript, cfg: PipelineConfig) -> SummaryResult:
    return summarize_transcript(augmented, cfg.rank, cfg.weights, cfg.selection, cfg.bm25)
