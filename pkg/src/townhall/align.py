"""Timeline segmentation and feedback attribution.

The meeting timeline is partitioned into tag-anchored windows (opening a
configurable lead before each organizer tag and closing after it) and filler
windows for the uncovered gaps. Counted attendee clicks are shifted back by
a reaction lag and attributed to the segment and sentence under the shifted
time; those sentences are flagged as having prompted feedback.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass, replace

from .model import FeedbackTally, LabeledEvent, Segment, TranscriptSentence


@dataclass(frozen=True)
class WindowConfig:
    pre_ms: int = 2_000
    post_ms: int = 28_000
    filler_ms: int = 30_000
    reaction_lag_ms: int = 2_000

    def __post_init__(self):
        for name in ("pre_ms", "post_ms", "filler_ms", "reaction_lag_ms"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")


@dataclass(frozen=True)
class Span:
    """A half-open window [start_ms, end_ms) before sentences are attached."""

    start_ms: int
    end_ms: int
    kind: str
    organizer_tag: str | None = None
    tag_t_ms: int | None = None


@dataclass(frozen=True)
class TimelineEntry:
    t_ms: int
    label: str
    segment_id: str

    def to_doc(self) -> dict:
        return {"t_ms": self.t_ms, "label": self.label, "segment_id": self.segment_id}


@dataclass(frozen=True)
class AugmentedTranscript:
    """The segmented transcript plus the chronological organizer-tag timeline."""

    meeting_id: str
    segments: tuple[Segment, ...]
    sentences: tuple[TranscriptSentence, ...]
    tag_timeline: tuple[TimelineEntry, ...]

    @property
    def duration_ms(self) -> int:
        return self.segments[-1].end_ms if self.segments else 0

    def to_doc(self) -> dict:
        return {
            "meeting_id": self.meeting_id,
            "segments": [s.to_doc() for s in self.segments],
            "sentences": [s.to_doc() for s in self.sentences],
            "tag_timeline": [t.to_doc() for t in self.tag_timeline],
        }

    @classmethod
    def from_doc(cls, doc: dict) -> "AugmentedTranscript":
        return cls(
            meeting_id=doc["meeting_id"],
            segments=tuple(Segment.from_doc(d) for d in doc["segments"]),
            sentences=tuple(TranscriptSentence.from_doc(d) for d in doc["sentences"]),
            tag_timeline=tuple(
                TimelineEntry(t_ms=int(d["t_ms"]), label=d["label"], segment_id=d["segment_id"])
                for d in doc["tag_timeline"]
            ),
        )


def build_segments(
    duration_ms: int,
    organizer_tags: list[LabeledEvent],
    cfg: WindowConfig = WindowConfig(),
) -> list[Span]:
    """Partition [0, duration_ms) into tag-anchored and filler spans.

    Each tag at t opens [t - pre_ms, t + post_ms), clamped to the meeting.
    When consecutive tag windows overlap, the earlier one is truncated at the
    start of the later one (which can leave a zero-width span for tags closer
    than pre_ms; such spans are kept so every tag keeps its own anchor).
    Gaps are chunked into filler spans of filler_ms with a shorter remainder.
    """
    if duration_ms <= 0:
        raise ValueError("duration_ms must be positive")
    tags = sorted(organizer_tags, key=lambda e: e.t_ms)
    for tag in tags:
        if not 0 <= tag.t_ms <= duration_ms:
            raise ValueError(f"tag at {tag.t_ms} outside [0, {duration_ms}]")

    starts = [max(t.t_ms - cfg.pre_ms, 0) for t in tags]
    ends = [min(t.t_ms + cfg.post_ms, duration_ms) for t in tags]
    for i in range(len(tags) - 1):
        ends[i] = min(ends[i], starts[i + 1])

    spans: list[Span] = []

    def fill(gap_start: int, gap_end: int):
        while gap_end - gap_start > cfg.filler_ms:
            spans.append(Span(gap_start, gap_start + cfg.filler_ms, "filler"))
            gap_start += cfg.filler_ms
        if gap_end > gap_start:
            spans.append(Span(gap_start, gap_end, "filler"))

    cursor = 0
    for tag, start, end in zip(tags, starts, ends):
        fill(cursor, start)
        spans.append(Span(start, end, "tag_anchored", organizer_tag=tag.label, tag_t_ms=tag.t_ms))
        cursor = end
    fill(cursor, duration_ms)
    return spans


class _WindowIndex:
    """Bisect lookup over the non-empty windows of a partition."""

    def __init__(self, windows):
        self.indices = [i for i, w in enumerate(windows) if w.end_ms > w.start_ms]
        self.starts = [windows[i].start_ms for i in self.indices]
        self.ends = [windows[i].end_ms for i in self.indices]

    def containing(self, t_ms: int) -> int:
        """Index (into the original list) of the window holding t_ms,
        clamping times that fall outside the partition."""
        pos = bisect_right(self.starts, t_ms) - 1
        if pos < 0:
            pos = 0
        elif t_ms >= self.ends[pos]:  # beyond the last window
            pos = len(self.indices) - 1
        return self.indices[pos]


def assign_sentences(
    sentences: list[TranscriptSentence],
    spans: list[Span],
    meeting_id: str,
) -> list[Segment]:
    """Materialize spans into segments, attaching each sentence to the span
    containing its start time (half-open intervals; boundary goes to the
    later span)."""
    duration_ms = spans[-1].end_ms if spans else 0
    index = _WindowIndex(spans)
    members: list[list[str]] = [[] for _ in spans]
    for sent in sentences:
        if sent.start_ms >= duration_ms:
            raise ValueError(
                f"sentence {sent.sentence_id} starts at {sent.start_ms}, beyond duration {duration_ms}"
            )
        members[index.containing(sent.start_ms)].append(sent.sentence_id)

    segments = []
    for i, span in enumerate(spans):
        segments.append(
            Segment(
                segment_id=f"{meeting_id}.g{i:04d}",
                start_ms=span.start_ms,
                end_ms=span.end_ms,
                kind=span.kind,
                organizer_tag=span.organizer_tag,
                sentence_ids=tuple(members[i]),
                topic=None,
                tally=FeedbackTally(counts={}),
            )
        )
    return segments


def attribute_feedback(
    attendee_events: list[LabeledEvent],
    sentences: list[TranscriptSentence],
    segments: list[Segment],
    cfg: WindowConfig = WindowConfig(),
    attendee_labels: tuple[str, ...] = (),
) -> tuple[list[Segment], list[TranscriptSentence]]:
    """Attribute counted attendee events to segments and sentences.

    Each event lands at t_ms - reaction_lag_ms. The containing segment's
    tally is incremented by the event label, and the sentence at that time
    (else the nearest earlier one, else the first) is flagged as having
    prompted feedback. Events shifted before the meeting clamp to the start.
    """
    tallies = {seg.segment_id: {label: 0 for label in attendee_labels} for seg in segments}
    prompted: set[str] = set()

    index = _WindowIndex(segments)
    sent_starts = [s.start_ms for s in sentences]

    for ev in attendee_events:
        if not ev.counted or ev.role != "attendee":
            raise ValueError("attribute_feedback expects counted attendee events only")
        eff = max(ev.t_ms - cfg.reaction_lag_ms, 0)
        seg = segments[index.containing(eff)]
        tallies[seg.segment_id][ev.label] = tallies[seg.segment_id].get(ev.label, 0) + 1
        if sentences:
            idx = max(bisect_right(sent_starts, eff) - 1, 0)
            prompted.add(sentences[idx].sentence_id)

    new_segments = [
        seg.with_updates(tally=FeedbackTally(counts=tallies[seg.segment_id])) for seg in segments
    ]
    new_sentences = [
        replace(s, prompted_feedback=True) if s.sentence_id in prompted else s for s in sentences
    ]
    return new_segments, new_sentences


def build_augmented(
    meeting_id: str,
    duration_ms: int,
    sentences: list[TranscriptSentence],
    labeled_events: list[LabeledEvent],
    cfg: WindowConfig = WindowConfig(),
    attendee_labels: tuple[str, ...] = (),
) -> AugmentedTranscript:
    """Run the full alignment for one meeting on debounced, labeled events."""
    tags = [e for e in labeled_events if e.role == "organizer" and e.counted]
    feedback = [e for e in labeled_events if e.role == "attendee" and e.counted]
    tags.sort(key=lambda e: e.t_ms)

    spans = build_segments(duration_ms, tags, cfg)
    segments = assign_sentences(sentences, spans, meeting_id)
    segments, sentences = attribute_feedback(feedback, sentences, segments, cfg, attendee_labels)

    timeline = []
    tag_segments = [seg for seg, span in zip(segments, spans) if span.kind == "tag_anchored"]
    for tag, seg in zip(tags, tag_segments):
        timeline.append(TimelineEntry(t_ms=tag.t_ms, label=tag.label, segment_id=seg.segment_id))

    return AugmentedTranscript(
        meeting_id=meeting_id,
        segments=tuple(segments),
        sentences=tuple(sentences),
        tag_timeline=tuple(timeline),
    )
