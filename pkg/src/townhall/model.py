"""Shared domain types, vocabularies, and the canonical document serialization.

One serialization schema is used everywhere (files, store, API): `to_doc`
methods emit plain dicts whose keys match the field names below, and
`canonical_json` renders any doc deterministically (sorted keys, compact
separators), so identical inputs always produce byte-identical documents.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from datetime import date as _date

from .errors import ParseError

ROLES = ("organizer", "attendee")
BUTTONS = ("A", "B", "C", "D", "E")

# Field-experiment defaults; vocabularies are customizable per meeting.
DEFAULT_ATTENDEE_LABELS = ("Agree", "Disagree", "Unsure", "Important", "Confused")
DEFAULT_ORGANIZER_LABELS = ("Main Issue", "Concern", "Supportive", "New Idea", "Good Point")


def canonical_json(doc) -> str:
    """Deterministic JSON text for a document (dict/list of plain values)."""
    return json.dumps(doc, ensure_ascii=False, sort_keys=True, separators=(",", ":"))


def canonical_json_bytes(doc) -> bytes:
    return canonical_json(doc).encode("utf-8")


@dataclass(frozen=True)
class MeetingRecord:
    """Metadata for one meeting; all other times are ms offsets from its start."""

    meeting_id: str
    title: str
    date: str  # ISO calendar date
    location: str
    start_epoch_ms: int
    duration_ms: int

    def __post_init__(self):
        if self.duration_ms <= 0:
            raise ValueError("duration_ms must be positive")
        _date.fromisoformat(self.date)

    def to_doc(self) -> dict:
        return {
            "meeting_id": self.meeting_id,
            "title": self.title,
            "date": self.date,
            "location": self.location,
            "start_epoch_ms": self.start_epoch_ms,
            "duration_ms": self.duration_ms,
        }

    @classmethod
    def from_doc(cls, doc: dict) -> "MeetingRecord":
        return cls(
            meeting_id=doc["meeting_id"],
            title=doc["title"],
            date=doc["date"],
            location=doc["location"],
            start_epoch_ms=int(doc["start_epoch_ms"]),
            duration_ms=int(doc["duration_ms"]),
        )


@dataclass(frozen=True)
class TagVocabulary:
    """Five button-to-label bindings for one role."""

    role: str
    labels: tuple[str, ...]  # label for buttons A..E, in order

    def __post_init__(self):
        if self.role not in ROLES:
            raise ValueError(f"unknown role {self.role!r}")
        if len(self.labels) != len(BUTTONS):
            raise ValueError("vocabulary must bind exactly 5 buttons")
        if any(not lbl for lbl in self.labels):
            raise ValueError("labels must be non-empty")
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("labels must be unique within a vocabulary")

    def label_for(self, button: str) -> str:
        if button not in BUTTONS:
            raise ValueError(f"button {button!r} outside A-E")
        return self.labels[BUTTONS.index(button)]

    def to_doc(self) -> dict:
        return {"role": self.role, "labels": dict(zip(BUTTONS, self.labels))}

    @classmethod
    def from_doc(cls, doc: dict) -> "TagVocabulary":
        labels = doc["labels"]
        missing = [b for b in BUTTONS if b not in labels]
        if missing:
            raise ParseError(f"vocabulary missing buttons {missing}")
        return cls(role=doc["role"], labels=tuple(labels[b] for b in BUTTONS))


def default_vocabulary(role: str) -> TagVocabulary:
    labels = DEFAULT_ORGANIZER_LABELS if role == "organizer" else DEFAULT_ATTENDEE_LABELS
    return TagVocabulary(role=role, labels=labels)


@dataclass(frozen=True)
class TranscriptSentence:
    """One timestamped sentence; the node unit of the ranking graph."""

    sentence_id: str
    start_ms: int
    end_ms: int
    raw_text: str
    word_count: int
    content_tokens: tuple[str, ...]
    prompted_feedback: bool = False

    def __post_init__(self):
        if self.start_ms > self.end_ms:
            raise ValueError("start_ms must not exceed end_ms")
        if self.word_count < 1:
            raise ValueError("word_count must be >= 1")

    def to_doc(self) -> dict:
        return {
            "sentence_id": self.sentence_id,
            "start_ms": self.start_ms,
            "end_ms": self.end_ms,
            "raw_text": self.raw_text,
            "word_count": self.word_count,
            "content_tokens": list(self.content_tokens),
            "prompted_feedback": self.prompted_feedback,
        }

    @classmethod
    def from_doc(cls, doc: dict) -> "TranscriptSentence":
        return cls(
            sentence_id=doc["sentence_id"],
            start_ms=int(doc["start_ms"]),
            end_ms=int(doc["end_ms"]),
            raw_text=doc["raw_text"],
            word_count=int(doc["word_count"]),
            content_tokens=tuple(doc["content_tokens"]),
            prompted_feedback=bool(doc["prompted_feedback"]),
        )


@dataclass(frozen=True)
class ClickerEvent:
    """One raw button press. `counted` is decided later by debouncing."""

    t_ms: int
    device_id: str
    role: str
    button: str
    counted: bool = False

    def __post_init__(self):
        if self.role not in ROLES:
            raise ValueError(f"unknown role {self.role!r}")
        if self.button not in BUTTONS:
            raise ValueError(f"button {self.button!r} outside A-E")
        if self.t_ms < 0:
            raise ValueError("t_ms must be non-negative")

    def to_doc(self) -> dict:
        return {
            "t_ms": self.t_ms,
            "device_id": self.device_id,
            "role": self.role,
            "button": self.button,
            "counted": self.counted,
        }

    @classmethod
    def from_doc(cls, doc: dict) -> "ClickerEvent":
        return cls(
            t_ms=int(doc["t_ms"]),
            device_id=doc["device_id"],
            role=doc["role"],
            button=doc["button"],
            counted=bool(doc["counted"]),
        )


@dataclass(frozen=True)
class LabeledEvent:
    """A clicker event bound to its vocabulary label."""

    t_ms: int
    device_id: str
    role: str
    button: str
    counted: bool
    label: str


def bind_vocabulary(
    events: list[ClickerEvent],
    vocab_org: TagVocabulary,
    vocab_att: TagVocabulary,
) -> list[LabeledEvent]:
    """Attach labels to events; pure relabeling, order and times untouched."""
    by_role = {"organizer": vocab_org, "attendee": vocab_att}
    out = []
    for ev in events:
        vocab = by_role.get(ev.role)
        if vocab is None:
            raise ValueError(f"no vocabulary for role {ev.role!r}")
        out.append(
            LabeledEvent(
                t_ms=ev.t_ms,
                device_id=ev.device_id,
                role=ev.role,
                button=ev.button,
                counted=ev.counted,
                label=vocab.label_for(ev.button),
            )
        )
    return out


@dataclass(frozen=True)
class FeedbackTally:
    """Counted attendee feedback per label. Keys are exactly the vocabulary labels."""

    counts: dict[str, int] = field(default_factory=dict)

    def __post_init__(self):
        if any(v < 0 for v in self.counts.values()):
            raise ValueError("tally counts must be non-negative")

    def total(self) -> int:
        return sum(self.counts.values())

    def to_doc(self) -> dict:
        return {"counts": dict(sorted(self.counts.items()))}

    @classmethod
    def from_doc(cls, doc: dict) -> "FeedbackTally":
        return cls(counts={k: int(v) for k, v in doc["counts"].items()})


SEGMENT_KINDS = ("tag_anchored", "filler")


@dataclass(frozen=True)
class Segment:
    """One time window of the meeting with its transcript, tag, topic, and tally."""

    segment_id: str
    start_ms: int
    end_ms: int
    kind: str
    organizer_tag: str | None
    sentence_ids: tuple[str, ...]
    topic: str | None
    tally: FeedbackTally

    def __post_init__(self):
        if self.kind not in SEGMENT_KINDS:
            raise ValueError(f"unknown segment kind {self.kind!r}")
        if self.kind == "tag_anchored" and self.organizer_tag is None:
            raise ValueError("tag_anchored segments must carry an organizer_tag")
        if self.start_ms > self.end_ms:
            raise ValueError("start_ms must not exceed end_ms")

    def to_doc(self) -> dict:
        return {
            "segment_id": self.segment_id,
            "start_ms": self.start_ms,
            "end_ms": self.end_ms,
            "kind": self.kind,
            "organizer_tag": self.organizer_tag,
            "sentence_ids": list(self.sentence_ids),
            "topic": self.topic,
            "tally": self.tally.to_doc(),
        }

    @classmethod
    def from_doc(cls, doc: dict) -> "Segment":
        return cls(
            segment_id=doc["segment_id"],
            start_ms=int(doc["start_ms"]),
            end_ms=int(doc["end_ms"]),
            kind=doc["kind"],
            organizer_tag=doc["organizer_tag"],
            sentence_ids=tuple(doc["sentence_ids"]),
            topic=doc["topic"],
            tally=FeedbackTally.from_doc(doc["tally"]),
        )

    def with_updates(self, **changes) -> "Segment":
        return replace(self, **changes)
