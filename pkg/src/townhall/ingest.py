"""Parsing of transcript and clicker-event files, plus click debouncing.

Transcript files are JSON documents with a top-level `sentences` array of
`{start_ms, end_ms, text}` objects. Event logs are UTF-8 CSV with a header
row `t_ms,device_id,role,button`. Parsing never drops data; suppression of
spam clicks is decided afterwards by `debounce`.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass

from .errors import ParseError
from .model import BUTTONS, ROLES, ClickerEvent, TranscriptSentence
from .tokens import content_tokens, word_count

EVENT_HEADER = ["t_ms", "device_id", "role", "button"]


@dataclass(frozen=True)
class DebounceConfig:
    cooldown_ms: int = 30_000

    def __post_init__(self):
        if self.cooldown_ms <= 0:
            raise ValueError("cooldown_ms must be positive")


def parse_transcript(data: bytes) -> list[TranscriptSentence]:
    """Parse a transcript file into tokenized, id-stamped sentences."""
    try:
        doc = json.loads(data.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ParseError(f"transcript is not valid JSON: {exc}") from None
    if not isinstance(doc, dict) or "sentences" not in doc:
        raise ParseError("transcript must be an object with a 'sentences' array")
    entries = doc["sentences"]
    if not isinstance(entries, list) or not entries:
        raise ParseError("no sentences")

    sentences = []
    prev_start = -1
    for i, entry in enumerate(entries):
        try:
            start_ms = int(entry["start_ms"])
            end_ms = int(entry["end_ms"])
            text = entry["text"]
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"sentence {i}: malformed record ({exc})") from None
        if start_ms < 0 or end_ms < 0:
            raise ParseError(f"sentence {i}: negative timestamp")
        if start_ms > end_ms:
            raise ParseError(f"sentence {i}: start_ms after end_ms")
        if start_ms < prev_start:
            raise ParseError(f"sentence {i}: unordered timestamps")
        prev_start = start_ms
        wc = word_count(text)
        if wc < 1:
            raise ParseError(f"sentence {i}: empty text")
        sentences.append(
            TranscriptSentence(
                sentence_id=f"s{i:04d}",
                start_ms=start_ms,
                end_ms=end_ms,
                raw_text=text,
                word_count=wc,
                content_tokens=tuple(content_tokens(text)),
            )
        )
    return sentences


def transcript_doc(sentences: list[dict]) -> dict:
    """Wrap raw `{start_ms, end_ms, text}` rows in the transcript file schema."""
    return {"sentences": sentences}


def parse_events(data: bytes) -> list[ClickerEvent]:
    """Parse an event-log CSV into events sorted by time.

    Ties sort stably by (device_id, button). Every parseable row is kept,
    including exact duplicates; debouncing decides what counts later.
    """
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise ParseError(f"event log is not UTF-8: {exc}") from None
    reader = csv.reader(io.StringIO(text))
    rows = list(reader)
    if not rows:
        raise ParseError("event log is empty")
    header = [h.strip() for h in rows[0]]
    if header != EVENT_HEADER:
        raise ParseError(f"expected header {','.join(EVENT_HEADER)!r}, got {','.join(header)!r}", line=1)

    events = []
    device_roles: dict[str, str] = {}
    for lineno, row in enumerate(rows[1:], start=2):
        if not row or (len(row) == 1 and not row[0].strip()):
            continue  # blank line
        if len(row) != 4:
            raise ParseError(f"expected 4 fields, got {len(row)}", line=lineno)
        t_raw, device_id, role, button = (c.strip() for c in row)
        try:
            t_ms = int(t_raw)
        except ValueError:
            raise ParseError(f"t_ms {t_raw!r} is not an integer", line=lineno) from None
        if t_ms < 0:
            raise ParseError(f"negative time {t_ms}", line=lineno)
        if role not in ROLES:
            raise ParseError(f"unknown role {role!r}", line=lineno)
        if button not in BUTTONS:
            raise ParseError(f"button {button!r} outside A-E", line=lineno)
        if not device_id:
            raise ParseError("empty device_id", line=lineno)
        seen_role = device_roles.setdefault(device_id, role)
        if seen_role != role:
            raise ParseError(f"device {device_id!r} changes role from {seen_role!r} to {role!r}", line=lineno)
        events.append(ClickerEvent(t_ms=t_ms, device_id=device_id, role=role, button=button))

    events.sort(key=lambda e: (e.t_ms, e.device_id, e.button))
    return events


def events_csv(events: list[ClickerEvent]) -> str:
    """Render events back to the event-log CSV format."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(EVENT_HEADER)
    for ev in events:
        writer.writerow([ev.t_ms, ev.device_id, ev.role, ev.button])
    return buf.getvalue()


def debounce(events: list[ClickerEvent], cfg: DebounceConfig = DebounceConfig()) -> list[ClickerEvent]:
    """Recompute `counted` flags under the rolling per-device cooldown.

    Attendee devices count an event iff at least `cooldown_ms` elapsed since
    that device's previous *counted* event (the first one always counts);
    suppressed events do not reset the clock. Organizer devices are exempt.
    Pure and idempotent: flags are recomputed from scratch, timestamps and
    order are untouched.
    """
    last_counted: dict[str, int] = {}
    prev_t = None
    out = []
    for ev in events:
        if prev_t is not None and ev.t_ms < prev_t:
            raise ValueError("events must be sorted by t_ms")
        prev_t = ev.t_ms
        if ev.role == "organizer":
            counted = True
        else:
            last = last_counted.get(ev.device_id)
            counted = last is None or ev.t_ms - last >= cfg.cooldown_ms
            if counted:
                last_counted[ev.device_id] = ev.t_ms
        out.append(ClickerEvent(ev.t_ms, ev.device_id, ev.role, ev.button, counted=counted))
    return out
