"""Deterministic synthetic meetings for tests, demos, and regression runs.

The default `field` profile mirrors the statistics of a real 76-minute civic
meeting: 22 active clicker devices, 492 attendee feedback events that all
survive debouncing, a 38/19/6/21/16 percent button mix, and 56 organizer
tags. Identical seeds always produce identical files.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, replace

from .errors import ProfileError
from .ingest import events_csv
from .model import (
    BUTTONS,
    ClickerEvent,
    MeetingRecord,
    TagVocabulary,
    default_vocabulary,
)

_FIXED_DATE = "2025-05-15"
_FIXED_EPOCH_MS = 1_747_333_800_000  # 2025-05-15T18:30:00Z


@dataclass(frozen=True)
class FixtureProfile:
    name: str
    duration_ms: int
    attendee_devices: int
    attendee_events: int
    organizer_tags: int
    # fraction of events per button A..E, in order
    button_mix: tuple[float, ...] = (0.38, 0.19, 0.06, 0.21, 0.16)
    cooldown_ms: int = 30_000

    def __post_init__(self):
        if len(self.button_mix) != len(BUTTONS):
            raise ValueError("button_mix must cover buttons A-E")
        if abs(sum(self.button_mix) - 1.0) > 1e-9:
            raise ValueError("button_mix must sum to 1")


PROFILES = {
    "field": FixtureProfile(
        name="field",
        duration_ms=76 * 60_000,
        attendee_devices=22,
        attendee_events=492,
        organizer_tags=56,
    ),
    "pilot": FixtureProfile(
        name="pilot",
        duration_ms=60 * 60_000,
        attendee_devices=8,
        attendee_events=292,
        organizer_tags=56,
    ),
    "tiny": FixtureProfile(
        name="tiny",
        duration_ms=6 * 60_000,
        attendee_devices=3,
        attendee_events=24,
        organizer_tags=6,
    ),
}


@dataclass(frozen=True)
class FixtureBundle:
    record: MeetingRecord
    transcript: dict  # transcript file document
    events: tuple[ClickerEvent, ...]
    vocab_organizer: TagVocabulary
    vocab_attendee: TagVocabulary

    def events_csv(self) -> str:
        return events_csv(list(self.events))


def button_counts(total: int, mix: tuple[float, ...]) -> dict[str, int]:
    """Integer per-button counts by largest remainder; sums exactly to total."""
    floors = {b: int(frac * total) for b, frac in zip(BUTTONS, mix)}
    remainders = {b: frac * total - floors[b] for b, frac in zip(BUTTONS, mix)}
    for b in sorted(BUTTONS, key=lambda b: (-remainders[b], b))[: total - sum(floors.values())]:
        floors[b] += 1
    return floors


# Phrase bank for synthetic civic discussion; parking intentionally dominates
# so that topic extraction has a clear leader.
_PHRASES = [
    ("parking permit", 9),
    ("parking fees", 6),
    ("parking garage", 5),
    ("bus routes", 3),
    ("school budget", 3),
    ("bike lanes", 2),
    ("snow removal", 2),
    ("street lighting", 2),
    ("noise ordinance", 1),
    ("sidewalk repairs", 1),
    ("recycling program", 1),
    ("water rates", 1),
]

# every slot is bounded by stopwords so phrases stay intact as candidate runs
_TEMPLATES = [
    "I think the {p} will help this neighborhood",
    "We should discuss the {p} before the vote",
    "The council talked about the {p} again this evening",
    "Residents were upset about the {p} during the hearing",
    "Could someone explain the {p} to the newcomers",
    "Please give an update on the {p} when you can",
    "Our committee wrote about the {p} in its report",
    "Funding for the {p} should be in the town budget",
    "Several neighbors asked about the {p} after the meeting",
    "The survey ranked the {p} above the other items",
]


def _sentence_text(rng: random.Random) -> str:
    phrases = [p for p, w in _PHRASES for _ in range(w)]
    template = rng.choice(_TEMPLATES)
    return template.format(p=rng.choice(phrases))


def _attendee_times(rng: random.Random, k: int, duration_ms: int, cooldown_ms: int) -> list[int]:
    """k click times in [0, duration) that are pairwise >= cooldown apart."""
    slack = duration_ms - 1 - (k - 1) * cooldown_ms
    if slack < 0:
        raise ProfileError(
            f"{k} events need {(k - 1) * cooldown_ms} ms of cooldown but only "
            f"{duration_ms} ms are available"
        )
    base = sorted(rng.randint(0, slack) for _ in range(k))
    return [t + i * cooldown_ms for i, t in enumerate(base)]


def generate_fixture(seed: int, profile: FixtureProfile) -> FixtureBundle:
    """Build one synthetic meeting; same seed and profile => identical output."""
    rng = random.Random(seed)
    duration = profile.duration_ms

    if profile.attendee_events > 0 and profile.attendee_devices <= 0:
        raise ProfileError("attendee events requested but no attendee devices")

    record = MeetingRecord(
        meeting_id=f"fx{seed}",
        title=f"Synthetic town hall ({profile.name} profile, seed {seed})",
        date=_FIXED_DATE,
        location="Community center hall A",
        start_epoch_ms=_FIXED_EPOCH_MS,
        duration_ms=duration,
    )

    # transcript: sentences back to back with small gaps, covering the meeting
    sentences = []
    cursor = 0
    while cursor < duration - 8_000:
        length = rng.randint(2_500, 7_000)
        end = min(cursor + length, duration)
        sentences.append({"start_ms": cursor, "end_ms": end, "text": _sentence_text(rng)})
        cursor = end + rng.randint(200, 1_500)
    transcript = {"sentences": sentences}

    # organizer tags: distinct times, any button
    tag_times = sorted(rng.sample(range(duration), profile.organizer_tags))
    events = [
        ClickerEvent(t_ms=t, device_id="org01", role="organizer", button=rng.choice(BUTTONS))
        for t in tag_times
    ]

    # attendee events: per-device spacing keeps every event countable
    if profile.attendee_devices > 0 and profile.attendee_events > 0:
        base, extra = divmod(profile.attendee_events, profile.attendee_devices)
        timed: list[tuple[int, str]] = []
        for d in range(profile.attendee_devices):
            device_id = f"att{d + 1:02d}"
            k = base + (1 if d < extra else 0)
            if k == 0:
                continue
            for t in _attendee_times(rng, k, duration, profile.cooldown_ms):
                timed.append((t, device_id))
        timed.sort()
        buttons = [b for b, n in button_counts(profile.attendee_events, profile.button_mix).items() for _ in range(n)]
        rng.shuffle(buttons)
        for (t, device_id), button in zip(timed, buttons):
            events.append(ClickerEvent(t_ms=t, device_id=device_id, role="attendee", button=button))

    events.sort(key=lambda e: (e.t_ms, e.device_id, e.button))
    return FixtureBundle(
        record=record,
        transcript=transcript,
        events=tuple(events),
        vocab_organizer=default_vocabulary("organizer"),
        vocab_attendee=default_vocabulary("attendee"),
    )


def profile_by_name(name: str) -> FixtureProfile:
    try:
        return PROFILES[name]
    except KeyError:
        raise ProfileError(f"unknown profile {name!r}; available: {', '.join(sorted(PROFILES))}") from None


def zero_attendee(profile: FixtureProfile) -> FixtureProfile:
    return replace(profile, attendee_devices=0, attendee_events=0)
