"""Shared fixtures and builders for the test suite."""

from __future__ import annotations

import pytest

from townhall.fixture import PROFILES, generate_fixture
from townhall.model import (
    TranscriptSentence,
    canonical_json,
    default_vocabulary,
)
from townhall.pipeline import PipelineConfig, run_pipeline
from townhall.tokens import content_tokens, word_count


def mk_sentence(sentence_id: str, start_ms: int, end_ms: int, text: str,
                prompted: bool = False) -> TranscriptSentence:
    return TranscriptSentence(
        sentence_id=sentence_id,
        start_ms=start_ms,
        end_ms=end_ms,
        raw_text=text,
        word_count=word_count(text),
        content_tokens=tuple(content_tokens(text)),
        prompted_feedback=prompted,
    )


@pytest.fixture(scope="session")
def field_vocabs():
    return default_vocabulary("organizer"), default_vocabulary("attendee")


@pytest.fixture(scope="session")
def tiny_bundle():
    return generate_fixture(3, PROFILES["tiny"])


@pytest.fixture(scope="session")
def tiny_result(tiny_bundle):
    return run_pipeline(
        tiny_bundle.record,
        canonical_json(tiny_bundle.transcript).encode("utf-8"),
        tiny_bundle.events_csv().encode("utf-8"),
        tiny_bundle.vocab_organizer,
        tiny_bundle.vocab_attendee,
        PipelineConfig(),
    )
