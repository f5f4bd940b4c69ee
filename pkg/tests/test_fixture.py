import pytest

from townhall.errors import ProfileError
from townhall.fixture import (
    PROFILES,
    FixtureProfile,
    button_counts,
    generate_fixture,
    profile_by_name,
    zero_attendee,
)
from townhall.ingest import debounce, parse_events
from townhall.model import canonical_json


class TestDeterminism:
    def test_same_seed_identical(self):
        a = generate_fixture(7, PROFILES["tiny"])
        b = generate_fixture(7, PROFILES["tiny"])
        assert canonical_json(a.transcript) == canonical_json(b.transcript)
        assert a.events_csv() == b.events_csv()
        assert a.record == b.record

    def test_different_seed_differs(self):
        a = generate_fixture(7, PROFILES["tiny"])
        b = generate_fixture(8, PROFILES["tiny"])
        assert a.events_csv() != b.events_csv()


@pytest.fixture(scope="module")
def bundle():
    return generate_fixture(7, PROFILES["field"])


class TestFieldProfile:

    def test_organizer_tag_count(self, bundle):
        assert sum(1 for e in bundle.events if e.role == "organizer") == 56

    def test_attendee_event_count(self, bundle):
        assert sum(1 for e in bundle.events if e.role == "attendee") == 492

    def test_button_distribution_matches_field_study(self, bundle):
        counts = {}
        for e in bundle.events:
            if e.role == "attendee":
                counts[e.button] = counts.get(e.button, 0) + 1
        # A=Agree, B=Disagree, C=Unsure, D=Important, E=Confused
        assert counts == {"A": 187, "B": 93, "C": 30, "D": 103, "E": 79}

    def test_device_count(self, bundle):
        devices = {e.device_id for e in bundle.events if e.role == "attendee"}
        assert len(devices) == 22

    def test_all_attendee_events_survive_debounce(self, bundle):
        events = debounce(parse_events(bundle.events_csv().encode()))
        counted = sum(1 for e in events if e.role == "attendee" and e.counted)
        assert counted == 492

    def test_events_within_duration(self, bundle):
        assert all(0 <= e.t_ms <= bundle.record.duration_ms for e in bundle.events)

    def test_transcript_covers_meeting(self, bundle):
        rows = bundle.transcript["sentences"]
        assert rows[0]["start_ms"] == 0
        assert rows[-1]["end_ms"] <= bundle.record.duration_ms
        assert rows[-1]["start_ms"] < bundle.record.duration_ms


class TestProfiles:
    def test_zero_attendee(self):
        bundle = generate_fixture(1, zero_attendee(PROFILES["tiny"]))
        roles = {e.role for e in bundle.events}
        assert roles == {"organizer"}

    def test_infeasible_density_reported(self):
        profile = FixtureProfile(
            name="dense", duration_ms=60_000, attendee_devices=1,
            attendee_events=10, organizer_tags=1,
        )
        with pytest.raises(ProfileError, match="cooldown"):
            generate_fixture(1, profile)

    def test_unknown_profile(self):
        with pytest.raises(ProfileError, match="unknown profile"):
            profile_by_name("nope")

    def test_button_counts_largest_remainder(self):
        counts = button_counts(492, (0.38, 0.19, 0.06, 0.21, 0.16))
        assert counts == {"A": 187, "B": 93, "C": 30, "D": 103, "E": 79}
        assert sum(counts.values()) == 492

    def test_proportions_within_one_percent(self):
        counts = button_counts(492, PROFILES["field"].button_mix)
        for button, frac in zip("ABCDE", PROFILES["field"].button_mix):
            assert abs(counts[button] / 492 - frac) <= 0.01
