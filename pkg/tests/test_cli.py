import json
from pathlib import Path

import pytest
from click.testing import CliRunner
from fastapi.testclient import TestClient

from townhall.cli import main
from townhall.service import create_app, load_accounts
from townhall.store import DocumentStore

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="module")
def runner():
    return CliRunner()


@pytest.fixture(scope="module")
def workdir(tmp_path_factory, runner):
    """Fixture files plus augmented/summary documents produced by the CLI."""
    root = tmp_path_factory.mktemp("cli")
    fx = root / "fx"
    result = runner.invoke(main, ["fixture", "--seed", "3", "--profile", "tiny", "--out", str(fx)])
    assert result.exit_code == 0, result.output
    result = runner.invoke(main, [
        "augment",
        "--transcript", str(fx / "transcript.json"),
        "--events", str(fx / "events.csv"),
        "--meeting", str(fx / "meeting.json"),
        "--vocab", str(fx / "vocab.json"),
        "--out", str(root / "augmented.json"),
    ])
    assert result.exit_code == 0, result.output
    return root


class TestFixtureCommand:
    def test_writes_all_files(self, workdir):
        fx = workdir / "fx"
        for name in ("transcript.json", "events.csv", "meeting.json", "vocab.json"):
            assert (fx / name).exists()

    def test_deterministic_across_runs(self, runner, tmp_path):
        a, b = tmp_path / "a", tmp_path / "b"
        for out in (a, b):
            result = runner.invoke(main, ["fixture", "--seed", "9", "--profile", "tiny", "--out", str(out)])
            assert result.exit_code == 0
        assert (a / "events.csv").read_bytes() == (b / "events.csv").read_bytes()
        assert (a / "transcript.json").read_bytes() == (b / "transcript.json").read_bytes()

    def test_field_profile_counts(self, runner, tmp_path):
        result = runner.invoke(main, ["fixture", "--seed", "7", "--profile", "field", "--out", str(tmp_path)])
        assert result.exit_code == 0
        rows = (tmp_path / "events.csv").read_text().strip().splitlines()[1:]
        organizer = [r for r in rows if ",organizer," in r]
        attendee = [r for r in rows if ",attendee," in r]
        assert len(organizer) == 56
        assert len(attendee) == 492


class TestAugmentCommand:
    def test_augmented_written_without_summary(self, workdir):
        doc = json.loads((workdir / "augmented.json").read_text())
        assert set(doc) == {"meeting_id", "segments", "sentences", "tag_timeline"}

    def test_usage_error_exit_2(self, runner):
        result = runner.invoke(main, ["augment", "--no-such-flag"])
        assert result.exit_code == 2

    def test_domain_error_exit_1(self, runner, tmp_path, workdir):
        empty = tmp_path / "empty.json"
        empty.write_text('{"sentences": []}')
        result = runner.invoke(main, [
            "augment",
            "--transcript", str(empty),
            "--events", str(workdir / "fx" / "events.csv"),
            "--meeting", str(workdir / "fx" / "meeting.json"),
            "--out", str(tmp_path / "out.json"),
        ])
        assert result.exit_code == 1
        assert result.output.startswith("error:") or "error:" in result.output


class TestSummarizeCommand:
    def test_writes_doc_and_text(self, runner, workdir):
        result = runner.invoke(main, [
            "summarize",
            "--in", str(workdir / "augmented.json"),
            "--similarity", "vanilla",
            "--budget", "0.3",
            "--out", str(workdir / "summary.json"),
            "--text", str(workdir / "summary.txt"),
        ])
        assert result.exit_code == 0, result.output
        doc = json.loads((workdir / "summary.json").read_text())
        assert doc["config"]["similarity"] == "vanilla"
        assert doc["config"]["budget_ratio"] == 0.3
        text = (workdir / "summary.txt").read_text()
        for line in text.strip().splitlines():
            assert line.startswith("[")
            assert " @ " in line.split("]")[0]

    def test_deterministic(self, runner, workdir, tmp_path):
        args = ["summarize", "--in", str(workdir / "augmented.json"), "--out", str(tmp_path / "s.json")]
        assert runner.invoke(main, args).exit_code == 0
        first = (tmp_path / "s.json").read_bytes()
        assert runner.invoke(main, args).exit_code == 0
        assert (tmp_path / "s.json").read_bytes() == first


class TestTopicsCommand:
    def test_lists_ranked_topics(self, runner, workdir):
        result = runner.invoke(main, [
            "topics", "--in", str(workdir / "augmented.json"),
            "--out", str(workdir / "topics.json"),
        ])
        assert result.exit_code == 0, result.output
        doc = json.loads((workdir / "topics.json").read_text())
        assert doc["topics"][0]["rank"] == 1
        assert "parking" in doc["topics"][0]["topic"]


class TestEvalCommand:
    def test_scores_pair(self, runner, tmp_path):
        cand = tmp_path / "c.txt"
        ref = tmp_path / "r.txt"
        cand.write_text("the cat sat")
        ref.write_text("the cat ran")
        result = runner.invoke(main, [
            "eval", "--candidate", str(cand), "--reference", str(ref),
            "--out", str(tmp_path / "scores.json"),
        ])
        assert result.exit_code == 0, result.output
        doc = json.loads((tmp_path / "scores.json").read_text())
        assert doc["rouge"][0]["f1"] == pytest.approx(2 / 3, abs=1e-6)
        assert "ROUGE-1" in result.output
        assert "BLEU-4" in result.output


class TestAblationCommand:
    def test_table_and_doc(self, runner, tmp_path):
        result = runner.invoke(main, [
            "ablation", "--corpus", str(DATA / "corpus"), "--out", str(tmp_path / "ablation.json"),
        ])
        assert result.exit_code == 0, result.output
        assert "bm25" in result.output and "vanilla" in result.output and "cosine" in result.output
        doc = json.loads((tmp_path / "ablation.json").read_text())
        assert set(doc["rows"]) == {"bm25", "cosine", "vanilla"}


class TestReportCommand:
    def test_writes_tables_and_figures(self, runner, workdir):
        out = workdir / "report"
        result = runner.invoke(main, ["report", "--in", str(workdir / "augmented.json"), "--out-dir", str(out)])
        assert result.exit_code == 0, result.output
        for name in ("tallies.csv", "timeline.csv", "topics.csv", "summary.txt",
                      "feedback_totals.png", "timeline.png", "feedback_by_segment.png"):
            assert (out / name).exists(), name
        header = (out / "tallies.csv").read_text().splitlines()[0]
        assert header.startswith("segment_id,start_ms,end_ms,kind,organizer_tag,topic,")
        assert "Agree" in header

    def test_tally_totals_match_augmented(self, workdir):
        import csv

        doc = json.loads((workdir / "augmented.json").read_text())
        expected = sum(sum(s["tally"]["counts"].values()) for s in doc["segments"])
        with open(workdir / "report" / "tallies.csv") as fh:
            rows = list(csv.DictReader(fh))
        labels = [k for k in rows[0] if k not in
                  ("segment_id", "start_ms", "end_ms", "kind", "organizer_tag", "topic")]
        got = sum(int(row[lbl]) for row in rows for lbl in labels)
        assert got == expected


class TestExportCommand:
    def test_round_trip(self, runner, workdir, tmp_path):
        doc = json.loads((workdir / "augmented.json").read_text())
        seg = doc["segments"][0]["segment_id"]
        body = tmp_path / "body.md"
        body.write_text(f"Quote:\n\n> important words\n>\n> — [seg {seg} @ 0:10]\n")
        result = runner.invoke(main, [
            "export",
            "--in", str(workdir / "augmented.json"),
            "--meeting", str(workdir / "fx" / "meeting.json"),
            "--body", str(body),
            "--out", str(tmp_path / "export.md"),
        ])
        assert result.exit_code == 0, result.output
        text = (tmp_path / "export.md").read_text()
        assert "important words" in text
        assert "## Sources" in text
        assert seg in text


class TestCliServiceParity:
    def test_byte_identical_documents(self, runner, workdir, tiny_bundle, tmp_path):
        tokens = tmp_path / "tokens.json"
        tokens.write_text('[{"token": "t", "account_id": "a"}]')
        store = DocumentStore(tmp_path / "store")
        client = TestClient(create_app(store, load_accounts(tokens)))
        resp = client.post(
            "/meetings",
            json={
                "metadata": tiny_bundle.record.to_doc(),
                "transcript": tiny_bundle.transcript,
                "events_csv": tiny_bundle.events_csv(),
                "vocabularies": {
                    "organizer": tiny_bundle.vocab_organizer.to_doc(),
                    "attendee": tiny_bundle.vocab_attendee.to_doc(),
                },
            },
            headers={"Authorization": "Bearer t"},
        )
        assert resp.status_code == 201
        mid = resp.json()["meeting_id"]

        cli_doc = (workdir / "augmented.json").read_text().rstrip("\n")
        api_doc = client.get(f"/meetings/{mid}/augmented",
                             headers={"Authorization": "Bearer t"}).text
        assert cli_doc == api_doc

        args = ["summarize", "--in", str(workdir / "augmented.json"), "--out", str(tmp_path / "s.json")]
        assert runner.invoke(main, args).exit_code == 0
        cli_summary = (tmp_path / "s.json").read_text().rstrip("\n")
        api_summary = client.get(f"/meetings/{mid}/summary",
                                 headers={"Authorization": "Bearer t"}).text
        assert cli_summary == api_summary
