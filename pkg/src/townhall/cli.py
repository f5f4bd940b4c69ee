"""Batch command-line front end for the whole pipeline.

Exit codes: 0 success, 1 domain error (single-line `error: ...` on stderr),
2 usage error.
"""

from __future__ import annotations

import functools
import json
import os
import sys
from pathlib import Path

import click

from .align import AugmentedTranscript
from .errors import TownhallError
from .evaluation import (
    ablation_table,
    bleu_n,
    load_corpus_dir,
    metrics_table,
    rouge_n,
    run_ablation,
)
from .fixture import generate_fixture, profile_by_name
from .ingest import debounce, parse_events, parse_transcript
from .model import MeetingRecord, TagVocabulary, canonical_json, default_vocabulary
from .pipeline import PipelineConfig, augment_meeting, summarize_augmented
from .report import render_export, summary_text, write_report_bundle
from .summarize import config_echo_doc
from .topics import extract_topics, topics_doc


def _write_doc(path: Path, doc) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(canonical_json(doc) + "\n", encoding="utf-8")


def _read_vocabularies(path: Path | None) -> tuple[TagVocabulary, TagVocabulary]:
    if path is None:
        return default_vocabulary("organizer"), default_vocabulary("attendee")
    doc = json.loads(path.read_text(encoding="utf-8"))
    return TagVocabulary.from_doc(doc["organizer"]), TagVocabulary.from_doc(doc["attendee"])


def domain_errors(fn):
    """Map domain failures to exit code 1 with a single parseable line."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except BrokenPipeError:
            # downstream pager/head closed the pipe; not an error
            os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
            sys.exit(0)
        except (TownhallError, ValueError, OSError, json.JSONDecodeError, KeyError) as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(1)

    return wrapper


config_options = [
    click.option("--similarity", type=click.Choice(["bm25", "vanilla", "cosine"]), default=None),
    click.option("--budget", "budget_ratio", type=float, default=None, help="Summary budget ratio."),
    click.option("--eps-hit", type=float, default=None, help="Edge factor when feedback prompted."),
    click.option("--eps-miss", type=float, default=None, help="Edge factor otherwise."),
    click.option("--damping", type=float, default=None, help="Fixed-point damping factor."),
    click.option("--cooldown-ms", type=int, default=None, help="Debounce cooldown."),
    click.option("--top-k", type=int, default=None, help="Number of topics to list."),
]


def with_config_options(fn):
    for opt in reversed(config_options):
        fn = opt(fn)
    return fn


def build_config(**overrides) -> PipelineConfig:
    return PipelineConfig().with_overrides(**overrides)


@click.group()
def main():
    """Meeting-feedback toolkit: augment transcripts with clicker feedback,
    summarize, extract topics, evaluate, and serve."""


@main.command("fixture")
@click.option("--seed", type=int, required=True)
@click.option("--profile", "profile_name", default="field", show_default=True)
@click.option("--out", "outdir", type=click.Path(path_type=Path), default=Path("fixture"), show_default=True)
@domain_errors
def fixture_cmd(seed: int, profile_name: str, outdir: Path):
    """Generate a synthetic meeting (transcript, events, metadata, vocab)."""
    bundle = generate_fixture(seed, profile_by_name(profile_name))
    outdir.mkdir(parents=True, exist_ok=True)
    _write_doc(outdir / "transcript.json", bundle.transcript)
    (outdir / "events.csv").write_text(bundle.events_csv(), encoding="utf-8")
    _write_doc(outdir / "meeting.json", bundle.record.to_doc())
    _write_doc(
        outdir / "vocab.json",
        {"organizer": bundle.vocab_organizer.to_doc(), "attendee": bundle.vocab_attendee.to_doc()},
    )
    click.echo(f"fixture written to {outdir}")


@main.command("ingest")
@click.option("--transcript", type=click.Path(exists=True, path_type=Path), required=True)
@click.option("--events", type=click.Path(exists=True, path_type=Path), required=True)
@click.option("--out", type=click.Path(path_type=Path), required=True)
@click.option("--cooldown-ms", type=int, default=None)
@domain_errors
def ingest_cmd(transcript: Path, events: Path, out: Path, cooldown_ms: int | None):
    """Parse and debounce the input files into a normalized document."""
    cfg = build_config(cooldown_ms=cooldown_ms)
    sentences = parse_transcript(transcript.read_bytes())
    evs = debounce(parse_events(events.read_bytes()), cfg.debounce)
    _write_doc(out, {"sentences": [s.to_doc() for s in sentences], "events": [e.to_doc() for e in evs]})
    click.echo(f"ingested {len(sentences)} sentences, {len(evs)} events -> {out}")


@main.command("augment")
@click.option("--transcript", type=click.Path(exists=True, path_type=Path), required=True)
@click.option("--events", type=click.Path(exists=True, path_type=Path), required=True)
@click.option("--meeting", type=click.Path(exists=True, path_type=Path), required=True,
              help="Meeting metadata document.")
@click.option("--vocab", type=click.Path(exists=True, path_type=Path), default=None,
              help="Vocabulary file; field-experiment defaults when omitted.")
@click.option("--out", type=click.Path(path_type=Path), required=True)
@click.option("--cooldown-ms", type=int, default=None)
@domain_errors
def augment_cmd(transcript: Path, events: Path, meeting: Path, vocab: Path | None, out: Path,
                cooldown_ms: int | None):
    """Build the augmented transcript (segments, tallies, topics, timeline)."""
    record = MeetingRecord.from_doc(json.loads(meeting.read_text(encoding="utf-8")))
    vocab_org, vocab_att = _read_vocabularies(vocab)
    cfg = build_config(cooldown_ms=cooldown_ms)
    augmented, _events, _ranked = augment_meeting(
        record, transcript.read_bytes(), events.read_bytes(), vocab_org, vocab_att, cfg
    )
    _write_doc(out, augmented.to_doc())
    click.echo(f"augmented transcript -> {out}")


@main.command("topics")
@click.option("--in", "infile", type=click.Path(exists=True, path_type=Path), required=True,
              help="Augmented transcript document.")
@click.option("--out", type=click.Path(path_type=Path), required=True)
@click.option("--top-k", type=int, default=None)
@domain_errors
def topics_cmd(infile: Path, out: Path, top_k: int | None):
    """Rank discussion topics from an augmented transcript."""
    cfg = build_config(top_k=top_k)
    augmented = AugmentedTranscript.from_doc(json.loads(infile.read_text(encoding="utf-8")))
    ranked = extract_topics(list(augmented.sentences), cfg.topics, cfg.rank)
    listing = topics_doc(augmented.meeting_id, ranked, cfg.topics.top_k)
    _write_doc(out, listing)
    for row in listing["topics"]:
        click.echo(f"{row['rank']:>3}. {row['topic']}  ({row['score']:.4f})")


@main.command("summarize")
@click.option("--in", "infile", type=click.Path(exists=True, path_type=Path), required=True,
              help="Augmented transcript document.")
@click.option("--out", type=click.Path(path_type=Path), required=True,
              help="Summary result document.")
@click.option("--text", "text_out", type=click.Path(path_type=Path), default=None,
              help="Also write the plain-text summary here.")
@with_config_options
@domain_errors
def summarize_cmd(infile: Path, out: Path, text_out: Path | None, **overrides):
    """Produce the feedback-weighted extractive summary."""
    cfg = build_config(**overrides)
    augmented = AugmentedTranscript.from_doc(json.loads(infile.read_text(encoding="utf-8")))
    summary = summarize_augmented(augmented, cfg)
    _write_doc(out, summary.to_doc())
    text = summary_text(augmented, summary)
    if text_out is not None:
        text_out.parent.mkdir(parents=True, exist_ok=True)
        text_out.write_text(text, encoding="utf-8")
    click.echo(text, nl=False)


@main.command("eval")
@click.option("--candidate", type=click.Path(exists=True, path_type=Path), required=True)
@click.option("--reference", type=click.Path(exists=True, path_type=Path), required=True)
@click.option("--out", type=click.Path(path_type=Path), default=None)
@domain_errors
def eval_cmd(candidate: Path, reference: Path, out: Path | None):
    """Score a candidate text against a reference (ROUGE-1/2, BLEU-1..4)."""
    cand = candidate.read_text(encoding="utf-8")
    ref = reference.read_text(encoding="utf-8")
    rouge_scores = [rouge_n(cand, ref, n) for n in (1, 2)]
    bleu_scores = [bleu_n(cand, ref, n) for n in (1, 2, 3, 4)]
    if out is not None:
        _write_doc(out, {
            "rouge": [s.to_doc() for s in rouge_scores],
            "bleu": [s.to_doc() for s in bleu_scores],
        })
    click.echo(metrics_table(rouge_scores, bleu_scores))


@main.command("ablation")
@click.option("--corpus", type=click.Path(exists=True, file_okay=False, path_type=Path), required=True,
              help="Directory of <stem>.transcript.json + <stem>.reference.txt pairs.")
@click.option("--out", type=click.Path(path_type=Path), default=None)
@click.option("--budget", "budget_ratio", type=float, default=None)
@domain_errors
def ablation_cmd(corpus: Path, out: Path | None, budget_ratio: float | None):
    """Compare bm25 / cosine / vanilla similarity on a summary corpus."""
    cfg = build_config(budget_ratio=budget_ratio)
    entries = load_corpus_dir(corpus)
    report = run_ablation(
        entries, cfg.rank, cfg.weights, cfg.selection, cfg.bm25, corpus_id=corpus.name
    )
    if out is not None:
        _write_doc(out, report.to_doc())
    click.echo(ablation_table(report))


@main.command("report")
@click.option("--in", "infile", type=click.Path(exists=True, path_type=Path), required=True,
              help="Augmented transcript document.")
@click.option("--out-dir", type=click.Path(path_type=Path), required=True)
@with_config_options
@domain_errors
def report_cmd(infile: Path, out_dir: Path, **overrides):
    """Render figures and delimited tables for a meeting."""
    cfg = build_config(**overrides)
    augmented = AugmentedTranscript.from_doc(json.loads(infile.read_text(encoding="utf-8")))
    ranked = extract_topics(list(augmented.sentences), cfg.topics, cfg.rank)
    listing = topics_doc(augmented.meeting_id, ranked, cfg.topics.top_k)
    summary = summarize_augmented(augmented, cfg)
    written = write_report_bundle(augmented, listing, summary, out_dir)
    for path in written:
        click.echo(str(path))


@main.command("export")
@click.option("--in", "infile", type=click.Path(exists=True, path_type=Path), required=True,
              help="Augmented transcript document.")
@click.option("--meeting", type=click.Path(exists=True, path_type=Path), required=True)
@click.option("--body", type=click.Path(exists=True, path_type=Path), required=True,
              help="Report body (portable markup).")
@click.option("--out", type=click.Path(path_type=Path), required=True)
@domain_errors
def export_cmd(infile: Path, meeting: Path, body: Path, out: Path):
    """Render the report body into the print-ready export document."""
    augmented = AugmentedTranscript.from_doc(json.loads(infile.read_text(encoding="utf-8")))
    record_doc = json.loads(meeting.read_text(encoding="utf-8"))
    markdown = render_export(record_doc, body.read_text(encoding="utf-8"), augmented)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(markdown, encoding="utf-8")
    click.echo(f"export -> {out}")


@main.command("serve")
@click.option("--config", "config_path", type=click.Path(exists=True, path_type=Path), required=True)
@domain_errors
def serve_cmd(config_path: Path):
    """Run the HTTP service."""
    from .service import serve

    serve(config_path)


# summary config echo is exported for tooling around the CLI
__all__ = ["main", "build_config", "config_echo_doc"]
