"""Report outputs: plain-text summary, delimited tables, figures, and export.

The CLI `report` path writes CSV tables next to rendered matplotlib figures;
`export` renders the organizer's report body into portable markup with the
provenance markers collected into a sources section.
"""

from __future__ import annotations

import csv
import io
import re
from pathlib import Path

from .align import AugmentedTranscript
from .summarize import SummaryResult

# fixed palette, assigned by label order (mirrors the UI's tag colors)
PALETTE = ("#4c78a8", "#f58518", "#e45756", "#72b7b2", "#54a24b")

_MARKER_RE = re.compile(r"\[seg ([^\s\]]+) @ (\d+:\d{2})\]")


def format_mmss(ms: int) -> str:
    return f"{ms // 60_000}:{(ms % 60_000) // 1_000:02d}"


def provenance_marker(segment_id: str, start_ms: int) -> str:
    return f"[seg {segment_id} @ {format_mmss(start_ms)}]"


def summary_text(augmented: AugmentedTranscript, summary: SummaryResult) -> str:
    """One selected sentence per line, prefixed by its segment and time."""
    by_id = {s.sentence_id: s for s in augmented.sentences}
    lines = []
    for entry in summary.selected:
        sent = by_id[entry.sentence_id]
        lines.append(f"[{entry.segment_id} @ {format_mmss(sent.start_ms)}] {sent.raw_text}")
    return "\n".join(lines) + "\n"


def _attendee_labels(augmented: AugmentedTranscript) -> list[str]:
    labels: set[str] = set()
    for seg in augmented.segments:
        labels.update(seg.tally.counts)
    return sorted(labels)


def tallies_csv(augmented: AugmentedTranscript) -> str:
    labels = _attendee_labels(augmented)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["segment_id", "start_ms", "end_ms", "kind", "organizer_tag", "topic", *labels])
    for seg in augmented.segments:
        writer.writerow(
            [
                seg.segment_id,
                seg.start_ms,
                seg.end_ms,
                seg.kind,
                seg.organizer_tag or "",
                seg.topic or "",
                *[seg.tally.counts.get(lbl, 0) for lbl in labels],
            ]
        )
    return buf.getvalue()


def timeline_csv(augmented: AugmentedTranscript) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["t_ms", "label", "segment_id"])
    for entry in augmented.tag_timeline:
        writer.writerow([entry.t_ms, entry.label, entry.segment_id])
    return buf.getvalue()


def topics_csv(topics_listing: dict) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["rank", "topic", "score"])
    for row in topics_listing["topics"]:
        writer.writerow([row["rank"], row["topic"], row["score"]])
    return buf.getvalue()


def _figure_modules():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def fig_feedback_totals(augmented: AugmentedTranscript, path: Path):
    plt = _figure_modules()
    labels = _attendee_labels(augmented)
    totals = [sum(seg.tally.counts.get(lbl, 0) for seg in augmented.segments) for lbl in labels]
    fig, ax = plt.subplots(figsize=(6, 3.5))
    ax.bar(labels, totals, color=[PALETTE[i % len(PALETTE)] for i in range(len(labels))])
    ax.set_ylabel("counted clicks")
    ax.set_title("Attendee feedback totals")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def fig_timeline(augmented: AugmentedTranscript, path: Path):
    plt = _figure_modules()
    labels = sorted({e.label for e in augmented.tag_timeline})
    color_of = {lbl: PALETTE[i % len(PALETTE)] for i, lbl in enumerate(labels)}
    fig, ax = plt.subplots(figsize=(8, 2.8))
    for entry in augmented.tag_timeline:
        y = labels.index(entry.label)
        ax.scatter(entry.t_ms / 60_000, y, color=color_of[entry.label], s=36, zorder=3)
    ax.set_yticks(range(len(labels)))
    ax.set_yticklabels(labels)
    ax.set_xlabel("meeting time (minutes)")
    ax.set_title("Organizer tags")
    ax.grid(axis="x", linewidth=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def fig_feedback_by_segment(augmented: AugmentedTranscript, path: Path):
    plt = _figure_modules()
    labels = _attendee_labels(augmented)
    xs = range(len(augmented.segments))
    fig, ax = plt.subplots(figsize=(9, 3.5))
    bottom = [0] * len(augmented.segments)
    for i, lbl in enumerate(labels):
        heights = [seg.tally.counts.get(lbl, 0) for seg in augmented.segments]
        ax.bar(xs, heights, bottom=bottom, label=lbl, color=PALETTE[i % len(PALETTE)], width=1.0)
        bottom = [b + h for b, h in zip(bottom, heights)]
    ax.set_xlabel("segment index")
    ax.set_ylabel("counted clicks")
    ax.set_title("Feedback per segment")
    ax.legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def write_report_bundle(
    augmented: AugmentedTranscript,
    topics_listing: dict,
    summary: SummaryResult,
    outdir: Path,
) -> list[Path]:
    """Write the delimited tables, the plain-text summary, and the figures."""
    outdir.mkdir(parents=True, exist_ok=True)
    written = []

    def emit(name: str, text: str):
        path = outdir / name
        path.write_text(text, encoding="utf-8")
        written.append(path)

    emit("tallies.csv", tallies_csv(augmented))
    emit("timeline.csv", timeline_csv(augmented))
    emit("topics.csv", topics_csv(topics_listing))
    emit("summary.txt", summary_text(augmented, summary))

    for name, render in (
        ("feedback_totals.png", fig_feedback_totals),
        ("timeline.png", fig_timeline),
        ("feedback_by_segment.png", fig_feedback_by_segment),
    ):
        path = outdir / name
        render(augmented, path)
        written.append(path)
    return written


def render_export(record_doc: dict, body: str, augmented: AugmentedTranscript | None = None) -> str:
    """Portable-markup export: metadata header, the report body verbatim, and
    a sources section compiled from `[seg <id> @ <mm:ss>]` markers."""
    lines = [
        f"# {record_doc['title']}",
        "",
        f"*{record_doc['date']} — {record_doc['location']}*",
        "",
        body.rstrip("\n"),
    ]
    markers = []
    seen = set()
    for segment_id, stamp in _MARKER_RE.findall(body):
        if (segment_id, stamp) not in seen:
            seen.add((segment_id, stamp))
            markers.append((segment_id, stamp))
    if markers:
        segments = {s.segment_id: s for s in augmented.segments} if augmented else {}
        lines += ["", "---", "", "## Sources", ""]
        for i, (segment_id, stamp) in enumerate(markers, start=1):
            seg = segments.get(segment_id)
            detail = ""
            if seg is not None:
                bits = [b for b in (seg.organizer_tag, seg.topic) if b]
                if bits:
                    detail = f" ({'; '.join(bits)})"
            lines.append(f"{i}. Transcript segment `{segment_id}` at {stamp}{detail}")
    return "\n".join(lines) + "\n"
