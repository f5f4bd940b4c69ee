/** Browser entry point: loads one meeting and wires the panels together.
 *
 * URL parameters: ?base=http://127.0.0.1:8077&token=...&meeting=fx7
 */

import { ApiClient } from "./api.js";
import { buildBars, renderBarChartSvg } from "./charts.js";
import {
  EditorState,
  editBody,
  importToEditor,
  initialEditorState,
  rebaseOnto,
  saveEditor,
} from "./editor.js";
import { mmss } from "./format.js";
import { labelColors, tagColors } from "./palette.js";
import {
  ViewState,
  initialViewState,
  navigateToSegment,
  setFilters,
  toggleSummaryCollapsed,
  toggleTranscriptCollapsed,
  transcriptRows,
} from "./state.js";
import { buildSummaryItems, summarySentenceIds } from "./summary.js";
import { buildTimeline, escapeXml, renderTimelineSvg } from "./timeline.js";
import type { AugmentedDoc, SummaryDoc, TalliesResponse } from "./types.js";

interface AppData {
  augmented: AugmentedDoc;
  summary: SummaryDoc;
  tallies: TalliesResponse;
  topics: { rank: number; topic: string; score: number }[];
}

const $ = (id: string): HTMLElement => {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing element #${id}`);
  return el;
};

class App {
  private view: ViewState = initialViewState();
  private editor: EditorState = initialEditorState();
  private data!: AppData;
  private attendeeLabels: string[] = [];
  private organizerLabels: string[] = [];

  constructor(
    private api: ApiClient,
    private meetingId: string,
  ) {}

  async start(): Promise<void> {
    const [augmented, summary, tallies, topics, report] = await Promise.all([
      this.api.augmented(this.meetingId),
      this.api.summary(this.meetingId),
      this.api.tallies(this.meetingId),
      this.api.topics(this.meetingId),
      this.api.report(this.meetingId),
    ]);
    this.data = { augmented, summary, tallies, topics: topics.topics };
    this.view = { ...this.view, meetingId: this.meetingId };
    this.editor = initialEditorState(report.body, report.version);
    const sample = tallies.segments.find((s) => Object.keys(s.tally.counts).length > 0);
    this.attendeeLabels = sample ? Object.keys(sample.tally.counts).sort() : [];
    this.organizerLabels = [...new Set(augmented.tag_timeline.map((t) => t.label))].sort();
    this.renderAll();
  }

  private async refreshTallies(): Promise<void> {
    this.data.tallies = await this.api.tallies(this.meetingId, {
      labels: this.view.filters.labels,
      tags: this.view.filters.tags,
      topic: this.view.filters.topic,
    });
    this.renderTranscript();
  }

  private renderAll(): void {
    $("meeting-title").textContent = this.meetingId;
    this.renderTimelinePanel();
    this.renderTopics();
    this.renderFilters();
    this.renderSummary();
    this.renderTranscript();
    this.renderEditor();
    this.wireGlobalActions();
  }

  private renderTimelinePanel(): void {
    const duration = this.data.augmented.segments.at(-1)?.end_ms ?? 0;
    const colors = labelColors(this.organizerLabels);
    const circles = buildTimeline(this.data.augmented.tag_timeline, duration, colors);
    $("timeline").innerHTML = renderTimelineSvg(circles);
    $("timeline").querySelectorAll("circle").forEach((el) => {
      el.addEventListener("click", () => {
        const segmentId = el.getAttribute("data-segment");
        if (segmentId) this.scrollToSegment(segmentId);
      });
    });
  }

  private renderTopics(): void {
    $("topics").innerHTML = this.data.topics
      .map(
        (t) =>
          `<li><button class="topic-filter" data-topic="${escapeXml(t.topic)}">` +
          `${escapeXml(t.topic)}</button></li>`,
      )
      .join("");
    $("topics").querySelectorAll("button").forEach((el) => {
      el.addEventListener("click", () => {
        const topic = el.getAttribute("data-topic");
        this.view = setFilters(this.view, { topic: topic === this.view.filters.topic ? null : topic });
        void this.refreshTallies();
      });
    });
  }

  private renderFilters(): void {
    const box = (label: string, group: string) =>
      `<label><input type="checkbox" data-group="${group}" value="${escapeXml(label)}"> ${escapeXml(label)}</label>`;
    $("attendee-filters").innerHTML = this.attendeeLabels.map((l) => box(l, "labels")).join("");
    $("organizer-filters").innerHTML = this.organizerLabels.map((l) => box(l, "tags")).join("");
    document.querySelectorAll<HTMLInputElement>("input[data-group]").forEach((input) => {
      input.addEventListener("change", () => {
        const selected = (group: string) =>
          [...document.querySelectorAll<HTMLInputElement>(`input[data-group="${group}"]:checked`)].map(
            (el) => el.value,
          );
        this.view = setFilters(this.view, { labels: selected("labels"), tags: selected("tags") });
        void this.refreshTallies();
      });
    });
  }

  private renderSummary(): void {
    const items = buildSummaryItems(this.data.summary, this.data.augmented);
    $("summary").innerHTML =
      items.length === 0
        ? '<p class="empty">No summary for this meeting.</p>'
        : items
            .map(
              (item, i) =>
                `<p class="summary-sentence" data-segment="${item.segmentId ?? ""}" data-index="${i}">` +
                `<span class="stamp">${item.timestamp}</span> ${escapeXml(item.text)} ` +
                `<button class="import" data-index="${i}" title="import into report">+</button></p>`,
            )
            .join("");
    $("summary").querySelectorAll<HTMLElement>(".summary-sentence").forEach((el) => {
      el.addEventListener("click", () => {
        const segmentId = el.getAttribute("data-segment");
        if (segmentId) this.scrollToSegment(segmentId);
      });
    });
    $("summary").querySelectorAll<HTMLElement>("button.import").forEach((el) => {
      el.addEventListener("click", (event) => {
        event.stopPropagation();
        const item = items[Number(el.getAttribute("data-index"))];
        if (!item) return;
        this.editor = importToEditor(this.editor, item.text, item.segmentId ?? "?", item.tMs);
        this.renderEditor();
      });
    });
  }

  private renderTranscript(): void {
    const highlighted = summarySentenceIds(this.data.summary);
    const sentences = new Map(this.data.augmented.sentences.map((s) => [s.sentence_id, s]));
    const colors = labelColors(this.attendeeLabels);
    const rows = transcriptRows(this.view, this.data.tallies.segments);
    $("transcript").innerHTML = rows
      .map((row) => {
        if (row.kind === "stub") {
          return `<div class="stub">⋯ ${row.collapsedCount} segment(s) filtered</div>`;
        }
        const seg = row.segment;
        const text = seg.sentence_ids
          .map((sid) => {
            const sentence = sentences.get(sid);
            if (!sentence) return "";
            const cls = highlighted.has(sid) ? "in-summary" : "";
            return `<span class="${cls}" data-sentence="${sid}">${escapeXml(sentence.raw_text)}.</span>`;
          })
          .join(" ");
        const bars = buildBars(seg.tally.counts, this.attendeeLabels, colors);
        return (
          `<article class="segment" id="seg-${seg.segment_id}">` +
          `<header><span class="stamp">${mmss(seg.start_ms)}–${mmss(seg.end_ms)}</span>` +
          (seg.organizer_tag ? ` <span class="tag">${escapeXml(seg.organizer_tag)}</span>` : "") +
          (seg.topic ? ` <span class="topic">${escapeXml(seg.topic)}</span>` : "") +
          `<button class="import-seg" data-segment="${seg.segment_id}" data-t="${seg.start_ms}">import</button>` +
          `</header><p>${text}</p>${renderBarChartSvg(bars)}</article>`
        );
      })
      .join("");
    $("transcript").querySelectorAll<HTMLElement>("button.import-seg").forEach((el) => {
      el.addEventListener("click", () => {
        const segmentId = el.getAttribute("data-segment") ?? "?";
        const tMs = Number(el.getAttribute("data-t") ?? 0);
        const seg = this.data.tallies.segments.find((s) => s.segment_id === segmentId);
        const text = (seg?.sentence_ids ?? [])
          .map((sid) => sentences.get(sid)?.raw_text ?? "")
          .join(". ");
        this.editor = importToEditor(this.editor, text, segmentId, tMs);
        this.renderEditor();
      });
    });
    const target = this.view.scrollTargetSegment;
    if (target) {
      document.getElementById(`seg-${target}`)?.scrollIntoView({ block: "center" });
      document.getElementById(`seg-${target}`)?.classList.add("highlight");
    }
  }

  private renderEditor(): void {
    const textarea = $("report-body") as HTMLTextAreaElement;
    textarea.value = this.editor.body;
    $("report-status").textContent = this.editor.conflict
      ? `conflict: ${this.editor.conflict.message} (your text is kept; reload version and save again)`
      : this.editor.dirty
        ? "unsaved changes"
        : `saved (version ${this.editor.version})`;
  }

  private scrollToSegment(segmentId: string): void {
    this.view = navigateToSegment(this.view, segmentId);
    this.renderTranscript();
  }

  private wireGlobalActions(): void {
    ($("report-body") as HTMLTextAreaElement).addEventListener("input", (event) => {
      this.editor = editBody(this.editor, (event.target as HTMLTextAreaElement).value);
      $("report-status").textContent = "unsaved changes";
    });
    $("save-report").addEventListener("click", () => {
      void saveEditor(this.editor, (body, version) =>
        this.api.saveReport(this.meetingId, body, version),
      ).then(async (next) => {
        this.editor = next;
        if (next.conflict) {
          const server = await this.api.report(this.meetingId);
          this.editor = rebaseOnto(this.editor, server.version);
        }
        this.renderEditor();
      });
    });
    $("export-report").addEventListener("click", () => {
      void this.api.exportReport(this.meetingId).then((markdown) => {
        $("print-view").textContent = markdown;
        window.print(); // print stylesheet shows only the report
      });
    });
    $("toggle-summary").addEventListener("click", () => {
      this.view = toggleSummaryCollapsed(this.view);
      $("summary").classList.toggle("collapsed", this.view.summaryCollapsed);
    });
    $("toggle-transcript").addEventListener("click", () => {
      this.view = toggleTranscriptCollapsed(this.view);
      $("transcript").classList.toggle("collapsed", this.view.transcriptCollapsed);
    });
    $("clear-filters").addEventListener("click", () => {
      document
        .querySelectorAll<HTMLInputElement>("input[data-group]")
        .forEach((el) => (el.checked = false));
      this.view = setFilters(this.view, { labels: [], tags: [], topic: null });
      void this.refreshTallies();
    });
  }
}

const params = new URLSearchParams(window.location.search);
const base = params.get("base") ?? "http://127.0.0.1:8077";
const token = params.get("token") ?? "";
const meeting = params.get("meeting") ?? "";
if (meeting) {
  const app = new App(new ApiClient(base, token), meeting);
  app.start().catch((error) => {
    document.body.innerHTML = `<pre class="error">${String(error)}</pre>`;
  });
} else {
  document.body.insertAdjacentHTML(
    "beforeend",
    "<p>Open with ?base=&lt;service url&gt;&amp;token=&lt;bearer token&gt;&amp;meeting=&lt;id&gt;</p>",
  );
}
