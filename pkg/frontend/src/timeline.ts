import type { TimelineEntryDoc } from "./types.js";

/** One interactive circle on the chronological tag track. */
export interface TimelineCircle {
  index: number;
  tMs: number;
  label: string;
  segmentId: string;
  color: string;
  /** Horizontal position in [0, 1] relative to meeting duration. */
  x: number;
}

export function buildTimeline(
  entries: TimelineEntryDoc[],
  durationMs: number,
  colors: Map<string, string>,
): TimelineCircle[] {
  const ordered = [...entries].sort((a, b) => a.t_ms - b.t_ms);
  return ordered.map((entry, index) => ({
    index,
    tMs: entry.t_ms,
    label: entry.label,
    segmentId: entry.segment_id,
    color: colors.get(entry.label) ?? "#888888",
    x: durationMs > 0 ? entry.t_ms / durationMs : 0,
  }));
}

/** SVG markup for the track; each circle carries data-segment for the click
 * handler. An empty timeline renders an empty track. */
export function renderTimelineSvg(
  circles: TimelineCircle[],
  width = 960,
  height = 48,
): string {
  const pad = 12;
  const cy = height / 2;
  const parts = [
    `<svg class="timeline" viewBox="0 0 ${width} ${height}" role="list" aria-label="organizer tags">`,
    `<line x1="${pad}" y1="${cy}" x2="${width - pad}" y2="${cy}" stroke="#ccc" stroke-width="1"/>`,
  ];
  for (const circle of circles) {
    const cx = pad + circle.x * (width - 2 * pad);
    parts.push(
      `<circle role="listitem" data-segment="${circle.segmentId}" data-index="${circle.index}" ` +
        `cx="${cx.toFixed(1)}" cy="${cy}" r="7" fill="${circle.color}">` +
        `<title>${escapeXml(circle.label)}</title></circle>`,
    );
  }
  parts.push("</svg>");
  return parts.join("");
}

export function escapeXml(text: string): string {
  return text
    .replaceAll("&", "&amp;")
    .replaceAll("<", "&lt;")
    .replaceAll(">", "&gt;")
    .replaceAll('"', "&quot;");
}
