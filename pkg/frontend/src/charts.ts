import { escapeXml } from "./timeline.js";

/** One bar of a per-segment feedback chart. Values are copied verbatim from
 * the API tally payload; the chart is read-only by construction. */
export interface Bar {
  label: string;
  value: number;
  color: string;
}

export function buildBars(
  counts: Record<string, number>,
  labelOrder: string[],
  colors: Map<string, string>,
): Bar[] {
  return labelOrder.map((label) => ({
    label,
    value: counts[label] ?? 0,
    color: colors.get(label) ?? "#888888",
  }));
}

/** Horizontal-axis bar chart; zero-value bars keep their labels visible. */
export function renderBarChartSvg(bars: Bar[], width = 220, height = 90): string {
  const maxValue = Math.max(1, ...bars.map((b) => b.value));
  const labelBand = 16;
  const plotHeight = height - labelBand - 14;
  const bandWidth = bars.length > 0 ? width / bars.length : width;
  const parts = [
    `<svg class="tally-chart" viewBox="0 0 ${width} ${height}" role="img" aria-label="attendee feedback">`,
  ];
  bars.forEach((bar, i) => {
    const barHeight = (bar.value / maxValue) * plotHeight;
    const x = i * bandWidth + bandWidth * 0.15;
    const barWidth = bandWidth * 0.7;
    const y = 14 + (plotHeight - barHeight);
    parts.push(
      `<rect data-label="${escapeXml(bar.label)}" data-value="${bar.value}" ` +
        `x="${x.toFixed(1)}" y="${y.toFixed(1)}" width="${barWidth.toFixed(1)}" ` +
        `height="${barHeight.toFixed(1)}" fill="${bar.color}"/>`,
      `<text x="${(x + barWidth / 2).toFixed(1)}" y="${y - 3}" text-anchor="middle" ` +
        `font-size="9">${bar.value}</text>`,
      `<text x="${(i * bandWidth + bandWidth / 2).toFixed(1)}" y="${height - 4}" ` +
        `text-anchor="middle" font-size="8">${escapeXml(bar.label)}</text>`,
    );
  });
  parts.push("</svg>");
  return parts.join("");
}
