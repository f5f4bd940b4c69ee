import { mmss } from "./format.js";
import type { AugmentedDoc, SummaryDoc } from "./types.js";

/** One interactive summary sentence with its navigation target. */
export interface SummaryItem {
  sentenceId: string;
  segmentId: string | null;
  text: string;
  tMs: number;
  timestamp: string;
}

export function buildSummaryItems(summary: SummaryDoc, augmented: AugmentedDoc): SummaryItem[] {
  const sentences = new Map(augmented.sentences.map((s) => [s.sentence_id, s]));
  const items: SummaryItem[] = [];
  for (const entry of summary.selected) {
    const sentence = sentences.get(entry.sentence_id);
    if (!sentence) continue;
    items.push({
      sentenceId: entry.sentence_id,
      segmentId: entry.segment_id,
      text: sentence.raw_text,
      tMs: sentence.start_ms,
      timestamp: mmss(sentence.start_ms),
    });
  }
  return items;
}

/** Sentence ids to highlight inside the transcript view. */
export function summarySentenceIds(summary: SummaryDoc): Set<string> {
  return new Set(summary.selected.map((entry) => entry.sentence_id));
}
