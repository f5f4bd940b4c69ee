import type { Button, VocabularyDoc } from "./types.js";

/** Fixed five-color palette; colors attach to labels by their button order
 * in the vocabulary, so a meeting's tag colors are reproducible. */
export const PALETTE = ["#4c78a8", "#f58518", "#e45756", "#72b7b2", "#54a24b"] as const;

export const BUTTON_ORDER: Button[] = ["A", "B", "C", "D", "E"];

export function tagColors(vocab: VocabularyDoc): Map<string, string> {
  const colors = new Map<string, string>();
  BUTTON_ORDER.forEach((button, i) => {
    colors.set(vocab.labels[button], PALETTE[i % PALETTE.length]!);
  });
  return colors;
}

/** Fallback mapping when only label strings are known (sorted order). */
export function labelColors(labels: string[]): Map<string, string> {
  const colors = new Map<string, string>();
  [...labels].sort().forEach((label, i) => {
    colors.set(label, PALETTE[i % PALETTE.length]!);
  });
  return colors;
}
