import type { FilteredSegmentDoc } from "./types.js";

/** UI state for one loaded meeting. Filters only ever toggle the visibility
 * flags delivered by the API; tallies are never recomputed client-side. */
export interface FilterSelections {
  labels: string[];
  tags: string[];
  topic: string | null;
}

export interface ViewState {
  meetingId: string | null;
  filters: FilterSelections;
  summaryCollapsed: boolean;
  transcriptCollapsed: boolean;
  scrollTargetSegment: string | null;
  /** Segments force-expanded (e.g. navigation targets of summary clicks). */
  expandedOverrides: ReadonlySet<string>;
}

export function initialViewState(): ViewState {
  return {
    meetingId: null,
    filters: { labels: [], tags: [], topic: null },
    summaryCollapsed: false,
    transcriptCollapsed: false,
    scrollTargetSegment: null,
    expandedOverrides: new Set(),
  };
}

export function setFilters(state: ViewState, filters: Partial<FilterSelections>): ViewState {
  return {
    ...state,
    filters: { ...state.filters, ...filters },
    expandedOverrides: new Set(), // manual filter changes reset overrides
  };
}

export function clearFilters(state: ViewState): ViewState {
  return setFilters(state, { labels: [], tags: [], topic: null });
}

/** Navigate to a segment: record the scroll target and auto-expand it even
 * if the current filter collapsed it. */
export function navigateToSegment(state: ViewState, segmentId: string): ViewState {
  const expanded = new Set(state.expandedOverrides);
  expanded.add(segmentId);
  return { ...state, scrollTargetSegment: segmentId, expandedOverrides: expanded };
}

/** Collapse toggles never touch the scroll target. */
export function toggleSummaryCollapsed(state: ViewState): ViewState {
  return { ...state, summaryCollapsed: !state.summaryCollapsed };
}

export function toggleTranscriptCollapsed(state: ViewState): ViewState {
  return { ...state, transcriptCollapsed: !state.transcriptCollapsed };
}

/** One row of the transcript view: either an expanded segment or a stub
 * standing in for a run of collapsed ones (segments are never removed). */
export type TranscriptRow =
  | { kind: "segment"; segment: FilteredSegmentDoc }
  | { kind: "stub"; collapsedCount: number; segmentIds: string[] };

export function transcriptRows(
  state: ViewState,
  segments: FilteredSegmentDoc[],
): TranscriptRow[] {
  const rows: TranscriptRow[] = [];
  let stub: { collapsedCount: number; segmentIds: string[] } | null = null;

  const flush = () => {
    if (stub) {
      rows.push({ kind: "stub", ...stub });
      stub = null;
    }
  };

  for (const segment of segments) {
    const expanded = segment.visible || state.expandedOverrides.has(segment.segment_id);
    if (expanded) {
      flush();
      rows.push({ kind: "segment", segment });
    } else if (stub) {
      stub.collapsedCount += 1;
      stub.segmentIds.push(segment.segment_id);
    } else {
      stub = { collapsedCount: 1, segmentIds: [segment.segment_id] };
    }
  }
  flush();
  return rows;
}

/** Every segment id delivered by the API, in order, destub or not; used to
 * assert the collapse-not-remove invariant. */
export function rowSegmentIds(rows: TranscriptRow[]): string[] {
  const ids: string[] = [];
  for (const row of rows) {
    if (row.kind === "segment") ids.push(row.segment.segment_id);
    else ids.push(...row.segmentIds);
  }
  return ids;
}
