/** Payload types for the townhall HTTP API (canonical serialization). */

export type Button = "A" | "B" | "C" | "D" | "E";

export interface VocabularyDoc {
  role: "organizer" | "attendee";
  labels: Record<Button, string>;
}

export interface TallyDoc {
  counts: Record<string, number>;
}

export interface SegmentDoc {
  segment_id: string;
  start_ms: number;
  end_ms: number;
  kind: "tag_anchored" | "filler";
  organizer_tag: string | null;
  sentence_ids: string[];
  topic: string | null;
  tally: TallyDoc;
}

export interface SentenceDoc {
  sentence_id: string;
  start_ms: number;
  end_ms: number;
  raw_text: string;
  word_count: number;
  content_tokens: string[];
  prompted_feedback: boolean;
}

export interface TimelineEntryDoc {
  t_ms: number;
  label: string;
  segment_id: string;
}

export interface AugmentedDoc {
  meeting_id: string;
  segments: SegmentDoc[];
  sentences: SentenceDoc[];
  tag_timeline: TimelineEntryDoc[];
}

export interface SummarySelectedDoc {
  sentence_id: string;
  score: number;
  segment_id: string | null;
}

export interface SummaryDoc {
  selected: SummarySelectedDoc[];
  total_words: number;
  budget_words: number;
  config: Record<string, unknown>;
  converged: boolean;
}

export interface TopicsDoc {
  meeting_id: string;
  topics: { rank: number; topic: string; score: number }[];
}

export interface TimelineResponse {
  meeting_id: string;
  timeline: TimelineEntryDoc[];
}

export type FilteredSegmentDoc = SegmentDoc & { visible: boolean };

export interface TalliesResponse {
  meeting_id: string;
  filter: { labels: string[]; tags: string[]; topic: string | null };
  segments: FilteredSegmentDoc[];
}

export interface ReportDoc {
  report_id: string;
  meeting_id: string;
  body: string;
  version: number;
  updated_at: string | null;
}
