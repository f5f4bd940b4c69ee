import type {
  AugmentedDoc,
  ReportDoc,
  SegmentDoc,
  SummaryDoc,
  TalliesResponse,
  TimelineResponse,
  TopicsDoc,
} from "./types.js";
import type { SaveOutcome } from "./editor.js";

export class ApiError extends Error {
  constructor(
    public status: number,
    message: string,
  ) {
    super(message);
  }
}

export interface SummaryParams {
  similarity?: string;
  budget_ratio?: number;
  eps_hit?: number;
  eps_miss?: number;
  damping?: number;
}

export interface TallyFilter {
  labels?: string[];
  tags?: string[];
  topic?: string | null;
}

/** Thin typed client over the service API; every number the UI renders comes
 * from one of these responses. */
export class ApiClient {
  constructor(
    private baseUrl: string,
    private token: string,
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const response = await fetch(this.baseUrl + path, {
      method,
      headers: {
        Authorization: `Bearer ${this.token}`,
        ...(body !== undefined ? { "Content-Type": "application/json" } : {}),
      },
      body: body !== undefined ? JSON.stringify(body) : undefined,
    });
    const text = await response.text();
    if (!response.ok) {
      throw new ApiError(response.status, text);
    }
    return (text ? JSON.parse(text) : undefined) as T;
  }

  augmented(meetingId: string): Promise<AugmentedDoc> {
    return this.request("GET", `/meetings/${meetingId}/augmented`);
  }

  summary(meetingId: string, params: SummaryParams = {}): Promise<SummaryDoc> {
    const qs = new URLSearchParams();
    for (const [key, value] of Object.entries(params)) {
      if (value !== undefined) qs.set(key, String(value));
    }
    const suffix = qs.size > 0 ? `?${qs.toString()}` : "";
    return this.request("GET", `/meetings/${meetingId}/summary${suffix}`);
  }

  topics(meetingId: string): Promise<TopicsDoc> {
    return this.request("GET", `/meetings/${meetingId}/topics`);
  }

  timeline(meetingId: string): Promise<TimelineResponse> {
    return this.request("GET", `/meetings/${meetingId}/timeline`);
  }

  tallies(meetingId: string, filter: TallyFilter = {}): Promise<TalliesResponse> {
    const qs = new URLSearchParams();
    if (filter.labels?.length) qs.set("labels", filter.labels.join(","));
    if (filter.tags?.length) qs.set("tags", filter.tags.join(","));
    if (filter.topic) qs.set("topic", filter.topic);
    const suffix = qs.size > 0 ? `?${qs.toString()}` : "";
    return this.request("GET", `/meetings/${meetingId}/tallies${suffix}`);
  }

  patchSegment(segmentId: string, patch: { organizer_tag?: string; topic?: string }): Promise<SegmentDoc> {
    return this.request("PATCH", `/segments/${segmentId}`, patch);
  }

  report(meetingId: string): Promise<ReportDoc> {
    return this.request("GET", `/meetings/${meetingId}/report`);
  }

  /** Save adapter matching the editor's optimistic-save contract. */
  async saveReport(meetingId: string, body: string, expectedVersion: number): Promise<SaveOutcome> {
    try {
      const saved = await this.request<ReportDoc>("PUT", `/meetings/${meetingId}/report`, {
        body,
        expected_version: expectedVersion,
      });
      return { ok: true, version: saved.version };
    } catch (error) {
      if (error instanceof ApiError) {
        return { ok: false, status: error.status, message: error.message };
      }
      throw error;
    }
  }

  async exportReport(meetingId: string): Promise<string> {
    const response = await fetch(`${this.baseUrl}/meetings/${meetingId}/export`, {
      method: "POST",
      headers: { Authorization: `Bearer ${this.token}` },
    });
    if (!response.ok) throw new ApiError(response.status, await response.text());
    return response.text();
  }
}
