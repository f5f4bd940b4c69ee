import { provenanceMarker } from "./format.js";

/** Report editor state with optimistic-version saves. A conflicting save
 * never discards local edits: the body stays, the conflict is surfaced. */
export interface EditorState {
  body: string;
  version: number;
  dirty: boolean;
  conflict: { serverVersion: number; message: string } | null;
}

export function initialEditorState(body = "", version = 0): EditorState {
  return { body, version, dirty: false, conflict: null };
}

export function editBody(state: EditorState, body: string): EditorState {
  return { ...state, body, dirty: true };
}

/** Append quoted text with a provenance marker (segment id + timestamp). */
export function importToEditor(
  state: EditorState,
  text: string,
  segmentId: string,
  tMs: number,
): EditorState {
  const quoted = text
    .split("\n")
    .map((line) => `> ${line}`)
    .join("\n");
  const block = `${quoted}\n>\n> — ${provenanceMarker(segmentId, tMs)}\n\n`;
  const body = state.body.length > 0 && !state.body.endsWith("\n\n")
    ? `${state.body}\n\n${block}`
    : state.body + block;
  return { ...state, body, dirty: true };
}

export type SaveOutcome =
  | { ok: true; version: number }
  | { ok: false; status: number; serverVersion?: number; message: string };

export async function saveEditor(
  state: EditorState,
  save: (body: string, expectedVersion: number) => Promise<SaveOutcome>,
): Promise<EditorState> {
  const outcome = await save(state.body, state.version);
  if (outcome.ok) {
    return { ...state, version: outcome.version, dirty: false, conflict: null };
  }
  if (outcome.status === 409) {
    return {
      ...state, // local edits preserved
      conflict: { serverVersion: outcome.serverVersion ?? -1, message: outcome.message },
    };
  }
  return { ...state, conflict: { serverVersion: state.version, message: outcome.message } };
}

/** After the user refetches on a conflict, rebase keeps their text. */
export function rebaseOnto(state: EditorState, serverVersion: number): EditorState {
  return { ...state, version: serverVersion, conflict: null, dirty: true };
}
