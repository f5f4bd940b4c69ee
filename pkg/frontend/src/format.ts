/** Shared formatting helpers. */

export function mmss(ms: number): string {
  const minutes = Math.floor(ms / 60_000);
  const seconds = Math.floor((ms % 60_000) / 1_000);
  return `${minutes}:${String(seconds).padStart(2, "0")}`;
}

/** Provenance marker appended to editor imports; the service export turns
 * these into footnoted citations. */
export function provenanceMarker(segmentId: string, tMs: number): string {
  return `[seg ${segmentId} @ ${mmss(tMs)}]`;
}
