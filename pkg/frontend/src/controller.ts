import { putLabels } from "./api.js";
import { commitDrafts, effectiveLabels, invalidDraftTopics } from "./state.js";
import type { ExplorerState } from "./state.js";

export type SaveOutcome =
  | { ok: true; saved: number }
  | { ok: false; reason: "empty-label"; topics: number[] }
  | { ok: false; reason: "network"; message: string };

/**
 * Persist the label set. Empty drafts are rejected before any request is
 * made; a failed request leaves every draft (and the dirty flag) untouched
 * so the caller can offer a retry.
 */
export async function saveLabels(state: ExplorerState, baseUrl = ""): Promise<SaveOutcome> {
  const invalid = invalidDraftTopics(state);
  if (invalid.length > 0) {
    return { ok: false, reason: "empty-label", topics: invalid };
  }
  try {
    const result = await putLabels(effectiveLabels(state), baseUrl);
    commitDrafts(state);
    return { ok: true, saved: result.saved };
  } catch (err) {
    return { ok: false, reason: "network", message: err instanceof Error ? err.message : String(err) };
  }
}
