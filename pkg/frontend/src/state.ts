import type { VisData } from "./types.js";

export const DEFAULT_LAMBDA = 0.6;

/**
 * Single source of truth for the page. `draftLabels` holds only entries that
 * differ from `savedLabels`, so `dirty` is simply "any draft exists".
 */
export interface ExplorerState {
  vis: VisData | null;
  selectedTopic: number;
  lambda: number;
  savedLabels: Map<number, string>;
  draftLabels: Map<number, string>;
  dirty: boolean;
}

export function createState(): ExplorerState {
  return {
    vis: null,
    selectedTopic: 0,
    lambda: DEFAULT_LAMBDA,
    savedLabels: new Map(),
    draftLabels: new Map(),
    dirty: false,
  };
}

/** Clip to [0, 1]; a non-finite value falls back to the default rather than NaN-poisoning the UI. */
export function clampLambda(value: number): number {
  if (!Number.isFinite(value)) return DEFAULT_LAMBDA;
  return Math.min(1, Math.max(0, value));
}

export function setLambda(state: ExplorerState, value: number): void {
  state.lambda = clampLambda(value);
}

export function loadVis(state: ExplorerState, vis: VisData): void {
  state.vis = vis;
  state.selectedTopic = 0;
}

function topicCount(state: ExplorerState): number {
  return state.vis ? state.vis.n_topics : 0;
}

export function selectTopic(state: ExplorerState, topic: number): void {
  if (!Number.isInteger(topic) || topic < 0 || topic >= topicCount(state)) {
    throw new RangeError(`topic ${topic} out of range for ${topicCount(state)} topics`);
  }
  state.selectedTopic = topic;
}

/** Client-side validity rule: a label must contain something other than whitespace. */
export function isValidLabel(text: string): boolean {
  return text.trim().length > 0;
}

export function setDraftLabel(state: ExplorerState, topic: number, text: string): void {
  if (!Number.isInteger(topic) || topic < 0 || topic >= topicCount(state)) {
    throw new RangeError(`topic ${topic} out of range for ${topicCount(state)} topics`);
  }
  const saved = state.savedLabels.get(topic) ?? "";
  if (text === saved) {
    state.draftLabels.delete(topic);
  } else {
    state.draftLabels.set(topic, text);
  }
  state.dirty = state.draftLabels.size > 0;
}

/** Text the editor should show for a topic: the draft when one exists, else the saved label. */
export function labelFor(state: ExplorerState, topic: number): string {
  return state.draftLabels.get(topic) ?? state.savedLabels.get(topic) ?? "";
}

/** Topics whose draft would be rejected by the server-side empty-label rule. */
export function invalidDraftTopics(state: ExplorerState): number[] {
  const bad: number[] = [];
  for (const [topic, text] of state.draftLabels) {
    if (!isValidLabel(text)) bad.push(topic);
  }
  return bad.sort((a, b) => a - b);
}

/**
 * The full label set a save should persist: saved labels overlaid with
 * drafts. PUT replaces the whole file, so omitting untouched labels would
 * erase them.
 */
export function effectiveLabels(state: ExplorerState): Map<number, string> {
  const out = new Map<number, string>();
  for (const [topic, text] of state.savedLabels) out.set(topic, text);
  for (const [topic, text] of state.draftLabels) out.set(topic, text.trim());
  return out;
}

/** Overwrite the saved set (from GET /api/labels); drafts for now-identical text dissolve. */
export function applySavedLabels(state: ExplorerState, labels: Map<number, string>): void {
  state.savedLabels = new Map(labels);
  for (const [topic, text] of [...state.draftLabels]) {
    if ((state.savedLabels.get(topic) ?? "") === text) state.draftLabels.delete(topic);
  }
  state.dirty = state.draftLabels.size > 0;
}

/** After a successful PUT: drafts become the saved truth and the page is clean again. */
export function commitDrafts(state: ExplorerState): void {
  state.savedLabels = effectiveLabels(state);
  state.draftLabels.clear();
  state.dirty = false;
}
