/** Wire formats served by the framescope label server. */

export interface VisTopic {
  id: number;
  x: number;
  y: number;
  prevalence: number;
}

export interface VisTerm {
  term: string;
  /** Marginal corpus probability of the term. */
  p: number;
  saliency: number;
}

export interface FrameOverlay {
  frame: string;
  /** Per-topic share of the frame's matched documents; null when the frame matched nothing. */
  profile: number[] | null;
}

/** Payload of GET /api/vis. `phi` holds sparse (topic, term index, probability) triplets. */
export interface VisData {
  format_version: number;
  n_topics: number;
  topics: VisTopic[];
  terms: VisTerm[];
  phi: [number, number, number][];
  frames?: FrameOverlay[];
}

/** Payload of GET and PUT /api/labels. Keys are topic ids as decimal strings. */
export interface LabelsDoc {
  format_version: number;
  labels: Record<string, { label: string }>;
}
