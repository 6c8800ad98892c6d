import type { VisData } from "../src/types.js";

/**
 * Three terms whose phi ordering (alpha > beta > gamma in topic 0) is the
 * exact reverse of their lift ordering, so the two slider extremes are
 * distinguishable by order alone.
 */
export function smallVis(): VisData {
  return {
    format_version: 1,
    n_topics: 2,
    topics: [
      { id: 0, x: 0.0, y: 0.0, prevalence: 0.6 },
      { id: 1, x: 1.0, y: 0.5, prevalence: 0.4 },
    ],
    terms: [
      { term: "alpha", p: 0.5, saliency: 0.1 },
      { term: "beta", p: 0.1, saliency: 0.2 },
      { term: "gamma", p: 0.01, saliency: 0.3 },
    ],
    phi: [
      [0, 0, 0.5],
      [0, 1, 0.3],
      [0, 2, 0.2],
      [1, 0, 0.2],
      [1, 1, 0.2],
      [1, 2, 0.6],
    ],
    frames: [
      { frame: "war", profile: [0.75, 0.25] },
      { frame: "tsunami", profile: null },
    ],
  };
}
