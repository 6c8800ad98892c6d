import type { VisData } from "./types.js";

export interface RankedTerm {
  term: string;
  /** Index into VisData.terms. */
  index: number;
  phi: number;
  p: number;
  lift: number;
  relevance: number;
}

/**
 * Rank a topic's candidate terms by relevance(w, k | lambda) =
 * lambda * log(phi) + (1 - lambda) * log(phi / p(w)).
 *
 * At lambda = 1 this is a monotone transform of phi, so the ordering equals
 * the plain topic-term ordering; at lambda = 0 it is the lift ordering. The
 * sparse phi triplets cover the top terms under both extremes, so the top-30
 * slice is exact everywhere in between.
 *
 * Pure: same (vis, topic, lambda, topN) always yields the same array and the
 * input is never mutated. Ties break lexicographically so re-renders are
 * stable.
 */
export function rankTerms(vis: VisData, topic: number, lambda: number, topN = 30): RankedTerm[] {
  if (!Number.isInteger(topic) || topic < 0 || topic >= vis.n_topics) {
    throw new RangeError(`topic ${topic} out of range for ${vis.n_topics} topics`);
  }
  if (!Number.isFinite(lambda) || lambda < 0 || lambda > 1) {
    throw new RangeError(`lambda ${lambda} outside [0, 1]`);
  }
  if (!Number.isInteger(topN) || topN <= 0) {
    throw new RangeError(`topN must be a positive integer, got ${topN}`);
  }
  const rows: RankedTerm[] = [];
  for (const [k, index, phi] of vis.phi) {
    if (k !== topic) continue;
    const entry = vis.terms[index];
    if (entry === undefined) {
      throw new RangeError(`phi triplet references term index ${index} beyond the term table`);
    }
    const lift = Math.log(phi / entry.p);
    const relevance = lambda * Math.log(phi) + (1 - lambda) * lift;
    rows.push({ term: entry.term, index, phi, p: entry.p, lift, relevance });
  }
  rows.sort(
    (a, b) => b.relevance - a.relevance || (a.term < b.term ? -1 : a.term > b.term ? 1 : 0),
  );
  return rows.slice(0, topN);
}
