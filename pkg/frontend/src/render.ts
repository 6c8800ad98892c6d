import type { RankedTerm } from "./relevance.js";
import type { VisData } from "./types.js";

/** Pure layout math for the SVG views; DOM assembly lives in main.ts. */

export interface CircleSpec {
  id: number;
  cx: number;
  cy: number;
  r: number;
  selected: boolean;
}

export interface BarSpec {
  term: string;
  /** Bar length in pixels, proportional to phi within the ranked slice. */
  width: number;
  phi: number;
  relevance: number;
}

function spread(values: number[]): { lo: number; span: number } {
  const lo = Math.min(...values);
  const span = Math.max(...values) - lo;
  return { lo, span };
}

/**
 * Place one circle per topic on the 2-D map. Circle AREA is proportional to
 * topic prevalence, so r scales with sqrt(prevalence). Topics collapsed onto
 * a single point (or a single topic) land in the middle of the canvas.
 */
export function layoutTopicMap(
  vis: VisData,
  width: number,
  height: number,
  selected: number,
  pad = 48,
): CircleSpec[] {
  const xs = vis.topics.map((t) => t.x);
  const ys = vis.topics.map((t) => t.y);
  const { lo: xLo, span: xSpan } = spread(xs);
  const { lo: yLo, span: ySpan } = spread(ys);
  const maxPrev = Math.max(...vis.topics.map((t) => t.prevalence), 0);
  const rMax = Math.min(width, height) / 8;
  return vis.topics.map((t) => ({
    id: t.id,
    cx: xSpan === 0 ? width / 2 : pad + ((t.x - xLo) / xSpan) * (width - 2 * pad),
    cy: ySpan === 0 ? height / 2 : pad + ((t.y - yLo) / ySpan) * (height - 2 * pad),
    r: maxPrev === 0 ? rMax : rMax * Math.sqrt(t.prevalence / maxPrev),
    selected: t.id === selected,
  }));
}

/** Bars ordered as given (already ranked by relevance); lengths show phi. */
export function layoutTermBars(ranked: RankedTerm[], maxWidth: number): BarSpec[] {
  const maxPhi = Math.max(...ranked.map((r) => r.phi), 0);
  return ranked.map((r) => ({
    term: r.term,
    width: maxPhi === 0 ? 0 : (r.phi / maxPhi) * maxWidth,
    phi: r.phi,
    relevance: r.relevance,
  }));
}

/** Per-topic share for one frame, or null when the frame matched no documents. */
export function frameProfile(vis: VisData, frame: string): number[] | null {
  for (const overlay of vis.frames ?? []) {
    if (overlay.frame === frame) return overlay.profile;
  }
  return null;
}

export function frameNames(vis: VisData): string[] {
  return (vis.frames ?? []).map((overlay) => overlay.frame);
}
