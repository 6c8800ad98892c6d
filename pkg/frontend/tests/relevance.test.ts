import { describe, expect, it } from "vitest";

import { rankTerms } from "../src/relevance.js";
import type { VisData } from "../src/types.js";
import { smallVis } from "./fixtures.js";

describe("rankTerms at the slider extremes", () => {
  it("lambda = 1 reproduces the phi ordering", () => {
    const ranked = rankTerms(smallVis(), 0, 1);
    expect(ranked.map((r) => r.term)).toEqual(["alpha", "beta", "gamma"]);
    expect(ranked.map((r) => r.phi)).toEqual([0.5, 0.3, 0.2]);
    for (const row of ranked) {
      expect(row.relevance).toBeCloseTo(Math.log(row.phi), 12);
    }
  });

  it("lambda = 0 reproduces the lift ordering", () => {
    const ranked = rankTerms(smallVis(), 0, 0);
    expect(ranked.map((r) => r.term)).toEqual(["gamma", "beta", "alpha"]);
    for (const row of ranked) {
      expect(row.relevance).toBeCloseTo(Math.log(row.phi / row.p), 12);
      expect(row.relevance).toBeCloseTo(row.lift, 12);
    }
  });

  it("the two extreme orderings disagree on this fixture", () => {
    const atOne = rankTerms(smallVis(), 0, 1).map((r) => r.term);
    const atZero = rankTerms(smallVis(), 0, 0).map((r) => r.term);
    expect(atOne).not.toEqual(atZero);
  });
});

describe("rankTerms at lambda = 0.6", () => {
  // Hand-evaluated 0.6*ln(phi) + 0.4*ln(phi/p) for the fixture's topic 0.
  const expected: [string, number][] = [
    ["gamma", 0.23263016196113628],
    ["beta", -0.2829387671283178],
    ["alpha", -0.4158883083359672],
  ];

  it("matches the direct-formula oracle", () => {
    const ranked = rankTerms(smallVis(), 0, 0.6);
    expect(ranked.map((r) => r.term)).toEqual(expected.map(([term]) => term));
    ranked.forEach((row, i) => {
      expect(row.relevance).toBeCloseTo(expected[i]![1], 12);
    });
  });

  it("ranks per topic: topic 1 uses its own phi column", () => {
    const ranked = rankTerms(smallVis(), 1, 0.6);
    expect(ranked.map((r) => r.term)).toEqual(["gamma", "beta", "alpha"]);
    expect(ranked[0]!.phi).toBe(0.6);
  });
});

describe("rankTerms contract", () => {
  it("is pure: repeated calls agree and the input is untouched", () => {
    const vis = smallVis();
    const before = JSON.stringify(vis);
    const first = rankTerms(vis, 0, 0.37);
    const second = rankTerms(vis, 0, 0.37);
    expect(second).toEqual(first);
    expect(JSON.stringify(vis)).toBe(before);
  });

  it("truncates to topN", () => {
    expect(rankTerms(smallVis(), 0, 0.6, 2)).toHaveLength(2);
    expect(rankTerms(smallVis(), 0, 0.6, 99)).toHaveLength(3);
  });

  it("breaks exact ties lexicographically", () => {
    const vis: VisData = {
      format_version: 1,
      n_topics: 1,
      topics: [{ id: 0, x: 0, y: 0, prevalence: 1 }],
      terms: [
        { term: "zebra", p: 0.2, saliency: 0 },
        { term: "aardvark", p: 0.2, saliency: 0 },
      ],
      phi: [
        [0, 0, 0.5],
        [0, 1, 0.5],
      ],
    };
    expect(rankTerms(vis, 0, 0.5).map((r) => r.term)).toEqual(["aardvark", "zebra"]);
  });

  it("rejects out-of-range arguments", () => {
    expect(() => rankTerms(smallVis(), 2, 0.5)).toThrow(RangeError);
    expect(() => rankTerms(smallVis(), -1, 0.5)).toThrow(RangeError);
    expect(() => rankTerms(smallVis(), 0, 1.2)).toThrow(RangeError);
    expect(() => rankTerms(smallVis(), 0, Number.NaN)).toThrow(RangeError);
    expect(() => rankTerms(smallVis(), 0, 0.5, 0)).toThrow(RangeError);
  });
});
