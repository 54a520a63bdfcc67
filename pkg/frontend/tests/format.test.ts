import { describe, expect, it } from "vitest";

import {
  allowsFreeText,
  buildAnswerBody,
  chfLabel,
  likertLabels,
  netScoreLabel,
  optionGroups,
} from "../src/format";
import { questionFixture } from "./helpers";

describe("labels", () => {
  it("passes CHF strings through untouched", () => {
    expect(chfLabel("37.80")).toBe("37.80 CHF");
    expect(chfLabel("0.00")).toBe("0.00 CHF");
  });

  it("formats net scores with an explicit sign for positives", () => {
    expect(netScoreLabel(2)).toBe("+2");
    expect(netScoreLabel(0)).toBe("0");
    expect(netScoreLabel(-3)).toBe("-3");
  });

  it("derives likert labels from the scale size", () => {
    expect(likertLabels(questionFixture())).toEqual(["0", "1", "2", "3", "4"]);
    const labelled = questionFixture({ likert_points: 3, options: ["low", "mid", "high"] });
    expect(likertLabels(labelled)).toEqual(["low", "mid", "high"]);
  });
});

describe("option groups", () => {
  it("puts all options in the single group for choice-single", () => {
    const q = questionFixture({ qtype: "choice-single", options: ["a", "b"] });
    const groups = optionGroups(q);
    expect(groups.multi).toEqual([]);
    expect(groups.single.map((o) => o.label)).toEqual(["a", "b"]);
  });

  it("puts all options in the multi group for choice-multiple", () => {
    const q = questionFixture({ qtype: "choice-multiple", options: ["a", "b", "c"] });
    const groups = optionGroups(q);
    expect(groups.multi.length).toBe(3);
    expect(groups.single).toEqual([]);
  });

  it("splits grouped types at single_group_start", () => {
    const q = questionFixture({
      qtype: "choice-multiple-single",
      options: ["a", "b", "c", "d"],
      single_group_start: 2,
    });
    const groups = optionGroups(q);
    expect(groups.multi.map((o) => o.index)).toEqual([0, 1]);
    expect(groups.single.map((o) => o.index)).toEqual([2, 3]);
  });
});

describe("buildAnswerBody", () => {
  it("emits sorted selections for choice questions", () => {
    const q = questionFixture({ qtype: "choice-multiple", options: ["a", "b", "c"] });
    expect(buildAnswerBody(q, [2, 0], null, "")).toEqual({ selections: [0, 2] });
  });

  it("emits likert_value only for likert questions", () => {
    expect(buildAnswerBody(questionFixture(), [], 4, "")).toEqual({ likert_value: 4 });
    expect(buildAnswerBody(questionFixture(), [], null, "")).toEqual({});
  });

  it("keeps free text only where the type allows it, trimmed", () => {
    const text = questionFixture({ qtype: "text-input" });
    expect(buildAnswerBody(text, [], null, "  hello  ")).toEqual({ free_text: "hello" });
    expect(allowsFreeText(text)).toBe(true);

    const combo = questionFixture({ qtype: "choice-single-text", options: ["a", "b"] });
    expect(buildAnswerBody(combo, [1], null, "extra")).toEqual({
      selections: [1],
      free_text: "extra",
    });
    expect(buildAnswerBody(combo, [1], null, "   ")).toEqual({ selections: [1] });

    const plain = questionFixture({ qtype: "choice-single", options: ["a", "b"] });
    expect(allowsFreeText(plain)).toBe(false);
    expect(buildAnswerBody(plain, [0], null, "ignored")).toEqual({ selections: [0] });
  });
});
