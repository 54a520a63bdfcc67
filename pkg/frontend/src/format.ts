// Presentation helpers. Money amounts arrive pre-computed from the server
// (redeemable_chf is a decimal string); nothing here does token math.

import type { AnswerBody, Question } from "./types";

export function chfLabel(redeemableChf: string): string {
  return `${redeemableChf} CHF`;
}

export function tokenLabel(amount: number, token: string): string {
  return `${amount} ${token} token${amount === 1 ? "" : "s"}`;
}

export function netScoreLabel(net: number): string {
  return net > 0 ? `+${net}` : String(net);
}

export function timestampLabel(ms: number): string {
  return new Date(ms).toISOString().replace("T", " ").slice(0, 16);
}

export interface OptionGroups {
  multi: { index: number; label: string }[];
  single: { index: number; label: string }[];
}

export function optionGroups(question: Question): OptionGroups {
  const split = question.single_group_start;
  const all = question.options.map((label, index) => ({ index, label }));
  if (split == null) {
    const single = question.qtype.startsWith("choice-single");
    return single ? { multi: [], single: all } : { multi: all, single: [] };
  }
  return { multi: all.slice(0, split), single: all.slice(split) };
}

export function allowsFreeText(question: Question): boolean {
  return question.qtype === "text-input" || question.qtype.endsWith("-text");
}

// Collects widget state into the wire shape, dropping empty parts.
export function buildAnswerBody(
  question: Question,
  picks: number[],
  likert: number | null,
  text: string,
): AnswerBody {
  const body: AnswerBody = {};
  if (question.qtype === "likert") {
    if (likert != null) body.likert_value = likert;
  } else if (question.qtype !== "text-input" && picks.length > 0) {
    body.selections = [...picks].sort((a, b) => a - b);
  }
  const trimmed = text.trim();
  if (allowsFreeText(question) && trimmed) body.free_text = trimmed;
  return body;
}

export function likertLabels(question: Question): string[] {
  if (question.options.length === question.likert_points) return question.options;
  return Array.from({ length: question.likert_points }, (_, i) => String(i));
}
