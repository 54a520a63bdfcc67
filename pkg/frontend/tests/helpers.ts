// Shared test scaffolding: a scripted fetch replacement and fixture data.

import type { Balances, Question, Wall } from "../src/types";

export interface Call {
  method: string;
  path: string;
  body: unknown;
}

export type Handler = (call: Call) => { status?: number; json: unknown } | undefined;

export function installFetchMock(handler: Handler): Call[] {
  const calls: Call[] = [];
  globalThis.fetch = (async (input: RequestInfo | URL, init?: RequestInit) => {
    const url = typeof input === "string" ? input : input.toString();
    const path = url.replace(/^https?:\/\/[^/]+/, "");
    const call: Call = {
      method: init?.method ?? "GET",
      path,
      body: init?.body ? JSON.parse(init.body as string) : undefined,
    };
    calls.push(call);
    const result = handler(call);
    if (!result) {
      return new Response(JSON.stringify({ code: "unknown-route", message: path }), {
        status: 404,
        headers: { "Content-Type": "application/json" },
      });
    }
    return new Response(JSON.stringify(result.json), {
      status: result.status ?? 200,
      headers: { "Content-Type": "application/json" },
    });
  }) as typeof fetch;
  return calls;
}

export function balancesFixture(overrides: Partial<Balances> = {}): Balances {
  return {
    address: "tester",
    cohort: "treatment",
    user_class: "user",
    money: 0,
    context: 0,
    context_earned: 0,
    redeemable_chf: "0.00",
    ...overrides,
  };
}

export function questionFixture(overrides: Partial<Question> = {}): Question {
  return {
    question_id: "q1",
    prompt: "How satisfied are you with the opening hours?",
    qtype: "likert",
    options: [],
    likert_points: 5,
    single_group_start: null,
    active: true,
    answer: null,
    contextualized: [],
    ...overrides,
  };
}

export function wallFixture(overrides: Partial<Wall> = {}): Wall {
  return {
    posts: [],
    vote_cost: 1,
    area_tags: ["opening-hours", "collections"],
    ...overrides,
  };
}

export function registrationFixture(address = "tester", incentives = true) {
  return {
    address,
    access_key: "key-123",
    cohort: incentives ? "treatment" : "control",
    incentives_enabled: incentives,
    session: { token: "tok-abc", expires_at: 9_999_999_999_999 },
  };
}
