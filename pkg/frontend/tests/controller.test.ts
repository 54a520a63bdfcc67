import { beforeEach, describe, expect, it } from "vitest";

import { ApiClient, ApiError } from "../src/api";
import { AppController } from "../src/controller";
import {
  balancesFixture,
  installFetchMock,
  questionFixture,
  registrationFixture,
  wallFixture,
  type Call,
} from "./helpers";

function controllerWith(handler: (call: Call) => { status?: number; json: unknown } | undefined) {
  const calls = installFetchMock(handler);
  const controller = new AppController(new ApiClient("http://test"));
  return { controller, calls };
}

describe("session", () => {
  it("register stores the session and fetches confirmed balances", async () => {
    const { controller, calls } = controllerWith((call) => {
      if (call.path === "/register") return { json: registrationFixture("alice") };
      if (call.path === "/stats/me") return { json: balancesFixture({ address: "alice" }) };
      return undefined;
    });
    await controller.register("alice");
    expect(controller.session?.address).toBe("alice");
    expect(controller.showTokens).toBe(true);
    expect(controller.balances?.address).toBe("alice");
    expect(calls.map((c) => c.path)).toEqual(["/register", "/stats/me"]);
  });

  it("control cohort hides token counters", async () => {
    const { controller } = controllerWith((call) => {
      if (call.path === "/register") return { json: registrationFixture("bob", false) };
      if (call.path === "/stats/me") return { json: balancesFixture({ address: "bob" }) };
      return undefined;
    });
    await controller.register("bob", "control");
    expect(controller.showTokens).toBe(false);
  });
});

describe("answer flow", () => {
  let controller: AppController;
  let calls: Call[];

  beforeEach(async () => {
    const serverBalances = { current: balancesFixture({ money: 0 }) };
    ({ controller, calls } = controllerWith((call) => {
      if (call.path === "/register") return { json: registrationFixture() };
      if (call.path === "/stats/me") return { json: serverBalances.current };
      if (call.path === "/events/navigate") return { json: { ok: true } };
      if (call.path === "/questions" && call.method === "GET")
        return { json: { questions: [questionFixture()] } };
      if (call.path === "/questions/q1/answer") {
        serverBalances.current = balancesFixture({ money: 1, redeemable_chf: "0.20" });
        return {
          json: {
            answer: {
              answer_id: "a1",
              question_id: "q1",
              selections: [],
              likert_value: (call.body as { likert_value: number }).likert_value,
              free_text: null,
              timestamp: 1,
            },
            reward: { granted: true, token: "money", amount: 1, failure: null },
            balances: serverBalances.current,
          },
        };
      }
      if (call.path === "/answers/a1/context") {
        serverBalances.current = balancesFixture({
          money: 1,
          context: 1,
          context_earned: 1,
          redeemable_chf: "0.20",
        });
        return {
          json: {
            contextualization: { context_id: "x1" },
            reward: { granted: true, token: "context", amount: 1, failure: null },
            balances: serverBalances.current,
          },
        };
      }
      return undefined;
    }));
    await controller.register();
    await controller.showView("question");
  });

  it("updates displayed balances only from the server response", async () => {
    expect(controller.balances?.money).toBe(0);
    const reward = await controller.submitAnswer({ likert_value: 3 });
    expect(reward.granted).toBe(true);
    expect(controller.balances?.money).toBe(1);
    expect(controller.balances?.redeemable_chf).toBe("0.20");
    // the balance came from the answer response, not a recomputation
    expect(calls.filter((c) => c.path === "/stats/me").length).toBe(1);
  });

  it("tracks contextualization usage to disable buttons after first use", async () => {
    await controller.submitAnswer({ likert_value: 2 });
    expect(controller.canContextualize("importance")).toBe(true);
    await controller.contextualize("importance", { rating: 4 });
    expect(controller.contextualizationUsed("importance")).toBe(true);
    expect(controller.canContextualize("importance")).toBe(false);
    expect(controller.canContextualize("comment")).toBe(true);
    expect(controller.balances?.context).toBe(1);
  });

  it("navigating emits exactly one telemetry event per view change", async () => {
    const navCalls = calls.filter((c) => c.path === "/events/navigate");
    expect(navCalls.length).toBe(1);
    expect(navCalls[0]?.body).toEqual({ view: "question" });
  });

  it("records server rejections for inline display and rethrows", async () => {
    await controller.submitAnswer({ likert_value: 2 });
    installFetchMock(() => ({
      status: 409,
      json: { code: "duplicate-contextualization", message: "already provided" },
    }));
    await expect(controller.contextualize("importance", { rating: 1 })).rejects.toBeInstanceOf(
      ApiError,
    );
    expect(controller.lastError).toContain("duplicate-contextualization");
  });
});

describe("wall flow", () => {
  it("disables voting with an explanation when tokens are short", async () => {
    const post = {
      post_id: "p1",
      author: "someone-else",
      text: "post",
      area_tags: [],
      created_at: 1,
      up_votes: 0,
      down_votes: 0,
      net_score: 0,
      comments: [],
      my_vote: null,
    };
    const { controller } = controllerWith((call) => {
      if (call.path === "/register") return { json: registrationFixture() };
      if (call.path === "/stats/me") return { json: balancesFixture({ context: 0 }) };
      if (call.path === "/events/navigate") return { json: { ok: true } };
      if (call.path === "/wall") return { json: wallFixture({ posts: [post] }) };
      return undefined;
    });
    await controller.register();
    await controller.showView("open_feedback");
    expect(controller.voteDisabledReason(post)).toContain("needs 1 context token");

    controller.balances = balancesFixture({ context: 2 });
    expect(controller.voteDisabledReason(post)).toBeNull();
    expect(controller.voteDisabledReason({ ...post, author: "tester" })).toContain("you wrote");
    expect(controller.voteDisabledReason({ ...post, my_vote: "up" })).toContain("already voted");
  });

  it("vote updates balances from the response and re-syncs the wall order", async () => {
    const post = {
      post_id: "p1",
      author: "someone-else",
      text: "post",
      area_tags: [],
      created_at: 1,
      up_votes: 0,
      down_votes: 0,
      net_score: 0,
      comments: [],
      my_vote: null,
    };
    const voted = { ...post, up_votes: 1, net_score: 1, my_vote: "up" as const };
    const { controller, calls } = controllerWith((call) => {
      if (call.path === "/register") return { json: registrationFixture() };
      if (call.path === "/stats/me") return { json: balancesFixture({ context: 1 }) };
      if (call.path === "/events/navigate") return { json: { ok: true } };
      if (call.path === "/wall" && call.method === "GET")
        return { json: wallFixture({ posts: [voted] }) };
      if (call.path === "/wall/p1/vote")
        return { json: { post: voted, balances: balancesFixture({ context: 0, context_earned: 1 }) } };
      return undefined;
    });
    await controller.register();
    await controller.showView("open_feedback");
    await controller.vote("p1", "up");
    expect(controller.balances?.context).toBe(0);
    expect(controller.wall?.posts[0]?.my_vote).toBe("up");
    expect(calls.filter((c) => c.path === "/wall/p1/vote").length).toBe(1);
  });
});
