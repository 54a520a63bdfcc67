// Typed fetch client. Every server rejection becomes an ApiError carrying
// the structured {code, message} body, so views can render it inline.

import type {
  AboutInfo,
  Answer,
  AnswerBody,
  Balances,
  CType,
  LeaderboardEntry,
  PostComment,
  Question,
  Registration,
  Reward,
  ViewName,
  Wall,
  WallPost,
} from "./types";

export class ApiError extends Error {
  readonly code: string;
  readonly status: number;

  constructor(status: number, code: string, message: string) {
    super(message);
    this.code = code;
    this.status = status;
  }
}

export class ApiClient {
  private readonly base: string;
  private token: string | null = null;

  constructor(baseUrl: string = "") {
    this.base = baseUrl.replace(/\/$/, "");
  }

  setToken(token: string | null): void {
    this.token = token;
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const headers: Record<string, string> = {};
    if (body !== undefined) headers["Content-Type"] = "application/json";
    if (this.token) headers["Authorization"] = `Bearer ${this.token}`;
    const response = await fetch(this.base + path, {
      method,
      headers,
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    let payload: unknown = null;
    try {
      payload = await response.json();
    } catch {
      payload = null;
    }
    if (!response.ok) {
      const err = (payload ?? {}) as { code?: string; message?: string };
      throw new ApiError(response.status, err.code ?? "http-error", err.message ?? response.statusText);
    }
    return payload as T;
  }

  register(pseudonym?: string, cohort?: string): Promise<Registration> {
    const body: Record<string, string> = {};
    if (pseudonym) body.pseudonym = pseudonym;
    if (cohort) body.cohort = cohort;
    return this.request("POST", "/register", body);
  }

  openSession(address: string, accessKey: string): Promise<{ token: string; expires_at: number }> {
    return this.request("POST", "/session", { address, access_key: accessKey });
  }

  questions(): Promise<{ questions: Question[] }> {
    return this.request("GET", "/questions");
  }

  answer(
    questionId: string,
    body: AnswerBody,
  ): Promise<{ answer: Answer; reward: Reward; balances: Balances }> {
    return this.request("POST", `/questions/${encodeURIComponent(questionId)}/answer`, body);
  }

  contextualize(
    answerId: string,
    ctype: CType,
    value: { rating?: number; text?: string },
  ): Promise<{ reward: Reward; balances: Balances }> {
    return this.request("POST", `/answers/${encodeURIComponent(answerId)}/context`, {
      ctype,
      ...value,
    });
  }

  wall(): Promise<Wall> {
    return this.request("GET", "/wall");
  }

  createPost(text: string, areaTags: string[]): Promise<{ post: WallPost }> {
    return this.request("POST", "/wall", { text, area_tags: areaTags });
  }

  vote(postId: string, direction: "up" | "down"): Promise<{ post: WallPost; balances: Balances }> {
    return this.request("POST", `/wall/${encodeURIComponent(postId)}/vote`, { direction });
  }

  comment(postId: string, text: string): Promise<{ comment: PostComment }> {
    return this.request("POST", `/wall/${encodeURIComponent(postId)}/comment`, { text });
  }

  stats(): Promise<Balances> {
    return this.request("GET", "/stats/me");
  }

  leaderboard(top = 10): Promise<{ entries: LeaderboardEntry[] }> {
    return this.request("GET", `/stats/leaderboard?top=${top}`);
  }

  about(): Promise<AboutInfo> {
    return this.request("GET", "/about");
  }

  navigate(view: ViewName): Promise<{ ok: boolean }> {
    return this.request("POST", "/events/navigate", { view });
  }
}
