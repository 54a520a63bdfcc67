// Application state and actions, independent of the DOM.
//
// Token economics are never computed here: `balances` is only ever
// overwritten with figures the server returned (answer/contextualize/vote
// responses or GET /stats/me), so what the user sees is confirmed state.
// Optimistic balance updates are deliberately impossible.

import { ApiClient, ApiError } from "./api";
import type {
  AboutInfo,
  AnswerBody,
  Balances,
  CType,
  LeaderboardEntry,
  Question,
  Reward,
  ViewName,
  Wall,
  WallPost,
} from "./types";

export interface SessionInfo {
  address: string;
  accessKey: string | null;
  cohort: string;
  incentivesEnabled: boolean;
}

export class AppController {
  readonly api: ApiClient;
  session: SessionInfo | null = null;
  view: ViewName = "question";
  questions: Question[] = [];
  questionIndex = 0;
  wall: Wall | null = null;
  leaderboard: LeaderboardEntry[] = [];
  about: AboutInfo | null = null;
  balances: Balances | null = null;
  lastReward: Reward | null = null;
  lastError: string | null = null;

  constructor(api: ApiClient) {
    this.api = api;
  }

  // -- session -----------------------------------------------------------

  async register(pseudonym?: string, cohort?: string): Promise<void> {
    const reg = await this.api.register(pseudonym, cohort);
    this.api.setToken(reg.session.token);
    this.session = {
      address: reg.address,
      accessKey: reg.access_key,
      cohort: reg.cohort,
      incentivesEnabled: reg.incentives_enabled,
    };
    await this.refreshBalances();
  }

  async login(address: string, accessKey: string): Promise<void> {
    const session = await this.api.openSession(address, accessKey);
    this.api.setToken(session.token);
    this.session = { address, accessKey, cohort: "", incentivesEnabled: true };
    await this.refreshBalances();
  }

  get showTokens(): boolean {
    // control cohorts see no token counters at all
    return this.session?.incentivesEnabled ?? false;
  }

  async refreshBalances(): Promise<void> {
    this.balances = await this.api.stats();
  }

  // -- navigation ----------------------------------------------------------

  async showView(view: ViewName): Promise<void> {
    this.view = view;
    this.lastError = null;
    await this.api.navigate(view); // one telemetry event per view change
    if (view === "question") await this.loadQuestions();
    else if (view === "open_feedback") await this.loadWall();
    else if (view === "statistics") await this.loadStatistics();
    else this.about = await this.api.about();
  }

  // -- answer view -----------------------------------------------------------

  async loadQuestions(): Promise<void> {
    const data = await this.api.questions();
    this.questions = data.questions;
    if (this.questionIndex >= this.questions.length) this.questionIndex = 0;
  }

  currentQuestion(): Question | null {
    return this.questions[this.questionIndex] ?? null;
  }

  nextQuestion(): void {
    if (this.questions.length === 0) return;
    this.questionIndex = (this.questionIndex + 1) % this.questions.length;
  }

  previousQuestion(): void {
    if (this.questions.length === 0) return;
    this.questionIndex =
      (this.questionIndex - 1 + this.questions.length) % this.questions.length;
  }

  async submitAnswer(body: AnswerBody): Promise<Reward> {
    const question = this.currentQuestion();
    if (!question) throw new Error("no question selected");
    const result = await this.run(() => this.api.answer(question.question_id, body));
    this.balances = result.balances; // confirmed by the server, never computed
    this.lastReward = result.reward;
    question.answer = result.answer;
    return result.reward;
  }

  contextualizationUsed(ctype: CType): boolean {
    const question = this.currentQuestion();
    return question ? question.contextualized.includes(ctype) : false;
  }

  canContextualize(ctype: CType): boolean {
    const question = this.currentQuestion();
    return question?.answer != null && !this.contextualizationUsed(ctype);
  }

  async contextualize(ctype: CType, value: { rating?: number; text?: string }): Promise<Reward> {
    const question = this.currentQuestion();
    if (!question?.answer) throw new Error("answer the question first");
    const result = await this.run(() =>
      this.api.contextualize(question.answer!.answer_id, ctype, value),
    );
    this.balances = result.balances;
    this.lastReward = result.reward;
    question.contextualized = [...question.contextualized, ctype];
    return result.reward;
  }

  // -- wall view ---------------------------------------------------------------

  async loadWall(): Promise<void> {
    this.wall = await this.api.wall();
  }

  voteDisabledReason(post: WallPost): string | null {
    if (!this.wall || !this.session) return "not signed in";
    if (post.author === this.session.address) return "you wrote this post";
    if (post.my_vote) return `already voted ${post.my_vote}`;
    const cost = this.wall.vote_cost;
    if (cost > 0 && (this.balances?.context ?? 0) < cost) {
      return `needs ${cost} context token${cost === 1 ? "" : "s"}, you have ${this.balances?.context ?? 0}`;
    }
    return null;
  }

  async vote(postId: string, direction: "up" | "down"): Promise<void> {
    const result = await this.run(() => this.api.vote(postId, direction));
    this.balances = result.balances;
    if (this.wall) {
      this.wall = {
        ...this.wall,
        posts: this.wall.posts.map((p) => (p.post_id === postId ? result.post : p)),
      };
      await this.loadWall(); // server re-ranks; mirror its order
    }
  }

  async submitPost(text: string, areaTags: string[]): Promise<void> {
    await this.run(() => this.api.createPost(text, areaTags));
    await this.loadWall();
  }

  async submitComment(postId: string, text: string): Promise<void> {
    await this.run(() => this.api.comment(postId, text));
    await this.loadWall();
  }

  // -- statistics view -------------------------------------------------------------

  async loadStatistics(top = 10): Promise<void> {
    await this.refreshBalances();
    const board = await this.api.leaderboard(top);
    this.leaderboard = board.entries;
  }

  // -- plumbing ----------------------------------------------------------------------

  private async run<T>(action: () => Promise<T>): Promise<T> {
    this.lastError = null;
    try {
      return await action();
    } catch (error) {
      if (error instanceof ApiError) {
        this.lastError = `${error.code}: ${error.message}`;
      } else {
        this.lastError = String(error);
      }
      throw error;
    }
  }
}
