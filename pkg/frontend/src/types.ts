// Wire types for the feedledger HTTP API.

export type QType =
  | "choice-single"
  | "choice-multiple"
  | "choice-multiple-single"
  | "choice-multiple-single-text"
  | "choice-multiple-text"
  | "choice-single-text"
  | "likert"
  | "text-input";

export type CType = "importance" | "satisfaction" | "comment";

export type ViewName = "question" | "open_feedback" | "statistics" | "about";

export interface Answer {
  answer_id: string;
  question_id: string;
  selections: number[];
  likert_value: number | null;
  free_text: string | null;
  timestamp: number;
}

export interface Question {
  question_id: string;
  prompt: string;
  qtype: QType;
  options: string[];
  likert_points: number;
  single_group_start: number | null;
  active: boolean;
  answer: Answer | null;
  contextualized: CType[];
}

export interface Balances {
  address: string;
  cohort: string;
  user_class: string;
  money: number;
  context: number;
  context_earned: number;
  redeemable_chf: string;
}

export interface Reward {
  granted: boolean;
  token: string | null;
  amount: number;
  failure: string | null;
}

export interface PostComment {
  comment_id: string;
  author: string;
  text: string;
  created_at: number;
}

export interface WallPost {
  post_id: string;
  author: string;
  text: string;
  area_tags: string[];
  created_at: number;
  up_votes: number;
  down_votes: number;
  net_score: number;
  comments: PostComment[];
  my_vote: "up" | "down" | null;
}

export interface Wall {
  posts: WallPost[];
  vote_cost: number;
  area_tags: string[];
}

export interface LeaderboardEntry {
  rank: number;
  account: string;
  context_tokens_earned: number;
}

export interface Registration {
  address: string;
  access_key: string;
  cohort: string;
  incentives_enabled: boolean;
  session: { token: string; expires_at: number };
}

export interface AboutInfo {
  app: string;
  netiquette: string;
  area_tags: string[];
}

export interface AnswerBody {
  selections?: number[];
  likert_value?: number;
  free_text?: string;
}
