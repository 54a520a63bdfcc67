// DOM rendering for the four views. Each mutating click maps to exactly
// one controller action (one API call); after it resolves the app
// re-renders from confirmed state.

import type { AppController } from "./controller";
import type { CType, Question, ViewName, WallPost } from "./types";
import {
  allowsFreeText,
  buildAnswerBody,
  chfLabel,
  likertLabels,
  netScoreLabel,
  optionGroups,
  timestampLabel,
} from "./format";

type Rerender = () => void;

const VIEW_TITLES: Record<ViewName, string> = {
  question: "Answer Questions",
  open_feedback: "Give Open Feedback",
  statistics: "View Statistics",
  about: "About",
};

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function errorBox(message: string | null): HTMLElement {
  const box = el("div", "error-box", message ?? "");
  if (!message) box.style.display = "none";
  return box;
}

function busyGuard(button: HTMLButtonElement, action: () => Promise<void>): void {
  button.onclick = async () => {
    button.disabled = true;
    try {
      await action();
    } catch {
      // controller.lastError carries the message; rerender shows it
    } finally {
      button.disabled = false;
    }
  };
}

export function renderNav(controller: AppController, rerender: Rerender): HTMLElement {
  const nav = el("nav", "topbar");
  for (const view of Object.keys(VIEW_TITLES) as ViewName[]) {
    const button = el("button", controller.view === view ? "nav active" : "nav");
    button.textContent = VIEW_TITLES[view];
    button.dataset.view = view;
    busyGuard(button, async () => {
      await controller.showView(view);
      rerender();
    });
    nav.appendChild(button);
  }
  if (controller.session && controller.showTokens && controller.balances) {
    const badge = el(
      "span",
      "token-badge",
      `${controller.balances.money} money · ${controller.balances.context} context`,
    );
    badge.id = "token-badge";
    nav.appendChild(badge);
  }
  return nav;
}

// -- answer view ------------------------------------------------------------

function answerWidgets(question: Question): HTMLElement {
  const wrap = el("div", "answer-widgets");
  const groups = optionGroups(question);

  if (question.qtype === "likert") {
    const row = el("div", "likert-row");
    likertLabels(question).forEach((label, i) => {
      const lab = el("label", "likert-point");
      const input = el("input");
      input.type = "radio";
      input.name = "likert";
      input.value = String(i);
      lab.appendChild(input);
      lab.appendChild(el("span", undefined, label));
      row.appendChild(lab);
    });
    wrap.appendChild(row);
  }

  if (groups.multi.length > 0) {
    const box = el("fieldset", "option-group");
    box.appendChild(el("legend", undefined, "Pick one or more"));
    for (const option of groups.multi) {
      const lab = el("label", "option");
      const input = el("input");
      input.type = "checkbox";
      input.name = "multi";
      input.value = String(option.index);
      lab.appendChild(input);
      lab.appendChild(el("span", undefined, option.label));
      box.appendChild(lab);
    }
    wrap.appendChild(box);
  }

  if (groups.single.length > 0) {
    const box = el("fieldset", "option-group");
    box.appendChild(
      el("legend", undefined, groups.multi.length > 0 ? "Pick exactly one" : "Pick one"),
    );
    for (const option of groups.single) {
      const lab = el("label", "option");
      const input = el("input");
      input.type = "radio";
      input.name = "single";
      input.value = String(option.index);
      lab.appendChild(input);
      lab.appendChild(el("span", undefined, option.label));
      box.appendChild(lab);
    }
    wrap.appendChild(box);
  }

  if (allowsFreeText(question)) {
    const area = el("textarea", "free-text");
    area.name = "free_text";
    area.placeholder =
      question.qtype === "text-input" ? "Your answer…" : "Anything to add? (optional)";
    wrap.appendChild(area);
  }
  return wrap;
}

function collectBody(question: Question, container: HTMLElement) {
  const picks: number[] = [];
  container
    .querySelectorAll<HTMLInputElement>("input[name=multi]:checked, input[name=single]:checked")
    .forEach((input) => picks.push(Number(input.value)));
  const likertInput = container.querySelector<HTMLInputElement>("input[name=likert]:checked");
  const textArea = container.querySelector<HTMLTextAreaElement>("textarea[name=free_text]");
  return buildAnswerBody(
    question,
    picks,
    likertInput ? Number(likertInput.value) : null,
    textArea?.value ?? "",
  );
}

function contextBar(
  controller: AppController,
  rerender: Rerender,
): HTMLElement {
  const bar = el("div", "context-bar");
  const specs: { ctype: CType; label: string }[] = [
    { ctype: "importance", label: "Importance" },
    { ctype: "satisfaction", label: "Satisfaction" },
    { ctype: "comment", label: "Comment" },
  ];
  for (const spec of specs) {
    const button = el("button", "context-button", spec.label);
    button.dataset.ctype = spec.ctype;
    const used = controller.contextualizationUsed(spec.ctype);
    button.disabled = !controller.canContextualize(spec.ctype);
    if (used) button.title = "already provided for this answer";
    else if (button.disabled) button.title = "answer the question first";
    busyGuard(button, async () => {
      if (spec.ctype === "comment") {
        const text = window.prompt("Your comment on this question:");
        if (!text) return;
        await controller.contextualize("comment", { text });
      } else {
        const raw = window.prompt(`${spec.label} rating, 0 (low) to 4 (high):`);
        if (raw == null) return;
        await controller.contextualize(spec.ctype, { rating: Number(raw) });
      }
      rerender();
    });
    bar.appendChild(button);
  }
  return bar;
}

export function renderAnswerView(controller: AppController, rerender: Rerender): HTMLElement {
  const root = el("section", "view answer-view");
  const question = controller.currentQuestion();
  if (!question) {
    root.appendChild(el("p", "empty", "No questions are open right now."));
    return root;
  }
  root.appendChild(
    el("div", "question-counter", `${controller.questionIndex + 1} / ${controller.questions.length}`),
  );
  root.appendChild(el("h2", "prompt", question.prompt));
  const widgets = answerWidgets(question);
  root.appendChild(widgets);

  if (question.answer) {
    root.appendChild(el("p", "answered-note", "You answered this question; submitting updates your answer."));
  }

  const submit = el("button", "primary", question.answer ? "Update answer" : "Submit answer");
  submit.id = "submit-answer";
  busyGuard(submit, async () => {
    const reward = await controller.submitAnswer(collectBody(question, widgets));
    if (reward.granted && controller.showTokens) {
      controller.lastError = null;
    }
    rerender();
  });
  root.appendChild(submit);

  const nav = el("div", "question-nav");
  const prev = el("button", "ghost", "Previous");
  prev.onclick = () => {
    controller.previousQuestion();
    rerender();
  };
  const next = el("button", "ghost", "Next");
  next.onclick = () => {
    controller.nextQuestion();
    rerender();
  };
  nav.append(prev, next);
  root.appendChild(nav);

  root.appendChild(contextBar(controller, rerender));
  if (controller.lastReward?.granted && controller.showTokens) {
    root.appendChild(
      el("p", "reward-note", `+${controller.lastReward.amount} ${controller.lastReward.token} token`),
    );
  }
  root.appendChild(errorBox(controller.lastError));
  return root;
}

// -- wall view ------------------------------------------------------------------

function renderPost(
  controller: AppController,
  post: WallPost,
  rerender: Rerender,
): HTMLElement {
  const card = el("article", "post");
  card.dataset.postId = post.post_id;

  const voteBox = el("div", "votes");
  const score = el("div", "net-score", netScoreLabel(post.net_score));
  const disabledReason = controller.voteDisabledReason(post);
  const cost = controller.wall?.vote_cost ?? 0;
  for (const direction of ["up", "down"] as const) {
    const button = el("button", `vote ${direction}`, direction === "up" ? "▲" : "▼");
    button.dataset.direction = direction;
    if (controller.showTokens && cost > 0) button.title = `costs ${cost} context token`;
    if (disabledReason) {
      button.disabled = true;
      button.title = disabledReason;
    } else {
      busyGuard(button, async () => {
        await controller.vote(post.post_id, direction);
        rerender();
      });
    }
    if (direction === "up") voteBox.appendChild(button);
    voteBox.appendChild(direction === "up" ? score : button);
  }
  card.appendChild(voteBox);

  const body = el("div", "post-body");
  body.appendChild(el("p", "post-text", post.text));
  const meta = el("div", "post-meta");
  meta.appendChild(el("span", "author", post.author));
  meta.appendChild(el("span", "when", timestampLabel(post.created_at)));
  for (const tag of post.area_tags) meta.appendChild(el("span", "tag", tag));
  body.appendChild(meta);

  const comments = el("div", "comments");
  for (const comment of post.comments) {
    const row = el("div", "comment");
    row.appendChild(el("span", "author", comment.author));
    row.appendChild(el("span", undefined, comment.text));
    comments.appendChild(row);
  }
  const commentForm = el("div", "comment-form");
  const input = el("input", "comment-input");
  input.placeholder = "Add a comment…";
  const send = el("button", "ghost", "Comment");
  busyGuard(send, async () => {
    if (!input.value.trim()) return;
    await controller.submitComment(post.post_id, input.value);
    rerender();
  });
  commentForm.append(input, send);
  comments.appendChild(commentForm);
  body.appendChild(comments);
  card.appendChild(body);
  return card;
}

export function renderWallView(controller: AppController, rerender: Rerender): HTMLElement {
  const root = el("section", "view wall-view");
  const wall = controller.wall;
  if (!wall) {
    root.appendChild(el("p", "empty", "Loading the feedback wall…"));
    return root;
  }

  const composer = el("div", "composer");
  const text = el("textarea", "post-input");
  text.placeholder = "Share feedback with the organization…";
  composer.appendChild(text);
  const tagRow = el("div", "tag-picker");
  for (const tag of wall.area_tags) {
    const lab = el("label", "tag-option");
    const box = el("input");
    box.type = "checkbox";
    box.value = tag;
    lab.append(box, el("span", undefined, tag));
    tagRow.appendChild(lab);
  }
  composer.appendChild(tagRow);
  const publish = el("button", "primary", "Post to the wall");
  publish.id = "submit-post";
  busyGuard(publish, async () => {
    const tags = Array.from(
      tagRow.querySelectorAll<HTMLInputElement>("input:checked"),
      (input) => input.value,
    );
    await controller.submitPost(text.value, tags);
    text.value = "";
    rerender();
  });
  composer.appendChild(publish);
  root.appendChild(composer);

  if (controller.showTokens && wall.vote_cost > 0) {
    root.appendChild(
      el("p", "vote-cost-note", `Votes cost ${wall.vote_cost} context token each.`),
    );
  }
  root.appendChild(errorBox(controller.lastError));

  const list = el("div", "post-list");
  for (const post of wall.posts) list.appendChild(renderPost(controller, post, rerender));
  if (wall.posts.length === 0) list.appendChild(el("p", "empty", "No feedback yet. Be first!"));
  root.appendChild(list);
  return root;
}

// -- statistics view ----------------------------------------------------------------

export function renderStatisticsView(controller: AppController): HTMLElement {
  const root = el("section", "view stats-view");
  const balances = controller.balances;
  if (controller.showTokens && balances) {
    const cards = el("div", "balance-cards");
    const money = el("div", "card");
    money.appendChild(el("h3", undefined, "Money tokens"));
    money.appendChild(el("div", "big", String(balances.money)));
    money.appendChild(el("div", "sub", `redeemable ${chfLabel(balances.redeemable_chf)}`));
    const context = el("div", "card");
    context.appendChild(el("h3", undefined, "Context tokens"));
    context.appendChild(el("div", "big", String(balances.context)));
    context.appendChild(el("div", "sub", `${balances.context_earned} earned overall`));
    cards.append(money, context);
    root.appendChild(cards);
  } else {
    root.appendChild(el("p", "empty", "Your participation is recorded. Thank you!"));
  }

  const board = el("table", "leaderboard");
  board.id = "leaderboard";
  const head = el("tr");
  for (const column of ["#", "Member", "Context earned"]) head.appendChild(el("th", undefined, column));
  board.appendChild(head);
  for (const entry of controller.leaderboard) {
    const row = el("tr", entry.account === controller.session?.address ? "me" : undefined);
    row.appendChild(el("td", undefined, String(entry.rank)));
    row.appendChild(el("td", undefined, entry.account));
    row.appendChild(el("td", undefined, String(entry.context_tokens_earned)));
    board.appendChild(row);
  }
  root.appendChild(board);
  return root;
}

// -- about view -------------------------------------------------------------------------

export function renderAboutView(controller: AppController): HTMLElement {
  const root = el("section", "view about-view");
  root.appendChild(el("h2", undefined, "About this app"));
  root.appendChild(el("p", "about-text", controller.about?.app ?? ""));
  root.appendChild(el("h3", undefined, "Netiquette"));
  root.appendChild(el("p", "netiquette", controller.about?.netiquette ?? ""));
  return root;
}

// -- shell ------------------------------------------------------------------------------

export function renderApp(mount: HTMLElement, controller: AppController): void {
  const rerender = () => renderApp(mount, controller);
  mount.replaceChildren();
  mount.appendChild(renderNav(controller, rerender));
  const main = el("main", "content");
  if (controller.view === "question") main.appendChild(renderAnswerView(controller, rerender));
  else if (controller.view === "open_feedback") main.appendChild(renderWallView(controller, rerender));
  else if (controller.view === "statistics") main.appendChild(renderStatisticsView(controller));
  else main.appendChild(renderAboutView(controller));
  mount.appendChild(main);
}
