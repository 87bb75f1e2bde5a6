import { describe, expect, it } from "vitest";

import { TutorApi } from "../src/api.js";
import { App } from "../src/app.js";
import {
  fakeFetch,
  makePage,
  PROFILE,
  query,
  queryAll,
  submitForm,
  turnPayload,
  until,
} from "./helpers.js";

const CREATED = { status: 201, body: { v: 1, session_id: "s1", profile: PROFILE } };

function appWith(routes: Parameters<typeof fakeFetch>[0], hash = "") {
  const page = makePage(hash);
  const { fetchFn, calls } = fakeFetch(routes);
  const app = new App(page.root, new TutorApi("http://api.test", fetchFn), { hash });
  return { page, app, calls };
}

function setValue(root: HTMLElement, selector: string, value: string): void {
  query<HTMLTextAreaElement | HTMLInputElement>(root, selector).value = value;
}

async function intake(page: ReturnType<typeof makePage>, root: HTMLElement): Promise<void> {
  setValue(root, "#intake-text", "Hi, I'm Sam.");
  submitForm(root, page, "intake-form");
  await until(() => !query<HTMLElement>(root, "#session-section").hidden);
}

describe("intake flow", () => {
  it("renders the four-category profile card after intake", async () => {
    const { page, app } = appWith({ "POST /sessions": () => CREATED });
    await intake(page, app.ui.root);
    const card = query<HTMLElement>(app.ui.root, "#profile-card");
    for (const value of Object.values(PROFILE)) {
      expect(card.textContent).toContain(value);
    }
    expect(query<HTMLElement>(app.ui.root, "#empty-state").hidden).toBe(false);
  });

  it("blocks an empty intake client-side without calling the API", async () => {
    const { page, app, calls } = appWith({ "POST /sessions": () => CREATED });
    setValue(app.ui.root, "#intake-text", "   ");
    submitForm(app.ui.root, page, "intake-form");
    await until(() => !query<HTMLElement>(app.ui.root, "#intake-error").hidden);
    expect(calls).toHaveLength(0);
    expect(query<HTMLElement>(app.ui.root, "#session-section").hidden).toBe(true);
  });
});

describe("turn cards", () => {
  it("shows the vocabulary panel for a pre-writing turn", async () => {
    const { page, app } = appWith({
      "POST /sessions": () => CREATED,
      "POST /sessions/s1/turns": () => ({ status: 200, body: turnPayload() }),
    });
    await intake(page, app.ui.root);
    setValue(app.ui.root, "#question-input", "Which angle should I take?");
    submitForm(app.ui.root, page, "turn-form");
    await until(() => queryAll(app.ui.root, ".turn-card").length === 1);

    const card = query<HTMLElement>(app.ui.root, ".turn-card");
    expect(query<HTMLElement>(card, ".stage-badge").textContent).toBe("Pre-writing");
    const chips = queryAll(card, ".vocab-chip");
    expect(chips).toHaveLength(1);
    expect(chips[0].textContent).toContain("thesis");
    expect(chips[0].textContent).toContain("an unproved statement");
  });

  it("hides the vocabulary panel and shows feedback for a revision turn", async () => {
    const { page, app } = appWith({
      "POST /sessions": () => CREATED,
      "POST /sessions/s1/turns": () => ({
        status: 200,
        body: turnPayload({
          stage: "revision",
          vocab: [],
          writing: "my tightened draft",
          feedback: { feedback: "answer the objection", criteria_used: "rubric" },
        }),
      }),
    });
    await intake(page, app.ui.root);
    setValue(app.ui.root, "#writing-input", "my tightened draft");
    submitForm(app.ui.root, page, "turn-form");
    await until(() => queryAll(app.ui.root, ".turn-card").length === 1);

    const card = query<HTMLElement>(app.ui.root, ".turn-card");
    expect(query<HTMLElement>(card, ".stage-badge").textContent).toBe("Revision");
    expect(queryAll(card, ".vocab-panel")).toHaveLength(0);
    expect(query<HTMLElement>(card, ".feedback").textContent).toContain("answer the objection");
  });

  it("blocks a fully empty turn client-side", async () => {
    const { page, app, calls } = appWith({ "POST /sessions": () => CREATED });
    await intake(page, app.ui.root);
    submitForm(app.ui.root, page, "turn-form");
    await until(() => !query<HTMLElement>(app.ui.root, "#turn-error").hidden);
    expect(calls).toEqual(["POST /sessions"]);
  });

  it("ignores resubmission while a turn is in flight", async () => {
    let release: (() => void) | null = null;
    const gate = new Promise<void>((resolve) => {
      release = resolve;
    });
    const { fetchFn, calls } = fakeFetch({
      "POST /sessions": () => CREATED,
      "POST /sessions/s1/turns": () => ({ status: 200, body: turnPayload() }),
    });
    const gated: typeof fetchFn = async (input, init) => {
      if ((init?.method ?? "GET") === "POST" && input.endsWith("/turns")) {
        await gate;
      }
      return fetchFn(input, init);
    };
    const page = makePage();
    const app = new App(page.root, new TutorApi("http://api.test", gated), { hash: "" });
    await intake(page, app.ui.root);

    setValue(app.ui.root, "#question-input", "q");
    submitForm(app.ui.root, page, "turn-form");
    submitForm(app.ui.root, page, "turn-form"); // second click while pending
    expect(query<HTMLButtonElement>(app.ui.root, "#turn-submit").disabled).toBe(true);
    release!();
    await until(() => queryAll(app.ui.root, ".turn-card").length === 1);
    expect(calls.filter((key) => key.endsWith("/turns"))).toHaveLength(1);
    expect(query<HTMLButtonElement>(app.ui.root, "#turn-submit").disabled).toBe(false);
  });
});

describe("session history view", () => {
  it("shows an empty-state message for a fresh session", async () => {
    const { page, app } = appWith(
      {
        "GET /sessions/s1": () => ({
          status: 200,
          body: { v: 1, session_id: "s1", profile: PROFILE, turns: [] },
        }),
      },
      "#s=s1",
    );
    await app.start();
    expect(query<HTMLElement>(app.ui.root, "#empty-state").hidden).toBe(false);
    expect(queryAll(app.ui.root, ".turn-card")).toHaveLength(0);
    void page;
  });

  it("renders three persisted turns as three ordered cards", async () => {
    const turns = [1, 2, 3].map((index) =>
      turnPayload({ turn_index: index, stage: "drafting", vocab: [] }),
    );
    const { app } = appWith(
      {
        "GET /sessions/s1": () => ({
          status: 200,
          body: { v: 1, session_id: "s1", profile: PROFILE, turns },
        }),
      },
      "#s=s1",
    );
    await app.start();
    const cards = queryAll(app.ui.root, ".turn-card");
    expect(cards.map((card) => (card as HTMLElement).dataset.turn)).toEqual(["1", "2", "3"]);
  });
});

describe("error surface", () => {
  it("shows a retry banner on 502 and retries the submission", async () => {
    let failures = 1;
    const { page, app, calls } = appWith({
      "POST /sessions": () => CREATED,
      "POST /sessions/s1/turns": () => {
        if (failures > 0) {
          failures -= 1;
          return {
            status: 502,
            body: { error: { code: "UpstreamError", message: "backend down", retryable: true } },
          };
        }
        return { status: 200, body: turnPayload() };
      },
    });
    await intake(page, app.ui.root);
    setValue(app.ui.root, "#question-input", "q");
    submitForm(app.ui.root, page, "turn-form");
    await until(() => !query<HTMLElement>(app.ui.root, "#error-banner").hidden);
    expect(query<HTMLElement>(app.ui.root, "#banner-message").textContent).toContain("backend down");
    expect(query<HTMLButtonElement>(app.ui.root, "#banner-retry").hidden).toBe(false);

    const win = page.window as unknown as { Event: typeof Event };
    query<HTMLButtonElement>(app.ui.root, "#banner-retry").dispatchEvent(new win.Event("click"));
    await until(() => queryAll(app.ui.root, ".turn-card").length === 1);
    expect(calls.filter((key) => key.endsWith("/turns"))).toHaveLength(2);
    expect(query<HTMLElement>(app.ui.root, "#error-banner").hidden).toBe(true);
  });

  it("renders a 400 as inline validation, not a banner", async () => {
    const { page, app } = appWith({
      "POST /sessions": () => CREATED,
      "POST /sessions/s1/turns": () => ({
        status: 400,
        body: { error: { code: "BadRequest", message: "turn needs content", retryable: false } },
      }),
    });
    await intake(page, app.ui.root);
    setValue(app.ui.root, "#question-input", "q");
    submitForm(app.ui.root, page, "turn-form");
    await until(() => !query<HTMLElement>(app.ui.root, "#turn-error").hidden);
    expect(query<HTMLElement>(app.ui.root, "#turn-error").textContent).toContain("turn needs content");
    expect(query<HTMLElement>(app.ui.root, "#error-banner").hidden).toBe(true);
  });
});
