/**
 * DOM layer: renders a SessionView and raises form events to the controller.
 *
 * Rendering is one-way. The turn list is rebuilt from the view on every
 * change, so the DOM can never hold history the state does not.
 */
import type { VocabEntry } from "./api.js";
import type { SessionView, TurnCard } from "./state.js";

export interface UiHandlers {
  onIntake(intakeText: string): void;
  onTurn(writing: string, question: string): void;
  onRetry(): void;
}

export class AppUI {
  private readonly doc: Document;
  private handlers: UiHandlers;

  constructor(readonly root: HTMLElement, handlers: UiHandlers) {
    this.doc = root.ownerDocument;
    this.handlers = handlers;
    this.root.innerHTML = `
      <div id="error-banner" class="banner" hidden>
        <span id="banner-message"></span>
        <button id="banner-retry" type="button" hidden>Retry</button>
        <button id="banner-dismiss" type="button">Dismiss</button>
      </div>
      <section id="intake-section">
        <h1>Writing tutor</h1>
        <form id="intake-form">
          <label for="intake-text">Tell the tutor who you are and what you are working on</label>
          <textarea id="intake-text" rows="4"></textarea>
          <p id="intake-error" class="inline-error" hidden></p>
          <button id="intake-submit" type="submit">Start session</button>
        </form>
      </section>
      <section id="session-section" hidden>
        <div id="profile-card" class="card"></div>
        <p id="empty-state">No turns yet. Share some writing or ask a question below.</p>
        <ol id="turn-list"></ol>
        <form id="turn-form">
          <label for="writing-input">Your writing</label>
          <textarea id="writing-input" rows="6"></textarea>
          <label for="question-input">Your question</label>
          <input id="question-input" type="text" />
          <p id="turn-error" class="inline-error" hidden></p>
          <button id="turn-submit" type="submit">Send turn</button>
        </form>
      </section>
    `;
    this.wireForms();
  }

  private byId<T extends HTMLElement>(id: string): T {
    const el = this.root.querySelector(`#${id}`);
    if (!el) {
      throw new Error(`missing element #${id}`);
    }
    return el as T;
  }

  private wireForms(): void {
    this.byId<HTMLFormElement>("intake-form").addEventListener("submit", (event) => {
      event.preventDefault();
      const text = this.byId<HTMLTextAreaElement>("intake-text").value.trim();
      if (!text) {
        this.setInlineError("intake-error", "Please introduce yourself first.");
        return;
      }
      this.setInlineError("intake-error", null);
      this.handlers.onIntake(text);
    });
    this.byId<HTMLFormElement>("turn-form").addEventListener("submit", (event) => {
      event.preventDefault();
      const writing = this.byId<HTMLTextAreaElement>("writing-input").value;
      const question = this.byId<HTMLInputElement>("question-input").value;
      if (!writing.trim() && !question.trim()) {
        this.setInlineError("turn-error", "Add some writing or a question.");
        return;
      }
      this.setInlineError("turn-error", null);
      this.handlers.onTurn(writing, question);
    });
    this.byId<HTMLButtonElement>("banner-retry").addEventListener("click", () => {
      this.clearBanner();
      this.handlers.onRetry();
    });
    this.byId<HTMLButtonElement>("banner-dismiss").addEventListener("click", () => {
      this.clearBanner();
    });
  }

  setInlineError(id: "intake-error" | "turn-error", message: string | null): void {
    const el = this.byId<HTMLParagraphElement>(id);
    el.hidden = message === null;
    el.textContent = message ?? "";
  }

  /** Disable submissions while a request is in flight (one turn at a time). */
  setBusy(busy: boolean): void {
    this.byId<HTMLButtonElement>("intake-submit").disabled = busy;
    this.byId<HTMLButtonElement>("turn-submit").disabled = busy;
  }

  showBanner(message: string, retryable: boolean): void {
    this.byId<HTMLDivElement>("error-banner").hidden = false;
    this.byId<HTMLSpanElement>("banner-message").textContent = message;
    this.byId<HTMLButtonElement>("banner-retry").hidden = !retryable;
  }

  clearBanner(): void {
    this.byId<HTMLDivElement>("error-banner").hidden = true;
  }

  clearTurnInputs(): void {
    this.byId<HTMLTextAreaElement>("writing-input").value = "";
    this.byId<HTMLInputElement>("question-input").value = "";
  }

  /** Re-render everything below the banner from the view. */
  showView(view: SessionView): void {
    this.byId<HTMLElement>("intake-section").hidden = true;
    this.byId<HTMLElement>("session-section").hidden = false;
    this.renderProfile(view);
    this.renderTurns(view);
  }

  private renderProfile(view: SessionView): void {
    const card = this.byId<HTMLDivElement>("profile-card");
    card.innerHTML = "";
    const heading = this.doc.createElement("h2");
    heading.textContent = "Learner profile";
    card.appendChild(heading);
    const list = this.doc.createElement("dl");
    for (const key of ["demographic", "proficiency", "preferences", "context"] as const) {
      const term = this.doc.createElement("dt");
      term.textContent = key;
      const detail = this.doc.createElement("dd");
      detail.textContent = view.profile[key];
      list.append(term, detail);
    }
    card.appendChild(list);
  }

  private renderTurns(view: SessionView): void {
    this.byId<HTMLParagraphElement>("empty-state").hidden = view.turns.length > 0;
    const list = this.byId<HTMLOListElement>("turn-list");
    list.innerHTML = "";
    for (const turn of view.turns) {
      list.appendChild(this.turnCard(turn));
    }
  }

  private turnCard(turn: TurnCard): HTMLElement {
    const item = this.doc.createElement("li");
    item.className = "turn-card card";
    item.dataset.turn = String(turn.turnIndex);

    const header = this.doc.createElement("header");
    const badge = this.doc.createElement("span");
    badge.className = `stage-badge stage-${turn.stage}`;
    badge.textContent = turn.stageLabel;
    const index = this.doc.createElement("span");
    index.className = "turn-index";
    index.textContent = `turn ${turn.turnIndex}`;
    header.append(badge, index);
    item.appendChild(header);

    if (turn.writingExcerpt) {
      const writing = this.doc.createElement("p");
      writing.className = "writing-excerpt";
      writing.textContent = turn.writingExcerpt;
      item.appendChild(writing);
    }
    if (turn.question) {
      const question = this.doc.createElement("p");
      question.className = "turn-question";
      question.textContent = turn.question;
      item.appendChild(question);
    }

    // The vocabulary panel exists exactly for pre-writing turns.
    if (turn.stage === "pre_writing") {
      item.appendChild(this.vocabPanel(turn.vocab));
    }

    if (turn.feedback !== null) {
      const feedback = this.doc.createElement("section");
      feedback.className = "feedback";
      const label = this.doc.createElement("h3");
      label.textContent = "Writing feedback";
      const body = this.doc.createElement("p");
      body.textContent = turn.feedback;
      feedback.append(label, body);
      item.appendChild(feedback);
    }

    const response = this.doc.createElement("section");
    response.className = "tutor-response";
    const label = this.doc.createElement("h3");
    label.textContent = "Tutor";
    const body = this.doc.createElement("p");
    body.textContent = turn.response;
    response.append(label, body);
    item.appendChild(response);

    return item;
  }

  private vocabPanel(entries: VocabEntry[]): HTMLElement {
    const panel = this.doc.createElement("section");
    panel.className = "vocab-panel";
    const label = this.doc.createElement("h3");
    label.textContent = "Vocabulary";
    panel.appendChild(label);
    if (entries.length === 0) {
      const empty = this.doc.createElement("p");
      empty.textContent = "No terms flagged this turn.";
      panel.appendChild(empty);
      return panel;
    }
    for (const entry of entries) {
      const chip = this.doc.createElement("details");
      chip.className = "vocab-chip";
      const summary = this.doc.createElement("summary");
      summary.textContent = entry.term;
      chip.appendChild(summary);
      const explanation = this.doc.createElement("p");
      explanation.textContent = entry.explanation;
      chip.appendChild(explanation);
      const usageRows: [string, string][] = [
        ["definitions", entry.usage.definitions.join("; ")],
        ["synonyms", entry.usage.synonyms.join(", ")],
        ["examples", entry.usage.examples.join(" | ")],
      ];
      for (const [name, value] of usageRows) {
        if (!value) {
          continue;
        }
        const row = this.doc.createElement("p");
        row.className = `usage-${name}`;
        row.textContent = `${name}: ${value}`;
        chip.appendChild(row);
      }
      panel.appendChild(chip);
    }
    return panel;
  }
}
