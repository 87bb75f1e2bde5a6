/**
 * Controller: wires the API client to the UI.
 *
 * State lives in one SessionView derived purely from API responses. The
 * session id is mirrored into the URL hash so a reload resumes the same
 * session from the server's history. Only one request is in flight at a
 * time; submissions are disabled until the server answers.
 */
import { ApiFault, TutorApi } from "./api.js";
import { appendTurn, SessionView, viewFromIntake, viewFromSession } from "./state.js";
import { AppUI } from "./ui.js";

interface HashLocation {
  hash: string;
}

export function sessionIdFromHash(hash: string): string | null {
  const match = /#s=([A-Za-z0-9-]+)/.exec(hash);
  return match ? match[1] : null;
}

export class App {
  readonly ui: AppUI;
  view: SessionView | null = null;
  private busy = false;
  private lastAction: (() => Promise<void>) | null = null;

  constructor(
    root: HTMLElement,
    private readonly api: TutorApi,
    private readonly location: HashLocation = { hash: "" },
  ) {
    this.ui = new AppUI(root, {
      onIntake: (text) => void this.runExclusive(() => this.intake(text)),
      onTurn: (writing, question) => void this.runExclusive(() => this.turn(writing, question)),
      onRetry: () => void this.retry(),
    });
  }

  /** Show the intake form, or resume the session named in the URL hash. */
  async start(): Promise<void> {
    const existing = sessionIdFromHash(this.location.hash);
    if (existing) {
      await this.runExclusive(() => this.resume(existing));
    }
  }

  private async runExclusive(action: () => Promise<void>): Promise<void> {
    if (this.busy) {
      return;
    }
    this.busy = true;
    this.ui.setBusy(true);
    this.lastAction = action;
    try {
      await action();
      this.lastAction = null;
    } catch (fault) {
      this.surface(fault);
    } finally {
      this.busy = false;
      this.ui.setBusy(false);
    }
  }

  private async retry(): Promise<void> {
    const action = this.lastAction;
    if (action) {
      await this.runExclusive(action);
    }
  }

  private surface(fault: unknown): void {
    if (fault instanceof ApiFault) {
      if (fault.status === 400) {
        // Validation problems belong next to the form, not in the banner.
        const target = this.view === null ? "intake-error" : "turn-error";
        this.ui.setInlineError(target, fault.message);
        this.lastAction = null;
        return;
      }
      this.ui.showBanner(fault.message, fault.retryable);
      if (!fault.retryable) {
        this.lastAction = null;
      }
      return;
    }
    this.ui.showBanner(String(fault), false);
    this.lastAction = null;
  }

  private async intake(text: string): Promise<void> {
    const created = await this.api.createSession(text);
    this.view = viewFromIntake(created);
    this.location.hash = `#s=${created.session_id}`;
    this.ui.showView(this.view);
  }

  private async turn(writing: string, question: string): Promise<void> {
    if (!this.view) {
      throw new Error("no active session");
    }
    const payload = await this.api.submitTurn(this.view.sessionId, writing, question);
    this.view = appendTurn(this.view, payload);
    this.ui.clearTurnInputs();
    this.ui.showView(this.view);
  }

  private async resume(sessionId: string): Promise<void> {
    const payload = await this.api.getSession(sessionId);
    this.view = viewFromSession(payload);
    this.ui.showView(this.view);
  }
}
