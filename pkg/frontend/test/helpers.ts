/** Shared test scaffolding: a happy-dom page and a scriptable fetch stub. */
import { Window } from "happy-dom";

export interface Page {
  window: Window;
  root: HTMLElement;
}

export function makePage(hash = ""): Page {
  const window = new Window({ url: `http://localhost/${hash}` });
  const root = window.document.createElement("div") as unknown as HTMLElement;
  window.document.body.appendChild(root as never);
  return { window, root };
}

export function query<T extends Element>(root: HTMLElement, selector: string): T {
  const el = root.querySelector(selector);
  if (!el) {
    throw new Error(`expected element ${selector}`);
  }
  return el as T;
}

export function queryAll(root: HTMLElement, selector: string): Element[] {
  return Array.from(root.querySelectorAll(selector));
}

export function submitForm(root: HTMLElement, page: Page, formId: string): void {
  const win = page.window as unknown as { Event: typeof Event };
  query<HTMLFormElement>(root, `#${formId}`).dispatchEvent(
    new win.Event("submit", { bubbles: true, cancelable: true }),
  );
}

/** Poll until a condition holds; the async controller settles within a tick
 * or two, so 2s is generous. */
export async function until(condition: () => boolean, timeoutMs = 2000): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  while (!condition()) {
    if (Date.now() > deadline) {
      throw new Error("condition not met in time");
    }
    await new Promise((resolve) => setTimeout(resolve, 10));
  }
}

export type Route = (init?: RequestInit) => { status: number; body: unknown };

/** fetch stub keyed by "METHOD path"; records every call it serves. */
export function fakeFetch(routes: Record<string, Route>) {
  const calls: string[] = [];
  const fetchFn = async (input: string, init?: RequestInit): Promise<Response> => {
    const method = init?.method ?? "GET";
    const path = new URL(input).pathname;
    const key = `${method} ${path}`;
    calls.push(key);
    const route = routes[key];
    if (!route) {
      throw new Error(`unrouted request: ${key}`);
    }
    const { status, body } = route(init);
    return new Response(JSON.stringify(body), {
      status,
      headers: { "Content-Type": "application/json" },
    });
  };
  return { fetchFn, calls };
}

export const PROFILE = {
  demographic: "second-year biology student",
  proficiency: "intermediate writer",
  preferences: "learns best from worked examples",
  context: "persuasive essay about urban wildlife",
};

export const EMPTY_USAGE = {
  definitions: [],
  synonyms: [],
  examples: [],
  usage_patterns: [],
};

export function turnPayload(overrides: Partial<Record<string, unknown>> = {}) {
  return {
    v: 1,
    turn_index: 1,
    stage: "pre_writing",
    writing: "",
    question: "Which angle should I take?",
    vocab: [
      {
        term: "thesis",
        explanation: "The main claim your essay defends.",
        usage: {
          definitions: ["an unproved statement put forward as a premise"],
          synonyms: [],
          examples: ["her thesis stated the main claim plainly"],
          usage_patterns: [["noun", 1]],
        },
      },
    ],
    feedback: null,
    response: "Try the corridors angle.",
    ...overrides,
  };
}
