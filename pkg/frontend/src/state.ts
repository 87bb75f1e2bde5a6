/**
 * Session view state: plain data derived from API payloads, nothing else.
 *
 * Every function here is pure and returns fresh objects; turn history is
 * never mutated in place, so a rendered card can only change if the server
 * said so.
 */
import type { Profile, SessionPayload, TurnPayload, VocabEntry } from "./api.js";

export const STAGE_LABELS: Record<string, string> = {
  pre_writing: "Pre-writing",
  drafting: "Drafting",
  revision: "Revision",
};

export interface TurnCard {
  turnIndex: number;
  stage: string;
  stageLabel: string;
  writingExcerpt: string;
  question: string;
  vocab: VocabEntry[];
  feedback: string | null;
  response: string;
}

export interface SessionView {
  sessionId: string;
  profile: Profile;
  turns: TurnCard[];
}

export function excerpt(text: string, max = 160): string {
  const collapsed = text.replace(/\s+/g, " ").trim();
  return collapsed.length <= max ? collapsed : `${collapsed.slice(0, max - 1)}…`;
}

export function cardFromTurn(turn: TurnPayload): TurnCard {
  return {
    turnIndex: turn.turn_index,
    stage: turn.stage,
    stageLabel: STAGE_LABELS[turn.stage] ?? turn.stage,
    writingExcerpt: excerpt(turn.writing),
    question: turn.question,
    vocab: turn.vocab,
    feedback: turn.feedback ? turn.feedback.feedback : null,
    response: turn.response,
  };
}

export function viewFromIntake(payload: { session_id: string; profile: Profile }): SessionView {
  return { sessionId: payload.session_id, profile: payload.profile, turns: [] };
}

export function viewFromSession(payload: SessionPayload): SessionView {
  const turns = payload.turns.map(cardFromTurn);
  turns.sort((a, b) => a.turnIndex - b.turnIndex);
  return { sessionId: payload.session_id, profile: payload.profile, turns };
}

export function appendTurn(view: SessionView, turn: TurnPayload): SessionView {
  return { ...view, turns: [...view.turns, cardFromTurn(turn)] };
}
