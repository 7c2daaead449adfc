// Session state machine for the iterative question loop.
//
// Idle -> Loaded (request in flight) -> Solved -> Asking -> Explained -> Asking -> ...
// Errors land in Error with the last payload kept for retry; an infeasible
// property bounces back to the previous phase with a notice instead.

import type { AskResponse, QuestionItem, SessionSummary } from "./api.js";

export type Phase = "Idle" | "Loaded" | "Solved" | "Asking" | "Explained" | "Error";

export interface UiSessionState {
  phase: Phase;
  requestPayload: Record<string, unknown> | null;
  session: SessionSummary | null;
  questions: QuestionItem[];
  perspective: string | null; // agent filter; null = all agents
  selectedVariable: string | null;
  selectedVariant: "q" | "c";
  explanation: AskResponse | null;
  history: AskResponse[];
  notice: string | null;
  error: string | null;
}

export function initialState(): UiSessionState {
  return {
    phase: "Idle",
    requestPayload: null,
    session: null,
    questions: [],
    perspective: null,
    selectedVariable: null,
    selectedVariant: "q",
    explanation: null,
    history: [],
    notice: null,
    error: null,
  };
}

export class IllegalTransition extends Error {}

function expectPhase(state: UiSessionState, allowed: Phase[], event: string): void {
  if (!allowed.includes(state.phase)) {
    throw new IllegalTransition(`${event} is not allowed in phase ${state.phase}`);
  }
}

export function loadRequested(state: UiSessionState, payload: Record<string, unknown>): UiSessionState {
  expectPhase(state, ["Idle", "Error", "Solved", "Explained"], "loadRequested");
  return { ...initialState(), phase: "Loaded", requestPayload: payload };
}

export function sessionReady(
  state: UiSessionState,
  session: SessionSummary,
  questions: QuestionItem[],
): UiSessionState {
  expectPhase(state, ["Loaded"], "sessionReady");
  return { ...state, phase: "Solved", session, questions, notice: null, error: null };
}

export function askStarted(state: UiSessionState, variable: string, variant: "q" | "c"): UiSessionState {
  expectPhase(state, ["Solved", "Explained"], "askStarted");
  if (!state.questions.some((q) => q.variable === variable)) {
    throw new IllegalTransition(`variable ${variable} is not in the question list`);
  }
  return { ...state, phase: "Asking", selectedVariable: variable, selectedVariant: variant, notice: null };
}

export function askSucceeded(state: UiSessionState, response: AskResponse): UiSessionState {
  expectPhase(state, ["Asking"], "askSucceeded");
  return {
    ...state,
    phase: "Explained",
    explanation: response,
    history: [...state.history, response],
  };
}

export function askRejected(state: UiSessionState, notice: string): UiSessionState {
  // infeasible property: surface the notice, keep the session usable
  expectPhase(state, ["Asking"], "askRejected");
  const phase: Phase = state.history.length > 0 ? "Explained" : "Solved";
  return { ...state, phase, notice };
}

export function errorOccurred(state: UiSessionState, message: string): UiSessionState {
  return { ...state, phase: "Error", error: message };
}

export function perspectiveChanged(state: UiSessionState, agent: string | null): UiSessionState {
  return { ...state, perspective: agent };
}

export function visibleQuestions(state: UiSessionState): QuestionItem[] {
  // exactly the service list; the perspective only narrows by the agents
  // the service itself attached to each question
  if (state.perspective === null) {
    return state.questions;
  }
  return state.questions.filter((q) => q.agents.includes(state.perspective as string));
}
