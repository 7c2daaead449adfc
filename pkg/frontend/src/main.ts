// DOM wiring. All logic lives in api/state/render; this file only moves
// strings between the page and the state machine.

import { ApiClient, ApiError } from "./api.js";
import {
  askRejected,
  askStarted,
  askSucceeded,
  errorOccurred,
  initialState,
  loadRequested,
  perspectiveChanged,
  sessionReady,
  visibleQuestions,
  type UiSessionState,
} from "./state.js";
import { renderExplanation, renderHistory, renderQuestionOptions, renderSolution } from "./render.js";

const client = new ApiClient("");
let state: UiSessionState = initialState();

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function setState(next: UiSessionState): void {
  state = next;
  paint();
}

function paint(): void {
  el("phase").textContent = state.phase;
  el("notice").textContent = state.notice ?? "";
  el("error").textContent = state.error ?? "";
  el<HTMLButtonElement>("ask").disabled = state.phase === "Asking" || state.session === null;

  el("solution").innerHTML = state.session ? renderSolution(state.session) : "";
  el("explanation").innerHTML = state.explanation ? renderExplanation(state.explanation) : "";
  el("history").innerHTML = renderHistory(state.history);

  const perspective = el<HTMLSelectElement>("perspective");
  if (state.session && perspective.options.length !== state.session.agents.length + 1) {
    perspective.innerHTML =
      `<option value="">all agents</option>` +
      state.session.agents.map((a) => `<option value="${a}">${a}</option>`).join("");
  }
  el<HTMLSelectElement>("question").innerHTML = renderQuestionOptions(visibleQuestions(state));
}

async function startSession(payload: Record<string, unknown>): Promise<void> {
  try {
    setState(loadRequested(state, payload));
    const summary = await client.createSession(payload);
    const questions = await client.getQuestions(summary.id);
    setState(sessionReady(state, summary, questions));
  } catch (err) {
    setState(errorOccurred(state, err instanceof Error ? err.message : String(err)));
  }
}

async function submitQuestion(): Promise<void> {
  const variable = el<HTMLSelectElement>("question").value;
  const variant = el<HTMLInputElement>("variant-c").checked ? "c" : "q";
  if (!variable || !state.session) return;
  try {
    setState(askStarted(state, variable, variant));
    const response = await client.ask(state.session.id, { variable, variant });
    setState(askSucceeded(state, response));
  } catch (err) {
    if (err instanceof ApiError && err.code === "property_infeasible") {
      setState(askRejected(state, err.message));
    } else {
      setState(errorOccurred(state, err instanceof Error ? err.message : String(err)));
    }
  }
}

function genspecFromForm(): Record<string, unknown> {
  const domain = el<HTMLSelectElement>("domain").value;
  const seed = Number(el<HTMLInputElement>("seed").value || "0");
  const payload: Record<string, unknown> = { domain, seed };
  for (const flag of ["agents", "items", "tasks", "tables", "points", "vehicles"]) {
    const input = document.getElementById(`size-${flag}`) as HTMLInputElement | null;
    if (input && input.value) payload[flag] = Number(input.value);
  }
  return payload;
}

export function wire(): void {
  el("start").addEventListener("click", () => void startSession(genspecFromForm()));
  el("demo").addEventListener("click", () => void startSession({ fixture: "kp-micro" }));
  el("ask").addEventListener("click", () => void submitQuestion());
  el<HTMLSelectElement>("perspective").addEventListener("change", (event) => {
    const value = (event.target as HTMLSelectElement).value;
    setState(perspectiveChanged(state, value || null));
  });
  el<HTMLInputElement>("upload").addEventListener("change", async (event) => {
    const input = event.target as HTMLInputElement;
    const file = input.files?.[0];
    if (!file) return;
    try {
      const payload = JSON.parse(await file.text()) as Record<string, unknown>;
      await startSession(payload);
    } catch {
      setState(errorOccurred(state, "the uploaded file is not valid instance JSON"));
    }
  });
  paint();
}

if (typeof document !== "undefined" && document.getElementById("start")) {
  wire();
}
