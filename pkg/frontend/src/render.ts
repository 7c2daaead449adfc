// Pure HTML renderers. Every number shown comes straight out of a service
// payload; these functions only arrange strings.

import type { AskResponse, QuestionItem, RenderedTable, SessionSummary } from "./api.js";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

const VAR_RX = /^([xy])\[([^\]]+)\]\[([^\]]+)\](?:\[([^\]]+)\])?$/;

interface ParsedVar {
  head: string;
  first: string;
  second: string;
  third?: string;
}

export function parseVarName(name: string): ParsedVar | null {
  const match = VAR_RX.exec(name);
  if (!match) return null;
  return { head: match[1]!, first: match[2]!, second: match[3]!, third: match[4] };
}

// ---------------------------------------------------------------------------
// solution views
// ---------------------------------------------------------------------------

function renderKpSolution(session: SessionSummary): string {
  const byAgent = new Map<string, { included: string[]; excluded: string[] }>();
  for (const agent of session.agents) {
    byAgent.set(agent, { included: [], excluded: [] });
  }
  for (const [name, value] of Object.entries(session.solution)) {
    const parsed = parseVarName(name);
    if (!parsed || parsed.head !== "x" || parsed.third) continue;
    const bucket = byAgent.get(parsed.first);
    if (!bucket) continue;
    (value === 1 ? bucket.included : bucket.excluded).push(parsed.second);
  }
  const rows = [...byAgent.entries()]
    .map(
      ([agent, items]) =>
        `<tr><th>${escapeHtml(agent)}</th>` +
        `<td class="included">${items.included.map(escapeHtml).join(", ") || "-"}</td>` +
        `<td class="excluded">${items.excluded.map(escapeHtml).join(", ") || "-"}</td></tr>`,
    )
    .join("");
  return (
    `<table class="solution"><thead><tr><th>agent</th><th>in the depot</th><th>left out</th></tr></thead>` +
    `<tbody>${rows}</tbody></table>`
  );
}

function renderTapSolution(session: SessionSummary): string {
  const byAgent = new Map<string, string[]>();
  for (const agent of session.agents) byAgent.set(agent, []);
  for (const [name, value] of Object.entries(session.solution)) {
    const parsed = parseVarName(name);
    if (!parsed || value !== 1) continue;
    byAgent.get(parsed.first)?.push(parsed.second);
  }
  const rows = [...byAgent.entries()]
    .map(
      ([agent, tasks]) =>
        `<tr><th>${escapeHtml(agent)}</th><td>${tasks.map(escapeHtml).join(", ") || "-"}</td></tr>`,
    )
    .join("");
  return `<table class="solution"><thead><tr><th>agent</th><th>tasks</th></tr></thead><tbody>${rows}</tbody></table>`;
}

function renderWspSolution(session: SessionSummary): string {
  const byTable = new Map<string, string[]>();
  for (const [name, value] of Object.entries(session.solution)) {
    const parsed = parseVarName(name);
    if (!parsed || parsed.head !== "y" || value !== 1) continue;
    if (!byTable.has(parsed.second)) byTable.set(parsed.second, []);
    byTable.get(parsed.second)!.push(parsed.first);
  }
  const rows = [...byTable.entries()]
    .sort(([a], [b]) => a.localeCompare(b))
    .map(
      ([table, seated]) =>
        `<tr><th>${escapeHtml(table)}</th><td>${seated.map(escapeHtml).join(", ")}</td></tr>`,
    )
    .join("");
  return `<table class="solution"><thead><tr><th>table</th><th>seated</th></tr></thead><tbody>${rows}</tbody></table>`;
}

export function decodeRoutes(solution: Record<string, number>): Map<string, string[]> {
  const successors = new Map<string, Map<string, string>>();
  for (const [name, value] of Object.entries(solution)) {
    if (value !== 1) continue;
    const parsed = parseVarName(name);
    if (!parsed || !parsed.third) continue;
    if (!successors.has(parsed.third)) successors.set(parsed.third, new Map());
    successors.get(parsed.third)!.set(parsed.first, parsed.second);
  }
  const routes = new Map<string, string[]>();
  for (const [vehicle, next] of [...successors.entries()].sort(([a], [b]) => a.localeCompare(b))) {
    const route: string[] = [];
    let here = next.get("Depot");
    while (here && here !== "Depot" && route.length <= next.size) {
      route.push(here);
      here = next.get(here);
    }
    routes.set(vehicle, route);
  }
  return routes;
}

function renderCvrpSolution(session: SessionSummary): string {
  const rows = [...decodeRoutes(session.solution).entries()]
    .map(
      ([vehicle, route]) =>
        `<tr><th>${escapeHtml(vehicle)}</th><td>${["Depot", ...route, "Depot"]
          .map(escapeHtml)
          .join(" → ")}</td></tr>`,
    )
    .join("");
  return `<table class="solution"><thead><tr><th>vehicle</th><th>route</th></tr></thead><tbody>${rows}</tbody></table>`;
}

export function renderSolution(session: SessionSummary): string {
  const caption =
    `<p class="objective">status ${escapeHtml(session.status)}, ` +
    `objective <strong>${escapeHtml(String(session.objective))}</strong></p>`;
  switch (session.domain) {
    case "kp":
    case "kp-fair":
      return caption + renderKpSolution(session);
    case "tap":
      return caption + renderTapSolution(session);
    case "wsp":
      return caption + renderWspSolution(session);
    case "cvrp":
      return caption + renderCvrpSolution(session);
    default:
      return caption;
  }
}

// ---------------------------------------------------------------------------
// questions and explanation
// ---------------------------------------------------------------------------

export function renderQuestionOptions(questions: QuestionItem[]): string {
  return questions
    .map((q) => `<option value="${escapeHtml(q.variable)}">${escapeHtml(q.prompt)}</option>`)
    .join("");
}

function renderCell(block: RenderedTable["removed"], agent: string): string {
  const info = block[agent];
  if (!info) return "-";
  return `${info.items.map(escapeHtml).join(", ")} (${escapeHtml(String(info.contribution))})`;
}

export function renderExplanationTable(table: RenderedTable): string {
  const header = table.agents.map((a) => `<th>${escapeHtml(a)}</th>`).join("");
  const removed = table.agents.map((a) => `<td>${renderCell(table.removed, a)}</td>`).join("");
  const added = table.agents.map((a) => `<td>${renderCell(table.added, a)}</td>`).join("");
  const residual = table.residual_note
    ? `<p class="residual">${escapeHtml(table.residual_note)}</p>`
    : "";
  return (
    `<table class="explanation"><thead><tr><th></th>${header}</tr></thead><tbody>` +
    `<tr><th>${escapeHtml(table.removed_label)}</th>${removed}</tr>` +
    `<tr><th>${escapeHtml(table.added_label)}</th>${added}</tr>` +
    `</tbody></table>${residual}`
  );
}

export function renderExplanation(response: AskResponse): string {
  const rendered = response.explanation.rendered;
  const metrics = response.metrics;
  const ratio = metrics.suboptimality_ratio === null ? "-" : String(metrics.suboptimality_ratio);
  const chips =
    `<span class="chip">quality diff ${escapeHtml(String(metrics.quality_diff))}</span>` +
    `<span class="chip">length ${escapeHtml(String(metrics.length))}</span>` +
    `<span class="chip">ratio ${escapeHtml(ratio)}</span>`;
  return (
    `<p class="headline">${escapeHtml(rendered.headline)}</p>` +
    `<div class="chips">${chips}</div>` +
    renderExplanationTable(rendered.table)
  );
}

export function renderHistory(history: AskResponse[]): string {
  if (history.length === 0) return "<p class=\"empty\">no questions asked yet</p>";
  const items = history
    .map(
      (entry, i) =>
        `<li><span class="variant">[${escapeHtml(entry.variant)}]</span> ` +
        `${escapeHtml(entry.question.prompt)} — ` +
        `${escapeHtml(entry.explanation.rendered.headline)}</li>`,
    )
    .join("");
  return `<ol class="history">${items}</ol>`;
}
