// HTML string builders for the triage view; pure so tests can assert on them.

import type { RankRow } from "./api.js";
import type { RankMarker, TriageViewState } from "./state.js";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

const MARKER_GLYPHS: Record<RankMarker, string> = {
  up: "▲",
  down: "▼",
  same: "",
  new: "●",
};

function markerCell(marker: RankMarker | undefined): string {
  if (!marker || marker === "same") {
    return '<td class="marker"></td>';
  }
  return `<td class="marker ${marker}" title="rank ${marker} vs saved config">${MARKER_GLYPHS[marker]}</td>`;
}

export function factorNames(rows: RankRow[]): string[] {
  const names = new Set<string>();
  for (const row of rows) {
    for (const name of Object.keys(row.factor_values)) {
      names.add(name);
    }
  }
  return [...names].sort();
}

export function renderTableRows(rows: RankRow[], markers: Record<string, RankMarker>): string {
  const factors = factorNames(rows);
  return rows
    .map((row) => {
      const cells = [
        `<td class="rank">${row.rank}</td>`,
        markerCell(markers[row.defect_id]),
        `<td class="id">${escapeHtml(row.defect_id)}</td>`,
        `<td class="title">${escapeHtml(row.title)}</td>`,
        `<td class="num">${escapeHtml(row.score)}</td>`,
        `<td class="num">${escapeHtml(row.D)} <span class="pct">(${escapeHtml(row.D_percent)})</span></td>`,
        ...factors.map((name) => `<td>${escapeHtml(row.factor_values[name] ?? "-")}</td>`),
      ];
      return `<tr data-defect="${escapeHtml(row.defect_id)}">${cells.join("")}</tr>`;
    })
    .join("\n");
}

export function renderTableHead(rows: RankRow[]): string {
  const factors = factorNames(rows);
  const cells = ["rank", "", "defect", "title", "score", "D", ...factors];
  return `<tr>${cells.map((c) => `<th>${escapeHtml(c)}</th>`).join("")}</tr>`;
}

export function renderEmptyState(): string {
  return '<div class="empty">No open defects to rank — ingest a model and defects first.</div>';
}

export function renderBanner(state: TriageViewState): string {
  if (!state.bannerMessage) {
    return "";
  }
  const stale = state.stale
    ? ` <span class="stale">showing stale data from ${escapeHtml(state.lastRefreshed ?? "?")}</span>`
    : "";
  return `<div class="banner error">${escapeHtml(state.bannerMessage)}${stale}</div>`;
}

export function renderStatusLine(state: TriageViewState): string {
  const parts = [];
  if (state.whatifActive) {
    parts.push('<span class="whatif-tag">what-if preview — not committed</span>');
  }
  if (state.lastRefreshed) {
    parts.push(`<span class="refreshed">refreshed ${escapeHtml(state.lastRefreshed)}</span>`);
  }
  if (state.stale) {
    parts.push('<span class="stale">stale</span>');
  }
  return parts.join(" ");
}
