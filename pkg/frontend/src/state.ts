// Pure view-state logic for the triage table and what-if controls.
//
// Deliberately contains no scoring arithmetic: every score and rank shown in
// the UI comes verbatim from POST /api/rank. The only numeric work here is
// slider-value conversion and the sum-positive weight guard.

import type { ConfigOverride, PriorityConfigDoc, RankRow } from "./api.js";

export interface WeightControls {
  weight_D: number;
  factors: Record<string, number>;
}

export type RankMarker = "up" | "down" | "same" | "new";

export interface TriageViewState {
  selectedVersion: string;
  savedRows: RankRow[];
  rows: RankRow[];
  markers: Record<string, RankMarker>;
  whatifActive: boolean;
  lastRefreshed: string | null;
  stale: boolean;
  bannerMessage: string | null;
}

export function initialState(): TriageViewState {
  return {
    selectedVersion: "",
    savedRows: [],
    rows: [],
    markers: {},
    whatifActive: false,
    lastRefreshed: null,
    stale: false,
    bannerMessage: null,
  };
}

// Config weights arrive as exact rational strings ("1/2", "0.3"); sliders
// need plain numbers. Conversion is display-only.
export function weightToNumber(value: string): number {
  const fraction = value.match(/^(-?\d+)\s*\/\s*(\d+)$/);
  if (fraction) {
    return Number(fraction[1]) / Number(fraction[2]);
  }
  const parsed = Number(value);
  return Number.isFinite(parsed) ? parsed : 0;
}

export function numberToWeight(value: number): string {
  // round to the slider resolution so the server sees terse decimals
  return (Math.round(value * 1000) / 1000).toString();
}

export function controlsFromConfig(config: PriorityConfigDoc): WeightControls {
  const factors: Record<string, number> = {};
  for (const [name, weight] of Object.entries(config.factor_weights)) {
    factors[name] = weightToNumber(weight);
  }
  return { weight_D: weightToNumber(config.weight_D), factors };
}

export function weightsTotal(controls: WeightControls): number {
  let total = controls.weight_D;
  for (const value of Object.values(controls.factors)) {
    total += value;
  }
  return total;
}

// Invariant from the view contract: weight controls must stay sum-positive.
export function validateControls(controls: WeightControls): string | null {
  if (controls.weight_D < 0 || Object.values(controls.factors).some((w) => w < 0)) {
    return "weights must not be negative";
  }
  if (weightsTotal(controls) <= 0) {
    return "at least one weight must be positive";
  }
  return null;
}

export function overrideFromControls(controls: WeightControls): ConfigOverride {
  const factor_weights: Record<string, string> = {};
  for (const [name, value] of Object.entries(controls.factors)) {
    factor_weights[name] = numberToWeight(value);
  }
  return { weight_D: numberToWeight(controls.weight_D), factor_weights };
}

export function sortedByRank(rows: RankRow[]): RankRow[] {
  return [...rows].sort((a, b) => a.rank - b.rank);
}

// Rank-change markers for the what-if view: compares the displayed rows with
// the ranking under the saved (stored) config.
export function diffRanks(savedRows: RankRow[], rows: RankRow[]): Record<string, RankMarker> {
  const savedRank = new Map(savedRows.map((row) => [row.defect_id, row.rank]));
  const markers: Record<string, RankMarker> = {};
  for (const row of rows) {
    const previous = savedRank.get(row.defect_id);
    if (previous === undefined) {
      markers[row.defect_id] = "new";
    } else if (row.rank < previous) {
      markers[row.defect_id] = "up";
    } else if (row.rank > previous) {
      markers[row.defect_id] = "down";
    } else {
      markers[row.defect_id] = "same";
    }
  }
  return markers;
}

export function applySavedRanking(state: TriageViewState, version: string, rows: RankRow[],
                                  refreshedAt: string): TriageViewState {
  const sorted = sortedByRank(rows);
  return {
    ...state,
    selectedVersion: version,
    savedRows: sorted,
    rows: sorted,
    markers: {},
    whatifActive: false,
    lastRefreshed: refreshedAt,
    stale: false,
    bannerMessage: null,
  };
}

export function applyWhatif(state: TriageViewState, rows: RankRow[],
                            refreshedAt: string): TriageViewState {
  const sorted = sortedByRank(rows);
  return {
    ...state,
    rows: sorted,
    markers: diffRanks(state.savedRows, sorted),
    whatifActive: true,
    lastRefreshed: refreshedAt,
    stale: false,
    bannerMessage: null,
  };
}

export function applyFailure(state: TriageViewState, message: string): TriageViewState {
  return { ...state, stale: state.rows.length > 0, bannerMessage: message };
}
