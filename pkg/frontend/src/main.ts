// Dashboard wiring: sliders, what-if reranking, and config commits.
// All scores/ranks come from the service; this file only moves data around.

import { ApiError, DefectDepClient } from "./api.js";
import type { PriorityConfigDoc, RankRow } from "./api.js";
import {
  applyFailure,
  applySavedRanking,
  applyWhatif,
  controlsFromConfig,
  initialState,
  overrideFromControls,
  validateControls,
  weightsTotal,
  type TriageViewState,
  type WeightControls,
} from "./state.js";
import {
  renderBanner,
  renderEmptyState,
  renderStatusLine,
  renderTableHead,
  renderTableRows,
} from "./render.js";

const API_BASE_KEY = "defectdep_api_base";

const $ = (id: string): HTMLElement => {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing element #${id}`);
  return el;
};

let client = new DefectDepClient(localStorage.getItem(API_BASE_KEY) ?? "");
let state: TriageViewState = initialState();
let savedConfig: PriorityConfigDoc | null = null;
let controls: WeightControls = { weight_D: 0.5, factors: {} };

function nowStamp(): string {
  return new Date().toISOString().replace(/\.\d+Z$/, "Z");
}

function render(): void {
  $("banner").innerHTML = renderBanner(state);
  $("status-line").innerHTML = renderStatusLine(state);
  const table = $("triage-table");
  const empty = $("empty-state");
  if (state.rows.length === 0) {
    table.style.display = "none";
    empty.innerHTML = renderEmptyState();
    empty.style.display = "block";
    return;
  }
  empty.style.display = "none";
  table.style.display = "table";
  $("table-head").innerHTML = renderTableHead(state.rows);
  $("table-body").innerHTML = renderTableRows(state.rows, state.markers);
  const commit = $("commit-btn") as HTMLButtonElement;
  commit.disabled = !state.whatifActive;
}

function renderControls(): void {
  const container = $("weight-controls");
  const entries: Array<[string, string, number]> = [
    ["weight_D", "dependency ratio (D)", controls.weight_D],
  ];
  for (const [name, value] of Object.entries(controls.factors)) {
    entries.push([`factor:${name}`, name.replace(/_/g, " "), value]);
  }
  container.innerHTML = entries
    .map(
      ([key, label, value]) => `
    <div class="control" data-key="${key}">
      <label>${label}</label>
      <input type="range" min="0" max="1" step="0.005" value="${value}" data-role="slider">
      <input type="number" min="0" max="1" step="0.005" value="${value}" data-role="number">
    </div>`,
    )
    .join("");
  $("weight-total").textContent = `total weight: ${weightsTotal(controls).toFixed(3)}`;
  for (const div of container.querySelectorAll<HTMLDivElement>(".control")) {
    const key = div.dataset.key ?? "";
    const slider = div.querySelector<HTMLInputElement>('[data-role="slider"]')!;
    const num = div.querySelector<HTMLInputElement>('[data-role="number"]')!;
    const onChange = (value: string, mirror: HTMLInputElement) => {
      mirror.value = value;
      setControl(key, Number(value));
      void whatifRerank();
    };
    slider.addEventListener("input", () => onChange(slider.value, num));
    num.addEventListener("input", () => onChange(num.value, slider));
  }
}

function setControl(key: string, value: number): void {
  if (key === "weight_D") {
    controls = { ...controls, weight_D: value };
  } else if (key.startsWith("factor:")) {
    controls = {
      ...controls,
      factors: { ...controls.factors, [key.slice("factor:".length)]: value },
    };
  }
  $("weight-total").textContent = `total weight: ${weightsTotal(controls).toFixed(3)}`;
}

function currentVersion(): string | undefined {
  const select = $("version-select") as HTMLSelectElement;
  return select.value || undefined;
}

async function loadVersions(): Promise<void> {
  const select = $("version-select") as HTMLSelectElement;
  const { versions } = await client.versions();
  select.innerHTML = versions
    .map((v) => `<option value="${v.version}">${v.version}</option>`)
    .join("");
  if (versions.length > 0) {
    select.value = versions[versions.length - 1].version;
  }
}

async function loadConfig(): Promise<void> {
  savedConfig = await client.getConfig();
  controls = controlsFromConfig(savedConfig);
  renderControls();
}

async function refreshSaved(): Promise<void> {
  try {
    const version = currentVersion();
    const response = await client.rank(version ? { version } : {});
    state = applySavedRanking(state, response.version, response.rows, nowStamp());
  } catch (err) {
    if (err instanceof ApiError && err.code === "not-found") {
      state = { ...initialState(), bannerMessage: null };
    } else {
      state = applyFailure(state, describe(err));
    }
  }
  render();
}

let whatifSeq = 0;

async function whatifRerank(): Promise<void> {
  const problem = validateControls(controls);
  $("weight-warning").textContent = problem ?? "";
  if (problem) {
    return;
  }
  const seq = ++whatifSeq;
  try {
    const response = await client.rank({
      version: currentVersion(),
      config: overrideFromControls(controls),
    });
    if (seq !== whatifSeq) {
      return; // superseded by a newer slider position
    }
    state = applyWhatif(state, response.rows, nowStamp());
  } catch (err) {
    if (seq !== whatifSeq) {
      return;
    }
    state = applyFailure(state, describe(err));
  }
  render();
}

async function commitConfig(): Promise<void> {
  const problem = validateControls(controls);
  if (problem) {
    $("weight-warning").textContent = problem;
    return;
  }
  try {
    savedConfig = await client.putConfig(overrideFromControls(controls));
    controls = controlsFromConfig(savedConfig);
    renderControls();
    await refreshSaved();
  } catch (err) {
    state = applyFailure(state, describe(err));
    render();
  }
}

function resetControls(): void {
  if (savedConfig) {
    controls = controlsFromConfig(savedConfig);
    renderControls();
    $("weight-warning").textContent = "";
    void refreshSaved();
  }
}

async function submitIntake(event: Event): Promise<void> {
  event.preventDefault();
  const form = $("intake-form") as HTMLFormElement;
  const data = new FormData(form);
  const seeds = String(data.get("seeds") ?? "")
    .split(",")
    .map((s) => s.trim())
    .filter(Boolean);
  try {
    await client.submitDefect({
      defect_id: String(data.get("defect_id") ?? ""),
      title: String(data.get("title") ?? ""),
      severity: String(data.get("severity") ?? "low"),
      seed_actors: seeds,
    });
    form.reset();
    $("intake-message").textContent = "defect stored";
    await refreshSaved();
  } catch (err) {
    $("intake-message").textContent = describe(err);
  }
}

function describe(err: unknown): string {
  if (err instanceof ApiError) {
    return `service error [${err.code}]: ${err.message}`;
  }
  return `service unreachable: ${err instanceof Error ? err.message : String(err)}`;
}

async function boot(): Promise<void> {
  const baseInput = $("api-base") as HTMLInputElement;
  baseInput.value = localStorage.getItem(API_BASE_KEY) ?? "";
  baseInput.addEventListener("change", () => {
    localStorage.setItem(API_BASE_KEY, baseInput.value.trim());
    client = new DefectDepClient(baseInput.value.trim());
    void boot();
  });
  $("commit-btn").addEventListener("click", () => void commitConfig());
  $("reset-btn").addEventListener("click", resetControls);
  $("refresh-btn").addEventListener("click", () => void refreshSaved());
  ($("version-select") as HTMLSelectElement).addEventListener("change", () => void refreshSaved());
  $("intake-form").addEventListener("submit", (e) => void submitIntake(e));

  try {
    await client.health();
    await loadVersions();
    await loadConfig();
    await refreshSaved();
  } catch (err) {
    state = applyFailure(state, describe(err));
    render();
  }
}

if (typeof document !== "undefined" && document.readyState !== "loading") {
  void boot();
} else if (typeof document !== "undefined") {
  document.addEventListener("DOMContentLoaded", () => void boot());
}
