/** Controller wiring the pitch, the controls, and the API together.
 *
 * All probabilities and goal totals come from API responses; the client
 * never computes them. What-if requests are debounced (150 ms default)
 * and at most one is in flight: newer requests abort the older one.
 */

import { ApiClient } from "./api.js";
import { GridShapeError, renderPitch, shootBetterZones } from "./pitch.js";
import {
  ANALYSES,
  UiState,
  X_MAX,
  X_MIN,
  decodeFragment,
  encodeFragment,
  initialState,
  snapX,
  toggleZone,
} from "./state.js";
import type { HeatmapPayload, SeasonReport, TeamInfo } from "./types.js";

const TAB_LABELS: Record<string, string> = {
  shoot_vs_move: "Shoot vs move",
  flank_first: "Flank first",
  better_shot: "Better shot ever",
  direct_shot: "Direct shot",
};

export interface AppOptions {
  debounceMs?: number;
}

export class App {
  readonly state: UiState = initialState();
  lastHeatmap: HeatmapPayload | null = null;
  lastReport: SeasonReport | null = null;

  private teams: TeamInfo[] = [];
  private debounceMs: number;
  private timer: ReturnType<typeof setTimeout> | undefined;
  private inflight: AbortController | null = null;

  private teamSelect!: HTMLSelectElement;
  private tabBar!: HTMLElement;
  private kInput!: HTMLInputElement;
  private pitchHost!: HTMLElement;
  private slider!: HTMLInputElement;
  private sliderValue!: HTMLElement;
  private qualityToggle!: HTMLInputElement;
  private banner!: HTMLElement;
  private reportHost!: HTMLElement;

  constructor(
    private readonly root: HTMLElement,
    private readonly api: ApiClient,
    options: AppOptions = {},
  ) {
    this.debounceMs = options.debounceMs ?? 150;
  }

  private doc(): Document {
    return this.root.ownerDocument;
  }

  async init(): Promise<void> {
    this.buildSkeleton();
    Object.assign(this.state, decodeFragment(this.doc().defaultView?.location.hash ?? ""));
    this.teams = await this.api.teams();
    this.teamSelect.replaceChildren(
      ...this.teams.map((t) => {
        const option = this.doc().createElement("option");
        option.value = t.team_id;
        option.textContent = `${t.team_id} (${t.possessions} possessions)`;
        return option;
      }),
    );
    if (this.state.team === null || !this.teams.some((t) => t.team_id === this.state.team)) {
      this.state.team = this.teams.length ? this.teams[0].team_id : null;
    }
    if (this.state.team !== null) this.teamSelect.value = this.state.team;
    this.renderControls();
    await this.loadHeatmap();
    if (this.state.zones.size > 0) await this.runWhatIf();
  }

  // ----- DOM scaffolding ---------------------------------------------------

  private buildSkeleton(): void {
    const doc = this.doc();
    const el = (tag: string, cls?: string): HTMLElement => {
      const node = doc.createElement(tag);
      if (cls) node.className = cls;
      return node;
    };

    this.banner = el("div", "error-banner");
    this.banner.id = "error-banner";
    this.banner.hidden = true;

    const header = el("header", "toolbar");
    this.teamSelect = doc.createElement("select");
    this.teamSelect.id = "team-select";
    this.teamSelect.addEventListener("change", () => {
      this.state.team = this.teamSelect.value;
      this.state.zones = new Set();
      this.syncFragment();
      void this.loadHeatmap();
    });
    header.appendChild(this.teamSelect);

    this.tabBar = el("nav", "tabs");
    for (const analysis of ANALYSES) {
      const button = doc.createElement("button");
      button.className = "tab";
      button.dataset.analysis = analysis;
      button.textContent = TAB_LABELS[analysis];
      button.addEventListener("click", () => {
        this.state.analysis = analysis;
        this.syncFragment();
        this.renderControls();
        void this.loadHeatmap();
      });
      this.tabBar.appendChild(button);
    }
    header.appendChild(this.tabBar);

    this.kInput = doc.createElement("input");
    this.kInput.id = "k-input";
    this.kInput.type = "number";
    this.kInput.min = "1";
    this.kInput.max = "5";
    this.kInput.addEventListener("change", () => {
      const k = Number(this.kInput.value);
      if (Number.isInteger(k) && k >= 1) {
        this.state.k = k;
        this.syncFragment();
        void this.loadHeatmap();
      }
    });
    header.appendChild(this.kInput);

    this.pitchHost = el("div", "pitch-host");
    this.pitchHost.id = "pitch";

    const panel = el("aside", "panel");
    const sliderRow = el("div", "slider-row");
    this.slider = doc.createElement("input");
    this.slider.id = "x-slider";
    this.slider.type = "range";
    this.slider.min = String(X_MIN);
    this.slider.max = String(X_MAX);
    this.slider.step = "0.01";
    this.slider.addEventListener("input", () => {
      this.state.x = snapX(Number(this.slider.value));
      this.sliderValue.textContent = this.formatX();
      this.syncFragment();
      this.scheduleWhatIf();
    });
    this.sliderValue = el("span", "slider-value");
    this.sliderValue.id = "x-value";
    sliderRow.append("shooting change ", this.slider, this.sliderValue);
    panel.appendChild(sliderRow);

    const qualityRow = el("label", "quality-row");
    this.qualityToggle = doc.createElement("input");
    this.qualityToggle.id = "quality-toggle";
    this.qualityToggle.type = "checkbox";
    this.qualityToggle.addEventListener("change", () => {
      this.state.qualityAdjust = this.qualityToggle.checked;
      this.syncFragment();
      this.scheduleWhatIf();
    });
    qualityRow.append(this.qualityToggle, " quantity-quality adjustment");
    panel.appendChild(qualityRow);

    const buttons = el("div", "buttons");
    const runButton = doc.createElement("button");
    runButton.id = "run-button";
    runButton.textContent = "Run what-if";
    runButton.addEventListener("click", () => void this.runWhatIf());
    const shootBetter = doc.createElement("button");
    shootBetter.id = "shoot-better-button";
    shootBetter.textContent = "Use shoot-better zones";
    shootBetter.addEventListener("click", () => this.applyShootBetterZones());
    const clear = doc.createElement("button");
    clear.id = "clear-button";
    clear.textContent = "Clear selection";
    clear.addEventListener("click", () => {
      this.state.zones = new Set();
      this.syncFragment();
      this.repaintPitch();
    });
    buttons.append(runButton, shootBetter, clear);
    panel.appendChild(buttons);

    this.reportHost = el("div", "report");
    this.reportHost.id = "report";
    panel.appendChild(this.reportHost);

    const layout = el("main", "layout");
    layout.append(this.pitchHost, panel);
    this.root.replaceChildren(this.banner, header, layout);
  }

  private renderControls(): void {
    for (const button of this.tabBar.querySelectorAll<HTMLButtonElement>(".tab")) {
      button.classList.toggle("active", button.dataset.analysis === this.state.analysis);
    }
    const movesTab = this.state.analysis === "shoot_vs_move" || this.state.analysis === "flank_first";
    this.kInput.disabled = !movesTab;
    this.kInput.value = String(this.state.k);
    this.slider.value = String(this.state.x);
    this.sliderValue.textContent = this.formatX();
    this.qualityToggle.checked = this.state.qualityAdjust;
  }

  private formatX(): string {
    return `${this.state.x >= 0 ? "+" : ""}${Math.round(this.state.x * 100)}%`;
  }

  // ----- data flow ---------------------------------------------------------

  async loadHeatmap(): Promise<void> {
    if (this.state.team === null) return;
    try {
      const k = this.state.analysis === "flank_first" ? Math.max(this.state.k, 2) : this.state.k;
      const payload = await this.api.heatmap(this.state.team, this.state.analysis, k);
      this.lastHeatmap = payload;
      this.clearError();
      this.repaintPitch();
    } catch (err) {
      this.showError(err);
    }
  }

  repaintPitch(): void {
    if (this.lastHeatmap === null) return;
    try {
      const svg = renderPitch(this.doc(), this.lastHeatmap, this.state.zones, (zone) => {
        this.state.zones = toggleZone(this.state.zones, zone);
        this.syncFragment();
        this.repaintPitch();
        this.scheduleWhatIf();
      });
      this.pitchHost.replaceChildren(svg);
    } catch (err) {
      if (err instanceof GridShapeError) this.showError(err);
      else throw err;
    }
  }

  scheduleWhatIf(): void {
    clearTimeout(this.timer);
    this.timer = setTimeout(() => void this.runWhatIf(), this.debounceMs);
  }

  async runWhatIf(): Promise<void> {
    clearTimeout(this.timer);
    if (this.state.team === null || this.state.zones.size === 0) return;
    this.inflight?.abort();
    const controller = new AbortController();
    this.inflight = controller;
    try {
      const report = await this.api.whatIf(
        this.state.team,
        {
          zones: [...this.state.zones].sort((a, b) => a - b),
          x: this.state.x,
          quality_adjust: this.state.qualityAdjust,
        },
        controller.signal,
      );
      if (this.inflight !== controller) return; // a newer request superseded this one
      this.lastReport = report;
      this.clearError();
      this.renderReport(report);
    } catch (err) {
      if (controller.signal.aborted) return;
      this.showError(err);
    } finally {
      if (this.inflight === controller) this.inflight = null;
    }
  }

  applyShootBetterZones(): void {
    if (this.lastHeatmap === null) return;
    const zones = shootBetterZones(this.lastHeatmap);
    this.state.zones = new Set(zones);
    this.syncFragment();
    this.repaintPitch();
    this.scheduleWhatIf();
  }

  private renderReport(report: SeasonReport): void {
    const doc = this.doc();
    const headline = doc.createElement("div");
    headline.className = "delta-headline";
    headline.id = "delta-headline";
    const sign = report.delta_goals >= 0 ? "+" : "";
    headline.textContent = `${sign}${report.delta_goals.toFixed(2)} goals`;

    const precise = doc.createElement("div");
    precise.className = "delta-precise";
    precise.id = "delta-precise";
    precise.textContent = String(report.delta_goals);

    const totals = doc.createElement("div");
    totals.className = "totals";
    totals.textContent =
      `baseline ${report.baseline_goals.toFixed(3)} -> counterfactual ` +
      `${report.counterfactual_goals.toFixed(3)} over ${report.zones.length} zone(s)`;

    const table = doc.createElement("table");
    table.id = "report-table";
    const head = doc.createElement("tr");
    for (const label of ["zone", "shots", "shots'", "xG'"]) {
      const th = doc.createElement("th");
      th.textContent = label;
      head.appendChild(th);
    }
    table.appendChild(head);
    for (const row of report.per_zone) {
      const tr = doc.createElement("tr");
      for (const value of [
        String(row.zone),
        row.baseline_shots.toFixed(2),
        row.counterfactual_shots.toFixed(2),
        row.effective_xg.toFixed(4),
      ]) {
        const td = doc.createElement("td");
        td.textContent = value;
        tr.appendChild(td);
      }
      table.appendChild(tr);
    }

    this.reportHost.replaceChildren(headline, precise, totals, table);
    if (report.skipped_zones.length > 0) {
      const note = doc.createElement("div");
      note.className = "note";
      note.textContent = `zones without adjustable shooting: ${report.skipped_zones.join(", ")}`;
      this.reportHost.appendChild(note);
    }
  }

  // ----- chrome ------------------------------------------------------------

  private showError(err: unknown): void {
    this.banner.textContent = err instanceof Error ? err.message : String(err);
    this.banner.hidden = false;
  }

  private clearError(): void {
    this.banner.hidden = true;
    this.banner.textContent = "";
  }

  private syncFragment(): void {
    const win = this.doc().defaultView;
    if (win) win.history.replaceState(null, "", `#${encodeFragment(this.state)}`);
  }
}
