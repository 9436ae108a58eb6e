import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";

import { ApiClient } from "../dist/api.js";
import { App } from "../dist/app.js";
import type { HeatmapPayload, SeasonReport, TeamInfo } from "../dist/types.js";

const TEAMS: TeamInfo[] = [
  {
    team_id: "toy",
    grid: { pitch_length: 105, pitch_width: 68, columns: 2, rows: 1 },
    possessions: 1,
    baseline_goals: 0.1447,
  },
];

const HEATMAP: HeatmapPayload = {
  team_id: "toy",
  analysis: "shoot_vs_move",
  k: 1,
  grid: { pitch_length: 105, pitch_width: 68, columns: 2, rows: 1 },
  cells: [
    { zone: 1, probability: 0.225, direct_xg: 0.1, delta: 0.125, flags: [] },
    { zone: 2, probability: 0.08, direct_xg: 0.3, delta: -0.22, flags: [] },
  ],
};

function reportWith(delta: number): SeasonReport {
  return {
    team_id: "toy",
    x: 0.2,
    zones: [1],
    quality_adjust: true,
    baseline_goals: 0.1,
    counterfactual_goals: 0.1 + delta,
    delta_goals: delta,
    skipped_zones: [],
    per_zone: [],
  };
}

function envelope(data: unknown): Response {
  return new Response(JSON.stringify({ api_version: "1", data }), {
    status: 200,
    headers: { "Content-Type": "application/json" },
  });
}

interface WhatIfCall {
  body: { zones: number[]; x: number; quality_adjust: boolean };
  signal: AbortSignal;
  respond: (report: SeasonReport) => void;
}

let whatIfCalls: WhatIfCall[] = [];
let autoRespond: ((call: WhatIfCall) => void) | null = null;

beforeEach(() => {
  whatIfCalls = [];
  autoRespond = (call) => call.respond(reportWith(0.42));
  vi.stubGlobal("fetch", async (input: RequestInfo | URL, init?: RequestInit) => {
    const url = String(input);
    if (url.endsWith("/teams")) return envelope(TEAMS);
    if (url.includes("/heatmap")) return envelope(HEATMAP);
    if (url.endsWith("/whatif")) {
      return new Promise<Response>((resolve, reject) => {
        const signal = init?.signal as AbortSignal;
        const call: WhatIfCall = {
          body: JSON.parse(String(init?.body)),
          signal,
          respond: (report) => resolve(envelope(report)),
        };
        signal?.addEventListener("abort", () =>
          reject(new DOMException("aborted", "AbortError")),
        );
        whatIfCalls.push(call);
        autoRespond?.(call);
      });
    }
    throw new Error(`unexpected fetch ${url}`);
  });
  document.body.innerHTML = '<div id="app"></div>';
  // the app round-trips state through the fragment; start each test clean
  window.history.replaceState(null, "", window.location.pathname);
});

afterEach(() => {
  vi.unstubAllGlobals();
});

async function freshApp(debounceMs = 20): Promise<App> {
  const app = new App(document.getElementById("app")!, new ApiClient(""), { debounceMs });
  await app.init();
  return app;
}

const sleep = (ms: number) => new Promise((r) => setTimeout(r, ms));

function clickZone(zone: number): void {
  const rect = document.querySelector(`rect[data-zone="${zone}"]`) as SVGRectElement;
  rect.dispatchEvent(new MouseEvent("click"));
}

function slide(value: string): void {
  const slider = document.getElementById("x-slider") as HTMLInputElement;
  slider.value = value;
  slider.dispatchEvent(new Event("input"));
}

describe("App", () => {
  it("loads teams and renders the heatmap", async () => {
    await freshApp();
    const select = document.getElementById("team-select") as HTMLSelectElement;
    expect(select.value).toBe("toy");
    expect(document.querySelectorAll("rect[data-zone]").length).toBe(2);
  });

  it("a burst of slider changes triggers exactly one request", async () => {
    await freshApp(20);
    clickZone(1);
    await sleep(80);
    expect(whatIfCalls.length).toBe(1);
    for (const value of ["0.05", "0.1", "0.15", "0.2", "0.25"]) slide(value);
    await sleep(120);
    expect(whatIfCalls.length).toBe(2);
    expect(whatIfCalls[1].body.x).toBe(0.25);
  });

  it("newer requests abort older in-flight ones (latest wins)", async () => {
    autoRespond = null; // manual control
    const app = await freshApp(5);
    clickZone(1);
    const first = app.runWhatIf();
    slide("0.3");
    const second = app.runWhatIf();
    await sleep(10);
    expect(whatIfCalls.length).toBe(2);
    expect(whatIfCalls[0].signal.aborted).toBe(true);
    whatIfCalls[1].respond(reportWith(0.07));
    await Promise.all([first, second]);
    expect(document.getElementById("delta-precise")?.textContent).toBe("0.07");
    expect((document.getElementById("error-banner") as HTMLElement).hidden).toBe(true);
  });

  it("renders the report and a zero delta as 0.00", async () => {
    autoRespond = (call) => call.respond({ ...reportWith(0), x: call.body.x });
    const app = await freshApp(5);
    clickZone(2);
    await app.runWhatIf();
    expect(document.getElementById("delta-headline")?.textContent).toBe("+0.00 goals");
    expect(document.getElementById("delta-precise")?.textContent).toBe("0");
  });

  it("zone clicks toggle selection and round-trip the fragment", async () => {
    const app = await freshApp(10_000);
    clickZone(1);
    clickZone(2);
    clickZone(1);
    expect([...app.state.zones]).toEqual([2]);
    expect(window.location.hash).toContain("zones=2");
    expect(window.location.hash).toContain("team=toy");
    clickZone(2);
    expect(app.state.zones.size).toBe(0);
  });

  it("the shoot-better shortcut selects negative-delta zones", async () => {
    const app = await freshApp(10_000);
    (document.getElementById("shoot-better-button") as HTMLButtonElement).click();
    expect([...app.state.zones]).toEqual([2]);
  });

  it("surfaces API errors verbatim without retrying", async () => {
    vi.stubGlobal("fetch", async (input: RequestInfo | URL) => {
      const url = String(input);
      if (url.endsWith("/teams")) return envelope(TEAMS);
      if (url.includes("/heatmap")) return envelope(HEATMAP);
      return new Response(JSON.stringify({ detail: "x 77.0 outside (-1, 10]" }), { status: 400 });
    });
    const app = await freshApp(5);
    clickZone(1);
    await app.runWhatIf();
    const banner = document.getElementById("error-banner") as HTMLElement;
    expect(banner.hidden).toBe(false);
    expect(banner.textContent).toContain("x 77.0 outside (-1, 10]");
  });

  it("shows a banner when the payload does not fit the grid", async () => {
    const broken: HeatmapPayload = {
      ...HEATMAP,
      cells: [...HEATMAP.cells, { zone: 40, probability: 0, direct_xg: 0, delta: 0, flags: [] }],
    };
    vi.stubGlobal("fetch", async (input: RequestInfo | URL) => {
      const url = String(input);
      if (url.endsWith("/teams")) return envelope(TEAMS);
      if (url.includes("/heatmap")) return envelope(broken);
      throw new Error("unexpected");
    });
    await freshApp(5);
    const banner = document.getElementById("error-banner") as HTMLElement;
    expect(banner.hidden).toBe(false);
    expect(banner.textContent).toContain("does not fit");
  });
});
