/** UI state: team, analysis tab, zone selection, slider, quality toggle.
 *
 * The state round-trips through the URL fragment so an analysis can be
 * shared as a link. The slider snaps to 0.01 steps inside [-0.5, 0.5].
 */

export interface UiState {
  team: string | null;
  analysis: string;
  k: number;
  zones: Set<number>;
  x: number;
  qualityAdjust: boolean;
}

export const ANALYSES = ["shoot_vs_move", "flank_first", "better_shot", "direct_shot"] as const;

export const X_MIN = -0.5;
export const X_MAX = 0.5;

export function initialState(): UiState {
  return {
    team: null,
    analysis: "shoot_vs_move",
    k: 1,
    zones: new Set(),
    x: 0.1,
    qualityAdjust: true,
  };
}

export function snapX(raw: number): number {
  const clamped = Math.min(Math.max(raw, X_MIN), X_MAX);
  return Math.round(clamped * 100) / 100;
}

export function toggleZone(zones: Set<number>, zone: number): Set<number> {
  const next = new Set(zones);
  if (next.has(zone)) next.delete(zone);
  else next.add(zone);
  return next;
}

export function encodeFragment(state: UiState): string {
  const params = new URLSearchParams();
  if (state.team !== null) params.set("team", state.team);
  params.set("analysis", state.analysis);
  params.set("k", String(state.k));
  params.set("x", state.x.toFixed(2));
  params.set("q", state.qualityAdjust ? "1" : "0");
  if (state.zones.size > 0) {
    params.set("zones", [...state.zones].sort((a, b) => a - b).join(","));
  }
  return params.toString();
}

export function decodeFragment(fragment: string): Partial<UiState> {
  const params = new URLSearchParams(fragment.replace(/^#/, ""));
  const out: Partial<UiState> = {};
  const team = params.get("team");
  if (team !== null) out.team = team;
  const analysis = params.get("analysis");
  if (analysis !== null && (ANALYSES as readonly string[]).includes(analysis)) {
    out.analysis = analysis;
  }
  const k = Number(params.get("k"));
  if (Number.isInteger(k) && k >= 1) out.k = k;
  const x = Number(params.get("x"));
  if (params.get("x") !== null && Number.isFinite(x)) out.x = snapX(x);
  const q = params.get("q");
  if (q !== null) out.qualityAdjust = q !== "0";
  const zones = params.get("zones");
  if (zones !== null && zones !== "") {
    const parsed = zones.split(",").map(Number);
    if (parsed.every((z) => Number.isInteger(z) && z >= 0)) out.zones = new Set(parsed);
  }
  return out;
}
