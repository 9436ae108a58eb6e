/** JSON contract of the shotmdp HTTP API (envelope + payload shapes). */

export interface Envelope<T> {
  api_version: string;
  data: T;
}

export interface GridMeta {
  pitch_length: number;
  pitch_width: number;
  columns: number;
  rows: number;
}

export interface TeamInfo {
  team_id: string;
  grid: GridMeta;
  possessions: number;
  baseline_goals: number;
}

export interface HeatmapCell {
  zone: number;
  probability: number;
  direct_xg: number;
  delta: number;
  flags: string[];
}

export interface HeatmapPayload {
  team_id: string;
  analysis: string;
  k: number | null;
  grid: GridMeta;
  cells: HeatmapCell[];
}

export interface ZoneReportRow {
  zone: number;
  baseline_shots: number;
  counterfactual_shots: number;
  shot_delta: number;
  effective_xg: number;
}

export interface SeasonReport {
  team_id: string;
  x: number;
  zones: number[];
  quality_adjust: boolean;
  baseline_goals: number;
  counterfactual_goals: number;
  delta_goals: number;
  skipped_zones: number[];
  per_zone: ZoneReportRow[];
}

export interface WhatIfRequest {
  zones: number[];
  x: number;
  quality_adjust: boolean;
}
