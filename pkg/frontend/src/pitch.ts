/** SVG heatmap of the offensive half with clickable, selectable zones. */

import { divergingColor, sequentialColor } from "./color.js";
import type { HeatmapCell, HeatmapPayload } from "./types.js";

const SVG_NS = "http://www.w3.org/2000/svg";
const PX_PER_M = 8;

export type ZoneClickHandler = (zone: number) => void;

export class GridShapeError extends Error {}

export function cellValue(cell: HeatmapCell, analysis: string): number {
  // Move scenarios are read as deltas vs shooting; the reachability and
  // direct maps are read as plain probabilities.
  return analysis === "shoot_vs_move" || analysis === "flank_first" ? cell.delta : cell.probability;
}

export function isDivergingAnalysis(analysis: string): boolean {
  return analysis === "shoot_vs_move" || analysis === "flank_first";
}

/** Zones whose heatmap says shooting beats the move scenario. */
export function shootBetterZones(payload: HeatmapPayload): number[] {
  return payload.cells.filter((c) => c.delta < 0).map((c) => c.zone);
}

export function renderPitch(
  doc: Document,
  payload: HeatmapPayload,
  selected: Set<number>,
  onZoneClick: ZoneClickHandler,
): SVGSVGElement {
  const { columns, rows, pitch_length, pitch_width } = payload.grid;
  const maxZone = columns * rows;
  for (const cell of payload.cells) {
    if (!Number.isInteger(cell.zone) || cell.zone < 1 || cell.zone > maxZone) {
      throw new GridShapeError(
        `cell zone ${cell.zone} does not fit a ${columns}x${rows} grid`,
      );
    }
  }

  const cellW = (pitch_length / 2 / columns) * PX_PER_M;
  const cellH = (pitch_width / rows) * PX_PER_M;
  const width = cellW * columns;
  const height = cellH * rows;

  const svg = doc.createElementNS(SVG_NS, "svg");
  svg.setAttribute("viewBox", `0 0 ${width} ${height}`);
  svg.setAttribute("class", "pitch");

  const values = payload.cells.map((c) => cellValue(c, payload.analysis));
  const scale = Math.max(...values.map(Math.abs), 0);
  const diverging = isDivergingAnalysis(payload.analysis);

  for (const cell of payload.cells) {
    const col = (cell.zone - 1) % columns;
    const row = Math.floor((cell.zone - 1) / columns);
    const value = cellValue(cell, payload.analysis);
    const rect = doc.createElementNS(SVG_NS, "rect");
    rect.setAttribute("x", String(col * cellW));
    // row 0 sits at y = 0 on the pitch, which is the bottom of the drawing
    rect.setAttribute("y", String((rows - 1 - row) * cellH));
    rect.setAttribute("width", String(cellW));
    rect.setAttribute("height", String(cellH));
    rect.setAttribute("fill", diverging ? divergingColor(value, scale) : sequentialColor(value, scale));
    rect.setAttribute("data-zone", String(cell.zone));
    rect.setAttribute("class", selected.has(cell.zone) ? "zone selected" : "zone");
    const title = doc.createElementNS(SVG_NS, "title");
    title.textContent =
      `zone ${cell.zone}: ${value.toPrecision(4)}` +
      (cell.flags.length ? ` [${cell.flags.join(", ")}]` : "");
    rect.appendChild(title);
    rect.addEventListener("click", () => onZoneClick(cell.zone));
    svg.appendChild(rect);
  }
  return svg;
}
