/** Pure layout/scene computation for the plot grid.
 *
 * Everything here is a pure function of (plots, view state, selection
 * state): the canvas painter consumes the returned scene, so re-rendering
 * with identical inputs is pixel-identical.
 */

import { orderColor } from "./state.js";
import type {
  PlotEntry,
  Scale,
  SelectionState,
  ViewState,
} from "./types.js";

export interface PanelLayout {
  plotId: string;
  x: number;
  y: number;
  w: number;
  h: number;
  freqRange: [number, number];
  valueRange: [number, number];
}

export const MARGIN = 24;
export const GAP = 16;

export function traceValues(plot: PlotEntry, scale: Scale): number[] {
  return scale === "db" ? plot.psd_db : plot.psd_linear;
}

/** Axis extents: exact data range with 5% padding on the value axis. */
export function panelExtents(
  plot: PlotEntry,
  scale: Scale,
): { freqRange: [number, number]; valueRange: [number, number] } {
  const f = plot.freqs_hz;
  let fmin = Math.min(...f);
  let fmax = Math.max(...f);
  if (fmax <= fmin) fmax = fmin + 1;
  const v = traceValues(plot, scale);
  let lo = Math.min(...v);
  let hi = Math.max(...v);
  if (hi <= lo) hi = lo + 1;
  const pad = 0.05 * (hi - lo);
  return { freqRange: [fmin, fmax], valueRange: [lo - pad, hi + pad] };
}

export function gridLayout(
  plots: PlotEntry[],
  view: ViewState,
  width: number,
  height: number,
  nCols: number,
): PanelLayout[] {
  const n = plots.length;
  if (n === 0) return [];
  const cols = Math.max(1, Math.min(nCols, n));
  const rows = Math.ceil(n / cols);
  const pw = Math.floor((width - 2 * MARGIN - (cols - 1) * GAP) / cols);
  const ph = Math.floor((height - 2 * MARGIN - (rows - 1) * GAP) / rows);
  return plots.map((p, i) => {
    const row = Math.floor(i / cols);
    const col = i % cols;
    const ext = panelExtents(p, view.scale);
    return {
      plotId: p.plot_id,
      x: MARGIN + col * (pw + GAP),
      y: MARGIN + row * (ph + GAP),
      w: pw,
      h: ph,
      freqRange: ext.freqRange,
      valueRange: ext.valueRange,
    };
  });
}

export function freqToPx(panel: PanelLayout, freq: number): number {
  const [lo, hi] = panel.freqRange;
  return panel.x + ((freq - lo) / (hi - lo)) * panel.w;
}

export function valueToPx(panel: PanelLayout, value: number): number {
  const [lo, hi] = panel.valueRange;
  return panel.y + panel.h - ((value - lo) / (hi - lo)) * panel.h;
}

export function pxToData(
  panel: PanelLayout,
  px: number,
  py: number,
): { freq: number; value: number } {
  const [flo, fhi] = panel.freqRange;
  const [vlo, vhi] = panel.valueRange;
  return {
    freq: flo + ((px - panel.x) / panel.w) * (fhi - flo),
    value: vlo + ((panel.y + panel.h - py) / panel.h) * (vhi - vlo),
  };
}

export interface Marker {
  plotId: string;
  freqHz: number;
  px: number;
  py: number;
  kind: "peak" | "selected";
  color: string;
  order: number | null;
}

/** Screen-space markers for every visible (non-removed) detected peak. */
export function panelMarkers(
  plot: PlotEntry,
  panel: PanelLayout,
  state: SelectionState,
  scale: Scale,
): Marker[] {
  const removed = new Set(
    state.removed
      .filter(([pid]) => pid === plot.plot_id)
      .map(([, f]) => f),
  );
  const selectedOrder = new Map(
    state.selections
      .filter((s) => s.plot_id === plot.plot_id)
      .map((s) => [s.peak.freq_hz, s.selection_order]),
  );
  const markers: Marker[] = [];
  for (const pk of plot.peaks) {
    if (removed.has(pk.freq_hz)) continue;
    const order = selectedOrder.get(pk.freq_hz) ?? null;
    markers.push({
      plotId: plot.plot_id,
      freqHz: pk.freq_hz,
      px: freqToPx(panel, pk.freq_hz),
      py: valueToPx(panel, scale === "db" ? pk.power_db : pk.power_linear),
      kind: order === null ? "peak" : "selected",
      color: order === null ? "#8c8c8c" : orderColor(order),
      order,
    });
  }
  return markers;
}

export interface PairLine {
  ax: number;
  ay: number;
  bx: number;
  by: number;
  ratioLabel: string;
}

export function pairLines(
  state: SelectionState,
  markersByPlot: Map<string, Marker[]>,
): PairLine[] {
  const at = (plotId: string, freq: number): Marker | undefined =>
    markersByPlot.get(plotId)?.find((m) => m.freqHz === freq);
  const lines: PairLine[] = [];
  for (const p of state.pairs) {
    const sa = state.selections.find((s) => s.selection_order === p.order_a);
    const sb = state.selections.find((s) => s.selection_order === p.order_b);
    if (!sa || !sb) continue;
    const ma = at(sa.plot_id, sa.peak.freq_hz);
    const mb = at(sb.plot_id, sb.peak.freq_hz);
    if (!ma || !mb) continue;
    lines.push({
      ax: ma.px,
      ay: ma.py,
      bx: mb.px,
      by: mb.py,
      ratioLabel: p.ratio.toFixed(3),
    });
  }
  return lines;
}
