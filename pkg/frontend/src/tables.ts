/** Computation tables, kept cell-identical to the engine's CSV exports. */

import { boolCell, sig6 } from "./format.js";
import { byOrder, isNearInteger } from "./state.js";
import type { PlotMeta, SelectionState } from "./types.js";

export const PEAKS_HEADER =
  "plot_id,clip_id,method,selection_order,freq_hz,power_linear," +
  "power_db,width_hz,prominence";
export const RATIOS_HEADER = "pair_id,freq_a_hz,freq_b_hz,ratio,is_near_integer";

export function peaksRows(
  state: SelectionState,
  plots: PlotMeta[],
): string[][] {
  const meta = new Map(plots.map((p) => [p.plot_id, p]));
  return state.selections.map((s) => {
    const m = meta.get(s.plot_id);
    return [
      s.plot_id,
      m ? m.clip_id : s.plot_id,
      m ? m.method : "",
      String(s.selection_order),
      sig6(s.peak.freq_hz),
      sig6(s.peak.power_linear),
      sig6(s.peak.power_db),
      sig6(s.peak.width_hz),
      sig6(s.peak.prominence),
    ];
  });
}

export function ratiosRows(
  state: SelectionState,
  integerTolerance: number,
): string[][] {
  return state.pairs.map((p, i) => {
    const fa = byOrder(state, p.order_a).peak.freq_hz;
    const fb = byOrder(state, p.order_b).peak.freq_hz;
    return [
      String(i),
      sig6(fa),
      sig6(fb),
      sig6(p.ratio),
      boolCell(isNearInteger(p.ratio, integerTolerance)),
    ];
  });
}

/** Full CSV text (LF endings), matching the engine's download format. */
export function peaksCsv(state: SelectionState, plots: PlotMeta[]): string {
  const lines = [PEAKS_HEADER, ...peaksRows(state, plots).map((r) => r.join(","))];
  return lines.join("\n") + "\n";
}

export function ratiosCsv(
  state: SelectionState,
  integerTolerance: number,
): string {
  const lines = [
    RATIOS_HEADER,
    ...ratiosRows(state, integerTolerance).map((r) => r.join(",")),
  ];
  return lines.join("\n") + "\n";
}
