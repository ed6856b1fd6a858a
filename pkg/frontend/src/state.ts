/** Pure selection-state reducer.
 *
 * These transitions are the client half of a shared-semantics contract: the
 * analysis server applies the same event vocabulary, and replaying any event
 * log on either side must produce the identical state (parity fixtures pin
 * this in the test suite). Order numbers are assigned once and never reused.
 */

import type { AppEvent, PeakDict, SelectionState } from "./types.js";

export const FREQ_EPS = 1e-9;

export function emptyState(): SelectionState {
  return { selections: [], pairs: [], removed: [], next_order: 1 };
}

export function findSelection(
  state: SelectionState,
  plotId: string,
  freqHz: number,
): SelectionState["selections"][number] | null {
  for (const s of state.selections) {
    if (s.plot_id === plotId && Math.abs(s.peak.freq_hz - freqHz) <= FREQ_EPS) {
      return s;
    }
  }
  return null;
}

export function byOrder(state: SelectionState, order: number) {
  const s = state.selections.find((x) => x.selection_order === order);
  if (!s) throw new Error(`no live selection with order ${order}`);
  return s;
}

/** max/min frequency ratio, always >= 1. */
export function computeRatio(fa: number, fb: number): number {
  if (fa <= 0 || fb <= 0) {
    throw new Error(`frequencies must be positive, got ${fa}, ${fb}`);
  }
  return Math.max(fa, fb) / Math.min(fa, fb);
}

export function isNearInteger(ratio: number, tolerance: number): boolean {
  return Math.abs(ratio - Math.round(ratio)) <= tolerance;
}

export function select(
  state: SelectionState,
  plotId: string,
  peak: PeakDict,
): SelectionState {
  if (findSelection(state, plotId, peak.freq_hz) !== null) return state;
  return {
    ...state,
    selections: [
      ...state.selections,
      { plot_id: plotId, peak, selection_order: state.next_order },
    ],
    next_order: state.next_order + 1,
  };
}

export function deselect(
  state: SelectionState,
  plotId: string,
  freqHz: number,
): SelectionState {
  const sel = findSelection(state, plotId, freqHz);
  if (sel === null) {
    throw new Error(`no selection at ${freqHz} Hz on plot ${plotId}`);
  }
  return {
    ...state,
    selections: state.selections.filter(
      (s) => s.selection_order !== sel.selection_order,
    ),
    pairs: state.pairs.filter(
      (p) =>
        p.order_a !== sel.selection_order && p.order_b !== sel.selection_order,
    ),
  };
}

export function remove(
  state: SelectionState,
  plotId: string,
  freqHz: number,
): SelectionState {
  let next = state;
  if (findSelection(state, plotId, freqHz) !== null) {
    next = deselect(state, plotId, freqHz);
  }
  return { ...next, removed: [...next.removed, [plotId, freqHz]] };
}

export function pair(
  state: SelectionState,
  orderA: number,
  orderB: number,
): SelectionState {
  const sa = byOrder(state, orderA);
  const sb = byOrder(state, orderB);
  const ratio = computeRatio(sa.peak.freq_hz, sb.peak.freq_hz);
  return {
    ...state,
    pairs: [...state.pairs, { order_a: orderA, order_b: orderB, ratio }],
  };
}

export function applyEvent(state: SelectionState, ev: AppEvent): SelectionState {
  switch (ev[0]) {
    case "select":
      return select(state, ev[1], ev[2]);
    case "deselect":
      return deselect(state, ev[1], ev[2]);
    case "remove":
      return remove(state, ev[1], ev[2]);
    case "pair":
      return pair(state, ev[1], ev[2]);
    default:
      throw new Error(`unknown event ${(ev as unknown[])[0]}`);
  }
}

export function applyEvents(
  state: SelectionState,
  events: AppEvent[],
): SelectionState {
  return events.reduce(applyEvent, state);
}

export function isRemoved(
  state: SelectionState,
  plotId: string,
  freqHz: number,
): boolean {
  return state.removed.some(
    ([pid, f]) => pid === plotId && Math.abs(f - freqHz) <= FREQ_EPS,
  );
}

/** Color for a selection order; a pure function so colors never shuffle. */
export const PALETTE = [
  "#d62728", "#1f77b4", "#2ca02c", "#ff7f0e", "#9467bd",
  "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
];

export function orderColor(order: number): string {
  return PALETTE[(order - 1) % PALETTE.length];
}
