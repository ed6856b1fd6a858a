/** Pointer handling: pixel positions to selection-state events.
 *
 * Left click toggles selection of the nearest detected peak within the
 * capture radius; right click pairs it with the most recent live selection;
 * double click strikes the peak from candidacy. Clicks landing farther than
 * the radius from every peak are ignored.
 */

import type { Marker } from "./render.js";
import { applyEvent, findSelection } from "./state.js";
import type { AppEvent, PeakDict, SelectionState } from "./types.js";

export const CAPTURE_RADIUS_PX = 12;

export interface PointerEventIn {
  button: "left" | "right";
  clickCount: number; // 1 = single, 2 = double
  px: number;
  py: number;
}

export function nearestMarker(
  markers: Marker[],
  px: number,
  py: number,
  radius: number = CAPTURE_RADIUS_PX,
): Marker | null {
  let best: Marker | null = null;
  let bestD = Infinity;
  for (const m of markers) {
    const d = Math.hypot(m.px - px, m.py - py);
    if (d < bestD) {
      bestD = d;
      best = m;
    }
  }
  return bestD <= radius ? best : null;
}

export interface PointerResult {
  state: SelectionState;
  events: AppEvent[];
}

/** Most recent live selection's order, or null when nothing is selected. */
export function focusedOrder(state: SelectionState): number | null {
  if (state.selections.length === 0) return null;
  return Math.max(...state.selections.map((s) => s.selection_order));
}

export function handlePointer(
  state: SelectionState,
  markers: Marker[],
  peaksByPlot: Map<string, PeakDict[]>,
  ev: PointerEventIn,
): PointerResult {
  const hit = nearestMarker(markers, ev.px, ev.py);
  if (hit === null) return { state, events: [] };
  const peak = peaksByPlot
    .get(hit.plotId)
    ?.find((p) => p.freq_hz === hit.freqHz);
  if (!peak) return { state, events: [] };

  const events: AppEvent[] = [];
  if (ev.clickCount >= 2) {
    events.push(["remove", hit.plotId, peak.freq_hz]);
  } else if (ev.button === "left") {
    if (findSelection(state, hit.plotId, peak.freq_hz) !== null) {
      events.push(["deselect", hit.plotId, peak.freq_hz]);
    } else {
      events.push(["select", hit.plotId, peak]);
    }
  } else {
    // right click: pair the hit peak with the most recent selection
    const focus = focusedOrder(state);
    if (focus === null) return { state, events: [] };
    let next = state;
    let hitSel = findSelection(next, hit.plotId, peak.freq_hz);
    if (hitSel === null) {
      events.push(["select", hit.plotId, peak]);
      next = applyEvent(next, events[0]);
      hitSel = findSelection(next, hit.plotId, peak.freq_hz);
    }
    if (hitSel !== null && hitSel.selection_order !== focus) {
      events.push(["pair", focus, hitSel.selection_order]);
    }
  }
  let out = state;
  for (const e of events) out = applyEvent(out, e);
  return { state: out, events };
}
