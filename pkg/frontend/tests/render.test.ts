import { describe, expect, it } from "vitest";

import {
  GAP,
  MARGIN,
  freqToPx,
  gridLayout,
  pairLines,
  panelExtents,
  panelMarkers,
  pxToData,
  valueToPx,
} from "../src/render.js";
import { applyEvents, emptyState, orderColor } from "../src/state.js";
import { DEFAULT_VIEW } from "../src/types.js";
import type { PeakDict, PlotEntry, ViewState } from "../src/types.js";

function mkPeak(freq: number, db: number): PeakDict {
  return {
    bin_index: Math.round(freq),
    freq_hz: freq,
    power_linear: 10 ** (db / 10),
    power_db: db,
    width_hz: 2.0,
    prominence: 0.5,
  };
}

function mkPlot(plotId: string): PlotEntry {
  const freqs = Array.from({ length: 101 }, (_, i) => i * 100);
  const psdDb = freqs.map((f) =>
    f === 4400 ? -10 : f === 8800 ? -40 : -80,
  );
  return {
    plot_id: plotId,
    clip_id: "clip0",
    method: "FFT_DUAL",
    freqs_hz: freqs,
    psd_db: psdDb,
    psd_linear: psdDb.map((d) => 10 ** (d / 10)),
    peaks: [mkPeak(4400, -10), mkPeak(8800, -40)],
    spectrogram: null,
    ridge: null,
    veins: [],
  };
}

describe("panel extents", () => {
  it("frequency axis spans the exact data range", () => {
    const ext = panelExtents(mkPlot("p1"), "db");
    expect(ext.freqRange).toEqual([0, 10000]);
  });

  it("value axis gets 5% padding on both sides", () => {
    const ext = panelExtents(mkPlot("p1"), "db");
    const pad = 0.05 * 70; // data range is [-80, -10]
    expect(ext.valueRange[0]).toBeCloseTo(-80 - pad, 12);
    expect(ext.valueRange[1]).toBeCloseTo(-10 + pad, 12);
  });

  it("linear and db scales give different value ranges", () => {
    const a = panelExtents(mkPlot("p1"), "db").valueRange;
    const b = panelExtents(mkPlot("p1"), "linear").valueRange;
    expect(a).not.toEqual(b);
  });
});

describe("grid layout", () => {
  const plots = [mkPlot("p1"), mkPlot("p2"), mkPlot("p3")];

  it("panels stay inside the margins and never overlap", () => {
    const panels = gridLayout(plots, DEFAULT_VIEW, 900, 600, 2);
    expect(panels).toHaveLength(3);
    for (const p of panels) {
      expect(p.x).toBeGreaterThanOrEqual(MARGIN);
      expect(p.y).toBeGreaterThanOrEqual(MARGIN);
      expect(p.x + p.w).toBeLessThanOrEqual(900 - MARGIN + 1);
      expect(p.y + p.h).toBeLessThanOrEqual(600 - MARGIN + 1);
    }
    for (let i = 0; i < panels.length; i++) {
      for (let j = i + 1; j < panels.length; j++) {
        const a = panels[i];
        const b = panels[j];
        const overlapX = a.x < b.x + b.w && b.x < a.x + a.w;
        const overlapY = a.y < b.y + b.h && b.y < a.y + a.h;
        expect(overlapX && overlapY).toBe(false);
      }
    }
  });

  it("rows wrap after nCols panels with a GAP between", () => {
    const panels = gridLayout(plots, DEFAULT_VIEW, 900, 600, 2);
    expect(panels[0].y).toBe(panels[1].y);
    expect(panels[2].y).toBe(panels[0].y + panels[0].h + GAP);
  });

  it("pixel and data coordinates round-trip", () => {
    const [panel] = gridLayout([mkPlot("p1")], DEFAULT_VIEW, 900, 600, 1);
    const px = freqToPx(panel, 4400);
    const py = valueToPx(panel, -10);
    const back = pxToData(panel, px, py);
    expect(back.freq).toBeCloseTo(4400, 6);
    expect(back.value).toBeCloseTo(-10, 6);
  });
});

describe("markers and pair lines", () => {
  const plot = mkPlot("p1");
  const view: ViewState = { ...DEFAULT_VIEW };
  const [panel] = gridLayout([plot], view, 900, 600, 1);

  it("unselected peaks are gray, selected take the order color", () => {
    const state = applyEvents(emptyState(), [["select", "p1", plot.peaks[0]]]);
    const markers = panelMarkers(plot, panel, state, "db");
    expect(markers).toHaveLength(2);
    const sel = markers.find((m) => m.freqHz === 4400)!;
    const other = markers.find((m) => m.freqHz === 8800)!;
    expect(sel.kind).toBe("selected");
    expect(sel.color).toBe(orderColor(1));
    expect(other.kind).toBe("peak");
    expect(other.color).toBe("#8c8c8c");
  });

  it("removed peaks produce no marker", () => {
    const state = applyEvents(emptyState(), [["remove", "p1", 8800]]);
    const markers = panelMarkers(plot, panel, state, "db");
    expect(markers.map((m) => m.freqHz)).toEqual([4400]);
  });

  it("pairs become labeled screen lines between their markers", () => {
    const state = applyEvents(emptyState(), [
      ["select", "p1", plot.peaks[0]],
      ["select", "p1", plot.peaks[1]],
      ["pair", 1, 2],
    ]);
    const markers = panelMarkers(plot, panel, state, "db");
    const lines = pairLines(state, new Map([["p1", markers]]));
    expect(lines).toHaveLength(1);
    expect(lines[0].ratioLabel).toBe("2.000");
    expect(lines[0].ax).not.toBe(lines[0].bx);
  });

  it("toggling the scale re-projects markers but keeps state intact", () => {
    const state = applyEvents(emptyState(), [
      ["select", "p1", plot.peaks[0]],
      ["select", "p1", plot.peaks[1]],
      ["pair", 1, 2],
    ]);
    const before = JSON.stringify(state);
    const dbPanel = gridLayout([plot], { ...view, scale: "db" }, 900, 600, 1)[0];
    const linPanel = gridLayout(
      [plot],
      { ...view, scale: "linear" },
      900,
      600,
      1,
    )[0];
    const dbMarkers = panelMarkers(plot, dbPanel, state, "db");
    const linMarkers = panelMarkers(plot, linPanel, state, "linear");
    // same peaks and selection status on both scales
    expect(linMarkers.map((m) => [m.freqHz, m.kind])).toEqual(
      dbMarkers.map((m) => [m.freqHz, m.kind]),
    );
    // vertical placement differs between scales
    expect(linMarkers.map((m) => m.py)).not.toEqual(dbMarkers.map((m) => m.py));
    // pairs survive on both scales
    expect(pairLines(state, new Map([["p1", linMarkers]]))).toHaveLength(1);
    expect(JSON.stringify(state)).toBe(before);
  });
});
