/** Browser entry: mounts the interactive report into `#app`.
 *
 * The host page carries the analysis snapshot in a
 * `<script id="session-data" type="application/json">` block. Everything the
 * entry does is a thin wiring layer over the pure modules: state reducer,
 * layout, pointer mapping, tables, and local persistence.
 */

import {
  MemoryStorage,
  freshDoc,
  loadLocal,
  saveLocal,
} from "./persist.js";
import type { PersistedDoc, StorageLike } from "./persist.js";
import { handlePointer } from "./pointer.js";
import type { PointerEventIn } from "./pointer.js";
import {
  gridLayout,
  pairLines,
  panelMarkers,
  freqToPx,
  valueToPx,
  traceValues,
} from "./render.js";
import type { Marker, PanelLayout } from "./render.js";
import { peaksCsv, ratiosCsv } from "./tables.js";
import type { PeakDict, SessionDoc, SelectionState } from "./types.js";

const SESSION_ID = "default";

function readSessionDoc(): SessionDoc | null {
  const el = document.getElementById("session-data");
  if (!el || !el.textContent) return null;
  try {
    return JSON.parse(el.textContent) as SessionDoc;
  } catch {
    return null;
  }
}

function pickStorage(): StorageLike {
  try {
    window.localStorage.setItem("sonolens:probe", "1");
    window.localStorage.removeItem("sonolens:probe");
    return window.localStorage;
  } catch {
    return new MemoryStorage();
  }
}

function stateFromDoc(doc: SessionDoc): SelectionState {
  return {
    selections: doc.selections,
    pairs: doc.pairs,
    removed: doc.removed,
    next_order: doc.next_order,
  };
}

function csvToTable(csv: string, title: string): HTMLElement {
  const wrap = document.createElement("div");
  const h = document.createElement("h2");
  h.textContent = title;
  wrap.appendChild(h);
  const table = document.createElement("table");
  const rows = csv.trim().split("\n");
  rows.forEach((row, i) => {
    const tr = document.createElement("tr");
    for (const cell of row.split(",")) {
      const td = document.createElement(i === 0 ? "th" : "td");
      td.textContent = cell;
      tr.appendChild(td);
    }
    table.appendChild(tr);
  });
  wrap.appendChild(table);
  return wrap;
}

function drawScene(
  ctx: CanvasRenderingContext2D,
  doc: SessionDoc,
  panels: PanelLayout[],
  markersByPlot: Map<string, Marker[]>,
  state: SelectionState,
  scale: "db" | "linear",
): void {
  ctx.clearRect(0, 0, ctx.canvas.width, ctx.canvas.height);
  const byId = new Map(doc.plots.map((p) => [p.plot_id, p]));
  for (const panel of panels) {
    const plot = byId.get(panel.plotId);
    if (!plot) continue;
    ctx.strokeStyle = "#444";
    ctx.strokeRect(panel.x, panel.y, panel.w, panel.h);
    ctx.fillStyle = "#222";
    ctx.font = "11px sans-serif";
    ctx.fillText(
      `${plot.clip_id} · ${plot.method}`,
      panel.x + 4,
      panel.y + 12,
    );
    const values = traceValues(plot, scale);
    ctx.strokeStyle = "#1f77b4";
    ctx.beginPath();
    plot.freqs_hz.forEach((f, i) => {
      const px = freqToPx(panel, f);
      const py = valueToPx(panel, values[i]);
      if (i === 0) ctx.moveTo(px, py);
      else ctx.lineTo(px, py);
    });
    ctx.stroke();
    for (const m of markersByPlot.get(panel.plotId) ?? []) {
      ctx.fillStyle = m.color;
      ctx.beginPath();
      ctx.arc(m.px, m.py, m.kind === "selected" ? 5 : 3, 0, 2 * Math.PI);
      ctx.fill();
    }
  }
  ctx.strokeStyle = "#d62728";
  ctx.fillStyle = "#d62728";
  for (const line of pairLines(state, markersByPlot)) {
    ctx.beginPath();
    ctx.moveTo(line.ax, line.ay);
    ctx.lineTo(line.bx, line.by);
    ctx.stroke();
    ctx.fillText(line.ratioLabel, (line.ax + line.bx) / 2, (line.ay + line.by) / 2 - 4);
  }
}

export function mount(root: HTMLElement): void {
  const doc = readSessionDoc();
  if (doc === null) {
    root.textContent = "No session data found in this page.";
    return;
  }
  const storage = pickStorage();
  const persisted: PersistedDoc =
    loadLocal(storage, SESSION_ID) ??
    (() => {
      const d = freshDoc();
      d.state = stateFromDoc(doc);
      return d;
    })();
  let state = persisted.state;
  const view = persisted.view;

  const canvas = document.createElement("canvas");
  canvas.width = Math.max(640, root.clientWidth || 960);
  canvas.height = 600;
  const tablesDiv = document.createElement("div");
  const hint = document.createElement("p");
  hint.textContent =
    "left click: select/deselect peak · right click: pair with latest " +
    "selection · double click: remove peak · press s: toggle scale";
  root.appendChild(hint);
  root.appendChild(canvas);
  root.appendChild(tablesDiv);
  const ctx = canvas.getContext("2d");
  if (!ctx) return;

  const peaksByPlot = new Map<string, PeakDict[]>(
    doc.plots.map((p) => [p.plot_id, p.peaks]),
  );
  let panels: PanelLayout[] = [];
  let markersByPlot = new Map<string, Marker[]>();

  const redraw = () => {
    panels = gridLayout(doc.plots, view, canvas.width, canvas.height, 2);
    const byId = new Map(doc.plots.map((p) => [p.plot_id, p]));
    markersByPlot = new Map(
      panels.map((panel) => [
        panel.plotId,
        panelMarkers(byId.get(panel.plotId)!, panel, state, view.scale),
      ]),
    );
    drawScene(ctx, doc, panels, markersByPlot, state, view.scale);
    tablesDiv.replaceChildren(
      csvToTable(
        peaksCsv(state, doc.plots),
        "Selected peaks",
      ),
      csvToTable(
        ratiosCsv(state, doc.integer_tolerance),
        "Ratio pairs",
      ),
    );
  };

  const persist = () => {
    saveLocal(storage, SESSION_ID, {
      state,
      view,
      revision: persisted.revision,
    });
  };

  const dispatch = (ev: PointerEventIn) => {
    const allMarkers = Array.from(markersByPlot.values()).flat();
    const result = handlePointer(state, allMarkers, peaksByPlot, ev);
    if (result.events.length === 0) return;
    state = result.state;
    persist();
    redraw();
  };

  const pos = (e: MouseEvent) => {
    const r = canvas.getBoundingClientRect();
    return { px: e.clientX - r.left, py: e.clientY - r.top };
  };
  canvas.addEventListener("click", (e) =>
    dispatch({ button: "left", clickCount: 1, ...pos(e) }),
  );
  canvas.addEventListener("dblclick", (e) =>
    dispatch({ button: "left", clickCount: 2, ...pos(e) }),
  );
  canvas.addEventListener("contextmenu", (e) => {
    e.preventDefault();
    dispatch({ button: "right", clickCount: 1, ...pos(e) });
  });
  window.addEventListener("keydown", (e) => {
    if (e.key === "s") {
      view.scale = view.scale === "db" ? "linear" : "db";
      persist();
      redraw();
    } else if (e.key >= "1" && e.key <= "5") {
      view.autoSelectN = Number(e.key);
      persist();
    }
  });

  redraw();
}

const appRoot = document.getElementById("app");
if (appRoot) mount(appRoot);
