"""Serialization of session snapshots: CSV, JSON, PNG, HTML.

All formats derive from one immutable snapshot, so counts and values agree
across them. JSON is the canonical interchange format (schema version 1);
import ignores unknown fields.
"""

from __future__ import annotations

import html
import io
import csv as csvmod
import json
import warnings
from importlib import resources

import numpy as np

from sonolens.clips import SanitizeReport
from sonolens.errors import BundleMissing
from sonolens.features import Peak, Ridge, Vein
from sonolens.harmonics import SelectionState
from sonolens.manifest import ParameterManifest
from sonolens.pipeline import PlotData, Session
from sonolens.render import PanelSpec, render_panels
from sonolens.transforms import SpectralResult, Spectrogram, TransformParams

SCHEMA_VERSION = 1


def _sig6(x: float) -> str:
    """Six significant digits, trailing zeros kept (RFC-4180 cell content)."""
    return format(float(x), "#.6g")


def dumps_canonical(obj) -> str:
    """The one JSON writer used everywhere, so exports byte-agree."""
    return json.dumps(obj, separators=(",", ":"), allow_nan=False)


def _floats(arr) -> list[float]:
    return [float(v) for v in np.asarray(arr).ravel()]


def _plot_to_dict(p: PlotData, include_arrays: bool = True) -> dict:
    d = {
        "plot_id": p.plot_id,
        "clip_id": p.clip_id,
        "method": p.method,
        "params": p.result.params.to_dict(),
        "sanitize": p.result.sanitize.to_dict(),
        "peaks": [pk.to_dict() for pk in p.peaks],
    }
    if include_arrays:
        d["freqs_hz"] = _floats(p.result.freqs_hz)
        d["psd_linear"] = _floats(p.result.psd_linear)
        d["psd_db"] = _floats(p.result.psd_db)
        if p.spectrogram is not None:
            d["spectrogram"] = {
                "times_s": _floats(p.spectrogram.times_s),
                "freqs_hz": _floats(p.spectrogram.freqs_hz),
                "magnitude": [_floats(row) for row in p.spectrogram.magnitude],
            }
        else:
            d["spectrogram"] = None
        d["ridge"] = p.ridge.to_dict() if p.ridge is not None else None
        d["veins"] = [v.to_dict() for v in p.veins]
    return d


def _plot_from_dict(d: dict) -> PlotData:
    params = TransformParams.from_dict(d.get("params", {}))
    freqs = np.array(d.get("freqs_hz", []), dtype=np.float64)
    lin = np.array(d.get("psd_linear", []), dtype=np.float64)
    db = np.array(d.get("psd_db", []), dtype=np.float64)
    rep = d.get("sanitize", {})
    report = SanitizeReport(
        nan_replaced=int(rep.get("nan_replaced", 0)),
        inf_replaced=int(rep.get("inf_replaced", 0)),
        zero_floored=int(rep.get("zero_floored", 0)),
        epsilon_used=float(rep.get("epsilon_used", 1e-12)),
    )
    result = SpectralResult(method=d["method"], freqs_hz=freqs, psd_linear=lin,
                            psd_db=db, params=params, sanitize=report)
    sg = d.get("spectrogram")
    spectrogram = None
    if sg:
        spectrogram = Spectrogram(
            times_s=np.array(sg["times_s"], dtype=np.float64),
            freqs_hz=np.array(sg["freqs_hz"], dtype=np.float64),
            magnitude=np.array(sg["magnitude"], dtype=np.float64).reshape(
                len(sg["times_s"]), len(sg["freqs_hz"])),
        )
    ridge = None
    if d.get("ridge"):
        ridge = Ridge(points=[tuple(pt) for pt in d["ridge"]["points"]])
    veins = [Vein(points=[tuple(pt) for pt in v["points"]]) for v in d.get("veins", [])]
    return PlotData(
        plot_id=d["plot_id"], clip_id=d["clip_id"], method=d["method"],
        result=result, spectrogram=spectrogram,
        peaks=[Peak.from_dict(pk) for pk in d.get("peaks", [])],
        ridge=ridge, veins=veins,
    )


def session_to_dict(session: Session, include_arrays: bool = True) -> dict:
    graph = session.graph()
    return {
        "schema": SCHEMA_VERSION,
        "manifest": session.manifest.to_dict(),
        "plots": [_plot_to_dict(p, include_arrays) for p in session.plots],
        "selections": [s.to_dict() for s in session.state.selections],
        "pairs": [p.to_dict() for p in session.state.pairs],
        "removed": [list(r) for r in session.state.removed],
        "next_order": session.state.next_order,
        "integer_tolerance": session.integer_tolerance,
        "graph": graph.to_dict(),
    }


def export_json(session: Session, include_arrays: bool = True) -> str:
    return dumps_canonical(session_to_dict(session, include_arrays))


def import_json(text: str) -> Session:
    """Rebuild a session from its JSON export (unknown fields ignored)."""
    doc = json.loads(text)
    manifest = ParameterManifest.from_dict(doc.get("manifest", {}))
    plots = [_plot_from_dict(p) for p in doc.get("plots", [])]
    state = SelectionState.from_dict({
        "selections": doc.get("selections", []),
        "pairs": doc.get("pairs", []),
        "removed": doc.get("removed", []),
        "next_order": doc.get("next_order", 1),
    })
    return Session(manifest=manifest, plots=plots, state=state,
                   integer_tolerance=float(doc.get("integer_tolerance", 0.05)))


PEAKS_HEADER = ("plot_id,clip_id,method,selection_order,freq_hz,power_linear,"
                "power_db,width_hz,prominence")
RATIOS_HEADER = "pair_id,freq_a_hz,freq_b_hz,ratio,is_near_integer"


def export_csv(session: Session) -> dict[str, str]:
    """Two CSV tables: selected peaks, and ratio pairs.

    RFC-4180 quoting, LF line endings, six significant digits.
    """
    graph = session.graph()
    clip_by_plot = {p.plot_id: (p.clip_id, p.method) for p in session.plots}

    buf = io.StringIO()
    w = csvmod.writer(buf, lineterminator="\n")
    w.writerow(PEAKS_HEADER.split(","))
    for s in session.state.selections:
        clip_id, method = clip_by_plot.get(s.plot_id, (s.plot_id, ""))
        pk = s.peak
        w.writerow([s.plot_id, clip_id, method, s.order, _sig6(pk.freq_hz),
                    _sig6(pk.power_linear), _sig6(pk.power_db),
                    _sig6(pk.width_hz), _sig6(pk.prominence)])
    peaks_csv = buf.getvalue()

    buf = io.StringIO()
    w = csvmod.writer(buf, lineterminator="\n")
    w.writerow(RATIOS_HEADER.split(","))
    near = {(e.order_a, e.order_b): e.is_near_integer for e in graph.edges}
    for i, p in enumerate(session.state.pairs):
        fa = session.state.by_order(p.order_a).peak.freq_hz
        fb = session.state.by_order(p.order_b).peak.freq_hz
        flag = "true" if near.get((p.order_a, p.order_b), False) else "false"
        w.writerow([i, _sig6(fa), _sig6(fb), _sig6(p.ratio), flag])
    return {"peaks": peaks_csv, "ratios": buf.getvalue()}


def export_image(session: Session, width: int = 1600, height: int = 1200):
    """Raster snapshot of the plot grid; returns (png_bytes, layout sidecar)."""
    methods: list[str] = []
    for p in session.plots:
        if p.method not in methods:
            methods.append(p.method)
    selected_by_plot: dict[str, list] = {}
    for s in session.state.selections:
        selected_by_plot.setdefault(s.plot_id, []).append(
            (s.peak.freq_hz, s.peak.power_db, s.order))
    panels = []
    for p in session.plots:
        tmin = float(p.spectrogram.times_s[0]) if p.spectrogram is not None and p.spectrogram.times_s.size else 0.0
        tmax = float(p.spectrogram.times_s[-1]) if p.spectrogram is not None and p.spectrogram.times_s.size else 1.0
        span = max(1e-9, tmax - tmin)
        panels.append(PanelSpec(
            panel_id=p.plot_id,
            freqs_hz=p.result.freqs_hz,
            psd_db=p.result.psd_db,
            peaks=[(pk.freq_hz, pk.power_db) for pk in p.peaks],
            selected=selected_by_plot.get(p.plot_id, []),
            spectrogram=(None if p.spectrogram is None
                         else (p.spectrogram.freqs_hz, p.spectrogram.magnitude)),
            ridge=(None if p.ridge is None else
                   [((pt[0] - tmin) / span, pt[1]) for pt in p.ridge.points]),
            veins=[[((pt[0] - tmin) / span, pt[1]) for pt in v.points]
                   for v in p.veins],
        ))
    pair_lines = []
    for pr in session.state.pairs:
        sa = session.state.by_order(pr.order_a)
        sb = session.state.by_order(pr.order_b)
        pair_lines.append((sa.plot_id, sa.peak.freq_hz, sb.plot_id, sb.peak.freq_hz))
    return render_panels(panels, n_cols=max(1, len(methods)),
                         pair_lines=pair_lines, width=width, height=height)


def _static_tables(session: Session) -> str:
    csvs = export_csv(session)
    out = []
    for title, text in [("Selected peaks", csvs["peaks"]), ("Ratio pairs", csvs["ratios"])]:
        rows = [r for r in text.strip().split("\n") if r]
        out.append(f"<h2>{html.escape(title)}</h2><table>")
        for i, row in enumerate(rows):
            tag = "th" if i == 0 else "td"
            cells = "".join(f"<{tag}>{html.escape(c)}</{tag}>"
                            for c in next(csvmod.reader([row])))
            out.append(f"<tr>{cells}</tr>")
        out.append("</table>")
    return "\n".join(out)


def find_bundle() -> str | None:
    """Locate the interactive client bundle shipped as package data."""
    try:
        res = resources.files("sonolens").joinpath("static/app.js")
        if res.is_file():
            return res.read_text()
    except (FileNotFoundError, ModuleNotFoundError):
        pass
    return None


def export_html(session: Session, bundle_js: str | None = None) -> str:
    """Self-contained HTML report embedding the JSON snapshot.

    With the client bundle available the report stays interactive offline;
    otherwise static tables are emitted and a BundleMissing warning raised.
    """
    doc_json = export_json(session)
    if bundle_js is None:
        bundle_js = find_bundle()
    if bundle_js is None:
        warnings.warn("interactive bundle not found; emitting static tables",
                      BundleMissing)
        body = f'<div id="app"></div>\n{_static_tables(session)}'
        script = ""
    else:
        body = '<div id="app"></div>'
        script = f"<script>\n{bundle_js}\n</script>"
    return f"""<!DOCTYPE html>
<html lang="en">
<head>
<meta charset="utf-8">
<title>sonolens report</title>
<style>
body {{ font-family: sans-serif; margin: 1.5rem; }}
table {{ border-collapse: collapse; }}
th, td {{ border: 1px solid #999; padding: 2px 8px; font-size: 0.85rem; }}
</style>
</head>
<body>
<h1>sonolens report</h1>
<script id="session-data" type="application/json">{doc_json}</script>
{body}
{script}
</body>
</html>
"""
