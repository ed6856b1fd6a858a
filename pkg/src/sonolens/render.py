"""Deterministic raster export of the plot grid.

Renders an internal vector scene (panel frames, PSD traces, peak markers,
selection pair lines, optional spectrogram underlay) straight into a numpy
canvas and writes a minimal PNG (no timestamp or metadata chunks), so a fixed
snapshot always produces byte-identical output. A layout sidecar describes
the panel geometry for downstream checks.
"""

from __future__ import annotations

import struct
import zlib
from dataclasses import dataclass, field

import numpy as np

from sonolens.errors import RenderFailure
from sonolens.transforms import DB_FLOOR_DB, to_db

MIN_WIDTH = 1600
MIN_HEIGHT = 1200
MARGIN = 24
GAP = 16

BACKGROUND = (255, 255, 255)
FRAME = (70, 70, 70)
TRACE = (36, 80, 160)
PEAK = (140, 140, 140)
RIDGE = (30, 130, 60)
VEIN = (220, 140, 30)
PAIR = (200, 40, 40)

# selection colors assigned by order number
PALETTE = [
    (214, 39, 40), (31, 119, 180), (44, 160, 44), (255, 127, 14),
    (148, 103, 189), (140, 86, 75), (227, 119, 194), (127, 127, 127),
    (188, 189, 34), (23, 190, 207),
]


def order_color(order: int) -> tuple[int, int, int]:
    return PALETTE[(order - 1) % len(PALETTE)]


@dataclass
class PanelSpec:
    panel_id: str
    freqs_hz: np.ndarray
    psd_db: np.ndarray
    peaks: list[tuple[float, float]] = field(default_factory=list)  # (freq, db)
    selected: list[tuple[float, float, int]] = field(default_factory=list)  # + order
    spectrogram: tuple[np.ndarray, np.ndarray] | None = None  # (freqs, mag 2D time x freq)
    ridge: list[tuple[float, float]] | None = None  # (time_fraction, freq)
    veins: list[list[tuple[float, float]]] = field(default_factory=list)


def _put(img, x, y, color):
    h, w, _ = img.shape
    if 0 <= x < w and 0 <= y < h:
        img[y, x] = color


def draw_line(img, x0, y0, x1, y1, color, dashed=False):
    """Bresenham line; dashed skips every other 4-px run."""
    x0, y0, x1, y1 = int(round(x0)), int(round(y0)), int(round(x1)), int(round(y1))
    dx, dy = abs(x1 - x0), -abs(y1 - y0)
    sx = 1 if x0 < x1 else -1
    sy = 1 if y0 < y1 else -1
    err = dx + dy
    i = 0
    while True:
        if not dashed or (i // 4) % 2 == 0:
            _put(img, x0, y0, color)
        if x0 == x1 and y0 == y1:
            break
        e2 = 2 * err
        if e2 >= dy:
            err += dy
            x0 += sx
        if e2 <= dx:
            err += dx
            y0 += sy
        i += 1


def draw_circle(img, cx, cy, r, color, filled=False):
    cx, cy = int(round(cx)), int(round(cy))
    rr = int(r)
    for dy in range(-rr, rr + 1):
        for dx in range(-rr, rr + 1):
            d2 = dx * dx + dy * dy
            if (filled and d2 <= rr * rr) or (not filled and abs(d2 - rr * rr) <= rr):
                _put(img, cx + dx, cy + dy, color)


def draw_rect(img, x, y, w, h, color):
    draw_line(img, x, y, x + w, y, color)
    draw_line(img, x, y + h, x + w, y + h, color)
    draw_line(img, x, y, x, y + h, color)
    draw_line(img, x + w, y, x + w, y + h, color)


def write_png(rgb: np.ndarray) -> bytes:
    """Minimal 8-bit RGB PNG encoder: IHDR + IDAT + IEND only."""
    if rgb.dtype != np.uint8 or rgb.ndim != 3 or rgb.shape[2] != 3:
        raise RenderFailure("expected uint8 HxWx3 image")
    h, w, _ = rgb.shape

    def chunk(tag: bytes, payload: bytes) -> bytes:
        return (struct.pack(">I", len(payload)) + tag + payload
                + struct.pack(">I", zlib.crc32(tag + payload) & 0xFFFFFFFF))

    ihdr = struct.pack(">IIBBBBB", w, h, 8, 2, 0, 0, 0)
    raw = b"".join(b"\x00" + rgb[row].tobytes() for row in range(h))
    idat = zlib.compress(raw, 9)
    return (b"\x89PNG\r\n\x1a\n" + chunk(b"IHDR", ihdr)
            + chunk(b"IDAT", idat) + chunk(b"IEND", b""))


def _panel_extents(panel: PanelSpec):
    f = panel.freqs_hz
    fmin, fmax = float(f.min()), float(f.max())
    if fmax <= fmin:
        fmax = fmin + 1.0
    db = panel.psd_db
    lo, hi = float(db.min()), float(db.max())
    if hi <= lo:
        hi = lo + 1.0
    pad = 0.05 * (hi - lo)
    return fmin, fmax, lo - pad, hi + pad


def render_panels(panels: list[PanelSpec], n_cols: int,
                  pair_lines: list[tuple[str, float, str, float]] = (),
                  width: int = MIN_WIDTH, height: int = MIN_HEIGHT):
    """Rasterize panels into a grid; returns (png_bytes, layout dict)."""
    if width < MIN_WIDTH or height < MIN_HEIGHT:
        raise RenderFailure(f"image must be at least {MIN_WIDTH}x{MIN_HEIGHT}")
    n = max(1, len(panels))
    n_cols = max(1, min(n_cols, n))
    n_rows = (n + n_cols - 1) // n_cols
    img = np.empty((height, width, 3), dtype=np.uint8)
    img[:] = BACKGROUND
    pw = (width - 2 * MARGIN - (n_cols - 1) * GAP) // n_cols
    ph = (height - 2 * MARGIN - (n_rows - 1) * GAP) // n_rows
    layout = {"width": width, "height": height, "panels": []}
    anchors: dict[str, tuple] = {}

    for i, panel in enumerate(panels):
        row, col = divmod(i, n_cols)
        x0 = MARGIN + col * (pw + GAP)
        y0 = MARGIN + row * (ph + GAP)
        fmin, fmax, dblo, dbhi = _panel_extents(panel)

        def fx(freq):
            return x0 + (freq - fmin) / (fmax - fmin) * pw

        def fy(db):
            return y0 + ph - (db - dblo) / (dbhi - dblo) * ph

        if panel.spectrogram is not None:
            sfreqs, mag = panel.spectrogram
            if mag.size:
                db = to_db(mag)
                norm = (db - DB_FLOOR_DB) / max(1e-9, float(db.max()) - DB_FLOOR_DB)
                norm = np.clip(norm, 0.0, 1.0)
                n_t = mag.shape[0]
                # nearest-neighbor resample onto the panel box, faded toward white
                ys = np.linspace(0, n_t - 1, ph).round().astype(int)
                fcols = np.interp(np.linspace(fmin, fmax, pw), sfreqs,
                                  np.arange(sfreqs.size), left=0, right=sfreqs.size - 1)
                xs = fcols.round().astype(int)
                tile = norm[np.ix_(ys, xs)]
                shade = (255 - tile * 110).astype(np.uint8)
                img[y0:y0 + ph, x0:x0 + pw, 0] = shade
                img[y0:y0 + ph, x0:x0 + pw, 1] = shade
                img[y0:y0 + ph, x0:x0 + pw, 2] = 255

        # ridge/vein overlays share the frequency axis with the trace; their
        # time coordinate runs top to bottom across the panel
        if panel.ridge:
            pts = [(fx(freq), y0 + tf * ph) for tf, freq in panel.ridge]
            for a, b in zip(pts, pts[1:]):
                draw_line(img, a[0], a[1], b[0], b[1], RIDGE)
        for vein in panel.veins:
            pts = [(fx(freq), y0 + tf * ph) for tf, freq in vein]
            for a, b in zip(pts, pts[1:]):
                draw_line(img, a[0], a[1], b[0], b[1], VEIN, dashed=True)

        xs = fx(panel.freqs_hz)
        ys = fy(panel.psd_db)
        for j in range(len(xs) - 1):
            draw_line(img, xs[j], ys[j], xs[j + 1], ys[j + 1], TRACE)
        for freq, db in panel.peaks:
            draw_circle(img, fx(freq), fy(db), 4, PEAK)
        for freq, db, order in panel.selected:
            draw_circle(img, fx(freq), fy(db), 5, order_color(order), filled=True)
            anchors[f"{panel.panel_id}@{freq!r}"] = (fx(freq), fy(db))
        draw_rect(img, x0, y0, pw, ph, FRAME)
        layout["panels"].append({
            "plot_id": panel.panel_id, "x": x0, "y": y0, "w": pw, "h": ph,
            "freq_range": [fmin, fmax], "db_range": [dblo, dbhi],
        })

    for pid_a, fa, pid_b, fb in pair_lines:
        a = anchors.get(f"{pid_a}@{fa!r}")
        b = anchors.get(f"{pid_b}@{fb!r}")
        if a and b:
            draw_line(img, a[0], a[1], b[0], b[1], PAIR)

    return write_png(img), layout
