"""Spectral peak detection and spectrogram ridge/vein extraction."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from sonolens.transforms import SpectralResult, Spectrogram, to_db


@dataclass(frozen=True)
class Peak:
    bin_index: int
    freq_hz: float
    power_linear: float
    power_db: float
    width_hz: float
    prominence: float

    def to_dict(self) -> dict:
        return {
            "bin_index": self.bin_index,
            "freq_hz": self.freq_hz,
            "power_linear": self.power_linear,
            "power_db": self.power_db,
            "width_hz": self.width_hz,
            "prominence": self.prominence,
        }

    @staticmethod
    def from_dict(d: dict) -> "Peak":
        return Peak(int(d["bin_index"]), float(d["freq_hz"]), float(d["power_linear"]),
                    float(d["power_db"]), float(d["width_hz"]), float(d["prominence"]))


@dataclass(frozen=True)
class PeakConfig:
    height_percentile: float = 75.0
    min_prominence_fraction: float = 0.05
    max_peaks: int = 20

    def __post_init__(self):
        if not 0.0 <= self.height_percentile <= 100.0:
            raise ValueError("height_percentile must be in [0, 100]")
        if not 0.0 <= self.min_prominence_fraction <= 1.0:
            raise ValueError("min_prominence_fraction must be in [0, 1]")
        if self.max_peaks < 1:
            raise ValueError("max_peaks must be >= 1")


@dataclass
class Ridge:
    points: list[tuple[float, float, float]]  # (time_s, freq_hz, magnitude)

    def to_dict(self) -> dict:
        return {"points": [list(p) for p in self.points]}


@dataclass
class Vein:
    points: list[tuple[float, float, float]]

    @property
    def persistence_frames(self) -> int:
        return len(self.points)

    @property
    def total_magnitude(self) -> float:
        return float(sum(p[2] for p in self.points))

    def to_dict(self) -> dict:
        return {"points": [list(p) for p in self.points],
                "persistence_frames": self.persistence_frames}


def _local_maxima(x: np.ndarray) -> list[int]:
    """Strict interior maxima; plateaus contribute their leftmost index."""
    out = []
    n = x.size
    i = 1
    while i < n - 1:
        if x[i] > x[i - 1]:
            j = i
            while j + 1 < n and x[j + 1] == x[i]:
                j += 1
            if j < n - 1 and x[j + 1] < x[i]:
                out.append(i)
            i = j + 1
        else:
            i += 1
    return out


def _prominence(x: np.ndarray, i: int) -> float:
    """Peak height above the higher flanking saddle.

    Each saddle is the minimum between the peak and the nearest higher point
    (or the edge of the array when no higher point exists on that side).
    """
    h = x[i]
    left_min = h
    j = i - 1
    while j >= 0 and x[j] <= h:
        left_min = min(left_min, x[j])
        j -= 1
    if j < 0:
        left_min = min(left_min, x[0]) if i > 0 else h
    right_min = h
    j = i + 1
    while j < x.size and x[j] <= h:
        right_min = min(right_min, x[j])
        j += 1
    return float(h - max(left_min, right_min))


def _width_hz(x: np.ndarray, freqs: np.ndarray, i: int, prominence: float) -> float:
    """Frequency span at half-prominence height, linearly interpolated."""
    level = x[i] - prominence / 2.0
    # left crossing
    j = i
    while j > 0 and x[j - 1] >= level:
        j -= 1
    if j == 0:
        left = freqs[0]
    else:
        f1, f2, v1, v2 = freqs[j - 1], freqs[j], x[j - 1], x[j]
        left = f1 + (level - v1) / (v2 - v1) * (f2 - f1) if v2 != v1 else f2
    j = i
    n = x.size
    while j < n - 1 and x[j + 1] >= level:
        j += 1
    if j == n - 1:
        right = freqs[-1]
    else:
        f1, f2, v1, v2 = freqs[j], freqs[j + 1], x[j], x[j + 1]
        right = f1 + (v1 - level) / (v1 - v2) * (f2 - f1) if v1 != v2 else f1
    return float(max(0.0, right - left))


def detect_peaks(result: SpectralResult, cfg: PeakConfig = PeakConfig()) -> list[Peak]:
    """Local maxima passing both the percentile and relative-prominence gates.

    Thresholds are relative to the spectrum itself, so the selected set is
    invariant under positive scaling. Output is sorted by power descending
    (bin index ascending on ties) and truncated to max_peaks.
    """
    x = result.psd_linear
    if x.size < 3:
        return []
    height_floor = float(np.percentile(x, cfg.height_percentile))
    prom_floor = cfg.min_prominence_fraction * float(x.max())
    peaks = []
    for i in _local_maxima(x):
        if x[i] < height_floor:
            continue
        prom = _prominence(x, i)
        if prom < prom_floor:
            continue
        peaks.append(Peak(
            bin_index=i,
            freq_hz=float(result.freqs_hz[i]),
            power_linear=float(x[i]),
            power_db=float(result.psd_db[i]),
            width_hz=_width_hz(x, result.freqs_hz, i, prom),
            prominence=prom,
        ))
    peaks.sort(key=lambda p: (-p.power_linear, p.bin_index))
    return peaks[:cfg.max_peaks]


def extract_ridge(spec: Spectrogram) -> Ridge:
    """Per-frame dominant frequency (ties break to the lowest frequency)."""
    idx = np.argmax(spec.magnitude, axis=1)
    pts = [(float(spec.times_s[t]), float(spec.freqs_hz[idx[t]]),
            float(spec.magnitude[t, idx[t]])) for t in range(spec.magnitude.shape[0])]
    return Ridge(points=pts)


def extract_veins(spec: Spectrogram, max_jump_hz: float | None = None,
                  min_persistence: int = 5, max_veins: int = 8) -> list[Vein]:
    """Persistent energy bands tracked across frames.

    Per frame, up to max_veins local maxima are found across frequency; maxima
    in consecutive frames link greedily by nearest frequency when the jump is
    within max_jump_hz (default: 4 bin widths). Tracks shorter than
    min_persistence are dropped; output sorts by total magnitude descending.
    """
    if min_persistence < 2:
        raise ValueError("min_persistence must be >= 2")
    if spec.freqs_hz.size > 1:
        bin_width = float(spec.freqs_hz[1] - spec.freqs_hz[0])
    else:
        bin_width = 1.0
    if max_jump_hz is None:
        max_jump_hz = 4.0 * bin_width
    if max_jump_hz <= 0:
        raise ValueError("max_jump_hz must be positive")

    n_frames = spec.magnitude.shape[0]
    frame_maxima: list[list[int]] = []
    for t in range(n_frames):
        row = spec.magnitude[t]
        cands = [i for i in _local_maxima(row) if row[i] > 0.0]
        cands.sort(key=lambda i: (-row[i], i))
        frame_maxima.append(sorted(cands[:max_veins]))

    open_tracks: list[list[tuple[float, float, float]]] = []
    closed: list[list[tuple[float, float, float]]] = []
    for t in range(n_frames):
        row = spec.magnitude[t]
        points = [(float(spec.times_s[t]), float(spec.freqs_hz[i]), float(row[i]))
                  for i in frame_maxima[t]]
        # greedy nearest-frequency matching, each maximum used once
        pairs = []
        for ti, track in enumerate(open_tracks):
            for pi, pt in enumerate(points):
                d = abs(track[-1][1] - pt[1])
                if d <= max_jump_hz:
                    pairs.append((d, ti, pi))
        pairs.sort()
        used_tracks: set[int] = set()
        used_points: set[int] = set()
        for d, ti, pi in pairs:
            if ti in used_tracks or pi in used_points:
                continue
            open_tracks[ti].append(points[pi])
            used_tracks.add(ti)
            used_points.add(pi)
        survivors = []
        for ti, track in enumerate(open_tracks):
            if ti in used_tracks:
                survivors.append(track)
            else:
                closed.append(track)
        for pi, pt in enumerate(points):
            if pi not in used_points:
                survivors.append([pt])
        open_tracks = survivors
    closed.extend(open_tracks)
    veins = [Vein(points=tr) for tr in closed if len(tr) >= min_persistence]
    veins.sort(key=lambda v: (-v.total_magnitude, v.points[0][1]))
    return veins
