"""Parameter grid search and validation-subset sampling."""

from __future__ import annotations

import random
from dataclasses import dataclass, field, replace

import numpy as np

from sonolens.clips import AudioClip, ClipCollection
from sonolens.errors import InvalidParams, KTooLarge
from sonolens.features import PeakConfig, detect_peaks, extract_ridge
from sonolens.transforms import (
    SpectralResult,
    Spectrogram,
    TransformParams,
    compute_psd,
    compute_spectrogram,
    to_db,
)

METRICS = ("spectral_contrast", "peak_count", "ridge_variance")


@dataclass(frozen=True)
class GridSpec:
    n_fft_values: tuple[int, ...] = (512, 1024, 2048)
    hop_divisors: tuple[int, ...] = (2, 4, 8)
    method: str = "FFT_DUAL"
    metric: str = "spectral_contrast"
    hop_literal: bool = False  # treat hop_divisors as literal sample hops
    base_params: TransformParams = field(default_factory=TransformParams)

    def __post_init__(self):
        if not self.n_fft_values or not self.hop_divisors:
            raise InvalidParams("grid lists must be non-empty")
        if self.metric not in METRICS:
            raise InvalidParams(f"unknown metric {self.metric!r}")
        if not self.hop_literal:
            for n in self.n_fft_values:
                for d in self.hop_divisors:
                    if n % d != 0:
                        raise InvalidParams(f"divisor {d} does not divide n_fft {n}")


@dataclass
class GridCell:
    n_fft: int
    hop_divisor: int
    hop_length: int
    metric_value: float | None
    result: SpectralResult | None
    spectrogram: Spectrogram | None
    error: str | None = None

    @property
    def failed(self) -> bool:
        return self.error is not None


@dataclass
class GridResult:
    spec: GridSpec
    cells: list[GridCell]
    best_cell: int | None

    def cell(self, n_fft: int, divisor: int) -> GridCell:
        for c in self.cells:
            if c.n_fft == n_fft and c.hop_divisor == divisor:
                return c
        raise KeyError((n_fft, divisor))


def _metric_value(metric: str, psd: SpectralResult, spec: Spectrogram) -> float:
    if metric == "spectral_contrast":
        db = to_db(spec.magnitude)
        return float(np.mean(db.max(axis=1) - np.median(db, axis=1)))
    if metric == "peak_count":
        return float(len(detect_peaks(psd, PeakConfig())))
    if metric == "ridge_variance":
        ridge = extract_ridge(spec)
        return float(np.var([p[1] for p in ridge.points]))
    raise InvalidParams(f"unknown metric {metric!r}")


def run_grid(clip: AudioClip, spec: GridSpec) -> GridResult:
    """Evaluate every (n_fft, hop) combination; failed cells don't stop the grid.

    The best cell maximizes the metric; ties break to the smallest n_fft, then
    the smallest divisor.
    """
    cells = []
    for n_fft in spec.n_fft_values:
        for d in spec.hop_divisors:
            hop = d if spec.hop_literal else n_fft // d
            try:
                params = replace(spec.base_params, method=spec.method,
                                 n_fft=n_fft, hop_length=hop)
                psd = compute_psd(clip, params)
                sg = compute_spectrogram(clip, params)
                value = _metric_value(spec.metric, psd, sg)
                cells.append(GridCell(n_fft, d, hop, value, psd, sg))
            except Exception as exc:  # per-cell failure, grid continues
                cells.append(GridCell(n_fft, d, hop, None, None, None, error=str(exc)))
    best = None
    for i, c in enumerate(cells):
        if c.failed:
            continue
        if best is None:
            best = i
            continue
        b = cells[best]
        if (c.metric_value, -c.n_fft, -c.hop_divisor) > (b.metric_value, -b.n_fft, -b.hop_divisor):
            best = i
    return GridResult(spec=spec, cells=cells, best_cell=best)


def grid_csv(grid: GridResult) -> str:
    """Cell-per-row CSV of the grid outcome."""
    lines = ["n_fft,hop_divisor,hop_length,metric,metric_value,status"]
    for c in grid.cells:
        status = "failed" if c.failed else "ok"
        value = "" if c.metric_value is None else format(c.metric_value, "#.6g")
        lines.append(f"{c.n_fft},{c.hop_divisor},{c.hop_length},{grid.spec.metric},{value},{status}")
    return "\n".join(lines) + "\n"


def sample_validation(collection: ClipCollection, k: int, seed: int) -> list[str]:
    """Uniform sample of clip ids without replacement, deterministic per seed."""
    ids = collection.ids()
    if not 1 <= k <= len(ids):
        raise KTooLarge(f"k={k} outside [1, {len(ids)}]")
    return random.Random(seed).sample(ids, k)
