"""WAV ingestion, annotation-based segmentation, and sample sanitization."""

from __future__ import annotations

import csv
import fnmatch
import hashlib
import io
import os
from dataclasses import dataclass, field

import numpy as np
from scipy.io import wavfile

from sonolens.errors import (
    EmptyAudio,
    NoMatches,
    OutOfRangeAnnotation,
    UnreadableFile,
    UnsupportedEncoding,
)

DB_EPSILON = 1e-12


@dataclass
class SanitizeReport:
    nan_replaced: int = 0
    inf_replaced: int = 0
    zero_floored: int = 0
    epsilon_used: float = DB_EPSILON

    def merged(self, other: "SanitizeReport") -> "SanitizeReport":
        return SanitizeReport(
            self.nan_replaced + other.nan_replaced,
            self.inf_replaced + other.inf_replaced,
            self.zero_floored + other.zero_floored,
            self.epsilon_used,
        )

    def to_dict(self) -> dict:
        return {
            "nan_replaced": self.nan_replaced,
            "inf_replaced": self.inf_replaced,
            "zero_floored": self.zero_floored,
            "epsilon_used": self.epsilon_used,
        }


@dataclass(frozen=True)
class Annotation:
    onset_s: float
    offset_s: float
    label: str

    def __post_init__(self):
        if not self.onset_s < self.offset_s:
            raise ValueError(f"annotation onset {self.onset_s} must precede offset {self.offset_s}")


@dataclass
class AudioClip:
    id: str
    samples: np.ndarray
    sample_rate_hz: int
    source_path: str = ""
    onset_s: float = 0.0
    offset_s: float = 0.0
    group_key: str = ""
    label: str = ""

    def __post_init__(self):
        self.samples = np.asarray(self.samples, dtype=np.float64)
        if self.samples.size == 0:
            raise EmptyAudio(f"clip {self.id} has no samples")
        if self.sample_rate_hz <= 0:
            raise ValueError("sample_rate_hz must be positive")
        if self.offset_s == 0.0 and self.onset_s == 0.0:
            self.offset_s = self.samples.size / self.sample_rate_hz

    @property
    def duration_s(self) -> float:
        return self.samples.size / self.sample_rate_hz

    def digest(self) -> str:
        """Content hash of the sample data and rate, for the manifest."""
        m = hashlib.sha256()
        m.update(np.ascontiguousarray(self.samples).tobytes())
        m.update(str(self.sample_rate_hz).encode())
        return m.hexdigest()


@dataclass
class ClipCollection:
    """Clips grouped by key, with tabular metadata kept beside the audio."""
    groups: dict[str, list[AudioClip]] = field(default_factory=dict)
    metadata: dict[str, dict[str, str]] = field(default_factory=dict)

    def add(self, clip: AudioClip) -> None:
        if clip.id in self.metadata:
            raise ValueError(f"duplicate clip id {clip.id}")
        self.groups.setdefault(clip.group_key, []).append(clip)
        self.metadata[clip.id] = {
            "clip_id": clip.id,
            "source": clip.source_path,
            "onset_s": repr(clip.onset_s),
            "offset_s": repr(clip.offset_s),
            "label": clip.label,
            "group_key": clip.group_key,
            "sample_rate_hz": str(clip.sample_rate_hz),
        }

    def clips(self) -> list[AudioClip]:
        return [c for group in self.groups.values() for c in group]

    def ids(self) -> list[str]:
        return [c.id for c in self.clips()]

    def get(self, clip_id: str) -> AudioClip:
        for c in self.clips():
            if c.id == clip_id:
                return c
        raise KeyError(clip_id)

    def __len__(self) -> int:
        return len(self.metadata)

    def metadata_csv(self) -> str:
        """Metadata table as CSV with a fixed header row."""
        cols = ["clip_id", "source", "onset_s", "offset_s", "label",
                "group_key", "sample_rate_hz"]
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(cols)
        for c in self.clips():
            row = self.metadata[c.id]
            w.writerow([row[k] for k in cols])
        return buf.getvalue()


def sanitize(values, report: SanitizeReport | None = None) -> tuple[np.ndarray, SanitizeReport]:
    """Replace NaN with 0 and +-Inf with +-1 (clamped full scale).

    Total function: any real sequence in, finite sequence out. Zeros are left
    alone here; the epsilon floor applies only at dB conversion.
    """
    out = np.asarray(values, dtype=np.float64).copy()
    rep = report if report is not None else SanitizeReport()
    nan_mask = np.isnan(out)
    inf_mask = np.isinf(out)
    rep.nan_replaced += int(nan_mask.sum())
    rep.inf_replaced += int(inf_mask.sum())
    out[nan_mask] = 0.0
    out[inf_mask] = np.sign(out[inf_mask])
    return out, rep


def load_wav(path: str) -> AudioClip:
    """Load a WAV file as a mono, full-scale-normalized clip.

    PCM 16/24/32-bit and IEEE float 32 are supported. Multichannel audio is
    averaged to mono.
    """
    try:
        rate, data = wavfile.read(path)
    except FileNotFoundError:
        raise UnreadableFile(f"no such file: {path}")
    except ValueError as exc:
        raise UnsupportedEncoding(f"{path}: {exc}")
    except Exception as exc:
        raise UnreadableFile(f"{path}: {exc}")
    if data.size == 0:
        raise EmptyAudio(path)
    if data.dtype == np.int16:
        samples = data.astype(np.float64) / 32768.0
    elif data.dtype == np.int32:
        # scipy left-justifies 24-bit samples into int32, so one divisor fits both
        samples = data.astype(np.float64) / 2147483648.0
    elif data.dtype in (np.float32, np.float64):
        samples = data.astype(np.float64)
    elif data.dtype == np.uint8:
        samples = (data.astype(np.float64) - 128.0) / 128.0
    else:
        raise UnsupportedEncoding(f"{path}: unsupported sample dtype {data.dtype}")
    if samples.ndim > 1:
        samples = samples.mean(axis=1)
    samples = np.clip(samples, -1.0, 1.0)
    samples, _ = sanitize(samples)
    stem = os.path.splitext(os.path.basename(path))[0]
    return AudioClip(id=stem, samples=samples, sample_rate_hz=int(rate),
                     source_path=str(path))


def clip_to_wav_bytes(clip: AudioClip) -> bytes:
    """Serialize a clip as an IEEE float32 WAV blob."""
    buf = io.BytesIO()
    wavfile.write(buf, clip.sample_rate_hz, clip.samples.astype(np.float32))
    return buf.getvalue()


def parse_indices(text: str, n: int) -> list[int]:
    """Parse an index-set string like ``"0,2,5-7"``; ``"all"`` keeps everything."""
    if text.strip().lower() in ("", "all", "*"):
        return list(range(n))
    picked = []
    for part in text.split(","):
        part = part.strip()
        if "-" in part:
            lo, hi = part.split("-", 1)
            picked.extend(range(int(lo), int(hi) + 1))
        else:
            picked.append(int(part))
    return [i for i in picked if 0 <= i < n]


def select_files(root: str, pattern: str = "*.wav", indices: str = "all") -> list[str]:
    """Select files under ``root`` by glob pattern, then by index set.

    Ordering is deterministic (lexicographic over relative paths); indices and
    ranges apply after the pattern filter.
    """
    if not os.path.isdir(root):
        raise NoMatches(f"not a directory: {root}")
    matches = []
    for dirpath, dirnames, filenames in os.walk(root):
        dirnames.sort()
        for name in sorted(filenames):
            if fnmatch.fnmatch(name, pattern):
                matches.append(os.path.join(dirpath, name))
    matches.sort()
    picked = [matches[i] for i in parse_indices(indices, len(matches))]
    if not picked:
        raise NoMatches(f"no files under {root} match {pattern!r} with indices {indices!r}")
    return picked


def segment(clip: AudioClip, annotations: list[Annotation]) -> ClipCollection:
    """Cut a clip at annotation points into a labeled collection.

    Each annotation yields one clip whose group key is the annotation label.
    Overlapping annotations are allowed and share samples.
    """
    coll = ClipCollection()
    for i, ann in enumerate(annotations):
        start = round(ann.onset_s * clip.sample_rate_hz)
        stop = round(ann.offset_s * clip.sample_rate_hz)
        if start < 0 or stop > clip.samples.size:
            raise OutOfRangeAnnotation(
                f"annotation [{ann.onset_s}, {ann.offset_s}]s exceeds clip "
                f"duration {clip.duration_s:.6g}s")
        coll.add(AudioClip(
            id=f"{clip.id}_{i:03d}",
            samples=clip.samples[start:stop].copy(),
            sample_rate_hz=clip.sample_rate_hz,
            source_path=clip.source_path,
            onset_s=ann.onset_s,
            offset_s=ann.offset_s,
            group_key=ann.label,
            label=ann.label,
        ))
    return coll


def read_annotation_sidecar(wav_path: str) -> list[Annotation]:
    """Read the tab-separated label track next to a WAV file.

    Format: one ``onset<TAB>offset<TAB>label`` row per line, sidecar file with
    the same stem and a ``.txt`` extension. Returns [] when absent.
    """
    sidecar = os.path.splitext(wav_path)[0] + ".txt"
    if not os.path.exists(sidecar):
        return []
    anns = []
    with open(sidecar, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) < 2:
                continue
            label = parts[2] if len(parts) > 2 else ""
            anns.append(Annotation(float(parts[0]), float(parts[1]), label))
    return anns
