"""The six comparative frequency-domain transforms and dual-scale results.

Every transform is a pure function of (clip, params) returning a
:class:`SpectralResult` holding both linear and dB power values. All methods
share the Welch-style normalization so a full-scale sine peaks at the same
level regardless of window choice.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from sonolens import wavelets
from sonolens.clips import AudioClip, SanitizeReport, sanitize
from sonolens.errors import ClipTooShort, InvalidParams
from sonolens.kernels import cqt_bin_responses

METHODS = ("FFT_DUAL", "CQT", "WAVE", "SWT", "CHIRPLET", "MULTI_RES")
WINDOWS = ("hann", "hamming", "rectangular")
DB_FLOOR = 1e-12
DB_FLOOR_DB = -120.0

DEFAULT_CHIRP_RATES = (-2000.0, -1000.0, -500.0, 0.0, 500.0, 1000.0, 2000.0)


def to_db(psd_linear) -> np.ndarray:
    """10*log10 with a 1e-12 floor (-120 dB, ~24-bit dynamic range)."""
    x = np.asarray(psd_linear, dtype=np.float64)
    return 10.0 * np.log10(np.maximum(x, DB_FLOOR))


def to_linear(psd_db) -> np.ndarray:
    """Inverse of :func:`to_db`, exact above the floor."""
    return 10.0 ** (np.asarray(psd_db, dtype=np.float64) / 10.0)


def window_array(name: str, n: int) -> np.ndarray:
    """Periodic analysis window of length n."""
    t = np.arange(n)
    if name == "hann":
        return 0.5 - 0.5 * np.cos(2.0 * np.pi * t / n)
    if name == "hamming":
        return 0.54 - 0.46 * np.cos(2.0 * np.pi * t / n)
    if name == "rectangular":
        return np.ones(n)
    raise InvalidParams(f"unknown window {name!r}")


def default_multires_plan(sample_rate_hz: int) -> tuple[tuple[int, float, float], ...]:
    """Default stitch plan: long windows at low frequency, short at high."""
    nyq = sample_rate_hz / 2.0
    plan = []
    edges = [(4096, 0.0, 1000.0), (2048, 1000.0, 4000.0), (512, 4000.0, nyq)]
    for n_fft, lo, hi in edges:
        if lo >= nyq:
            break
        plan.append((n_fft, lo, min(hi, nyq)))
    plan[-1] = (plan[-1][0], plan[-1][1], nyq)
    return tuple(plan)


@dataclass(frozen=True)
class TransformParams:
    method: str = "FFT_DUAL"
    n_fft: int = 2048
    hop_length: int = 512
    window: str = "hann"
    fmin_hz: float = 32.70
    fmax_hz: float | None = None  # None -> Nyquist at validation time
    bins_per_octave: int = 12
    wavelet: str = "sym8"
    decomposition_levels: int = 5
    chirp_rates_hz_per_s: tuple[float, ...] = DEFAULT_CHIRP_RATES
    multires_window_plan: tuple[tuple[int, float, float], ...] | None = None

    def resolved(self, sample_rate_hz: int) -> "TransformParams":
        """Fill sample-rate-dependent defaults and validate."""
        p = self
        if p.fmax_hz is None:
            p = replace(p, fmax_hz=sample_rate_hz / 2.0)
        if p.multires_window_plan is None:
            p = replace(p, multires_window_plan=default_multires_plan(sample_rate_hz))
        p.validate(sample_rate_hz)
        return p

    def validate(self, sample_rate_hz: int) -> None:
        n = self.n_fft
        if self.method not in METHODS:
            raise InvalidParams(f"unknown method {self.method!r}")
        if n < 16 or n > 65536 or (n & (n - 1)) != 0:
            raise InvalidParams(f"n_fft must be a power of two in [16, 65536], got {n}")
        if not 1 <= self.hop_length <= n:
            raise InvalidParams(f"hop_length must be in [1, n_fft], got {self.hop_length}")
        if self.window not in WINDOWS:
            raise InvalidParams(f"unknown window {self.window!r}")
        nyq = sample_rate_hz / 2.0
        if self.fmax_hz is not None:
            if not (0.0 < self.fmin_hz < self.fmax_hz <= nyq + 1e-9):
                raise InvalidParams(
                    f"need 0 < fmin ({self.fmin_hz}) < fmax ({self.fmax_hz}) <= Nyquist ({nyq})")
        if self.bins_per_octave < 1:
            raise InvalidParams("bins_per_octave must be >= 1")
        if self.decomposition_levels < 1:
            raise InvalidParams("decomposition_levels must be >= 1")
        if self.wavelet not in wavelets.FILTERS:
            raise InvalidParams(f"unknown wavelet {self.wavelet!r}")
        if self.method == "CHIRPLET" and len(self.chirp_rates_hz_per_s) == 0:
            raise InvalidParams("chirp_rates_hz_per_s must be non-empty")
        plan = self.multires_window_plan
        if self.method == "MULTI_RES" and plan is not None:
            if len(plan) == 0:
                raise InvalidParams("empty multires plan")
            prev_hi = None
            for n_fft, lo, hi in plan:
                if n_fft < 16 or (n_fft & (n_fft - 1)) != 0:
                    raise InvalidParams(f"bad plan n_fft {n_fft}")
                if hi <= lo:
                    raise InvalidParams(f"bad plan band ({lo}, {hi}]")
                if prev_hi is not None and abs(lo - prev_hi) > 1e-9:
                    raise InvalidParams("multires plan bands must tile without gaps or overlaps")
                prev_hi = hi
            if plan[-1][2] > nyq + 1e-9:
                raise InvalidParams("multires plan exceeds Nyquist")

    def to_dict(self) -> dict:
        return {
            "method": self.method,
            "n_fft": self.n_fft,
            "hop_length": self.hop_length,
            "window": self.window,
            "fmin_hz": self.fmin_hz,
            "fmax_hz": self.fmax_hz,
            "bins_per_octave": self.bins_per_octave,
            "wavelet": self.wavelet,
            "decomposition_levels": self.decomposition_levels,
            "chirp_rates_hz_per_s": list(self.chirp_rates_hz_per_s),
            "multires_window_plan": (None if self.multires_window_plan is None
                                     else [list(e) for e in self.multires_window_plan]),
        }

    @staticmethod
    def from_dict(d: dict) -> "TransformParams":
        plan = d.get("multires_window_plan")
        return TransformParams(
            method=d.get("method", "FFT_DUAL"),
            n_fft=int(d.get("n_fft", 2048)),
            hop_length=int(d.get("hop_length", 512)),
            window=d.get("window", "hann"),
            fmin_hz=float(d.get("fmin_hz", 32.70)),
            fmax_hz=None if d.get("fmax_hz") is None else float(d["fmax_hz"]),
            bins_per_octave=int(d.get("bins_per_octave", 12)),
            wavelet=d.get("wavelet", "sym8"),
            decomposition_levels=int(d.get("decomposition_levels", 5)),
            chirp_rates_hz_per_s=tuple(d.get("chirp_rates_hz_per_s", DEFAULT_CHIRP_RATES)),
            multires_window_plan=(None if plan is None
                                  else tuple((int(n), float(lo), float(hi)) for n, lo, hi in plan)),
        )


@dataclass
class SpectralResult:
    method: str
    freqs_hz: np.ndarray
    psd_linear: np.ndarray
    psd_db: np.ndarray
    params: TransformParams
    sanitize: SanitizeReport = field(default_factory=SanitizeReport)

    def __post_init__(self):
        self.freqs_hz = np.asarray(self.freqs_hz, dtype=np.float64)
        self.psd_linear = np.asarray(self.psd_linear, dtype=np.float64)
        self.psd_db = np.asarray(self.psd_db, dtype=np.float64)
        if not (len(self.freqs_hz) == len(self.psd_linear) == len(self.psd_db)):
            raise InvalidParams("freqs/psd length mismatch")


@dataclass
class Spectrogram:
    times_s: np.ndarray
    freqs_hz: np.ndarray
    magnitude: np.ndarray  # (time, frequency), linear power
    sanitize: SanitizeReport = field(default_factory=SanitizeReport)

    def __post_init__(self):
        self.times_s = np.asarray(self.times_s, dtype=np.float64)
        self.freqs_hz = np.asarray(self.freqs_hz, dtype=np.float64)
        self.magnitude = np.asarray(self.magnitude, dtype=np.float64)
        if self.magnitude.shape != (len(self.times_s), len(self.freqs_hz)):
            raise InvalidParams("spectrogram axis/matrix mismatch")


def _make_result(method, freqs, psd_linear, params, report=None) -> SpectralResult:
    psd_linear, rep = sanitize(psd_linear, report)
    psd_linear = np.maximum(psd_linear, 0.0)
    return SpectralResult(method=method, freqs_hz=freqs, psd_linear=psd_linear,
                          psd_db=to_db(psd_linear), params=params, sanitize=rep)


def _frames(samples: np.ndarray, n_fft: int, hop: int) -> np.ndarray:
    """Overlapping analysis frames; short input is zero-padded to one frame."""
    x = np.asarray(samples, dtype=np.float64)
    if x.size < n_fft:
        x = np.pad(x, (0, n_fft - x.size))
    return np.lib.stride_tricks.sliding_window_view(x, n_fft)[::hop]


def rfft_segment(segment: np.ndarray) -> np.ndarray:
    """One-sided transform of a single segment (the kernel all FFT paths use)."""
    return np.fft.rfft(np.asarray(segment, dtype=np.float64))


def compute_psd(clip: AudioClip, params: TransformParams) -> SpectralResult:
    """Welch-style averaged one-sided PSD.

    Normalized by the squared coherent window gain so a full-scale sine peaks
    at 0.5 (-3.01 dB) at an exact bin for every supported window.
    """
    p = params.resolved(clip.sample_rate_hz)
    n_fft, hop = p.n_fft, p.hop_length
    w = window_array(p.window, n_fft)
    frames = _frames(clip.samples, n_fft, hop)
    spec = np.abs(np.fft.rfft(frames * w, axis=1)) ** 2
    psd = spec.mean(axis=0) / (w.sum() ** 2)
    psd[1:] *= 2.0
    if n_fft % 2 == 0:
        psd[-1] /= 2.0  # Nyquist bin is not mirrored
    freqs = np.arange(n_fft // 2 + 1) * (clip.sample_rate_hz / n_fft)
    return _make_result(p.method, freqs, psd, p)


def compute_spectrogram(clip: AudioClip, params: TransformParams) -> Spectrogram:
    """Short-time magnitude-squared matrix; frame t covers [t*hop, t*hop+n_fft)."""
    p = params.resolved(clip.sample_rate_hz)
    n_fft, hop = p.n_fft, p.hop_length
    w = window_array(p.window, n_fft)
    frames = _frames(clip.samples, n_fft, hop)
    mag = np.abs(np.fft.rfft(frames * w, axis=1)) ** 2 / (w.sum() ** 2)
    mag[:, 1:] *= 2.0
    if n_fft % 2 == 0:
        mag[:, -1] /= 2.0
    mag, rep = sanitize(mag)
    mag = np.maximum(mag.reshape(frames.shape[0], -1), 0.0)
    times = (np.arange(frames.shape[0]) * hop + n_fft / 2.0) / clip.sample_rate_hz
    freqs = np.arange(n_fft // 2 + 1) * (clip.sample_rate_hz / n_fft)
    return Spectrogram(times_s=times, freqs_hz=freqs, magnitude=mag, sanitize=rep)


def compute_fft_dual(clip: AudioClip, params: TransformParams) -> tuple[SpectralResult, Spectrogram]:
    """High-resolution PSD at n_fft plus a lower-resolution spectrogram.

    The spectrogram runs at n_fft/4 with hop n_fft/8 for a visible
    time/frequency contrast from a single parameter.
    """
    p = params.resolved(clip.sample_rate_hz)
    psd = compute_psd(clip, p)
    spec_params = replace(p, n_fft=max(16, p.n_fft // 4), hop_length=max(1, p.n_fft // 8))
    spec = compute_spectrogram(clip, spec_params)
    return psd, spec


def _cqt_atoms(p: TransformParams, sample_rate_hz: int):
    q = 1.0 / (2.0 ** (1.0 / p.bins_per_octave) - 1.0)
    n_bins = math.ceil(p.bins_per_octave * math.log2(p.fmax_hz / p.fmin_hz))
    freqs = p.fmin_hz * 2.0 ** (np.arange(n_bins) / p.bins_per_octave)
    lengths = np.maximum(4, np.ceil(q * sample_rate_hz / freqs)).astype(np.int64)
    offsets = np.zeros(n_bins, dtype=np.int64)
    offsets[1:] = np.cumsum(lengths)[:-1]
    total = int(lengths.sum())
    wcos = np.empty(total)
    wsin = np.empty(total)
    norms = np.empty(n_bins)
    for k in range(n_bins):
        nk = int(lengths[k])
        w = window_array("hann", nk)
        phase = 2.0 * np.pi * freqs[k] * np.arange(nk) / sample_rate_hz
        off = int(offsets[k])
        wcos[off:off + nk] = w * np.cos(phase)
        wsin[off:off + nk] = -w * np.sin(phase)
        norms[k] = (w.sum() / 2.0) ** 2
    return freqs, wcos, wsin, offsets, lengths, norms


def compute_cqt(clip: AudioClip, params: TransformParams) -> SpectralResult:
    """Constant-Q spectrum via direct per-bin windowed inner products.

    Bin k sits at fmin * 2**(k/bins_per_octave); its atom length scales with
    Q = 1/(2**(1/bpo) - 1). Responses are averaged over hop positions.
    """
    p = params.resolved(clip.sample_rate_hz)
    if p.fmin_hz < 10.0:
        raise InvalidParams("CQT fmin must be >= 10 Hz")
    freqs, wcos, wsin, offsets, lengths, norms = _cqt_atoms(p, clip.sample_rate_hz)
    if clip.samples.size < int(lengths.max()):
        raise ClipTooShort(
            f"clip of {clip.samples.size} samples is shorter than the longest "
            f"constant-Q window ({int(lengths.max())} samples at {freqs[0]:.6g} Hz)")
    psd = cqt_bin_responses(clip.samples, wcos, wsin, offsets, lengths, norms,
                            p.hop_length)
    return _make_result(p.method, freqs, psd, p)


def _dyadic_result(method, energies, params, sample_rate_hz, rep):
    """Map band energies over a dyadic partition of [0, Nyquist] to a PSD."""
    nyq = sample_rate_hz / 2.0
    n_bands = len(energies)
    width = nyq / n_bands
    freqs = (np.arange(n_bands) + 0.5) * width
    psd = np.asarray(energies) / width
    return _make_result(method, freqs, psd, params, rep)


def _pad_to_multiple(x: np.ndarray, m: int) -> np.ndarray:
    rem = x.size % m
    if rem == 0 and x.size > 0:
        return x
    return np.pad(x, (0, m - rem if rem else m))


def compute_wavelet_packet(clip: AudioClip, params: TransformParams) -> SpectralResult:
    """Full packet tree to depth L; leaf energies in frequency order as band PSD."""
    p = params.resolved(clip.sample_rate_hz)
    levels = p.decomposition_levels
    if clip.samples.size < 2 ** levels:
        raise ClipTooShort(
            f"need at least 2**{levels} samples for {levels} packet levels")
    x, rep = sanitize(clip.samples)
    x = _pad_to_multiple(x, 2 ** levels)
    energies = wavelets.packet_band_energies(x, p.wavelet, levels)
    return _dyadic_result(p.method, energies, p, clip.sample_rate_hz, rep)


def compute_swt(clip: AudioClip, params: TransformParams) -> SpectralResult:
    """Undecimated transform; per-level energies as an L+1 band PSD.

    Bands ascend in frequency: final approximation first, then details from
    the deepest level up. Band edges are dyadic: [0, nyq/2**L], then doubling.
    """
    p = params.resolved(clip.sample_rate_hz)
    levels = p.decomposition_levels
    x, rep = sanitize(clip.samples)
    x = _pad_to_multiple(x, 2 ** levels)
    energies = wavelets.swt_band_energies(x, p.wavelet, levels)
    nyq = clip.sample_rate_hz / 2.0
    edges = [0.0] + [nyq / 2.0 ** (levels - i) for i in range(levels + 1)]
    freqs = np.array([(edges[i] + edges[i + 1]) / 2.0 for i in range(len(energies))])
    widths = np.array([edges[i + 1] - edges[i] for i in range(len(energies))])
    psd = np.asarray(energies) / widths
    return _make_result(p.method, freqs, psd, p, rep)


def chirplet_details(clip: AudioClip, params: TransformParams):
    """Chirplet dictionary response plus the best rate per start-frequency bin.

    Atoms are Gaussian-windowed linear chirps (sigma = n_fft/6 samples) on the
    PSD bin grid x the configured rate grid. The response at a bin is the max
    over rates and frame positions of the squared normalized inner product.
    """
    p = params.resolved(clip.sample_rate_hz)
    if len(p.chirp_rates_hz_per_s) == 0:
        raise InvalidParams("chirp rate grid is empty")
    n_fft, hop, fs = p.n_fft, p.hop_length, clip.sample_rate_hz
    t = np.arange(n_fft) / fs
    sigma = n_fft / 6.0
    w = np.exp(-0.5 * ((np.arange(n_fft) - (n_fft - 1) / 2.0) / sigma) ** 2)
    frames = _frames(clip.samples, n_fft, hop)
    frame_norms = np.sum(frames ** 2, axis=1)
    atom_norm = np.sum(w ** 2)
    n_bins = n_fft // 2 + 1
    rates = np.asarray(p.chirp_rates_hz_per_s, dtype=np.float64)
    best = np.zeros(n_bins)
    best_rate = np.full(n_bins, rates[0])
    denom = frame_norms[:, None] * atom_norm
    ok = frame_norms > 0.0
    for rate in rates:
        # inner products with every start-frequency atom at once: demodulate
        # the quadratic phase, then a plain DFT covers the whole bin grid
        demod = frames * (w * np.exp(-1j * np.pi * rate * t ** 2))[None, :]
        resp = np.abs(np.fft.fft(demod, axis=1)[:, :n_bins]) ** 2
        resp = np.where(ok[:, None], resp / np.maximum(denom, DB_FLOOR), 0.0)
        resp = resp.max(axis=0)
        better = resp > best
        best_rate[better] = rate
        best = np.maximum(best, resp)
    freqs = np.arange(n_bins) * (fs / n_fft)
    return _make_result(p.method, freqs, best, p), best_rate


def compute_chirplet(clip: AudioClip, params: TransformParams) -> SpectralResult:
    result, _ = chirplet_details(clip, params)
    return result


def compute_multires(clip: AudioClip, params: TransformParams) -> SpectralResult:
    """Stitch PSDs of different window lengths into one continuous spectrum.

    Each plan entry contributes its band's bins; at every seam the upper
    segment is rescaled by the ratio of 3-bin edge averages so the stitched
    curve stays continuous.
    """
    p = params.resolved(clip.sample_rate_hz)
    plan = p.multires_window_plan
    if plan is None or len(plan) == 0:
        raise InvalidParams("multires plan missing")
    freqs_out: list[np.ndarray] = []
    psd_out: list[np.ndarray] = []
    rep = SanitizeReport()
    for i, (n_fft, lo, hi) in enumerate(plan):
        sub = replace(p, n_fft=n_fft, hop_length=max(1, min(p.hop_length, n_fft)))
        r = compute_psd(clip, sub)
        rep = rep.merged(r.sanitize)
        if i == 0:
            mask = (r.freqs_hz >= lo) & (r.freqs_hz <= hi)
        else:
            mask = (r.freqs_hz > lo) & (r.freqs_hz <= hi)
        f, v = r.freqs_hz[mask], r.psd_linear[mask]
        if freqs_out:
            last_f = freqs_out[-1][-1]
            keep = f > last_f
            f, v = f[keep], v[keep]
            tail = np.mean(psd_out[-1][-3:])
            head = np.mean(v[:3]) if v.size >= 1 else 0.0
            if head > 0.0 and tail > 0.0:
                v = v * (tail / head)
        if f.size:
            freqs_out.append(f)
            psd_out.append(v)
    freqs = np.concatenate(freqs_out)
    psd = np.concatenate(psd_out)
    return _make_result(p.method, freqs, psd, p, rep)


def compute(clip: AudioClip, params: TransformParams):
    """Dispatch on params.method.

    Returns (SpectralResult, Spectrogram or None). FFT_DUAL carries its
    lower-resolution spectrogram; other methods return None for it.
    """
    method = params.method
    if method == "FFT_DUAL":
        psd, spec = compute_fft_dual(clip, params)
        return psd, spec
    if method == "CQT":
        return compute_cqt(clip, params), None
    if method == "WAVE":
        return compute_wavelet_packet(clip, params), None
    if method == "SWT":
        return compute_swt(clip, params), None
    if method == "CHIRPLET":
        return compute_chirplet(clip, params), None
    if method == "MULTI_RES":
        return compute_multires(clip, params), None
    raise InvalidParams(f"unknown method {method!r}")
