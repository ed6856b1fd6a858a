"""Batch analysis pipeline: config -> clips -> plots -> session.

The manifest built here records every consumed parameter with provenance, and
carries enough information that :func:`rerun_from_manifest` reproduces the
run (and its JSON export) byte-for-byte.
"""

from __future__ import annotations

import dataclasses
import logging
from dataclasses import dataclass, field, replace

import sonolens
from sonolens import clips as clipmod
from sonolens.clips import AudioClip, ClipCollection
from sonolens.errors import NoMatches, SonolensError
from sonolens.features import Peak, PeakConfig, Ridge, Vein, detect_peaks, extract_ridge, extract_veins
from sonolens.harmonics import (
    DEFAULT_AUTO_SELECT_N,
    DEFAULT_INTEGER_TOLERANCE,
    HarmonicGraph,
    SelectionState,
    auto_select,
    build_graph,
)
from sonolens.manifest import AuditContext, ParameterManifest, audit_assumptions
from sonolens.transforms import (
    METHODS,
    SpectralResult,
    Spectrogram,
    TransformParams,
    compute,
    compute_spectrogram,
)

log = logging.getLogger("sonolens")

DEFAULT_METHODS = ("FFT_DUAL",)


@dataclass(frozen=True)
class RunConfig:
    input_root: str = "."
    pattern: str = "*.wav"
    indices: str = "all"
    use_annotations: bool = True
    methods: tuple[str, ...] = DEFAULT_METHODS
    param_overrides: dict = field(default_factory=dict)  # user-set TransformParams fields
    peak_overrides: dict = field(default_factory=dict)   # user-set PeakConfig fields
    auto_select_n: int = DEFAULT_AUTO_SELECT_N
    integer_tolerance: float = DEFAULT_INTEGER_TOLERANCE
    seed: int = 0

    def transform_params(self) -> TransformParams:
        base = TransformParams()
        fields = {f.name for f in dataclasses.fields(TransformParams)}
        overrides = {k: v for k, v in self.param_overrides.items() if k in fields}
        return replace(base, **overrides)

    def peak_config(self) -> PeakConfig:
        base = PeakConfig()
        fields = {f.name for f in dataclasses.fields(PeakConfig)}
        overrides = {k: v for k, v in self.peak_overrides.items() if k in fields}
        return dataclasses.replace(base, **overrides)


@dataclass
class PlotData:
    plot_id: str
    clip_id: str
    method: str
    result: SpectralResult
    spectrogram: Spectrogram | None
    peaks: list[Peak]
    ridge: Ridge | None
    veins: list[Vein]


@dataclass
class Session:
    manifest: ParameterManifest
    plots: list[PlotData]
    state: SelectionState
    integer_tolerance: float = DEFAULT_INTEGER_TOLERANCE
    collection: ClipCollection | None = None
    errors: list[str] = field(default_factory=list)

    def graph(self) -> HarmonicGraph:
        return build_graph(self.state, self.integer_tolerance)

    def plot(self, plot_id: str) -> PlotData:
        for p in self.plots:
            if p.plot_id == plot_id:
                return p
        raise KeyError(plot_id)


def _build_manifest(config: RunConfig, sample_rate_hz: int | None) -> ParameterManifest:
    man = ParameterManifest(tool_version=sonolens.__version__)
    params = config.transform_params()
    peak_cfg = config.peak_config()

    def prov(name: str, overrides: dict) -> str:
        return "user" if name in overrides else "default"

    man.add("input_root", config.input_root,
            "user" if config.input_root != "." else "default")
    man.add("pattern", config.pattern,
            "user" if config.pattern != "*.wav" else "default")
    man.add("indices", config.indices,
            "user" if config.indices != "all" else "default")
    man.add("use_annotations", config.use_annotations, "default"
            if config.use_annotations else "user")
    man.add("methods", list(config.methods),
            "user" if tuple(config.methods) != DEFAULT_METHODS else "default")
    man.add("seed", config.seed, "user" if config.seed != 0 else "default")
    man.add("auto_select_n", config.auto_select_n,
            "user" if config.auto_select_n != DEFAULT_AUTO_SELECT_N else "default")
    man.add("integer_tolerance", config.integer_tolerance,
            "user" if config.integer_tolerance != DEFAULT_INTEGER_TOLERANCE else "default")
    man.add("multichannel_policy", "average", "default")
    for name, value in params.to_dict().items():
        if name == "method":
            continue
        unit = {"n_fft": "samples", "hop_length": "samples", "fmin_hz": "Hz",
                "fmax_hz": "Hz", "chirp_rates_hz_per_s": "Hz/s"}.get(name, "")
        man.add(name, value, prov(name, config.param_overrides), unit)
    for name, value in [("height_percentile", peak_cfg.height_percentile),
                        ("min_prominence_fraction", peak_cfg.min_prominence_fraction),
                        ("max_peaks", peak_cfg.max_peaks)]:
        man.add(name, value, prov(name, config.peak_overrides))
    man.sample_rate_hz = sample_rate_hz
    return man


def ingest(config: RunConfig) -> tuple[ClipCollection, list[str]]:
    """Select, load, and (optionally) segment input files.

    Returns the collection plus a list of per-file error strings; raises
    NoMatches when the selection is empty.
    """
    paths = clipmod.select_files(config.input_root, config.pattern, config.indices)
    coll = ClipCollection()
    errors = []
    for path in paths:
        try:
            clip = clipmod.load_wav(path)
            anns = clipmod.read_annotation_sidecar(path) if config.use_annotations else []
            if anns:
                sub = clipmod.segment(clip, anns)
                for c in sub.clips():
                    coll.add(c)
            else:
                clip.group_key = clip.id
                coll.add(clip)
        except SonolensError as exc:
            log.warning("skipping %s: %s", path, exc)
            errors.append(f"{path}: {exc}")
    return coll, errors


def run_analysis(config: RunConfig) -> Session:
    """Full batch pipeline: ingest -> transforms -> features -> auto-select."""
    for m in config.methods:
        if m not in METHODS:
            raise SonolensError(f"unknown method {m!r}")
    coll, errors = ingest(config)
    if len(coll) == 0:
        raise NoMatches("no inputs survived ingestion")

    sample_rate = coll.clips()[0].sample_rate_hz if len(coll) else None
    man = _build_manifest(config, sample_rate)
    base_params = config.transform_params()
    peak_cfg = config.peak_config()

    plots: list[PlotData] = []
    for clip in coll.clips():
        man.input_digests[clip.id] = clip.digest()
        for method in config.methods:
            plot_id = f"{clip.id}:{method}"
            try:
                params = replace(base_params, method=method)
                result, spectrogram = compute(clip, params)
                if spectrogram is None:
                    resolved = params.resolved(clip.sample_rate_hz)
                    spec_params = replace(resolved, n_fft=max(16, resolved.n_fft // 4),
                                          hop_length=max(1, resolved.n_fft // 8))
                    spectrogram = compute_spectrogram(clip, spec_params)
                if clip.samples.size < params.n_fft:
                    man.add(f"zero_padded.{plot_id}",
                            int(params.n_fft - clip.samples.size), "derived", "samples")
                peaks = detect_peaks(result, peak_cfg)
                ridge = extract_ridge(spectrogram)
                veins = extract_veins(spectrogram)
                man.sanitize_reports[plot_id] = result.sanitize.to_dict()
                plots.append(PlotData(plot_id, clip.id, method, result,
                                      spectrogram, peaks, ridge, veins))
            except SonolensError as exc:
                log.warning("plot %s failed: %s", plot_id, exc)
                errors.append(f"{plot_id}: {exc}")
    if not plots:
        raise SonolensError("all files failed")

    state = auto_select({p.plot_id: p.peaks for p in plots}, config.auto_select_n)
    return Session(manifest=man, plots=plots, state=state,
                   integer_tolerance=config.integer_tolerance,
                   collection=coll, errors=errors)


def config_from_manifest(man: ParameterManifest) -> RunConfig:
    """Reconstruct the run configuration a manifest records."""
    param_names = {f.name for f in dataclasses.fields(TransformParams)} - {"method"}
    overrides = {}
    for e in man.entries:
        if e.name in param_names and e.provenance == "user":
            v = e.value
            if e.name == "chirp_rates_hz_per_s" and v is not None:
                v = tuple(v)
            if e.name == "multires_window_plan" and v is not None:
                v = tuple((int(n), float(lo), float(hi)) for n, lo, hi in v)
            overrides[e.name] = v
    peak_over = {}
    for e in man.entries:
        if e.name in ("height_percentile", "min_prominence_fraction",
                      "max_peaks") and e.provenance == "user":
            peak_over[e.name] = e.value
    return RunConfig(
        input_root=man.get("input_root", "."),
        pattern=man.get("pattern", "*.wav"),
        indices=man.get("indices", "all"),
        use_annotations=bool(man.get("use_annotations", True)),
        methods=tuple(man.get("methods", list(DEFAULT_METHODS))),
        param_overrides=overrides,
        peak_overrides=peak_over,
        auto_select_n=int(man.get("auto_select_n", DEFAULT_AUTO_SELECT_N)),
        integer_tolerance=float(man.get("integer_tolerance", DEFAULT_INTEGER_TOLERANCE)),
        seed=int(man.get("seed", 0)),
    )


def rerun_from_manifest(man: ParameterManifest) -> Session:
    """Re-execute the run a manifest describes (reproducibility oracle)."""
    return run_analysis(config_from_manifest(man))


def audit_session(session: Session, context: AuditContext) -> list[str]:
    warnings = audit_assumptions(session.manifest, context)
    session.manifest.assumption_audit = warnings
    return warnings
