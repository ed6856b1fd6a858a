"""Command-line entry point for batch workflows.

Exit codes: 1 = bad configuration, 2 = no inputs matched, 3 = every input
failed. Diagnostics go to stderr; data (e.g. sampled ids) goes to stdout.
"""

from __future__ import annotations

import json
import logging
import os
import sys

import click

from sonolens import exports, pipeline, sweep
from sonolens.clips import clip_to_wav_bytes
from sonolens.errors import NoMatches, SonolensError
from sonolens.manifest import AuditContext, ParameterManifest
from sonolens.render import PanelSpec, render_panels
from sonolens.transforms import METHODS

logging.basicConfig(stream=sys.stderr, level=logging.INFO,
                    format="%(levelname)s %(message)s")
log = logging.getLogger("sonolens")

EXIT_BAD_CONFIG = 1
EXIT_NO_INPUTS = 2
EXIT_ALL_FAILED = 3


def _parse_taxon_range(text: str | None):
    if not text:
        return None
    lo, hi = text.replace(" ", "").split("-", 1)
    return (float(lo), float(hi))


def _build_config(input_root, pattern, indices, methods, n_fft, hop, window,
                  annotations, seed, auto_select_n) -> pipeline.RunConfig:
    names = tuple(m.strip().upper() for m in methods.split(",") if m.strip())
    for m in names:
        if m not in METHODS:
            raise click.UsageError(f"unknown method {m!r}; choose from {', '.join(METHODS)}")
    overrides = {}
    if n_fft is not None:
        overrides["n_fft"] = n_fft
    if hop is not None:
        overrides["hop_length"] = hop
    if window is not None:
        overrides["window"] = window
    return pipeline.RunConfig(
        input_root=input_root, pattern=pattern, indices=indices,
        use_annotations=annotations, methods=names,
        param_overrides=overrides, seed=seed, auto_select_n=auto_select_n,
    )


def _common_options(fn):
    fn = click.option("--input", "input_root", default=".", show_default=True,
                      help="Input directory to scan for WAV files.")(fn)
    fn = click.option("--pattern", default="*.wav", show_default=True)(fn)
    fn = click.option("--indices", default="all", show_default=True,
                      help="Index set applied after the pattern filter, e.g. 0,2,5-7.")(fn)
    fn = click.option("--methods", default="FFT_DUAL", show_default=True,
                      help="Comma-separated transform methods.")(fn)
    fn = click.option("--n-fft", type=int, default=None)(fn)
    fn = click.option("--hop", type=int, default=None)(fn)
    fn = click.option("--window", type=click.Choice(["hann", "hamming", "rectangular"]),
                      default=None)(fn)
    fn = click.option("--annotations/--no-annotations", default=True,
                      help="Segment clips at sidecar annotation points.")(fn)
    fn = click.option("--seed", type=int, default=0, show_default=True)(fn)
    fn = click.option("--auto-select-n", type=int, default=4, show_default=True)(fn)
    fn = click.option("--out", "out_dir", default="sonolens_out", show_default=True)(fn)
    return fn


@click.group()
def main():
    """Multi-method spectral analysis workbench."""


def _write_outputs(session, out_dir: str, export_flags: set[str]) -> list[str]:
    os.makedirs(out_dir, exist_ok=True)
    written = []

    def write(name: str, data):
        path = os.path.join(out_dir, name)
        mode = "wb" if isinstance(data, bytes) else "w"
        with open(path, mode) as fh:
            fh.write(data)
        written.append(path)

    if "csv" in export_flags:
        csvs = exports.export_csv(session)
        write("peaks.csv", csvs["peaks"])
        write("ratios.csv", csvs["ratios"])
        if session.collection is not None:
            write("metadata.csv", session.collection.metadata_csv())
    if "json" in export_flags:
        write("session.json", exports.export_json(session))
    if "png" in export_flags:
        png, layout = exports.export_image(session)
        write("figure.png", png)
        write("figure_layout.json", json.dumps(layout, indent=1))
    if "html" in export_flags:
        write("report.html", exports.export_html(session))
    write("manifest.json", json.dumps(session.manifest.to_dict(), indent=1))
    if session.collection is not None:
        clip_dir = os.path.join(out_dir, "clips")
        os.makedirs(clip_dir, exist_ok=True)
        for clip in session.collection.clips():
            with open(os.path.join(clip_dir, f"{clip.id}.wav"), "wb") as fh:
                fh.write(clip_to_wav_bytes(clip))
    return written


@main.command()
@_common_options
@click.option("--export", "export_flags", default="csv,json,png", show_default=True,
              help="Any subset of csv,json,png,html.")
def analyze(input_root, pattern, indices, methods, n_fft, hop, window,
            annotations, seed, auto_select_n, out_dir, export_flags):
    """Run the full pipeline over a batch of files and export results."""
    flags = {f.strip().lower() for f in export_flags.split(",") if f.strip()}
    bad = flags - {"csv", "json", "png", "html"}
    if bad:
        log.error("unknown export flags: %s", ", ".join(sorted(bad)))
        sys.exit(EXIT_BAD_CONFIG)
    try:
        config = _build_config(input_root, pattern, indices, methods, n_fft, hop,
                               window, annotations, seed, auto_select_n)
    except click.UsageError as exc:
        log.error("%s", exc)
        sys.exit(EXIT_BAD_CONFIG)
    try:
        session = pipeline.run_analysis(config)
    except NoMatches as exc:
        log.error("no inputs: %s", exc)
        sys.exit(EXIT_NO_INPUTS)
    except SonolensError as exc:
        log.error("analysis failed: %s", exc)
        sys.exit(EXIT_ALL_FAILED)
    written = _write_outputs(session, out_dir, flags)
    ok = len(session.plots)
    failed = len(session.errors)
    log.info("analyzed %d plots (%d failures); wrote %d files to %s",
             ok, failed, len(written), out_dir)
    for err in session.errors:
        log.warning("skipped: %s", err)


@main.command()
@_common_options
@click.option("--n-fft-values", default="512,1024,2048", show_default=True)
@click.option("--hop-divisors", default="2,4,8", show_default=True)
@click.option("--metric", type=click.Choice(sweep.METRICS),
              default="spectral_contrast", show_default=True)
@click.option("--hop-literal", is_flag=True,
              help="Treat hop values as literal sample counts, not divisors.")
def grid(input_root, pattern, indices, methods, n_fft, hop, window, annotations,
         seed, auto_select_n, out_dir, n_fft_values, hop_divisors, metric,
         hop_literal):
    """Grid-search transform parameters on the first selected clip."""
    try:
        config = _build_config(input_root, pattern, indices, methods, n_fft, hop,
                               window, annotations, seed, auto_select_n)
        spec = sweep.GridSpec(
            n_fft_values=tuple(int(v) for v in n_fft_values.split(",")),
            hop_divisors=tuple(int(v) for v in hop_divisors.split(",")),
            method=config.methods[0], metric=metric, hop_literal=hop_literal,
            base_params=config.transform_params(),
        )
    except (click.UsageError, SonolensError, ValueError) as exc:
        log.error("%s", exc)
        sys.exit(EXIT_BAD_CONFIG)
    try:
        coll, _ = pipeline.ingest(config)
    except NoMatches as exc:
        log.error("no inputs: %s", exc)
        sys.exit(EXIT_NO_INPUTS)
    clip = coll.clips()[0]
    result = sweep.run_grid(clip, spec)
    if all(c.failed for c in result.cells):
        log.error("every grid cell failed")
        sys.exit(EXIT_ALL_FAILED)
    os.makedirs(out_dir, exist_ok=True)
    with open(os.path.join(out_dir, "grid.csv"), "w") as fh:
        fh.write(sweep.grid_csv(result))
    panels = [PanelSpec(panel_id=f"nfft{c.n_fft}_hop{c.hop_length}",
                        freqs_hz=c.result.freqs_hz, psd_db=c.result.psd_db)
              for c in result.cells if not c.failed]
    png, layout = render_panels(panels, n_cols=len(spec.hop_divisors))
    with open(os.path.join(out_dir, "grid.png"), "wb") as fh:
        fh.write(png)
    with open(os.path.join(out_dir, "grid_layout.json"), "w") as fh:
        json.dump(layout, fh, indent=1)
    best = result.cells[result.best_cell]
    log.info("grid complete: best n_fft=%d hop=%d (%s=%.6g)",
             best.n_fft, best.hop_length, metric, best.metric_value)


@main.command()
@_common_options
@click.option("-k", type=int, required=True, help="Subset size.")
def sample(input_root, pattern, indices, methods, n_fft, hop, window,
           annotations, seed, auto_select_n, out_dir, k):
    """Sample a deterministic validation subset of clip ids (stdout)."""
    if k < 1:
        log.error("k must be >= 1")
        sys.exit(EXIT_BAD_CONFIG)
    config = _build_config(input_root, pattern, indices, methods, n_fft, hop,
                           window, annotations, seed, auto_select_n)
    try:
        coll, _ = pipeline.ingest(config)
    except NoMatches as exc:
        log.error("no inputs: %s", exc)
        sys.exit(EXIT_NO_INPUTS)
    try:
        ids = sweep.sample_validation(coll, k, seed)
    except SonolensError as exc:
        log.error("%s", exc)
        sys.exit(EXIT_BAD_CONFIG)
    for clip_id in ids:
        click.echo(clip_id)


@main.command()
@click.option("--run-dir", default="sonolens_out", show_default=True,
              help="Analysis run directory containing manifest.json.")
@click.option("--taxon-range", default=None,
              help="Taxon vocalization range in Hz, e.g. 10-200.")
@click.option("--needs-temporal-precision", is_flag=True)
def audit(run_dir, taxon_range, needs_temporal_precision):
    """Audit a run's manifest against the domain-assumption rule table."""
    path = os.path.join(run_dir, "manifest.json")
    if not os.path.exists(path):
        log.error("no manifest at %s", path)
        sys.exit(EXIT_BAD_CONFIG)
    with open(path, encoding="utf-8") as fh:
        man = ParameterManifest.from_dict(json.load(fh))
    try:
        context = AuditContext(taxon_range_hz=_parse_taxon_range(taxon_range),
                               needs_temporal_precision=needs_temporal_precision)
    except ValueError:
        log.error("bad --taxon-range; expected LO-HI in Hz")
        sys.exit(EXIT_BAD_CONFIG)
    from sonolens.manifest import audit_assumptions
    warnings_out = audit_assumptions(man, context)
    for w in warnings_out:
        click.echo(w)
    log.info("%d warning(s)", len(warnings_out))


@main.command()
@click.option("--run-dir", default="sonolens_out", show_default=True)
@click.option("--port", type=int, default=8765, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
def serve(run_dir, port, host):
    """Serve a precomputed run to the interactive client."""
    if not os.path.isdir(run_dir):
        log.error("run directory %s does not exist", run_dir)
        sys.exit(EXIT_BAD_CONFIG)
    import uvicorn

    from sonolens.server import create_app
    uvicorn.run(create_app(run_dir), host=host, port=port)


if __name__ == "__main__":
    main()
