"""Parameter-provenance manifest and domain-assumption auditing.

Every parameter a run consumes is recorded once, tagged with where its value
came from (default / user / derived). The audit walks a shippable rule table
(audit_rules.json) and warns when recorded parameters clash with the caller's
stated analysis context (taxon frequency range, temporal-precision needs).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources

PROVENANCES = ("default", "user", "derived")


@dataclass(frozen=True)
class ManifestEntry:
    name: str
    value: object
    provenance: str
    unit: str = ""

    def to_dict(self) -> dict:
        return {"name": self.name, "value": self.value,
                "provenance": self.provenance, "unit": self.unit}


@dataclass
class ParameterManifest:
    tool_version: str = ""
    entries: list[ManifestEntry] = field(default_factory=list)
    input_digests: dict[str, str] = field(default_factory=dict)
    sanitize_reports: dict[str, dict] = field(default_factory=dict)
    assumption_audit: list[str] = field(default_factory=list)
    # property of the input data, not a chosen parameter; kept out of entries
    sample_rate_hz: int | None = None

    def add(self, name: str, value, provenance: str, unit: str = "") -> None:
        if provenance not in PROVENANCES:
            raise ValueError(f"bad provenance {provenance!r}")
        if any(e.name == name for e in self.entries):
            raise ValueError(f"duplicate manifest entry {name!r}")
        self.entries.append(ManifestEntry(name, value, provenance, unit))

    def get(self, name: str, default=None):
        for e in self.entries:
            if e.name == name:
                return e.value
        return default

    def to_dict(self) -> dict:
        return {
            "tool_version": self.tool_version,
            "entries": [e.to_dict() for e in self.entries],
            "input_digests": self.input_digests,
            "sanitize_reports": self.sanitize_reports,
            "assumption_audit": self.assumption_audit,
            "sample_rate_hz": self.sample_rate_hz,
        }

    @staticmethod
    def from_dict(d: dict) -> "ParameterManifest":
        m = ParameterManifest(tool_version=d.get("tool_version", ""))
        for e in d.get("entries", []):
            m.entries.append(ManifestEntry(e["name"], e["value"],
                                           e["provenance"], e.get("unit", "")))
        m.input_digests = dict(d.get("input_digests", {}))
        m.sanitize_reports = dict(d.get("sanitize_reports", {}))
        m.assumption_audit = list(d.get("assumption_audit", []))
        m.sample_rate_hz = d.get("sample_rate_hz")
        return m


def load_audit_rules() -> list[dict]:
    text = resources.files("sonolens").joinpath("audit_rules.json").read_text()
    return json.loads(text)["rules"]


@dataclass(frozen=True)
class AuditContext:
    taxon_range_hz: tuple[float, float] | None = None
    needs_temporal_precision: bool = False


def audit_assumptions(manifest: ParameterManifest,
                      context: AuditContext = AuditContext()) -> list[str]:
    """Check recorded parameters against the assumption rule table.

    Returns one warning string per violated rule; an unconstrained context
    yields no warnings.
    """
    warnings: list[str] = []
    fs = manifest.sample_rate_hz
    n_fft = manifest.get("n_fft")
    fmin = manifest.get("fmin_hz")
    fmax = manifest.get("fmax_hz")
    for rule in load_audit_rules():
        check = rule["check"]
        kind = check["type"]
        if kind == "nyquist" and context.taxon_range_hz and fs:
            nyq = fs / 2.0
            if nyq < context.taxon_range_hz[1]:
                warnings.append(
                    f"[{rule['id']}] Nyquist frequency {nyq:.6g} Hz is below the "
                    f"taxon's upper range {context.taxon_range_hz[1]:.6g} Hz "
                    f"({rule['assumption']})")
        elif kind == "band_coverage" and context.taxon_range_hz:
            lo, hi = context.taxon_range_hz
            if (fmin is not None and fmin > lo) or (fmax is not None and fmax < hi):
                warnings.append(
                    f"[{rule['id']}] analysis band [{fmin}, {fmax}] Hz does not "
                    f"cover the taxon range [{lo:.6g}, {hi:.6g}] Hz "
                    f"({rule['assumption']})")
        elif kind == "freq_resolution" and context.taxon_range_hz and fs and n_fft:
            bin_width = fs / n_fft
            if bin_width > context.taxon_range_hz[0]:
                warnings.append(
                    f"[{rule['id']}] frequency resolution {bin_width:.6g} Hz is "
                    f"coarser than the taxon's lowest frequency "
                    f"{context.taxon_range_hz[0]:.6g} Hz ({rule['assumption']})")
        elif kind == "temporal_precision" and context.needs_temporal_precision and fs and n_fft:
            window_s = n_fft / fs
            if window_s > check["max_window_s"]:
                warnings.append(
                    f"[{rule['id']}] analysis window {window_s * 1e3:.3g} ms exceeds "
                    f"{check['max_window_s'] * 1e3:.3g} ms; temporal precision was "
                    f"requested ({rule['assumption']})")
    return warnings
