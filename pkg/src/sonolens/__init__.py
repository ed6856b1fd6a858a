"""sonolens: a multi-method spectral analysis workbench for annotated audio.

Computes comparable frequency-domain representations (Welch PSD, constant-Q,
wavelet packet, stationary wavelet, chirplet, multi-resolution stitch) of
audio clips, extracts peaks/ridges/veins, maintains harmonic-ratio selection
state, and exports everything with a full parameter-provenance manifest.
"""

__version__ = "0.1.0"

from sonolens.clips import AudioClip, Annotation, ClipCollection, SanitizeReport
from sonolens.transforms import TransformParams, SpectralResult, Spectrogram
from sonolens.features import Peak, PeakConfig, Ridge, Vein
from sonolens.harmonics import SelectionState, HarmonicGraph

__all__ = [
    "__version__",
    "AudioClip", "Annotation", "ClipCollection", "SanitizeReport",
    "TransformParams", "SpectralResult", "Spectrogram",
    "Peak", "PeakConfig", "Ridge", "Vein",
    "SelectionState", "HarmonicGraph",
]
