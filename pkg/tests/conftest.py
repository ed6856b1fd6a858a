import os
import struct
import wave

import numpy as np
import pytest

from sonolens.clips import AudioClip


@pytest.fixture
def fs():
    return 22050


@pytest.fixture
def sine_clip(fs):
    t = np.arange(fs) / fs
    return AudioClip(id="sine440", samples=np.sin(2 * np.pi * 440.0 * t),
                     sample_rate_hz=fs)


@pytest.fixture
def zero_clip(fs):
    return AudioClip(id="zeros", samples=np.zeros(fs), sample_rate_hz=fs)


def write_wav_int16(path, samples, rate):
    """Independent 16-bit PCM writer (stdlib wave, not the package's reader)."""
    data = np.clip(np.asarray(samples), -1.0, 1.0)
    pcm = (data * 32767.0).astype("<i2")
    with wave.open(str(path), "wb") as fh:
        fh.setnchannels(1 if pcm.ndim == 1 else pcm.shape[1])
        fh.setsampwidth(2)
        fh.setframerate(rate)
        fh.writeframes(pcm.tobytes())


def write_wav_raw_int16(path, pcm, rate, channels=1):
    with wave.open(str(path), "wb") as fh:
        fh.setnchannels(channels)
        fh.setsampwidth(2)
        fh.setframerate(rate)
        fh.writeframes(np.asarray(pcm, dtype="<i2").tobytes())


def parse_wav_header(path):
    """Minimal independent RIFF parser: returns (rate, channels, frames)."""
    with open(path, "rb") as fh:
        blob = fh.read()
    assert blob[:4] == b"RIFF" and blob[8:12] == b"WAVE"
    pos = 12
    rate = channels = block_align = None
    frames = None
    while pos + 8 <= len(blob):
        tag = blob[pos:pos + 4]
        size = struct.unpack("<I", blob[pos + 4:pos + 8])[0]
        body = blob[pos + 8:pos + 8 + size]
        if tag == b"fmt ":
            channels = struct.unpack("<H", body[2:4])[0]
            rate = struct.unpack("<I", body[4:8])[0]
            block_align = struct.unpack("<H", body[12:14])[0]
        elif tag == b"data":
            frames = size // block_align
        pos += 8 + size + (size & 1)
    return rate, channels, frames


@pytest.fixture
def wav_dir(tmp_path, fs):
    """Directory with three 1-second tonal WAVs plus a non-matching file."""
    t = np.arange(fs) / fs
    for i, f0 in enumerate([440.0, 660.0, 880.0]):
        write_wav_int16(tmp_path / f"pair_{i}.wav", 0.8 * np.sin(2 * np.pi * f0 * t), fs)
    (tmp_path / "notes.txt").write_text("not audio\n")
    return tmp_path
