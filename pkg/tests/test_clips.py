import numpy as np
import pytest
from hypothesis import given, strategies as st

from sonolens.clips import (
    Annotation,
    AudioClip,
    ClipCollection,
    load_wav,
    read_annotation_sidecar,
    sanitize,
    segment,
    select_files,
)
from sonolens.errors import EmptyAudio, NoMatches, OutOfRangeAnnotation, UnreadableFile

from conftest import parse_wav_header, write_wav_int16, write_wav_raw_int16


class TestLoadWav:
    def test_fullscale_normalization(self, tmp_path, fs):
        path = tmp_path / "const.wav"
        write_wav_raw_int16(path, np.full(1000, 16384), fs)
        clip = load_wav(str(path))
        assert np.allclose(clip.samples, 0.5, atol=2 ** -15)

    def test_stereo_averages_to_mono(self, tmp_path, fs):
        path = tmp_path / "stereo.wav"
        frames = np.zeros((500, 2), dtype="<i2")
        frames[:, 0] = 16384
        frames[:, 1] = -16384
        write_wav_raw_int16(path, frames, fs, channels=2)
        clip = load_wav(str(path))
        assert clip.samples.shape == (500,)
        assert np.all(np.abs(clip.samples) < 2 ** -14)

    def test_sample_count_against_header_oracle(self, tmp_path, fs):
        path = tmp_path / "one_second.wav"
        t = np.arange(fs) / fs
        write_wav_int16(path, np.sin(2 * np.pi * 100 * t), fs)
        rate, channels, frames = parse_wav_header(path)
        clip = load_wav(str(path))
        assert clip.sample_rate_hz == rate == fs
        assert len(clip.samples) == frames == fs

    def test_deterministic(self, tmp_path, fs):
        path = tmp_path / "det.wav"
        rng = np.random.default_rng(7)
        write_wav_int16(path, rng.uniform(-1, 1, 4000), fs)
        a = load_wav(str(path))
        b = load_wav(str(path))
        assert np.array_equal(a.samples, b.samples)

    def test_missing_file(self, tmp_path):
        with pytest.raises(UnreadableFile):
            load_wav(str(tmp_path / "nope.wav"))

    def test_empty_audio(self, tmp_path, fs):
        path = tmp_path / "empty.wav"
        write_wav_raw_int16(path, np.zeros(0, dtype="<i2"), fs)
        with pytest.raises(EmptyAudio):
            load_wav(str(path))


class TestSelectFiles:
    def test_all(self, wav_dir):
        paths = select_files(str(wav_dir), "*.wav", "all")
        assert [p.rsplit("/", 1)[-1] for p in paths] == \
            ["pair_0.wav", "pair_1.wav", "pair_2.wav"]

    def test_indices(self, wav_dir):
        paths = select_files(str(wav_dir), "*.wav", "0,2")
        assert [p.rsplit("/", 1)[-1] for p in paths] == ["pair_0.wav", "pair_2.wav"]

    def test_prefix_pattern_matches_listing_oracle(self, wav_dir, fs):
        write_wav_int16(wav_dir / "other.wav", np.zeros(100), fs)
        import os
        expected = sorted(n for n in os.listdir(wav_dir) if n.startswith("pair_"))
        got = [p.rsplit("/", 1)[-1] for p in select_files(str(wav_dir), "pair_*")]
        assert got == expected

    def test_no_matches(self, wav_dir):
        with pytest.raises(NoMatches):
            select_files(str(wav_dir), "*.flac")


class TestSegment:
    def test_full_span_roundtrip(self, sine_clip):
        coll = segment(sine_clip, [Annotation(0.0, sine_clip.duration_s, "x")])
        clips = coll.clips()
        assert len(clips) == 1
        assert np.array_equal(clips[0].samples, sine_clip.samples)

    def test_two_halves(self, fs):
        clip = AudioClip(id="c", samples=np.arange(2 * fs, dtype=float) / (2 * fs),
                         sample_rate_hz=fs)
        coll = segment(clip, [Annotation(0, 1, "a"), Annotation(1, 2, "b")])
        clips = coll.clips()
        assert [len(c.samples) for c in clips] == [fs, fs]
        assert list(coll.groups) == ["a", "b"]

    def test_overlapping_share_samples(self, fs):
        clip = AudioClip(id="c", samples=np.arange(2 * fs, dtype=float),
                         sample_rate_hz=fs)
        coll = segment(clip, [Annotation(0.0, 1.5, "a"), Annotation(1.0, 2.0, "b")])
        a, b = coll.clips()
        # sample-index oracle: the shared 0.5 s is [1.0 s, 1.5 s)
        shared = clip.samples[fs:round(1.5 * fs)]
        assert np.array_equal(a.samples[fs:], shared)
        assert np.array_equal(b.samples[:len(shared)], shared)

    def test_out_of_range(self, sine_clip):
        with pytest.raises(OutOfRangeAnnotation):
            segment(sine_clip, [Annotation(0.5, 2.0, "x")])

    def test_nonoverlapping_counts_bounded(self, sine_clip):
        coll = segment(sine_clip, [Annotation(0, 0.25, "a"), Annotation(0.5, 0.75, "b")])
        total = sum(len(c.samples) for c in coll.clips())
        assert total <= len(sine_clip.samples)


class TestSanitize:
    def test_nan(self):
        out, rep = sanitize([1.0, np.nan, 2.0])
        assert out.tolist() == [1.0, 0.0, 2.0]
        assert rep.nan_replaced == 1

    def test_identity(self):
        out, rep = sanitize([0.5, -0.5])
        assert out.tolist() == [0.5, -0.5]
        assert (rep.nan_replaced, rep.inf_replaced, rep.zero_floored) == (0, 0, 0)

    def test_inf(self):
        out, rep = sanitize([np.inf, -np.inf])
        assert out.tolist() == [1.0, -1.0]
        assert rep.inf_replaced == 2

    @given(st.lists(st.one_of(
        st.floats(allow_nan=True, allow_infinity=True, width=64),
    ), max_size=50))
    def test_always_finite(self, values):
        out, _ = sanitize(values)
        assert np.all(np.isfinite(out))


class TestCollection:
    def test_unique_ids(self, sine_clip):
        coll = ClipCollection()
        coll.add(sine_clip)
        with pytest.raises(ValueError):
            coll.add(sine_clip)

    def test_metadata_row_per_clip(self, sine_clip, zero_clip):
        coll = ClipCollection()
        coll.add(sine_clip)
        coll.add(zero_clip)
        csv = coll.metadata_csv()
        lines = csv.strip().split("\n")
        assert lines[0] == "clip_id,source,onset_s,offset_s,label,group_key,sample_rate_hz"
        assert len(lines) == 3


class TestSidecar:
    def test_roundtrip(self, tmp_path, fs):
        wav = tmp_path / "a.wav"
        write_wav_int16(wav, np.zeros(fs), fs)
        (tmp_path / "a.txt").write_text("0.0\t0.5\tsyl1\n0.5\t1.0\tsyl2\n")
        anns = read_annotation_sidecar(str(wav))
        assert [a.label for a in anns] == ["syl1", "syl2"]
        assert anns[0].offset_s == 0.5

    def test_absent(self, tmp_path, fs):
        wav = tmp_path / "b.wav"
        write_wav_int16(wav, np.zeros(fs), fs)
        assert read_annotation_sidecar(str(wav)) == []
