/** Playback engine over an injectable AudioContext-like interface.
 *
 * Three modes: "tones" synthesizes one sine per selected peak at its
 * frequency, "original" plays the clip's WAV stream, and "stretched" slows
 * the original by a playback-rate factor. True time-stretching (rate change
 * without pitch change) is not implemented; stretched mode falls back to a
 * plain rate change and reports that through `notice` so the UI can say so.
 */

import type { SelectionState } from "./types.js";

export interface OscillatorLike {
  frequency: { value: number };
  start(): void;
  stop(): void;
}

export interface GainLike {
  gain: { value: number };
}

export interface SourceLike {
  loop: boolean;
  playbackRate: { value: number };
  start(): void;
  stop(): void;
}

/** The slice of Web Audio the engine needs; tests inject a fake. */
export interface AudioContextLike {
  createOscillator(): OscillatorLike;
  createGain(): GainLike;
  createBufferSource(bytes: ArrayBuffer): SourceLike;
}

export type PlaybackMode = "tones" | "original" | "stretched";

export interface PlaybackStatus {
  playing: boolean;
  mode: PlaybackMode | null;
  toneFreqsHz: number[];
  notice: string | null;
}

export class PlaybackEngine {
  private ctx: AudioContextLike;
  private gainNode: GainLike;
  private oscillators: OscillatorLike[] = [];
  private source: SourceLike | null = null;
  private mode: PlaybackMode | null = null;
  private notice: string | null = null;

  constructor(ctx: AudioContextLike) {
    this.ctx = ctx;
    this.gainNode = ctx.createGain();
    this.gainNode.gain.value = 1;
  }

  get gain(): number {
    return this.gainNode.gain.value;
  }

  setGain(value: number): void {
    this.gainNode.gain.value = Math.max(0, Math.min(1, value));
  }

  /** One looping sine per selected peak; gain 0 leaves them inaudible. */
  playTones(state: SelectionState): void {
    this.stop();
    this.mode = "tones";
    for (const s of state.selections) {
      const osc = this.ctx.createOscillator();
      osc.frequency.value = s.peak.freq_hz;
      osc.start();
      this.oscillators.push(osc);
    }
  }

  playOriginal(wavBytes: ArrayBuffer): void {
    this.stop();
    this.mode = "original";
    this.source = this.ctx.createBufferSource(wavBytes);
    this.source.loop = true;
    this.source.playbackRate.value = 1;
    this.source.start();
  }

  playStretched(wavBytes: ArrayBuffer, rate: number): void {
    if (!(rate > 0)) throw new Error(`playback rate must be positive, got ${rate}`);
    this.stop();
    this.mode = "stretched";
    this.source = this.ctx.createBufferSource(wavBytes);
    this.source.loop = true;
    this.source.playbackRate.value = rate;
    this.source.start();
    this.notice =
      "pitch-preserving stretch unavailable; playing at reduced rate";
  }

  stop(): void {
    for (const osc of this.oscillators) osc.stop();
    this.oscillators = [];
    if (this.source !== null) {
      this.source.stop();
      this.source = null;
    }
    this.mode = null;
    this.notice = null;
  }

  status(): PlaybackStatus {
    return {
      playing: this.oscillators.length > 0 || this.source !== null,
      mode: this.mode,
      toneFreqsHz: this.oscillators.map((o) => o.frequency.value),
      notice: this.notice,
    };
  }
}
