/** Shared data shapes, mirroring the analysis engine's JSON schema (v1). */

export interface PeakDict {
  bin_index: number;
  freq_hz: number;
  power_linear: number;
  power_db: number;
  width_hz: number;
  prominence: number;
}

export interface Selection {
  plot_id: string;
  peak: PeakDict;
  selection_order: number;
}

export interface Pair {
  order_a: number;
  order_b: number;
  ratio: number;
}

/** Serialized selection state; field names match the engine's exports. */
export interface SelectionState {
  selections: Selection[];
  pairs: Pair[];
  removed: [string, number][];
  next_order: number;
}

export type AppEvent =
  | ["select", string, PeakDict]
  | ["deselect", string, number]
  | ["remove", string, number]
  | ["pair", number, number];

export interface PlotMeta {
  plot_id: string;
  clip_id: string;
  method: string;
}

export interface PlotEntry extends PlotMeta {
  freqs_hz: number[];
  psd_linear: number[];
  psd_db: number[];
  peaks: PeakDict[];
  spectrogram: {
    times_s: number[];
    freqs_hz: number[];
    magnitude: number[][];
  } | null;
  ridge: { points: [number, number, number][] } | null;
  veins: { points: [number, number, number][]; persistence_frames: number }[];
}

export interface SessionDoc {
  schema: number;
  plots: PlotEntry[];
  selections: Selection[];
  pairs: Pair[];
  removed: [string, number][];
  next_order: number;
  integer_tolerance: number;
}

export type Scale = "linear" | "db";

export interface ViewState {
  scale: Scale;
  showSpectrogram: boolean;
  showRidge: boolean;
  showVeins: boolean;
  autoSelectN: number; // 1..5
}

export const DEFAULT_VIEW: ViewState = {
  scale: "db",
  showSpectrogram: true,
  showRidge: true,
  showVeins: true,
  autoSelectN: 4,
};
