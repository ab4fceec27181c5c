/** Shared shapes for the extraction adapter. */

/** The interchange document the analysis package ingests. */
export interface BundleDocument {
  clip_id: string;
  duration_s: number;
  music: {
    bpm: number;
    meter: number;
    downbeats_s: number[];
    segment_boundaries_s: number[];
    beats_s?: number[];
  };
  video: {
    frame_rate_hz: number;
    shot_likelihood: number[];
  };
}

export const VIDEO_GENRES = ["performance", "concept", "narrative", "dance", "other"] as const;
export type VideoGenre = (typeof VIDEO_GENRES)[number];

export interface ManifestRow {
  clipId: string;
  bundlePath: string;
  musicGenre: string;
  videoGenre: VideoGenre;
}

/** What the probe command reports about a media file. */
export interface ProbeResult {
  has_video: boolean;
  has_audio: boolean;
  duration_s: number;
}

export interface DownbeatEstimate {
  times_s: number[];
}

export interface SegmentEstimate {
  boundaries_s: number[];
}

export interface ShotCurveEstimate {
  frame_rate_hz: number;
  values: number[];
}

/**
 * Each estimator is an external command template; `{media}` is replaced
 * with the media path. Keeping the interface this narrow lets any
 * downbeat tracker / segmenter / shot detector slot in.
 */
export interface EstimatorCommands {
  probe: string;
  downbeats: string;
  segments: string;
  shots: string;
}

export interface ExtractionJob {
  mediaPath: string;
  clipId: string;
  bpm: number;
  meter: number;
  outPath: string;
  frameRateHz?: number; // target rate for the likelihood curve, default 25
  estimators: EstimatorCommands;
}

export interface DownbeatConsistency {
  expectedCount: number; // duration / bar duration from the annotated tempo
  actualCount: number;
  relativeError: number;
  consistent: boolean; // within +-5%
}

export interface ExtractResult {
  bundlePath: string;
  bundle: BundleDocument;
  warnings: string[];
  downbeatConsistency: DownbeatConsistency;
}

export class ExtractionError extends Error {
  constructor(
    public readonly code: string,
    message: string,
  ) {
    super(message);
    this.name = "ExtractionError";
  }
}
