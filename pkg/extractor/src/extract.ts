import { mkdir, stat, writeFile } from "node:fs/promises";
import { dirname } from "node:path";

import { resampleCurve } from "./resample.js";
import { runEstimator } from "./run.js";
import {
  BundleDocument,
  DownbeatConsistency,
  DownbeatEstimate,
  ExtractResult,
  ExtractionError,
  ExtractionJob,
  ProbeResult,
  SegmentEstimate,
  ShotCurveEstimate,
} from "./types.js";

export const DEFAULT_FRAME_RATE_HZ = 25;
const CONSISTENCY_TOLERANCE = 0.05;

function cleanBoundaries(
  times: number[],
  durationS: number,
  label: string,
  warnings: string[],
): number[] {
  const inRange = times.filter((t) => t >= 0 && t <= durationS);
  if (inRange.length !== times.length) {
    warnings.push(`${label}: dropped ${times.length - inRange.length} boundary(ies) outside [0, ${durationS}]`);
  }
  const sorted = [...inRange].sort((a, b) => a - b);
  for (let i = 1; i < sorted.length; i++) {
    if (sorted[i] === sorted[i - 1]) {
      // Duplicates mean the estimator repeated an event; that is an
      // upstream fault worth surfacing, not something to paper over.
      throw new ExtractionError("duplicate-boundaries", `${label}: duplicate time ${sorted[i]}`);
    }
  }
  return sorted;
}

function checkDownbeatConsistency(
  count: number,
  durationS: number,
  bpm: number,
  meter: number,
): DownbeatConsistency {
  const barS = (meter * 60) / bpm;
  const expectedCount = durationS / barS;
  const relativeError = expectedCount > 0 ? Math.abs(count - expectedCount) / expectedCount : 1;
  return {
    expectedCount,
    actualCount: count,
    relativeError,
    consistent: relativeError <= CONSISTENCY_TOLERANCE,
  };
}

/**
 * Drive the estimator commands over one media file and write a clip
 * bundle the analysis package accepts.
 *
 * The tempo grid (bpm, meter) comes from annotations, not estimation;
 * downbeats, segment boundaries, and the shot-likelihood curve come from
 * the configured external tools. The curve is resampled onto the target
 * frame grid, so the written document always spans the probed duration.
 */
export async function extractBundle(job: ExtractionJob): Promise<ExtractResult> {
  try {
    await stat(job.mediaPath);
  } catch {
    throw new ExtractionError("media-not-found", `cannot read media: ${job.mediaPath}`);
  }

  const probe = await runEstimator<ProbeResult>(job.estimators.probe, job.mediaPath, "probe");
  if (!probe.has_video) {
    throw new ExtractionError("missing-video-stream", `${job.mediaPath} has no video stream`);
  }
  if (!(probe.duration_s > 0)) {
    throw new ExtractionError("estimator-bad-output", `probe reported duration ${probe.duration_s}`);
  }

  const [downbeats, segments, shots] = await Promise.all([
    runEstimator<DownbeatEstimate>(job.estimators.downbeats, job.mediaPath, "downbeats"),
    runEstimator<SegmentEstimate>(job.estimators.segments, job.mediaPath, "segments"),
    runEstimator<ShotCurveEstimate>(job.estimators.shots, job.mediaPath, "shots"),
  ]);

  const warnings: string[] = [];
  const frameRate = job.frameRateHz ?? DEFAULT_FRAME_RATE_HZ;
  if (shots.frame_rate_hz !== frameRate) {
    warnings.push(`shots: resampled curve from ${shots.frame_rate_hz} Hz to ${frameRate} Hz`);
  }
  const curve = resampleCurve(shots.values, shots.frame_rate_hz, frameRate, probe.duration_s);

  const bundle: BundleDocument = {
    clip_id: job.clipId,
    duration_s: probe.duration_s,
    music: {
      bpm: job.bpm,
      meter: job.meter,
      downbeats_s: cleanBoundaries(downbeats.times_s, probe.duration_s, "downbeats", warnings),
      segment_boundaries_s: cleanBoundaries(
        segments.boundaries_s,
        probe.duration_s,
        "segments",
        warnings,
      ),
    },
    video: {
      frame_rate_hz: frameRate,
      shot_likelihood: curve,
    },
  };

  const consistency = checkDownbeatConsistency(
    bundle.music.downbeats_s.length,
    probe.duration_s,
    job.bpm,
    job.meter,
  );
  if (!consistency.consistent) {
    warnings.push(
      `downbeats: count ${consistency.actualCount} is ${(consistency.relativeError * 100).toFixed(1)}% ` +
        `away from the ${consistency.expectedCount.toFixed(1)} expected from the annotated tempo`,
    );
  }

  await mkdir(dirname(job.outPath), { recursive: true });
  await writeFile(job.outPath, JSON.stringify(bundle, null, 2) + "\n", "utf-8");
  return { bundlePath: job.outPath, bundle, warnings, downbeatConsistency: consistency };
}
