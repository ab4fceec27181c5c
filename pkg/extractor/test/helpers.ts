import { mkdtemp, writeFile } from "node:fs/promises";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { fileURLToPath } from "node:url";

import type { EstimatorCommands } from "../src/types.js";

// Compiled tests live in dist/test/, two levels below the package root.
const FIXTURES = fileURLToPath(new URL("../../test/fixtures/", import.meta.url));

export function stubEstimators(): EstimatorCommands {
  return {
    probe: `node ${FIXTURES}stub-probe.mjs {media}`,
    downbeats: `node ${FIXTURES}stub-downbeats.mjs {media}`,
    segments: `node ${FIXTURES}stub-segments.mjs {media}`,
    shots: `node ${FIXTURES}stub-shots.mjs {media}`,
  };
}

export interface MediaDescription {
  duration_s: number;
  bpm: number;
  meter: number;
  has_video?: boolean;
  has_audio?: boolean;
  curve_rate_hz?: number;
  cut_times_s?: number[];
  cut_value?: number;
  extra_downbeats?: number[];
  dropped_downbeats?: number;
  extra_segments?: number[];
}

export async function workDir(): Promise<string> {
  return mkdtemp(join(tmpdir(), "mvsync-extractor-"));
}

export async function writeMedia(dir: string, name: string, media: MediaDescription): Promise<string> {
  const path = join(dir, name);
  await writeFile(path, JSON.stringify(media), "utf-8");
  return path;
}

/** A 40 s clip at 120 bpm whose cuts land on every bar. */
export function knownTestClip(overrides: Partial<MediaDescription> = {}): MediaDescription {
  const cuts = [];
  for (let t = 0; t < 40; t += 2) {
    cuts.push(t);
  }
  return {
    duration_s: 40,
    bpm: 120,
    meter: 4,
    cut_times_s: cuts,
    ...overrides,
  };
}
