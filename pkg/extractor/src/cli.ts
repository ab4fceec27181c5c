#!/usr/bin/env node
/**
 * CLI: `extract` turns one media file into a clip bundle via the
 * configured estimator commands; `convert-harmonix` turns tempo/meter
 * annotation CSVs plus a video-genre CSV into an analysis manifest.
 */

import { readFile, writeFile } from "node:fs/promises";
import { parseArgs } from "node:util";

import { extractBundle } from "./extract.js";
import { convertHarmonixMetadata, formatManifest } from "./harmonix.js";
import { ExtractionError } from "./types.js";
import { validateWithPrimary } from "./validate.js";

const EXTRACT_USAGE = `usage: mvsync-extract extract --media <path> --out <bundle.json> --bpm <n> --meter <3|4>
         [--clip-id <id>] [--frame-rate <hz>] [--validate] [--python <cmd>]
         [--probe-cmd <tpl>] [--downbeats-cmd <tpl>] [--segments-cmd <tpl>] [--shots-cmd <tpl>]

Command templates get {media} substituted, e.g. --downbeats-cmd "python3 track_downbeats.py {media}".
Defaults assume ffprobe-style probing and estimator wrappers on PATH.`;

const CONVERT_USAGE = `usage: mvsync-extract convert-harmonix --metadata <csv> --video-genres <csv> --out-manifest <csv> [--bundle-dir <dir>]`;

const DEFAULT_COMMANDS = {
  probe: "mvsync-probe {media}",
  downbeats: "mvsync-downbeats {media}",
  segments: "mvsync-segments {media}",
  shots: "mvsync-shots {media}",
};

function fail(message: string, usage?: string): never {
  console.error(message);
  if (usage) console.error(usage);
  process.exit(1);
}

async function runExtract(argv: string[]): Promise<void> {
  const { values } = parseArgs({
    args: argv,
    options: {
      media: { type: "string" },
      out: { type: "string" },
      bpm: { type: "string" },
      meter: { type: "string" },
      "clip-id": { type: "string" },
      "frame-rate": { type: "string" },
      validate: { type: "boolean", default: false },
      python: { type: "string", default: "python3" },
      "probe-cmd": { type: "string", default: DEFAULT_COMMANDS.probe },
      "downbeats-cmd": { type: "string", default: DEFAULT_COMMANDS.downbeats },
      "segments-cmd": { type: "string", default: DEFAULT_COMMANDS.segments },
      "shots-cmd": { type: "string", default: DEFAULT_COMMANDS.shots },
    },
  });
  if (!values.media || !values.out || !values.bpm || !values.meter) {
    fail("missing required option", EXTRACT_USAGE);
  }

  const result = await extractBundle({
    mediaPath: values.media,
    outPath: values.out,
    bpm: Number(values.bpm),
    meter: Number(values.meter),
    clipId: values["clip-id"] ?? values.out.replace(/.*\//, "").replace(/\.json$/, ""),
    frameRateHz: values["frame-rate"] ? Number(values["frame-rate"]) : undefined,
    estimators: {
      probe: values["probe-cmd"]!,
      downbeats: values["downbeats-cmd"]!,
      segments: values["segments-cmd"]!,
      shots: values["shots-cmd"]!,
    },
  });
  for (const warning of result.warnings) {
    console.error(`warning: ${warning}`);
  }
  if (values.validate) {
    const outcome = await validateWithPrimary(result.bundlePath, values.python);
    if (!outcome.valid) {
      fail(`bundle failed the analysis package's validation (exit ${outcome.exitCode}): ${outcome.stderr}`);
    }
    console.error("validation: ok");
  }
  console.log(result.bundlePath);
}

async function runConvert(argv: string[]): Promise<void> {
  const { values } = parseArgs({
    args: argv,
    options: {
      metadata: { type: "string" },
      "video-genres": { type: "string" },
      "out-manifest": { type: "string" },
      "bundle-dir": { type: "string", default: "." },
    },
  });
  if (!values.metadata || !values["video-genres"] || !values["out-manifest"]) {
    fail("missing required option", CONVERT_USAGE);
  }
  const result = convertHarmonixMetadata(
    await readFile(values.metadata, "utf-8"),
    await readFile(values["video-genres"], "utf-8"),
    values["bundle-dir"],
  );
  for (const clipId of result.skipped) {
    console.error(`warning: ${clipId} has no video-genre annotation, skipped`);
  }
  await writeFile(values["out-manifest"], formatManifest(result.rows), "utf-8");
  console.log(`${result.rows.length} manifest row(s) -> ${values["out-manifest"]}`);
}

async function main(): Promise<void> {
  const [command, ...rest] = process.argv.slice(2);
  try {
    if (command === "extract") {
      await runExtract(rest);
    } else if (command === "convert-harmonix") {
      await runConvert(rest);
    } else {
      fail(`unknown command: ${command ?? "(none)"}`, `${EXTRACT_USAGE}\n\n${CONVERT_USAGE}`);
    }
  } catch (error) {
    if (error instanceof ExtractionError) {
      console.error(JSON.stringify({ error: { code: error.code, message: error.message } }));
      process.exit(1);
    }
    throw error;
  }
}

void main();
