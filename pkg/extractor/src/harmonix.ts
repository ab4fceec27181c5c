import { parseCsv, formatCsv } from "./csv.js";
import { ExtractionError, ManifestRow, VIDEO_GENRES, VideoGenre } from "./types.js";

/** Tempo/meter annotations keyed by clip id, as extraction jobs need them. */
export interface ClipAnnotation {
  clipId: string;
  bpm: number;
  meter: number;
  musicGenre: string;
}

export interface ConversionResult {
  rows: ManifestRow[];
  annotations: Map<string, ClipAnnotation>;
  /** Clips present in the metadata but absent from the video-genre list. */
  skipped: string[];
}

function headerIndex(header: string[], wanted: string[], what: string): Map<string, number> {
  const index = new Map<string, number>();
  for (const name of wanted) {
    const i = header.findIndex((h) => h.trim().toLowerCase() === name);
    if (i < 0) {
      throw new ExtractionError("missing-column", `${what}: missing column '${name}'`);
    }
    index.set(name, i);
  }
  return index;
}

function parseVideoGenre(token: string, clipId: string): VideoGenre {
  const normalized = token.trim().toLowerCase() as VideoGenre;
  if (!VIDEO_GENRES.includes(normalized)) {
    throw new ExtractionError(
      "unknown-video-genre",
      `clip ${clipId}: unknown video genre '${token}'`,
    );
  }
  return normalized;
}

/**
 * Merge tempo/meter/genre annotation records with the per-clip video-genre
 * list into the analysis package's manifest rows.
 *
 * The metadata CSV needs columns clip_id,bpm,meter,music_genre; the video
 * genre CSV needs clip_id,video_genre. Only clips present in both come
 * out (annotated tracks without a retrievable video carry no genre row);
 * the rest are listed in `skipped`. Missing or malformed fields are
 * errors, not repairs.
 */
export function convertHarmonixMetadata(
  metadataCsv: string,
  videoGenreCsv: string,
  bundleDir = ".",
): ConversionResult {
  const metadata = parseCsv(metadataCsv);
  const genres = parseCsv(videoGenreCsv);
  if (metadata.length === 0) {
    throw new ExtractionError("missing-column", "metadata: empty file");
  }
  if (genres.length === 0) {
    throw new ExtractionError("missing-column", "video genres: empty file");
  }

  const metaCols = headerIndex(metadata[0]!, ["clip_id", "bpm", "meter", "music_genre"], "metadata");
  const genreCols = headerIndex(genres[0]!, ["clip_id", "video_genre"], "video genres");

  const videoGenreById = new Map<string, VideoGenre>();
  for (const record of genres.slice(1)) {
    const clipId = (record[genreCols.get("clip_id")!] ?? "").trim();
    if (!clipId) continue;
    if (videoGenreById.has(clipId)) {
      throw new ExtractionError("duplicate-clip-id", `video genres: duplicate clip ${clipId}`);
    }
    videoGenreById.set(clipId, parseVideoGenre(record[genreCols.get("video_genre")!] ?? "", clipId));
  }

  const rows: ManifestRow[] = [];
  const annotations = new Map<string, ClipAnnotation>();
  const skipped: string[] = [];
  for (const record of metadata.slice(1)) {
    const clipId = (record[metaCols.get("clip_id")!] ?? "").trim();
    if (!clipId) continue;
    if (annotations.has(clipId)) {
      throw new ExtractionError("duplicate-clip-id", `metadata: duplicate clip ${clipId}`);
    }
    const bpm = Number(record[metaCols.get("bpm")!]);
    const meterRaw = (record[metaCols.get("meter")!] ?? "").trim();
    const meter = Number(meterRaw);
    if (!Number.isFinite(bpm) || bpm <= 0) {
      throw new ExtractionError("bad-field", `clip ${clipId}: bpm '${record[metaCols.get("bpm")!]}' is not a positive number`);
    }
    if (meterRaw === "" || !Number.isInteger(meter)) {
      throw new ExtractionError("bad-field", `clip ${clipId}: missing or non-integer meter`);
    }
    const musicGenre = (record[metaCols.get("music_genre")!] ?? "").trim();
    annotations.set(clipId, { clipId, bpm, meter, musicGenre });

    const videoGenre = videoGenreById.get(clipId);
    if (videoGenre === undefined) {
      skipped.push(clipId);
      continue;
    }
    rows.push({
      clipId,
      bundlePath: bundleDir === "." ? `${clipId}.json` : `${bundleDir}/${clipId}.json`,
      musicGenre,
      videoGenre,
    });
  }
  return { rows, annotations, skipped };
}

/** Render manifest rows in the analysis package's manifest schema. */
export function formatManifest(rows: ManifestRow[]): string {
  return formatCsv([
    ["clip_id", "bundle_path", "music_genre", "video_genre"],
    ...rows.map((row) => [row.clipId, row.bundlePath, row.musicGenre, row.videoGenre]),
  ]);
}
