import { spawn } from "node:child_process";

import { ExtractionError } from "./types.js";

/**
 * Run one estimator command and parse its stdout as JSON.
 *
 * The template's `{media}` placeholder is substituted before splitting on
 * whitespace, so media paths must not contain spaces (estimator wrappers
 * can shell-quote internally if they need more).
 */
export async function runEstimator<T>(template: string, mediaPath: string, label: string): Promise<T> {
  const parts = template.replaceAll("{media}", mediaPath).split(/\s+/).filter(Boolean);
  const [command, ...args] = parts;
  if (!command) {
    throw new ExtractionError("estimator-misconfigured", `${label}: empty command template`);
  }

  const { code, stdout, stderr } = await new Promise<{
    code: number;
    stdout: string;
    stderr: string;
  }>((resolve, reject) => {
    const child = spawn(command, args, { stdio: ["ignore", "pipe", "pipe"] });
    let out = "";
    let err = "";
    child.stdout.on("data", (chunk) => (out += chunk));
    child.stderr.on("data", (chunk) => (err += chunk));
    child.on("error", (spawnError) => reject(new ExtractionError("estimator-failed", `${label} (${command}): ${spawnError.message}`)));
    child.on("close", (exitCode) => resolve({ code: exitCode ?? 1, stdout: out, stderr: err }));
  });

  if (code !== 0) {
    throw new ExtractionError(
      "estimator-failed",
      `${label} (${command}) exited with ${code}: ${stderr.trim().slice(0, 400)}`,
    );
  }
  try {
    return JSON.parse(stdout) as T;
  } catch {
    throw new ExtractionError(
      "estimator-bad-output",
      `${label} (${command}) did not emit JSON: ${stdout.trim().slice(0, 200)}`,
    );
  }
}
