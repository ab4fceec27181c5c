import { spawn } from "node:child_process";

export interface ValidationOutcome {
  valid: boolean;
  exitCode: number;
  stderr: string;
}

/**
 * Run the analysis package's own validator over a bundle file by invoking
 * its CLI (`analyze` parses, validates, and exits 0/1/2). This is the
 * contract check: the adapter never reimplements the invariants.
 */
export function validateWithPrimary(
  bundlePath: string,
  pythonCommand = "python3",
): Promise<ValidationOutcome> {
  return new Promise((resolve, reject) => {
    const child = spawn(pythonCommand, ["-m", "mvsync.cli", "analyze", bundlePath], {
      stdio: ["ignore", "ignore", "pipe"],
    });
    let stderr = "";
    child.stderr.on("data", (chunk) => (stderr += chunk));
    child.on("error", reject);
    child.on("close", (code) =>
      resolve({ valid: code === 0, exitCode: code ?? 1, stderr: stderr.trim() }),
    );
  });
}
