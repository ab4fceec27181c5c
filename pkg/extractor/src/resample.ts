/**
 * Resample a likelihood curve onto the target frame grid, clamping values
 * into [0, 1].
 *
 * Downsampling pools each source sample into its nearest target frame by
 * maximum: the curve is a per-frame transition likelihood, and averaging
 * or interpolating would halve one-frame spikes and lose cuts under any
 * later threshold. Upsampling interpolates linearly.
 *
 * The output length is fixed from the clip duration (round(duration *
 * rate)), so the resampled curve always spans the clip within one frame
 * period regardless of how many samples the estimator produced.
 */
export function resampleCurve(
  values: number[],
  sourceRateHz: number,
  targetRateHz: number,
  durationS: number,
): number[] {
  const outLength = Math.round(durationS * targetRateHz);
  if (outLength <= 0) {
    return [];
  }
  const out = new Array<number>(outLength).fill(0);
  if (values.length === 0) {
    return out;
  }

  const clamp = (v: number) => Math.min(1, Math.max(0, v));

  if (sourceRateHz >= targetRateHz) {
    for (let i = 0; i < values.length; i++) {
      const j = Math.round((i * targetRateHz) / sourceRateHz);
      if (j >= 0 && j < outLength) {
        out[j] = Math.max(out[j]!, clamp(values[i]!));
      }
    }
    return out;
  }

  for (let j = 0; j < outLength; j++) {
    // single division keeps integer rate ratios exact
    const position = (j * sourceRateHz) / targetRateHz;
    const lower = Math.min(Math.floor(position), values.length - 1);
    const upper = Math.min(lower + 1, values.length - 1);
    const fraction = position - lower;
    out[j] = clamp((values[lower] ?? 0) * (1 - fraction) + (values[upper] ?? 0) * fraction);
  }
  return out;
}
