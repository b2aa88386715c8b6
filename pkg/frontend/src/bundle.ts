/**
 * Exported-bundle schema: parsing and validation.
 *
 * The document comes from the Python side's export-ui command:
 * { width, height, M, K, fusionMode, frames: M arrays of N intensities,
 *   weights: M rows of K numbers, masks?: N rows of M numbers,
 *   golden: [{ weights: M numbers, fusedImage: N numbers }] }.
 *
 * parseBundle throws BundleFormatError with a human-readable message on any
 * schema violation; callers surface it without touching existing state.
 */

export type FusionMode = "sum" | "mean";

export interface GoldenEntry {
  weights: number[];
  fusedImage: Float64Array;
}

export interface UiBundle {
  width: number;
  height: number;
  m: number;
  k: number;
  fusionMode: FusionMode;
  /** M frames, each a length-N row-major intensity buffer. */
  frames: Float64Array[];
  /** M rows of K viewer weights. */
  weights: number[][];
  /** Optional per-pixel weight field: N rows of M numbers. */
  masks: number[][] | null;
  golden: GoldenEntry[];
}

export class BundleFormatError extends Error {}

function fail(message: string): never {
  throw new BundleFormatError(message);
}

function requirePositiveInt(value: unknown, name: string): number {
  if (typeof value !== "number" || !Number.isInteger(value) || value < 1) {
    fail(`${name} must be a positive integer, got ${JSON.stringify(value)}`);
  }
  return value;
}

function requireUnitArray(value: unknown, length: number, name: string): number[] {
  if (!Array.isArray(value) || value.length !== length) {
    fail(`${name} must be an array of ${length} numbers`);
  }
  for (const v of value) {
    if (typeof v !== "number" || !Number.isFinite(v) || v < 0 || v > 1) {
      fail(`${name} holds a value outside [0, 1]: ${JSON.stringify(v)}`);
    }
  }
  return value as number[];
}

/** Validate a parsed JSON document and lift it into typed buffers. */
export function parseBundle(doc: unknown): UiBundle {
  if (typeof doc !== "object" || doc === null || Array.isArray(doc)) {
    fail("bundle document must be a JSON object");
  }
  const obj = doc as Record<string, unknown>;

  const width = requirePositiveInt(obj.width, "width");
  const height = requirePositiveInt(obj.height, "height");
  const m = requirePositiveInt(obj.M, "M");
  const k = requirePositiveInt(obj.K, "K");
  const n = width * height;

  if (obj.fusionMode !== "sum" && obj.fusionMode !== "mean") {
    fail(`fusionMode must be "sum" or "mean", got ${JSON.stringify(obj.fusionMode)}`);
  }
  const fusionMode = obj.fusionMode as FusionMode;

  if (!Array.isArray(obj.frames) || obj.frames.length !== m) {
    fail(`frames must list exactly M=${m} frames`);
  }
  const frames = obj.frames.map((f, j) =>
    Float64Array.from(requireUnitArray(f, n, `frames[${j}]`))
  );

  if (!Array.isArray(obj.weights) || obj.weights.length !== m) {
    fail(`weights must have M=${m} rows`);
  }
  const weights = obj.weights.map((row, j) => requireUnitArray(row, k, `weights[${j}]`));

  let masks: number[][] | null = null;
  if (obj.masks !== undefined && obj.masks !== null) {
    if (!Array.isArray(obj.masks) || obj.masks.length !== n) {
      fail(`masks must have N=${n} rows`);
    }
    masks = obj.masks.map((row, p) => requireUnitArray(row, m, `masks[${p}]`));
  }

  if (!Array.isArray(obj.golden)) {
    fail("golden must be an array");
  }
  const golden = obj.golden.map((entry, i) => {
    if (typeof entry !== "object" || entry === null) {
      fail(`golden[${i}] must be an object`);
    }
    const g = entry as Record<string, unknown>;
    return {
      weights: requireUnitArray(g.weights, m, `golden[${i}].weights`),
      fusedImage: Float64Array.from(
        requireUnitArray(g.fusedImage, n, `golden[${i}].fusedImage`)
      ),
    };
  });

  return { width, height, m, k, fusionMode, frames, weights, masks, golden };
}
