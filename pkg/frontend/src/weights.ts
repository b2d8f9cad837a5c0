// Feature weight handling for the search sliders.
//
// Order mirrors the server's weight profile.
export const FEATURE_KINDS = [
  "histogram",
  "glcm",
  "gabor",
  "tamura",
  "correlogram",
  "naive",
  "regions",
] as const;

export type FeatureKind = (typeof FEATURE_KINDS)[number];

export const FEATURE_LABELS: Record<FeatureKind, string> = {
  histogram: "Histogram",
  glcm: "GLCM",
  gabor: "Gabor",
  tamura: "Tamura",
  correlogram: "Autocorrelogram",
  naive: "Naive signature",
  regions: "Major regions",
};

export function equalWeights(): number[] {
  return FEATURE_KINDS.map(() => 1);
}

// Normalize slider values to sum 1; null marks an invalid (all-zero or
// negative) profile that must not be submitted.
export function normalizeWeights(raw: number[]): number[] | null {
  if (raw.length !== FEATURE_KINDS.length) return null;
  if (raw.some((w) => w < 0 || !Number.isFinite(w))) return null;
  const total = raw.reduce((a, b) => a + b, 0);
  if (total <= 0) return null;
  return raw.map((w) => w / total);
}
