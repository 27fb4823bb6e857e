/** Wire types for the experiment service, as consumed by the examiner UI. */

export type Verdict = 'genuine' | 'impostor';

/** Screen↔image mapping for one display panel: image px = (screen px − offset) / scale. */
export interface PanelTransform {
  offsetX: number;
  offsetY: number;
  scale: number;
  width: number;
  height: number;
}

export interface PairPayload {
  pair_id: string;
  left_image: string;
  right_image: string;
  pmi_days: Record<string, number>;
  transforms: Record<string, Record<string, number>>;
}

export interface SessionInfo {
  session_id: string;
  subject_id: string;
  k: number;
}

export type NextPairResponse = { complete: true } | { complete: false; pair: PairPayload };

export interface DecisionAck {
  recorded: true;
  cursor: number;
}

export interface ReportPair {
  pair_id: string;
  verdict: Verdict;
  ground_truth: Verdict;
  correct: boolean;
  elapsed_ms: number;
}

export interface SessionReport {
  session_id: string;
  subject_id: string;
  answered: number;
  scheduled: number;
  pairs: ReportPair[];
  accuracy?: number;
  mean_elapsed_ms?: number;
}

export interface PairOverlap {
  pair_id: string;
  left: number | null;
  right: number | null;
  mean: number | null;
}

/** Row-major nonnegative raster in the shared grid interchange format. */
export interface Grid {
  width: number;
  height: number;
  values: number[];
}

/**
 * Deep scan for a ground-truth key anywhere in a service response.
 * The UI must never see one while a session is still active.
 */
export function containsGroundTruth(value: unknown): boolean {
  if (Array.isArray(value)) return value.some(containsGroundTruth);
  if (value !== null && typeof value === 'object') {
    for (const [k, v] of Object.entries(value as Record<string, unknown>)) {
      if (k === 'ground_truth') return true;
      if (containsGroundTruth(v)) return true;
    }
  }
  return false;
}
