/** Forward-only examiner session loop driven by the server's cursor. */

import type { ServiceClient } from './api.js';
import type { PairPayload, SessionReport, Verdict } from './types.js';

export interface ExaminerResponse {
  verdict: Verdict;
  pointerTrace?: string;
}

/** Supplies one verdict per presented pair; may take unbounded time. */
export type Examiner = (pair: PairPayload, index: number) => Promise<ExaminerResponse> | ExaminerResponse;

export interface RunOptions {
  /** Clock in ms, injectable for tests. */
  now?: () => number;
  /** Transient-failure retries per decision post. */
  retries?: number;
  onPair?: (pair: PairPayload, index: number) => void;
}

export interface RunOutcome {
  report: SessionReport;
  /** Pair ids in the order they were presented and answered. */
  presented: string[];
}

/**
 * Present every remaining pair in schedule order and post one verdict each.
 * Resumable: starting from any cursor continues without skips or repeats.
 */
export async function runSession(
  client: ServiceClient,
  sessionId: string,
  examiner: Examiner,
  options: RunOptions = {},
): Promise<RunOutcome> {
  const now = options.now ?? (() => Date.now());
  const retries = options.retries ?? 2;
  const presented: string[] = [];

  for (let index = 0; ; index++) {
    const next = await client.nextPair(sessionId);
    if (next.complete) break;
    const pair = next.pair;
    presented.push(pair.pair_id);
    options.onPair?.(pair, index);

    const started = now();
    const answer = await examiner(pair, index);
    const elapsedMs = Math.max(0, now() - started);

    let lastError: unknown;
    let delivered = false;
    for (let attempt = 0; attempt <= retries && !delivered; attempt++) {
      try {
        await client.postDecision(sessionId, {
          pairId: pair.pair_id,
          verdict: answer.verdict,
          elapsedMs,
          pointerTrace: answer.pointerTrace,
        });
        delivered = true;
      } catch (err) {
        lastError = err;
      }
    }
    if (!delivered) throw lastError;
  }

  const report = await client.report(sessionId);
  return { report, presented };
}
