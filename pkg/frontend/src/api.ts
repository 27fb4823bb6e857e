/** Typed client for the experiment service; the UI's only data source. */

import {
  containsGroundTruth,
  type DecisionAck,
  type Grid,
  type NextPairResponse,
  type PairOverlap,
  type SessionInfo,
  type SessionReport,
  type Verdict,
} from './types.js';

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ServiceError extends Error {
  readonly status: number;
  constructor(status: number, message: string) {
    super(message);
    this.status = status;
  }
}

export interface DecisionPost {
  pairId: string;
  verdict: Verdict;
  elapsedMs: number;
  pointerTrace?: string;
}

export interface ClientOptions {
  fetchImpl?: FetchLike;
  /** Called with every parsed response body; used by integrity checks. */
  onResponse?: (path: string, body: unknown) => void;
}

export class ServiceClient {
  readonly baseUrl: string;
  private fetchImpl: FetchLike;
  private onResponse?: (path: string, body: unknown) => void;

  constructor(baseUrl: string, options: ClientOptions = {}) {
    this.baseUrl = baseUrl.replace(/\/$/, '');
    this.fetchImpl = options.fetchImpl ?? ((url, init) => fetch(url, init));
    this.onResponse = options.onResponse;
  }

  private async request<T>(method: string, path: string, body?: unknown, raw?: string): Promise<T> {
    const init: RequestInit = { method };
    if (raw !== undefined) {
      init.body = raw;
      init.headers = { 'content-type': 'application/json' };
    } else if (body !== undefined) {
      init.body = JSON.stringify(body);
      init.headers = { 'content-type': 'application/json' };
    }
    const res = await this.fetchImpl(`${this.baseUrl}${path}`, init);
    const text = await res.text();
    let parsed: unknown;
    try {
      parsed = text.length ? JSON.parse(text) : null;
    } catch {
      parsed = text;
    }
    this.onResponse?.(path, parsed);
    if (!res.ok) {
      const detail =
        parsed && typeof parsed === 'object' && 'detail' in (parsed as Record<string, unknown>)
          ? String((parsed as Record<string, unknown>).detail)
          : text;
      throw new ServiceError(res.status, detail);
    }
    return parsed as T;
  }

  health(): Promise<{ ok: boolean; pairs: number }> {
    return this.request('GET', '/health');
  }

  createSession(subjectId: string, k?: number, seed?: number): Promise<SessionInfo> {
    return this.request('POST', '/sessions', { subject_id: subjectId, k, seed });
  }

  /** The server-authoritative cursor: safe to call again after a refresh. */
  async nextPair(sessionId: string): Promise<NextPairResponse> {
    const res = await this.request<NextPairResponse>('GET', `/sessions/${sessionId}/next`);
    if (!res.complete && containsGroundTruth(res)) {
      throw new Error('service leaked ground truth for an unanswered pair');
    }
    return res;
  }

  /**
   * Post one verdict. A 409 means the verdict was already durably recorded
   * (double click or retry after a lost ack), so it is reported as delivered.
   */
  async postDecision(sessionId: string, post: DecisionPost): Promise<DecisionAck | { recorded: true; duplicate: true }> {
    try {
      return await this.request<DecisionAck>('POST', `/sessions/${sessionId}/decisions`, {
        pair_id: post.pairId,
        verdict: post.verdict,
        elapsed_ms: post.elapsedMs,
        pointer_trace: post.pointerTrace ?? null,
      });
    } catch (err) {
      if (err instanceof ServiceError && err.status === 409) {
        return { recorded: true, duplicate: true };
      }
      throw err;
    }
  }

  report(sessionId: string): Promise<SessionReport> {
    return this.request('GET', `/sessions/${sessionId}/report`);
  }

  putGrid(pairId: string, name: string, gridJson: string): Promise<{ stored: true }> {
    return this.request('PUT', `/pairs/${pairId}/grids/${name}`, undefined, gridJson);
  }

  getGrid(pairId: string, name: string): Promise<Grid> {
    return this.request('GET', `/pairs/${pairId}/grids/${name}`);
  }

  pairOverlap(pairId: string): Promise<PairOverlap> {
    return this.request('GET', `/pairs/${pairId}/q`);
  }
}
