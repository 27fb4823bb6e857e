/** Optional pointer-trace capture, recorded in the gaze-log CSV schema. */

import type { PanelTransform } from './types.js';
import { toDescriptor } from './transform.js';

export const TRACE_SOURCE = 'pointer';

export interface PointerSample {
  tMs: number;
  x: number;
  y: number;
  valid: 0 | 1;
}

/**
 * Collects timestamped pointer positions over one pair view.
 * When capture is disabled every call is a no-op and no trace is emitted.
 */
export class PointerTraceRecorder {
  readonly enabled: boolean;
  readonly panel: PanelTransform;
  private samples: PointerSample[] = [];

  constructor(panel: PanelTransform, enabled = true) {
    this.enabled = enabled;
    this.panel = panel;
  }

  record(tMs: number, x: number, y: number, valid: 0 | 1 = 1): void {
    if (!this.enabled) return;
    if (!Number.isFinite(tMs) || tMs < 0) throw new Error(`bad timestamp ${tMs}`);
    const last = this.samples[this.samples.length - 1];
    if (last && tMs < last.tMs) throw new Error('pointer timestamps must be non-decreasing');
    this.samples.push({ tMs, x, y, valid });
  }

  get count(): number {
    return this.samples.length;
  }

  /** Trace as gaze-log CSV (t_ms,x,y,valid), or null when capture is off/empty. */
  toCsv(): string | null {
    if (!this.enabled || this.samples.length === 0) return null;
    const lines = ['t_ms,x,y,valid'];
    for (const s of this.samples) lines.push(`${s.tMs},${s.x},${s.y},${s.valid}`);
    return lines.join('\n') + '\n';
  }

  /** Panel geometry descriptor to attach alongside the trace. */
  geometry(): string {
    return toDescriptor(this.panel);
  }
}
