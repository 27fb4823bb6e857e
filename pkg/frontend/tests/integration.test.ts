/**
 * End-to-end session against the real Python service: a headless 20-pair
 * examiner session must log exactly 20 decisions in schedule order, with no
 * ground-truth field visible before completion.
 */
import { spawn, type ChildProcess } from 'node:child_process';
import { mkdtempSync, writeFileSync } from 'node:fs';
import { tmpdir } from 'node:os';
import { join } from 'node:path';
import { afterAll, beforeAll, describe, expect, it } from 'vitest';

import { ServiceClient } from '../src/api.js';
import { PointerTraceRecorder } from '../src/pointer.js';
import { runSession } from '../src/session.js';
import { panelTransform } from '../src/transform.js';
import { containsGroundTruth, type Verdict } from '../src/types.js';

const PORT = 8739;
const BASE = `http://127.0.0.1:${PORT}`;
const K = 20;

let proc: ChildProcess;
const responses: { path: string; body: unknown }[] = [];
let client: ServiceClient;

function poolLine(i: number): string {
  const truth: Verdict = i % 2 === 0 ? 'genuine' : 'impostor';
  return JSON.stringify({
    pair_id: `p${String(i).padStart(3, '0')}`,
    left_image: `left_${i}.png`,
    right_image: `right_${i}.png`,
    ground_truth: truth,
    pmi_days: { left: (i % 5) + 1, right: (i % 5) + 1 },
    transforms: {
      left: { offset_x: 160, offset_y: 300, scale: 1, width: 640, height: 480 },
      right: { offset_x: 1120, offset_y: 300, scale: 1, width: 640, height: 480 },
    },
  });
}

beforeAll(async () => {
  const dataDir = mkdtempSync(join(tmpdir(), 'examiner-ui-'));
  const lines = Array.from({ length: 24 }, (_, i) => poolLine(i));
  writeFileSync(join(dataDir, 'pairs.jsonl'), lines.join('\n') + '\n');

  proc = spawn('pmiris', ['serve', '--data', dataDir, '--listen', `127.0.0.1:${PORT}`], {
    stdio: 'ignore',
  });
  client = new ServiceClient(BASE, {
    onResponse: (path, body) => responses.push({ path, body }),
  });
  const deadline = Date.now() + 30_000;
  for (;;) {
    try {
      const h = await client.health();
      if (h.ok) break;
    } catch {
      /* not up yet */
    }
    if (Date.now() > deadline) throw new Error('service did not become healthy');
    await new Promise((r) => setTimeout(r, 250));
  }
}, 40_000);

afterAll(() => {
  proc?.kill();
});

describe('live examiner session', () => {
  it('runs a 20-pair session with full integrity', async () => {
    const session = await client.createSession('ts-examiner', K, 11);
    expect(session.k).toBe(K);

    const panel = panelTransform(160, 300, 640, 480, 1);
    const { report, presented } = await runSession(client, session.session_id, async (pair, i) => {
      const verdict: Verdict = i % 3 === 0 ? 'genuine' : 'impostor';
      const rec = new PointerTraceRecorder(panel, i % 2 === 0);
      rec.record(0, 400, 500);
      rec.record(120, 410, 505);
      if (i === 7) {
        // double-click: post once here, let the loop post again
        await client.postDecision(session.session_id, { pairId: pair.pair_id, verdict, elapsedMs: 1 });
      }
      return { verdict, pointerTrace: rec.toCsv() ?? undefined };
    });

    // exactly K decisions, in schedule order
    expect(presented).toHaveLength(K);
    expect(new Set(presented).size).toBe(K);
    expect(report.answered).toBe(K);
    expect(report.scheduled).toBe(K);
    expect(report.pairs.map((p) => p.pair_id)).toEqual(presented);

    // ground truth only appears in the post-completion report
    for (const { path, body } of responses) {
      if (path.endsWith('/report')) continue;
      expect(containsGroundTruth(body), `leak in ${path}`).toBe(false);
    }
    expect(report.accuracy).toBeGreaterThanOrEqual(0);

    // a completed session serves no further pairs
    const done = await client.nextPair(session.session_id);
    expect(done.complete).toBe(true);
  }, 60_000);

  it('resumes mid-session at the server cursor after a refresh', async () => {
    const session = await client.createSession('ts-refresh', 6, 12);
    const firstHalf: string[] = [];
    for (let i = 0; i < 3; i++) {
      const next = await client.nextPair(session.session_id);
      if (next.complete) throw new Error('ended early');
      firstHalf.push(next.pair.pair_id);
      await client.postDecision(session.session_id, {
        pairId: next.pair.pair_id,
        verdict: 'genuine',
        elapsedMs: 2,
      });
    }
    // "refresh": a fresh client resumes from the cursor
    const fresh = new ServiceClient(BASE);
    const { report, presented } = await runSession(fresh, session.session_id, () => ({
      verdict: 'impostor',
    }));
    expect(presented).toHaveLength(3);
    expect(report.answered).toBe(6);
    expect(report.pairs.map((p) => p.pair_id)).toEqual([...firstHalf, ...presented]);
  }, 30_000);

  it('computes overlap q from grids stored through the service', async () => {
    const grid = {
      width: 8,
      height: 8,
      values: Array.from({ length: 64 }, (_, i) => (i % 9 === 0 ? 1 : 0.05)),
    };
    const body = JSON.stringify(grid);
    await client.putGrid('p000', 'left_cam', body);
    await client.putGrid('p000', 'left_human', body);
    const overlap = await client.pairOverlap('p000');
    expect(overlap.left).toBeCloseTo(1.0, 9);
    expect(overlap.right).toBeNull();
    expect(overlap.mean).toBeCloseTo(1.0, 9);

    const echoed = await client.getGrid('p000', 'left_cam');
    expect(echoed).toEqual(grid);
  }, 30_000);
});
