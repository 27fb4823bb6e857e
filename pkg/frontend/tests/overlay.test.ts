import { readFileSync } from 'node:fs';
import { fileURLToPath } from 'node:url';
import { describe, expect, it } from 'vitest';

import {
  agreementGrid,
  compositeOverlay,
  formatQ,
  resampleGrid,
  validateGrid,
} from '../src/overlay.js';
import type { Grid } from '../src/types.js';
import { makeFixture } from './fixture.js';

const goldenPath = fileURLToPath(new URL('./fixtures/overlay_golden.json', import.meta.url));

function grid(width: number, height: number, fill: (x: number, y: number) => number): Grid {
  const values: number[] = [];
  for (let y = 0; y < height; y++) for (let x = 0; x < width; x++) values.push(fill(x, y));
  return { width, height, values };
}

describe('agreement layer', () => {
  it('is proportional to the map itself for identical maps', () => {
    const p = grid(8, 8, (x, y) => (x + 2 * y) / 300);
    const a = agreementGrid(p, p);
    for (let i = 0; i < p.values.length; i++) {
      expect(a.values[i]).toBeCloseTo(p.values[i]!, 12);
    }
    expect(formatQ(1)).toBe('q = 1.00');
  });

  it('is blank for disjoint maps', () => {
    const left = grid(6, 6, (x) => (x < 3 ? 1 / 18 : 0));
    const right = grid(6, 6, (x) => (x >= 3 ? 1 / 18 : 0));
    const a = agreementGrid(left, right);
    expect(Math.max(...a.values)).toBe(0);
    expect(formatQ(0)).toBe('q = 0.00');
    // an all-zero layer contributes nothing to the composite
    const base = { width: 6, height: 6, gray: new Array(36).fill(10) };
    const out = compositeOverlay(base, [{ kind: 'agreement', grid: a, opacity: 0.8 }]);
    for (let i = 0; i < 36; i++) expect(out[i * 4]).toBe(10);
  });

  it('rejects mismatched shapes', () => {
    expect(() => agreementGrid(grid(4, 4, () => 0), grid(4, 5, () => 0))).toThrow(/shape/);
  });
});

describe('resampling', () => {
  it('is the identity at the native raster', () => {
    const g = grid(5, 4, (x, y) => x * y);
    expect(resampleGrid(g, 5, 4)).toBe(g);
  });

  it('reproduces corner values exactly', () => {
    const g = grid(3, 3, (x, y) => 10 * y + x);
    const up = resampleGrid(g, 9, 9);
    expect(up.values[0]).toBe(0);
    expect(up.values[8]).toBe(2);
    expect(up.values[9 * 8]).toBe(20);
    expect(up.values[9 * 9 - 1]).toBe(22);
  });

  it('is exact on bilinear functions', () => {
    const g = grid(4, 4, (x, y) => 1 + 2 * x + 3 * y);
    const up = resampleGrid(g, 10, 7);
    for (let y = 0; y < 7; y++) {
      for (let x = 0; x < 10; x++) {
        const u = (x * 3) / 9;
        const v = (y * 3) / 6;
        expect(up.values[y * 10 + x]).toBeCloseTo(1 + 2 * u + 3 * v, 10);
      }
    }
  });
});

describe('grid validation', () => {
  it('rejects wrong cardinality and negative values', () => {
    expect(() => validateGrid({ width: 2, height: 2, values: [1, 2, 3] })).toThrow(/values/);
    expect(() => validateGrid({ width: 2, height: 1, values: [1, -0.5] })).toThrow(/>= 0/);
  });
});

describe('overlay compositing', () => {
  it('matches the pre-rendered golden image byte for byte', () => {
    const fixture = makeFixture();
    const rgba = compositeOverlay(fixture.base, fixture.layers, fixture.circles);
    const golden = JSON.parse(readFileSync(goldenPath, 'utf-8')) as {
      width: number;
      height: number;
      rgba: number[];
    };
    expect(fixture.base.width).toBe(golden.width);
    expect(fixture.base.height).toBe(golden.height);
    expect(Array.from(rgba)).toEqual(golden.rgba);
  });

  it('is deterministic across repeated renders', () => {
    const fixture = makeFixture();
    const a = compositeOverlay(fixture.base, fixture.layers, fixture.circles);
    const b = compositeOverlay(fixture.base, fixture.layers, fixture.circles);
    expect(Array.from(a)).toEqual(Array.from(b));
  });

  it('leaves the base untouched at zero opacity', () => {
    const base = { width: 4, height: 4, gray: new Array(16).fill(99) };
    const layer = { kind: 'human' as const, grid: grid(4, 4, () => 1), opacity: 0 };
    const out = compositeOverlay(base, [layer]);
    for (let i = 0; i < 16; i++) expect(out[i * 4]).toBe(99);
  });

  it('formats a missing q as n/a', () => {
    expect(formatQ(null)).toBe('q = n/a');
  });
});
