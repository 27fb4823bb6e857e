/** Deterministic overlay fixture shared by the golden generator and the test. */

import type { BaseImage, ClusterCircle, GridLayer } from '../src/overlay.js';
import type { Grid } from '../src/types.js';
import { agreementGrid, resampleGrid } from '../src/overlay.js';

function bump(width: number, height: number, cx: number, cy: number, sigma: number): Grid {
  const values = new Array<number>(width * height);
  for (let y = 0; y < height; y++) {
    for (let x = 0; x < width; x++) {
      const d2 = (x - cx) ** 2 + (y - cy) ** 2;
      values[y * width + x] = Math.exp(-d2 / (2 * sigma * sigma));
    }
  }
  return { width, height, values };
}

export interface OverlayFixture {
  base: BaseImage;
  layers: GridLayer[];
  circles: ClusterCircle[];
}

export function makeFixture(): OverlayFixture {
  const width = 24;
  const height = 24;
  const gray = new Array<number>(width * height);
  for (let y = 0; y < height; y++) {
    for (let x = 0; x < width; x++) {
      gray[y * width + x] = Math.round((255 * (x + y)) / (width + height - 2));
    }
  }
  const human = bump(width, height, 8, 8, 3);
  // machine map at half resolution to exercise display resampling
  const machine = bump(12, 12, 5, 4.5, 1.5);
  const agreement = agreementGrid(resampleGrid(machine, width, height), human);
  return {
    base: { width, height, gray },
    layers: [
      { kind: 'machine', grid: machine, opacity: 0.45 },
      { kind: 'human', grid: human, opacity: 0.45 },
      { kind: 'agreement', grid: agreement, opacity: 0.6 },
    ],
    circles: [{ cx: 8.5, cy: 8.5, radius: 4 }],
  };
}
