/** Pure pixel-array compositing of attention layers over a base image. */

import type { Grid } from './types.js';

export type LayerKind = 'human' | 'machine' | 'agreement' | 'clusters';

/** Fixed layer colors so rendered output is stable across versions. */
export const LAYER_COLORS: Record<LayerKind, [number, number, number]> = {
  human: [0, 176, 80], // green
  machine: [214, 40, 40], // red
  agreement: [255, 196, 0], // amber
  clusters: [255, 255, 0], // yellow circle stroke
};

export interface GridLayer {
  kind: Exclude<LayerKind, 'clusters'>;
  grid: Grid;
  opacity: number; // 0..1
}

export interface ClusterCircle {
  cx: number;
  cy: number;
  radius: number;
}

export interface BaseImage {
  width: number;
  height: number;
  /** Grayscale intensities, row-major, 0..255. */
  gray: ArrayLike<number>;
}

export function validateGrid(grid: Grid): void {
  if (!Number.isInteger(grid.width) || !Number.isInteger(grid.height) || grid.width < 1 || grid.height < 1) {
    throw new Error(`bad grid shape ${grid.width}x${grid.height}`);
  }
  if (grid.values.length !== grid.width * grid.height) {
    throw new Error(`grid has ${grid.values.length} values, expected ${grid.width * grid.height}`);
  }
  for (const v of grid.values) {
    if (!Number.isFinite(v) || v < 0) throw new Error(`grid values must be finite and >= 0, got ${v}`);
  }
}

/** Per-cell agreement between two equally shaped maps: sqrt(a·b). */
export function agreementGrid(a: Grid, b: Grid): Grid {
  if (a.width !== b.width || a.height !== b.height) {
    throw new Error(`shape mismatch ${a.width}x${a.height} vs ${b.width}x${b.height}`);
  }
  const values = a.values.map((v, i) => Math.sqrt(v * (b.values[i] as number)));
  return { width: a.width, height: a.height, values };
}

/** Corner-aligned bilinear resampling onto a target raster. */
export function resampleGrid(grid: Grid, width: number, height: number): Grid {
  if (grid.width === width && grid.height === height) return grid;
  const values = new Array<number>(width * height);
  const sx = width === 1 ? 0 : (grid.width - 1) / (width - 1);
  const sy = height === 1 ? 0 : (grid.height - 1) / (height - 1);
  for (let y = 0; y < height; y++) {
    const fy = y * sy;
    const y0 = Math.min(Math.floor(fy), grid.height - 1);
    const y1 = Math.min(y0 + 1, grid.height - 1);
    const wy = fy - y0;
    for (let x = 0; x < width; x++) {
      const fx = x * sx;
      const x0 = Math.min(Math.floor(fx), grid.width - 1);
      const x1 = Math.min(x0 + 1, grid.width - 1);
      const wx = fx - x0;
      const v00 = grid.values[y0 * grid.width + x0] as number;
      const v01 = grid.values[y0 * grid.width + x1] as number;
      const v10 = grid.values[y1 * grid.width + x0] as number;
      const v11 = grid.values[y1 * grid.width + x1] as number;
      values[y * width + x] =
        v00 * (1 - wy) * (1 - wx) + v01 * (1 - wy) * wx + v10 * wy * (1 - wx) + v11 * wy * wx;
    }
  }
  return { width, height, values };
}

/**
 * Composite grid layers over the base image into an RGBA buffer.
 *
 * Each layer is resampled to the base raster, peak-scaled for display, and
 * alpha-blended with per-pixel alpha = opacity × scaled value. An all-zero
 * layer therefore contributes nothing (blank agreement for disjoint maps).
 */
export function compositeOverlay(
  base: BaseImage,
  layers: GridLayer[],
  circles: ClusterCircle[] = [],
  circleOpacity = 1.0,
): Uint8ClampedArray {
  const { width, height } = base;
  const rgba = new Uint8ClampedArray(width * height * 4);
  const channel = new Float64Array(width * height * 3);
  for (let i = 0; i < width * height; i++) {
    const g = base.gray[i] as number;
    channel[i * 3] = g;
    channel[i * 3 + 1] = g;
    channel[i * 3 + 2] = g;
  }

  for (const layer of layers) {
    validateGrid(layer.grid);
    const grid = resampleGrid(layer.grid, width, height);
    const peak = grid.values.reduce((m, v) => Math.max(m, v), 0);
    if (peak === 0) continue;
    const color = LAYER_COLORS[layer.kind];
    for (let i = 0; i < width * height; i++) {
      const alpha = Math.min(1, Math.max(0, layer.opacity)) * ((grid.values[i] as number) / peak);
      for (let c = 0; c < 3; c++) {
        const idx = i * 3 + c;
        channel[idx] = (channel[idx] as number) * (1 - alpha) + (color[c] as number) * alpha;
      }
    }
  }

  for (const circle of circles) {
    strokeCircle(channel, width, height, circle, LAYER_COLORS.clusters, circleOpacity);
  }

  for (let i = 0; i < width * height; i++) {
    rgba[i * 4] = Math.round(channel[i * 3] as number);
    rgba[i * 4 + 1] = Math.round(channel[i * 3 + 1] as number);
    rgba[i * 4 + 2] = Math.round(channel[i * 3 + 2] as number);
    rgba[i * 4 + 3] = 255;
  }
  return rgba;
}

function strokeCircle(
  channel: Float64Array,
  width: number,
  height: number,
  circle: ClusterCircle,
  color: [number, number, number],
  opacity: number,
): void {
  const band = 0.75; // stroke half-width in pixels
  const x0 = Math.max(0, Math.floor(circle.cx - circle.radius - 1));
  const x1 = Math.min(width - 1, Math.ceil(circle.cx + circle.radius + 1));
  const y0 = Math.max(0, Math.floor(circle.cy - circle.radius - 1));
  const y1 = Math.min(height - 1, Math.ceil(circle.cy + circle.radius + 1));
  for (let y = y0; y <= y1; y++) {
    for (let x = x0; x <= x1; x++) {
      const d = Math.hypot(x + 0.5 - circle.cx, y + 0.5 - circle.cy);
      if (Math.abs(d - circle.radius) > band) continue;
      const alpha = Math.min(1, Math.max(0, opacity));
      const i = y * width + x;
      for (let c = 0; c < 3; c++) {
        const idx = i * 3 + c;
        channel[idx] = (channel[idx] as number) * (1 - alpha) + (color[c] as number) * alpha;
      }
    }
  }
}

/** The numeric q caption shown next to the overlay, e.g. "q = 1.00". */
export function formatQ(q: number | null): string {
  return q === null ? 'q = n/a' : `q = ${q.toFixed(2)}`;
}
