/** Panel geometry and the screen↔image coordinate mapping it induces. */

import type { PanelTransform } from './types.js';

export interface ImagePoint {
  x: number;
  y: number;
}

export function screenToImage(t: PanelTransform, sx: number, sy: number): ImagePoint {
  if (t.scale <= 0) throw new Error(`panel scale must be positive, got ${t.scale}`);
  return { x: (sx - t.offsetX) / t.scale, y: (sy - t.offsetY) / t.scale };
}

export function imageToScreen(t: PanelTransform, x: number, y: number): ImagePoint {
  return { x: t.offsetX + x * t.scale, y: t.offsetY + y * t.scale };
}

export function inImage(t: PanelTransform, p: ImagePoint): boolean {
  return p.x >= 0 && p.x < t.width && p.y >= 0 && p.y < t.height;
}

/**
 * Serialize panel geometry in the key-value descriptor format the analysis
 * toolkit parses, so a recorded trace carries exactly what was rendered.
 */
export function toDescriptor(t: PanelTransform): string {
  return [
    `offset_x=${t.offsetX}`,
    `offset_y=${t.offsetY}`,
    `scale=${t.scale}`,
    `width=${t.width}`,
    `height=${t.height}`,
    '',
  ].join('\n');
}

/** Geometry of a panel as actually laid out on screen. */
export function panelTransform(
  left: number,
  top: number,
  imageWidth: number,
  imageHeight: number,
  displayScale: number,
): PanelTransform {
  return { offsetX: left, offsetY: top, scale: displayScale, width: imageWidth, height: imageHeight };
}
