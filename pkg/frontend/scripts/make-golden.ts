/** Render the overlay fixture once and freeze it as the golden image.
 *
 * Run from the package root: node .golden-build/scripts/make-golden.js
 */

import { mkdirSync, writeFileSync } from 'node:fs';
import { join } from 'node:path';

import { compositeOverlay } from '../src/overlay.js';
import { makeFixture } from '../tests/fixture.js';

const dir = join(process.cwd(), 'tests', 'fixtures');
const out = join(dir, 'overlay_golden.json');
const fixture = makeFixture();
const rgba = compositeOverlay(fixture.base, fixture.layers, fixture.circles);
mkdirSync(dir, { recursive: true });
writeFileSync(
  out,
  JSON.stringify({ width: fixture.base.width, height: fixture.base.height, rgba: Array.from(rgba) }),
);
console.log(`wrote ${out}`);
