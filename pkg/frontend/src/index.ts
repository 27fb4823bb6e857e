export * from './types.js';
export * from './transform.js';
export * from './pointer.js';
export * from './api.js';
export * from './session.js';
export * from './overlay.js';
