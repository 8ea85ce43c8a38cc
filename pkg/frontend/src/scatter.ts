/** Cluster explorer geometry and coloring. Layout maps data coordinates
 * into pixel space once; recoloring by cluster, language, or stain kind
 * changes only the color channel, never positions. */

import type { ClusterRecord } from './types.js';

export type ColorMode = 'cluster' | 'language' | 'image_kind';

export interface ScatterPoint {
  id: string;
  px: number;
  py: number;
  color: string;
}

export const MAX_POINTS = 20_000;

const PALETTE = [
  '#4e79a7', '#f28e2b', '#e15759', '#76b7b2', '#59a14f',
  '#edc948', '#b07aa1', '#ff9da7', '#9c755f', '#bab0ac',
];

function colorKey(rec: ClusterRecord, mode: ColorMode): string {
  if (mode === 'cluster') return String(rec.cluster);
  if (mode === 'language') return rec.language;
  return rec.image_kind;
}

export function colorFor(rec: ClusterRecord, mode: ColorMode, keys: string[]): string {
  const idx = keys.indexOf(colorKey(rec, mode));
  return PALETTE[((idx % PALETTE.length) + PALETTE.length) % PALETTE.length]!;
}

export function colorKeys(records: ClusterRecord[], mode: ColorMode): string[] {
  return [...new Set(records.map((r) => colorKey(r, mode)))].sort();
}

/** Downsample deterministically when past the client-side point budget. */
export function capPoints(records: ClusterRecord[], max = MAX_POINTS): ClusterRecord[] {
  if (records.length <= max) return records;
  const stride = Math.ceil(records.length / max);
  return records.filter((_, i) => i % stride === 0);
}

export function layoutScatter(
  records: ClusterRecord[],
  width: number,
  height: number,
  mode: ColorMode = 'cluster',
  margin = 10,
): ScatterPoint[] {
  const capped = capPoints(records);
  if (capped.length === 0) return [];
  const xs = capped.map((r) => r.x);
  const ys = capped.map((r) => r.y);
  const xMin = Math.min(...xs);
  const xMax = Math.max(...xs);
  const yMin = Math.min(...ys);
  const yMax = Math.max(...ys);
  const xSpan = xMax - xMin || 1;
  const ySpan = yMax - yMin || 1;
  const keys = colorKeys(capped, mode);
  return capped.map((rec) => ({
    id: rec.id,
    px: margin + ((rec.x - xMin) / xSpan) * (width - 2 * margin),
    // screen y grows downward
    py: height - margin - ((rec.y - yMin) / ySpan) * (height - 2 * margin),
    color: colorFor(rec, mode, keys),
  }));
}

/** Recolor an existing layout; positions are untouched by construction. */
export function recolor(
  points: ScatterPoint[],
  records: ClusterRecord[],
  mode: ColorMode,
): ScatterPoint[] {
  const keys = colorKeys(records, mode);
  const byId = new Map(records.map((r) => [r.id, r]));
  return points.map((p) => {
    const rec = byId.get(p.id);
    return rec ? { ...p, color: colorFor(rec, mode, keys) } : p;
  });
}

export function renderScatterSvg(points: ScatterPoint[], width: number, height: number): string {
  const circles = points
    .map(
      (p) =>
        `<circle data-id="${p.id}" cx="${p.px.toFixed(2)}" cy="${p.py.toFixed(2)}"` +
        ` r="4" fill="${p.color}"></circle>`,
    )
    .join('\n');
  return `<svg viewBox="0 0 ${width} ${height}" class="scatter">\n${circles}\n</svg>`;
}
