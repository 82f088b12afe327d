/** Deterministic force-directed layout.
 *
 * Positions are computed once from the full document and reused for
 * every snapshot, so nodes do not jump while the timeline is scrubbed.
 * Randomness comes from a seeded generator keyed on the graph, which
 * makes layouts reproducible across page loads.
 */

import type { GraphDocument } from "./api.js";

export interface Point {
  x: number;
  y: number;
}

/** Small fast PRNG with a 32-bit state; good enough for jittering. */
export function mulberry32(seed: number): () => number {
  let state = seed >>> 0;
  return () => {
    state = (state + 0x6d2b79f5) >>> 0;
    let t = state;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

export function hashString(text: string): number {
  let hash = 0x811c9dc5;
  for (let i = 0; i < text.length; i++) {
    hash ^= text.charCodeAt(i);
    hash = Math.imul(hash, 0x01000193);
  }
  return hash >>> 0;
}

const ITERATIONS = 120;

export function computeLayout(
  doc: GraphDocument,
  width = 900,
  height = 600,
): Map<number, Point> {
  const rng = mulberry32(hashString(`${doc.name}:${doc.nodes.length}`));
  const ids = doc.nodes.map((n) => n.id);
  const index = new Map<number, number>(ids.map((id, i) => [id, i]));
  const n = ids.length;
  const xs = new Float64Array(n);
  const ys = new Float64Array(n);
  for (let i = 0; i < n; i++) {
    xs[i] = width * (0.1 + 0.8 * rng());
    ys[i] = height * (0.1 + 0.8 * rng());
  }
  const links: Array<[number, number]> = [];
  for (const edge of doc.edges) {
    const a = index.get(edge.from);
    const b = index.get(edge.to);
    if (a !== undefined && b !== undefined) {
      links.push([a, b]);
    }
  }

  const k = Math.sqrt((width * height) / Math.max(1, n));
  let temperature = width / 8;
  const dx = new Float64Array(n);
  const dy = new Float64Array(n);
  for (let step = 0; step < ITERATIONS; step++) {
    dx.fill(0);
    dy.fill(0);
    for (let i = 0; i < n; i++) {
      for (let j = i + 1; j < n; j++) {
        let vx = xs[i]! - xs[j]!;
        let vy = ys[i]! - ys[j]!;
        let dist = Math.hypot(vx, vy);
        if (dist < 1e-6) {
          vx = 1e-3 * (i - j);
          vy = 1e-3;
          dist = Math.hypot(vx, vy);
        }
        const repulse = (k * k) / dist;
        dx[i]! += (vx / dist) * repulse;
        dy[i]! += (vy / dist) * repulse;
        dx[j]! -= (vx / dist) * repulse;
        dy[j]! -= (vy / dist) * repulse;
      }
    }
    for (const [a, b] of links) {
      const vx = xs[a]! - xs[b]!;
      const vy = ys[a]! - ys[b]!;
      const dist = Math.max(1e-6, Math.hypot(vx, vy));
      const attract = (dist * dist) / k;
      dx[a]! -= (vx / dist) * attract;
      dy[a]! -= (vy / dist) * attract;
      dx[b]! += (vx / dist) * attract;
      dy[b]! += (vy / dist) * attract;
    }
    for (let i = 0; i < n; i++) {
      const mag = Math.max(1e-6, Math.hypot(dx[i]!, dy[i]!));
      const limited = Math.min(mag, temperature);
      xs[i] = Math.min(width * 0.95, Math.max(width * 0.05, xs[i]! + (dx[i]! / mag) * limited));
      ys[i] = Math.min(height * 0.95, Math.max(height * 0.05, ys[i]! + (dy[i]! / mag) * limited));
    }
    temperature *= 0.96;
  }

  const points = new Map<number, Point>();
  for (let i = 0; i < n; i++) {
    points.set(ids[i]!, { x: xs[i]!, y: ys[i]! });
  }
  return points;
}
