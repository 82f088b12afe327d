/** DOM-free rendering model and its SVG serialization.
 *
 * buildModel() turns a (possibly sliced) document plus the stable
 * full-graph positions into plain shape records; toSvg() serializes
 * them.  Keeping the model free of browser types lets tests inspect
 * exactly what would be drawn.
 */

import type { GraphDocument, NodeKind } from "./api.js";
import type { Point } from "./layout.js";

export const PALETTE: Record<NodeKind, string> = {
  object: "#d64541",
  edge: "#7ec699",
  attribute: "#8e5fbf",
  value: "#9aa0a6",
};

export type ShapeForm = "circle" | "diamond" | "rect" | "text";

export const FORMS: Record<NodeKind, ShapeForm> = {
  object: "circle",
  edge: "diamond",
  attribute: "rect",
  value: "text",
};

export interface Shape {
  id: number;
  kind: NodeKind;
  form: ShapeForm;
  x: number;
  y: number;
  label: string;
  title: string;
  color: string;
}

export interface Line {
  from: number;
  to: number;
  x1: number;
  y1: number;
  x2: number;
  y2: number;
}

export interface RenderModel {
  width: number;
  height: number;
  shapes: Shape[];
  lines: Line[];
}

export function buildModel(
  doc: GraphDocument,
  positions: Map<number, Point>,
  width = 900,
  height = 600,
): RenderModel {
  const shapes: Shape[] = [];
  const present = new Map<number, Point>();
  for (const node of doc.nodes) {
    const at = positions.get(node.id);
    if (at === undefined) {
      continue;
    }
    present.set(node.id, at);
    shapes.push({
      id: node.id,
      kind: node.kind,
      form: FORMS[node.kind],
      x: at.x,
      y: at.y,
      label: node.name,
      title: `${node.name} ${node.intervals}`,
      color: PALETTE[node.kind],
    });
  }
  const lines: Line[] = [];
  for (const edge of doc.edges) {
    const a = present.get(edge.from);
    const b = present.get(edge.to);
    if (a === undefined || b === undefined) {
      continue;
    }
    lines.push({ from: edge.from, to: edge.to, x1: a.x, y1: a.y, x2: b.x, y2: b.y });
  }
  return { width, height, shapes, lines };
}

export function escapeXml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;")
    .replace(/'/g, "&apos;");
}

const RADIUS = 14;

function shapeSvg(shape: Shape): string {
  const title = `<title>${escapeXml(shape.title)}</title>`;
  const x = shape.x.toFixed(1);
  const y = shape.y.toFixed(1);
  let body: string;
  switch (shape.form) {
    case "circle":
      body = `<circle cx="${x}" cy="${y}" r="${RADIUS}" fill="${shape.color}">${title}</circle>`;
      break;
    case "diamond": {
      const points = [
        `${shape.x.toFixed(1)},${(shape.y - RADIUS).toFixed(1)}`,
        `${(shape.x + RADIUS).toFixed(1)},${y}`,
        `${x},${(shape.y + RADIUS).toFixed(1)}`,
        `${(shape.x - RADIUS).toFixed(1)},${y}`,
      ].join(" ");
      body = `<polygon points="${points}" fill="${shape.color}">${title}</polygon>`;
      break;
    }
    case "rect":
      body = `<rect x="${(shape.x - RADIUS).toFixed(1)}" y="${(shape.y - 10).toFixed(1)}" width="${2 * RADIUS}" height="20" fill="${shape.color}">${title}</rect>`;
      break;
    case "text":
      body = `<circle cx="${x}" cy="${y}" r="4" fill="${shape.color}">${title}</circle>`;
      break;
  }
  const label = `<text x="${x}" y="${(shape.y - RADIUS - 4).toFixed(1)}" text-anchor="middle" font-size="11">${escapeXml(shape.label)}</text>`;
  return `<g data-node-id="${shape.id}" data-kind="${shape.kind}">${body}${label}</g>`;
}

export function toSvg(model: RenderModel): string {
  const parts: string[] = [
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${model.width} ${model.height}" width="${model.width}" height="${model.height}">`,
  ];
  for (const line of model.lines) {
    parts.push(
      `<line x1="${line.x1.toFixed(1)}" y1="${line.y1.toFixed(1)}" x2="${line.x2.toFixed(1)}" y2="${line.y2.toFixed(1)}" stroke="#c0c4cc" stroke-width="1.5"/>`,
    );
  }
  for (const shape of model.shapes) {
    parts.push(shapeSvg(shape));
  }
  parts.push("</svg>");
  return parts.join("");
}
