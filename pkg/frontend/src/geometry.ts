// Client-side geometry mirroring the engine: containment, handles, handle
// drags and the zoom/pan transform. The engine stays the source of truth;
// these exist so hit-testing and drawing feel immediate.

import type { Point, ShapeJson, ViewTransform } from "./types";

export const ZOOM_MIN = 0.1;
export const ZOOM_MAX = 32;
export const HANDLE_TOLERANCE_PX = 6;

export function clampZoom(zoom: number): number {
  return Math.min(ZOOM_MAX, Math.max(ZOOM_MIN, zoom));
}

export function imageToScreen(t: ViewTransform, p: Point): Point {
  return { x: p.x * t.zoom + t.panX, y: p.y * t.zoom + t.panY };
}

export function screenToImage(t: ViewTransform, p: Point): Point {
  return { x: (p.x - t.panX) / t.zoom, y: (p.y - t.panY) / t.zoom };
}

export function contains(shape: ShapeJson, p: Point): boolean {
  switch (shape.kind) {
    case "rect":
      return (
        shape.x <= p.x && p.x <= shape.x + shape.w &&
        shape.y <= p.y && p.y <= shape.y + shape.h
      );
    case "ellipse": {
      const nx = (p.x - shape.cx) / shape.rx;
      const ny = (p.y - shape.cy) / shape.ry;
      return nx * nx + ny * ny <= 1;
    }
    case "polygon":
      return polygonContains(shape.points, p);
  }
}

function polygonContains(points: [number, number][], p: Point): boolean {
  let inside = false;
  const n = points.length;
  for (let i = 0; i < n; i++) {
    const [ax, ay] = points[i];
    const [bx, by] = points[(i + 1) % n];
    // boundary-inclusive: on-edge counts as inside
    const cross = (bx - ax) * (p.y - ay) - (p.x - ax) * (by - ay);
    if (
      cross === 0 &&
      Math.min(ax, bx) <= p.x && p.x <= Math.max(ax, bx) &&
      Math.min(ay, by) <= p.y && p.y <= Math.max(ay, by)
    ) {
      return true;
    }
    if (ay > p.y !== by > p.y) {
      const xCross = ax + ((p.y - ay) * (bx - ax)) / (by - ay);
      if (p.x < xCross) inside = !inside;
    }
  }
  return inside;
}

export function handles(shape: ShapeJson): Point[] {
  switch (shape.kind) {
    case "rect":
      return [
        { x: shape.x, y: shape.y },
        { x: shape.x + shape.w, y: shape.y },
        { x: shape.x + shape.w, y: shape.y + shape.h },
        { x: shape.x, y: shape.y + shape.h },
      ];
    case "ellipse":
      return [
        { x: shape.cx + shape.rx, y: shape.cy },
        { x: shape.cx, y: shape.cy + shape.ry },
        { x: shape.cx - shape.rx, y: shape.cy },
        { x: shape.cx, y: shape.cy - shape.ry },
      ];
    case "polygon":
      return shape.points.map(([x, y]) => ({ x, y }));
  }
}

export function pickHandle(shape: ShapeJson, p: Point, tol: number): number | null {
  let best: number | null = null;
  let bestD = tol;
  handles(shape).forEach((h, i) => {
    const d = Math.hypot(h.x - p.x, h.y - p.y);
    if (d < bestD || (best === null && d <= tol)) {
      best = i;
      bestD = d;
    }
  });
  return best;
}

/** Drag one reference point. Returns null when the result would be
 * degenerate (the engine re-validates on save either way). */
export function moveHandle(shape: ShapeJson, index: number, to: Point): ShapeJson | null {
  switch (shape.kind) {
    case "rect": {
      const hs = handles(shape);
      const opposite = hs[(index + 2) % 4];
      const w = Math.abs(to.x - opposite.x);
      const h = Math.abs(to.y - opposite.y);
      if (w === 0 || h === 0) return null;
      return {
        kind: "rect",
        x: Math.min(to.x, opposite.x),
        y: Math.min(to.y, opposite.y),
        w,
        h,
      };
    }
    case "ellipse": {
      if (index === 0 || index === 2) {
        const rx = Math.abs(to.x - shape.cx);
        return rx === 0 ? null : { ...shape, rx };
      }
      const ry = Math.abs(to.y - shape.cy);
      return ry === 0 ? null : { ...shape, ry };
    }
    case "polygon": {
      const points = shape.points.map((pt, i) =>
        i === index ? ([to.x, to.y] as [number, number]) : pt
      );
      return { kind: "polygon", points };
    }
  }
}

export function translate(shape: ShapeJson, dx: number, dy: number): ShapeJson {
  switch (shape.kind) {
    case "rect":
      return { ...shape, x: shape.x + dx, y: shape.y + dy };
    case "ellipse":
      return { ...shape, cx: shape.cx + dx, cy: shape.cy + dy };
    case "polygon":
      return { kind: "polygon", points: shape.points.map(([x, y]) => [x + dx, y + dy]) };
  }
}

export function boundingBoxTopLeft(shape: ShapeJson): Point {
  switch (shape.kind) {
    case "rect":
      return { x: shape.x, y: shape.y };
    case "ellipse":
      return { x: shape.cx - shape.rx, y: shape.cy - shape.ry };
    case "polygon":
      return {
        x: Math.min(...shape.points.map(([x]) => x)),
        y: Math.min(...shape.points.map(([, y]) => y)),
      };
  }
}
