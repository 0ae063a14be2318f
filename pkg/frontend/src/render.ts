// Rendering splits into two halves: buildFrame() computes a plain list of
// draw operations (testable without a DOM), and paint() replays them onto a
// canvas context.

import { boundingBoxTopLeft, handles, imageToScreen } from "./geometry";
import { rgbCss } from "./options";
import type { UiState } from "./reducer";
import type { AnnotationDocument, Point, ShapeJson } from "./types";

export type DrawOp =
  | { op: "image"; zoom: number; panX: number; panY: number }
  | {
      op: "shape";
      id: number;
      shape: ShapeJson;
      stroke: string;
      lineWidth: number;
      fillOpacity: number;
      selected: boolean;
    }
  | { op: "handles"; id: number; points: Point[] } // screen coords
  | { op: "label"; id: number; text: string; at: Point } // screen coords
  | { op: "pending_polygon"; points: Point[] } // screen coords
  | { op: "pending_shape"; shape: ShapeJson };

export function buildFrame(state: UiState, doc: AnnotationDocument | null): DrawOp[] {
  const ops: DrawOp[] = [
    { op: "image", zoom: state.view.zoom, panX: state.view.panX, panY: state.view.panY },
  ];
  if (!doc) return ops;
  const { options, view } = state;
  for (const ann of doc.annotations) {
    const selected = ann.id === state.selectedId;
    ops.push({
      op: "shape",
      id: ann.id,
      shape: ann.shape,
      stroke: rgbCss(selected ? options.selectedColor : options.outlineColor),
      lineWidth: options.lineWidth,
      fillOpacity: options.fillOpacity,
      selected,
    });
    if (selected) {
      ops.push({
        op: "handles",
        id: ann.id,
        points: handles(ann.shape).map((p) => imageToScreen(view, p)),
      });
    }
    if (options.showLabels) {
      const anchor = imageToScreen(view, boundingBoxTopLeft(ann.shape));
      ops.push({
        op: "label",
        id: ann.id,
        text: `${ann.label.class}/${ann.label.type}/${ann.label.name}`,
        at: { x: anchor.x, y: anchor.y - 4 },
      });
    }
  }
  if (state.pendingPolygon.length > 0) {
    ops.push({
      op: "pending_polygon",
      points: state.pendingPolygon.map((p) => imageToScreen(view, p)),
    });
  }
  if (state.drag?.kind === "draw") {
    const { start, current } = state.drag;
    const x = Math.min(start.x, current.x);
    const y = Math.min(start.y, current.y);
    const w = Math.abs(current.x - start.x);
    const h = Math.abs(current.y - start.y);
    ops.push({
      op: "pending_shape",
      shape:
        state.mode === "draw_ellipse"
          ? { kind: "ellipse", cx: x + w / 2, cy: y + h / 2, rx: w / 2, ry: h / 2 }
          : { kind: "rect", x, y, w, h },
    });
  }
  return ops;
}

function tracePath(ctx: CanvasRenderingContext2D, shape: ShapeJson): void {
  ctx.beginPath();
  switch (shape.kind) {
    case "rect":
      ctx.rect(shape.x, shape.y, shape.w, shape.h);
      break;
    case "ellipse":
      ctx.ellipse(shape.cx, shape.cy, shape.rx, shape.ry, 0, 0, Math.PI * 2);
      break;
    case "polygon":
      shape.points.forEach(([x, y], i) => (i === 0 ? ctx.moveTo(x, y) : ctx.lineTo(x, y)));
      ctx.closePath();
      break;
  }
}

export function paint(
  ctx: CanvasRenderingContext2D,
  ops: DrawOp[],
  image: CanvasImageSource | null
): void {
  ctx.save();
  ctx.setTransform(1, 0, 0, 1, 0, 0);
  ctx.clearRect(0, 0, ctx.canvas.width, ctx.canvas.height);
  let zoom = 1;
  let panX = 0;
  let panY = 0;
  for (const op of ops) {
    switch (op.op) {
      case "image":
        ({ zoom, panX, panY } = op);
        if (image) {
          ctx.setTransform(zoom, 0, 0, zoom, panX, panY);
          ctx.drawImage(image, 0, 0);
        }
        break;
      case "shape":
      case "pending_shape": {
        ctx.setTransform(zoom, 0, 0, zoom, panX, panY);
        const shape = op.op === "shape" ? op.shape : op.shape;
        tracePath(ctx, shape);
        ctx.setTransform(1, 0, 0, 1, 0, 0); // stroke width in screen px
        if (op.op === "shape") {
          ctx.fillStyle = op.stroke;
          ctx.globalAlpha = op.fillOpacity;
          ctx.fill("evenodd");
          ctx.globalAlpha = 1;
          ctx.strokeStyle = op.stroke;
          ctx.lineWidth = op.lineWidth;
        } else {
          ctx.strokeStyle = "#888";
          ctx.lineWidth = 1;
          ctx.setLineDash([4, 3]);
        }
        ctx.stroke();
        ctx.setLineDash([]);
        break;
      }
      case "handles":
        ctx.setTransform(1, 0, 0, 1, 0, 0);
        ctx.fillStyle = "#fff";
        ctx.strokeStyle = "#000";
        for (const p of op.points) {
          ctx.beginPath();
          ctx.rect(p.x - 3, p.y - 3, 6, 6);
          ctx.fill();
          ctx.stroke();
        }
        break;
      case "label":
        ctx.setTransform(1, 0, 0, 1, 0, 0);
        ctx.font = "12px sans-serif";
        ctx.fillStyle = "#fff";
        ctx.strokeStyle = "#000";
        ctx.lineWidth = 3;
        ctx.strokeText(op.text, op.at.x, op.at.y);
        ctx.fillText(op.text, op.at.x, op.at.y);
        break;
      case "pending_polygon":
        ctx.setTransform(1, 0, 0, 1, 0, 0);
        ctx.strokeStyle = "#888";
        ctx.lineWidth = 1;
        ctx.setLineDash([4, 3]);
        ctx.beginPath();
        op.points.forEach((p, i) => (i === 0 ? ctx.moveTo(p.x, p.y) : ctx.lineTo(p.x, p.y)));
        ctx.stroke();
        ctx.setLineDash([]);
        break;
    }
  }
  ctx.restore();
}
