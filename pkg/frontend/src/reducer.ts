// Single-reducer state machine for the annotation UI. Pure: same state and
// event always produce the same next state and engine commands, which makes
// every interaction scriptable as a transcript in tests.

import {
  clampZoom,
  contains,
  handles,
  moveHandle,
  pickHandle,
  translate,
  HANDLE_TOLERANCE_PX,
} from "./geometry";
import { defaultOptions } from "./options";
import { lookupBinding } from "./shortcuts";
import type {
  AnnotationDocument,
  AnnotationJson,
  DisplayOptions,
  LabelJson,
  Mode,
  Point,
  ShapeJson,
  ViewTransform,
} from "./types";

export type Drag =
  | { kind: "draw"; start: Point; current: Point }
  | { kind: "handle"; id: number; index: number }
  | { kind: "move"; id: number; last: Point };

export interface UiState {
  mode: Mode;
  selectedId: number | null;
  pendingPolygon: Point[];
  view: ViewTransform;
  options: DisplayOptions;
  dirty: boolean;
  doc: AnnotationDocument | null;
  imageIndex: number;
  entryCount: number;
  drag: Drag | null;
  pendingShape: ShapeJson | null; // drawn, waiting for a label
  helpOpen: boolean;
  saving: boolean;
  message: string | null;
  pendingNavigation: number | null; // target index held back by unsaved edits
}

export const initialState: UiState = {
  mode: "select",
  selectedId: null,
  pendingPolygon: [],
  view: { zoom: 1, panX: 0, panY: 0 },
  options: defaultOptions,
  dirty: false,
  doc: null,
  imageIndex: 0,
  entryCount: 0,
  drag: null,
  pendingShape: null,
  helpOpen: false,
  saving: false,
  message: null,
  pendingNavigation: null,
};

export type UiEvent =
  | { type: "project_loaded"; entryCount: number; cursor: number }
  | { type: "doc_loaded"; index: number; doc: AnnotationDocument }
  | { type: "pointer_down"; pos: Point }
  | { type: "pointer_move"; pos: Point }
  | { type: "pointer_up"; pos: Point }
  | { type: "double_click"; pos: Point }
  | { type: "key"; key: string; ctrl?: boolean }
  | { type: "label_picked"; cls: string; typ: string; name?: string }
  | { type: "label_cancelled" }
  | { type: "save_ok" }
  | { type: "save_failed"; message: string }
  | { type: "navigate"; index: number }
  | { type: "confirm_navigation"; proceed: boolean }
  | { type: "options_changed"; options: DisplayOptions };

export type EngineCommand =
  | { kind: "save"; index: number; doc: AnnotationDocument }
  | { kind: "load"; index: number }
  | { kind: "persist_options"; options: DisplayOptions };

export interface ReduceResult {
  state: UiState;
  commands: EngineCommand[];
}

const ZOOM_STEP = 1.25;

function pure(state: UiState): ReduceResult {
  return { state, commands: [] };
}

function findTopmostAt(doc: AnnotationDocument, p: Point): number | null {
  for (let i = doc.annotations.length - 1; i >= 0; i--) {
    if (contains(doc.annotations[i].shape, p)) return doc.annotations[i].id;
  }
  return null;
}

function annotationById(doc: AnnotationDocument, id: number): AnnotationJson | null {
  return doc.annotations.find((a) => a.id === id) ?? null;
}

function replaceShape(doc: AnnotationDocument, id: number, shape: ShapeJson): AnnotationDocument {
  return {
    ...doc,
    annotations: doc.annotations.map((a) => (a.id === id ? { ...a, shape } : a)),
  };
}

/** Propose `<type>_<n>` with the smallest n unused in the document. */
export function defaultName(doc: AnnotationDocument, typ: string): string {
  const taken = new Set(doc.annotations.map((a) => a.label.name));
  for (let n = 1; ; n++) {
    const candidate = `${typ}_${n}`;
    if (!taken.has(candidate)) return candidate;
  }
}

function requestNavigation(state: UiState, index: number): ReduceResult {
  const target = Math.min(state.entryCount - 1, Math.max(0, index));
  if (state.entryCount === 0 || target === state.imageIndex) return pure(state);
  if (state.dirty) {
    // unsaved edits: hold the navigation until the user confirms
    return pure({ ...state, pendingNavigation: target });
  }
  return { state, commands: [{ kind: "load", index: target }] };
}

function closePendingPolygon(state: UiState): ReduceResult {
  if (state.mode !== "draw_polygon") return pure(state);
  if (state.pendingPolygon.length < 3) {
    return pure({ ...state, message: "a polygon needs at least 3 points" });
  }
  const shape: ShapeJson = {
    kind: "polygon",
    points: state.pendingPolygon.map((p) => [p.x, p.y]),
  };
  return pure({ ...state, pendingPolygon: [], pendingShape: shape });
}

function handleAction(state: UiState, action: string): ReduceResult {
  switch (action) {
    case "mode_select":
      return pure({ ...state, mode: "select", pendingPolygon: [], drag: null });
    case "mode_rect":
      return pure({ ...state, mode: "draw_rect", pendingPolygon: [], selectedId: null, drag: null });
    case "mode_ellipse":
      return pure({ ...state, mode: "draw_ellipse", pendingPolygon: [], selectedId: null, drag: null });
    case "mode_polygon":
      return pure({ ...state, mode: "draw_polygon", pendingPolygon: [], selectedId: null, drag: null });
    case "delete_selection": {
      if (state.doc === null || state.selectedId === null) return pure(state);
      const doc = {
        ...state.doc,
        annotations: state.doc.annotations.filter((a) => a.id !== state.selectedId),
      };
      return pure({ ...state, doc, selectedId: null, dirty: true });
    }
    case "save": {
      if (state.doc === null || state.saving) return pure(state);
      return {
        state: { ...state, saving: true },
        commands: [{ kind: "save", index: state.imageIndex, doc: state.doc }],
      };
    }
    case "next_image":
      return requestNavigation(state, state.imageIndex + 1);
    case "prev_image":
      return requestNavigation(state, state.imageIndex - 1);
    case "zoom_in":
      return pure({ ...state, view: { ...state.view, zoom: clampZoom(state.view.zoom * ZOOM_STEP) } });
    case "zoom_out":
      return pure({ ...state, view: { ...state.view, zoom: clampZoom(state.view.zoom / ZOOM_STEP) } });
    case "reset_view":
      return pure({ ...state, view: { zoom: 1, panX: 0, panY: 0 } });
    case "close_polygon":
      return closePendingPolygon(state);
    case "cancel":
      if (state.helpOpen) return pure({ ...state, helpOpen: false });
      if (state.pendingShape) return pure({ ...state, pendingShape: null });
      if (state.pendingPolygon.length > 0) return pure({ ...state, pendingPolygon: [] });
      if (state.message) return pure({ ...state, message: null });
      return pure({ ...state, selectedId: null, drag: null });
    case "help":
      return pure({ ...state, helpOpen: true });
    default:
      return pure(state);
  }
}

function handlePointerDown(state: UiState, pos: Point): ReduceResult {
  if (state.doc === null || state.pendingShape !== null) return pure(state);
  switch (state.mode) {
    case "select": {
      const tol = HANDLE_TOLERANCE_PX / state.view.zoom;
      if (state.selectedId !== null) {
        const selected = annotationById(state.doc, state.selectedId);
        if (selected) {
          const handleIndex = pickHandle(selected.shape, pos, tol);
          if (handleIndex !== null) {
            return pure({
              ...state,
              drag: { kind: "handle", id: selected.id, index: handleIndex },
            });
          }
        }
      }
      const hit = findTopmostAt(state.doc, pos);
      if (hit === null) return pure({ ...state, selectedId: null });
      return pure({ ...state, selectedId: hit, drag: { kind: "move", id: hit, last: pos } });
    }
    case "draw_rect":
    case "draw_ellipse":
      return pure({ ...state, drag: { kind: "draw", start: pos, current: pos } });
    case "draw_polygon": {
      const last = state.pendingPolygon[state.pendingPolygon.length - 1];
      if (last && last.x === pos.x && last.y === pos.y) return pure(state);
      return pure({ ...state, pendingPolygon: [...state.pendingPolygon, pos] });
    }
  }
}

function handlePointerMove(state: UiState, pos: Point): ReduceResult {
  const drag = state.drag;
  if (drag === null || state.doc === null) return pure(state);
  switch (drag.kind) {
    case "draw":
      return pure({ ...state, drag: { ...drag, current: pos } });
    case "handle": {
      const target = annotationById(state.doc, drag.id);
      if (!target) return pure({ ...state, drag: null });
      const moved = moveHandle(target.shape, drag.index, pos);
      if (moved === null) return pure(state); // degenerate drag position, ignore
      return pure({ ...state, doc: replaceShape(state.doc, drag.id, moved), dirty: true });
    }
    case "move": {
      const target = annotationById(state.doc, drag.id);
      if (!target) return pure({ ...state, drag: null });
      const shape = translate(target.shape, pos.x - drag.last.x, pos.y - drag.last.y);
      return pure({
        ...state,
        doc: replaceShape(state.doc, drag.id, shape),
        drag: { ...drag, last: pos },
        dirty: true,
      });
    }
  }
}

function handlePointerUp(state: UiState, pos: Point): ReduceResult {
  const drag = state.drag;
  if (drag === null) return pure(state);
  if (drag.kind !== "draw") return pure({ ...state, drag: null });
  const x = Math.min(drag.start.x, pos.x);
  const y = Math.min(drag.start.y, pos.y);
  const w = Math.abs(pos.x - drag.start.x);
  const h = Math.abs(pos.y - drag.start.y);
  if (w === 0 || h === 0) return pure({ ...state, drag: null }); // degenerate gesture
  const shape: ShapeJson =
    state.mode === "draw_ellipse"
      ? { kind: "ellipse", cx: x + w / 2, cy: y + h / 2, rx: w / 2, ry: h / 2 }
      : { kind: "rect", x, y, w, h };
  return pure({ ...state, drag: null, pendingShape: shape });
}

function handleLabelPicked(state: UiState, cls: string, typ: string, name?: string): ReduceResult {
  if (state.doc === null || state.pendingShape === null) return pure(state);
  const finalName = name && name.length > 0 ? name : defaultName(state.doc, typ);
  if (state.doc.annotations.some((a) => a.label.name === finalName)) {
    return pure({ ...state, message: `name "${finalName}" is already used in this image` });
  }
  const nextId = state.doc.annotations.reduce((m, a) => Math.max(m, a.id + 1), 0);
  const label: LabelJson = { class: cls, type: typ, name: finalName };
  const doc: AnnotationDocument = {
    ...state.doc,
    annotations: [...state.doc.annotations, { id: nextId, shape: state.pendingShape, label }],
  };
  return pure({ ...state, doc, pendingShape: null, selectedId: nextId, dirty: true });
}

export function reduce(state: UiState, event: UiEvent): ReduceResult {
  switch (event.type) {
    case "project_loaded":
      return pure({ ...state, entryCount: event.entryCount, imageIndex: event.cursor });
    case "doc_loaded":
      return pure({
        ...state,
        doc: event.doc,
        imageIndex: event.index,
        selectedId: null,
        drag: null,
        pendingShape: null,
        pendingPolygon: [],
        dirty: false,
        saving: false,
        pendingNavigation: null,
      });
    case "pointer_down":
      return handlePointerDown(state, event.pos);
    case "pointer_move":
      return handlePointerMove(state, event.pos);
    case "pointer_up":
      return handlePointerUp(state, event.pos);
    case "double_click":
      return closePendingPolygon(state);
    case "key": {
      const binding = lookupBinding(event.key, Boolean(event.ctrl));
      if (!binding) return pure(state);
      return handleAction(state, binding.action);
    }
    case "label_picked":
      return handleLabelPicked(state, event.cls, event.typ, event.name);
    case "label_cancelled":
      return pure({ ...state, pendingShape: null });
    case "save_ok": {
      const next = { ...state, saving: false, dirty: false };
      if (state.pendingNavigation !== null) {
        return {
          state: { ...next, pendingNavigation: null },
          commands: [{ kind: "load", index: state.pendingNavigation }],
        };
      }
      return pure(next);
    }
    case "save_failed":
      return pure({ ...state, saving: false, message: event.message });
    case "navigate":
      return requestNavigation(state, event.index);
    case "confirm_navigation": {
      const target = state.pendingNavigation;
      if (target === null) return pure(state);
      if (!event.proceed) return pure({ ...state, pendingNavigation: null });
      // discard unsaved edits and go
      return {
        state: { ...state, pendingNavigation: null, dirty: false },
        commands: [{ kind: "load", index: target }],
      };
    }
    case "options_changed":
      return {
        state: { ...state, options: event.options },
        commands: [{ kind: "persist_options", options: event.options }],
      };
  }
}
