import { describe, expect, it } from "vitest";

import {
  EngineCommand,
  ReduceResult,
  UiEvent,
  UiState,
  defaultName,
  initialState,
  reduce,
} from "../src/reducer";
import type { AnnotationDocument } from "../src/types";

function emptyDoc(): AnnotationDocument {
  return { imagePath: "a.png", width: 100, height: 80, annotations: [] };
}

/** Run a transcript of events, collecting all emitted commands. */
function play(events: UiEvent[], from: UiState = initialState) {
  let state = from;
  const commands: EngineCommand[] = [];
  for (const event of events) {
    const result: ReduceResult = reduce(state, event);
    state = result.state;
    commands.push(...result.commands);
  }
  return { state, commands };
}

const loadFirst: UiEvent[] = [
  { type: "project_loaded", entryCount: 3, cursor: 0 },
  { type: "doc_loaded", index: 0, doc: emptyDoc() },
];

describe("drawing gestures", () => {
  it("press-drag-release in rect mode opens the label picker with the extent", () => {
    const { state } = play([
      ...loadFirst,
      { type: "key", key: "r" },
      { type: "pointer_down", pos: { x: 10, y: 10 } },
      { type: "pointer_move", pos: { x: 20, y: 18 } },
      { type: "pointer_up", pos: { x: 30, y: 25 } },
    ]);
    expect(state.pendingShape).toEqual({ kind: "rect", x: 10, y: 10, w: 20, h: 15 });
  });

  it("ellipse drag produces center and semi-axes of the bounding extent", () => {
    const { state } = play([
      ...loadFirst,
      { type: "key", key: "e" },
      { type: "pointer_down", pos: { x: 0, y: 0 } },
      { type: "pointer_up", pos: { x: 10, y: 6 } },
    ]);
    expect(state.pendingShape).toEqual({ kind: "ellipse", cx: 5, cy: 3, rx: 5, ry: 3 });
  });

  it("degenerate drag is discarded", () => {
    const { state } = play([
      ...loadFirst,
      { type: "key", key: "r" },
      { type: "pointer_down", pos: { x: 10, y: 10 } },
      { type: "pointer_up", pos: { x: 10, y: 10 } },
    ]);
    expect(state.pendingShape).toBeNull();
    expect(state.drag).toBeNull();
  });

  it("polygon: clicks add vertices, Enter closes with >= 3, Escape cancels", () => {
    const clicks: UiEvent[] = [
      { type: "key", key: "p" },
      { type: "pointer_down", pos: { x: 0, y: 0 } },
      { type: "pointer_down", pos: { x: 10, y: 0 } },
    ];
    // closing with 2 vertices: unchanged + message
    let r = play([...loadFirst, ...clicks, { type: "key", key: "Enter" }]);
    expect(r.state.pendingShape).toBeNull();
    expect(r.state.pendingPolygon).toHaveLength(2);
    expect(r.state.message).toMatch(/3 points/);

    r = play([
      ...loadFirst,
      ...clicks,
      { type: "pointer_down", pos: { x: 5, y: 8 } },
      { type: "key", key: "Enter" },
    ]);
    expect(r.state.pendingShape).toEqual({
      kind: "polygon",
      points: [[0, 0], [10, 0], [5, 8]],
    });
    expect(r.state.pendingPolygon).toHaveLength(0);

    r = play([...loadFirst, ...clicks, { type: "key", key: "Escape" }]);
    expect(r.state.pendingPolygon).toHaveLength(0);
  });

  it("double-click closes a polygon too", () => {
    const { state } = play([
      ...loadFirst,
      { type: "key", key: "p" },
      { type: "pointer_down", pos: { x: 0, y: 0 } },
      { type: "pointer_down", pos: { x: 10, y: 0 } },
      { type: "pointer_down", pos: { x: 5, y: 8 } },
      { type: "double_click", pos: { x: 5, y: 8 } },
    ]);
    expect(state.pendingShape?.kind).toBe("polygon");
  });
});

describe("labeling", () => {
  const drawRect: UiEvent[] = [
    ...loadFirst,
    { type: "key", key: "r" },
    { type: "pointer_down", pos: { x: 10, y: 10 } },
    { type: "pointer_up", pos: { x: 30, y: 25 } },
  ];

  it("label pick adds the annotation, selects it and marks dirty", () => {
    const { state } = play([
      ...drawRect,
      { type: "label_picked", cls: "vehicles", typ: "car", name: "car_01" },
    ]);
    expect(state.doc!.annotations).toHaveLength(1);
    expect(state.doc!.annotations[0].label).toEqual({ class: "vehicles", type: "car", name: "car_01" });
    expect(state.selectedId).toBe(0);
    expect(state.dirty).toBe(true);
    expect(state.pendingShape).toBeNull();
  });

  it("missing name falls back to <type>_<n>", () => {
    const { state } = play([...drawRect, { type: "label_picked", cls: "vehicles", typ: "car" }]);
    expect(state.doc!.annotations[0].label.name).toBe("car_1");
  });

  it("defaultName skips taken names", () => {
    const doc = emptyDoc();
    doc.annotations.push({
      id: 0,
      shape: { kind: "rect", x: 0, y: 0, w: 1, h: 1 },
      label: { class: "v", type: "car", name: "car_1" },
    });
    expect(defaultName(doc, "car")).toBe("car_2");
  });

  it("duplicate explicit name is rejected with a message", () => {
    const first = play([
      ...drawRect,
      { type: "label_picked", cls: "vehicles", typ: "car", name: "car_01" },
      { type: "key", key: "r" },
      { type: "pointer_down", pos: { x: 50, y: 50 } },
      { type: "pointer_up", pos: { x: 60, y: 60 } },
      { type: "label_picked", cls: "vehicles", typ: "car", name: "car_01" },
    ]);
    expect(first.state.doc!.annotations).toHaveLength(1);
    expect(first.state.message).toMatch(/already used/);
    expect(first.state.pendingShape).not.toBeNull(); // picker stays open
  });
});

describe("selection and editing", () => {
  function withOneRect() {
    return play([
      ...loadFirst,
      { type: "key", key: "r" },
      { type: "pointer_down", pos: { x: 10, y: 10 } },
      { type: "pointer_up", pos: { x: 30, y: 25 } },
      { type: "label_picked", cls: "vehicles", typ: "car", name: "car_01" },
      { type: "key", key: "s" },
    ]);
  }

  it("click inside selects the annotation", () => {
    const { state } = play(
      [
        { type: "key", key: "Escape" }, // deselect
        { type: "pointer_down", pos: { x: 15, y: 15 } },
        { type: "pointer_up", pos: { x: 15, y: 15 } },
      ],
      withOneRect().state
    );
    expect(state.selectedId).toBe(0);
  });

  it("click outside deselects", () => {
    const { state } = play(
      [
        { type: "pointer_down", pos: { x: 90, y: 70 } },
        { type: "pointer_up", pos: { x: 90, y: 70 } },
      ],
      withOneRect().state
    );
    expect(state.selectedId).toBeNull();
  });

  it("dragging a corner handle resizes the selected rect", () => {
    const { state } = play(
      [
        { type: "pointer_down", pos: { x: 30, y: 25 } }, // BR handle
        { type: "pointer_move", pos: { x: 40, y: 35 } },
        { type: "pointer_up", pos: { x: 40, y: 35 } },
      ],
      withOneRect().state
    );
    expect(state.doc!.annotations[0].shape).toEqual({ kind: "rect", x: 10, y: 10, w: 30, h: 25 });
    expect(state.dirty).toBe(true);
  });

  it("dragging the interior moves the whole shape", () => {
    const { state } = play(
      [
        { type: "pointer_down", pos: { x: 20, y: 18 } },
        { type: "pointer_move", pos: { x: 25, y: 20 } },
        { type: "pointer_up", pos: { x: 25, y: 20 } },
      ],
      withOneRect().state
    );
    expect(state.doc!.annotations[0].shape).toEqual({ kind: "rect", x: 15, y: 12, w: 20, h: 15 });
  });

  it("Delete removes the selection and marks dirty", () => {
    const { state } = play([{ type: "key", key: "Delete" }], withOneRect().state);
    expect(state.doc!.annotations).toHaveLength(0);
    expect(state.selectedId).toBeNull();
    expect(state.dirty).toBe(true);
  });
});

describe("saving and navigation", () => {
  function dirtyState() {
    return play([
      ...loadFirst,
      { type: "key", key: "r" },
      { type: "pointer_down", pos: { x: 10, y: 10 } },
      { type: "pointer_up", pos: { x: 30, y: 25 } },
      { type: "label_picked", cls: "vehicles", typ: "car", name: "car_01" },
    ]).state;
  }

  it("Ctrl+S emits a save command and blocks a second save while pending", () => {
    let r = reduce(dirtyState(), { type: "key", key: "s", ctrl: true });
    expect(r.commands).toEqual([{ kind: "save", index: 0, doc: r.state.doc }]);
    expect(r.state.saving).toBe(true);
    r = reduce(r.state, { type: "key", key: "s", ctrl: true });
    expect(r.commands).toHaveLength(0);
  });

  it("save_ok clears dirty and saving", () => {
    let r = reduce(dirtyState(), { type: "key", key: "s", ctrl: true });
    r = reduce(r.state, { type: "save_ok" });
    expect(r.state.dirty).toBe(false);
    expect(r.state.saving).toBe(false);
  });

  it("navigation away while dirty asks for confirmation", () => {
    let r = reduce(dirtyState(), { type: "key", key: "n" });
    expect(r.commands).toHaveLength(0);
    expect(r.state.pendingNavigation).toBe(1);
    // declined: stay
    const declined = reduce(r.state, { type: "confirm_navigation", proceed: false });
    expect(declined.commands).toHaveLength(0);
    expect(declined.state.pendingNavigation).toBeNull();
    // accepted: load target
    const accepted = reduce(r.state, { type: "confirm_navigation", proceed: true });
    expect(accepted.commands).toEqual([{ kind: "load", index: 1 }]);
  });

  it("clean navigation loads immediately and clamps at the ends", () => {
    const clean = play(loadFirst).state;
    expect(reduce(clean, { type: "key", key: "n" }).commands).toEqual([{ kind: "load", index: 1 }]);
    expect(reduce(clean, { type: "key", key: "b" }).commands).toHaveLength(0); // already at 0
  });
});

describe("view controls", () => {
  it("zoom steps multiply by 1.25 and clamp", () => {
    let state = play(loadFirst).state;
    state = reduce(state, { type: "key", key: "+" }).state;
    expect(state.view.zoom).toBeCloseTo(1.25);
    for (let i = 0; i < 40; i++) state = reduce(state, { type: "key", key: "+" }).state;
    expect(state.view.zoom).toBe(32);
    for (let i = 0; i < 80; i++) state = reduce(state, { type: "key", key: "-" }).state;
    expect(state.view.zoom).toBe(0.1);
    state = reduce(state, { type: "key", key: "0" }).state;
    expect(state.view).toEqual({ zoom: 1, panX: 0, panY: 0 });
  });

  it("F1 opens help, Escape closes it", () => {
    let state = reduce(initialState, { type: "key", key: "F1" }).state;
    expect(state.helpOpen).toBe(true);
    state = reduce(state, { type: "key", key: "Escape" }).state;
    expect(state.helpOpen).toBe(false);
  });
});

describe("invariants under random event sequences", () => {
  // deterministic LCG so failures reproduce
  function lcg(seed: number) {
    let s = seed >>> 0;
    return () => {
      s = (s * 1664525 + 1013904223) >>> 0;
      return s / 2 ** 32;
    };
  }

  function randomEvent(rnd: () => number): UiEvent {
    const keys = ["s", "r", "e", "p", "Delete", "Enter", "Escape", "+", "-", "0", "n", "b", "F1"];
    const roll = rnd();
    const pos = { x: Math.floor(rnd() * 100), y: Math.floor(rnd() * 80) };
    if (roll < 0.3) return { type: "pointer_down", pos };
    if (roll < 0.45) return { type: "pointer_move", pos };
    if (roll < 0.6) return { type: "pointer_up", pos };
    if (roll < 0.85) return { type: "key", key: keys[Math.floor(rnd() * keys.length)] };
    if (roll < 0.9) return { type: "label_picked", cls: "v", typ: "car" };
    if (roll < 0.93) return { type: "label_cancelled" };
    if (roll < 0.96) return { type: "double_click", pos };
    return { type: "confirm_navigation", proceed: rnd() < 0.5 };
  }

  it("mode/pendingPolygon coupling and selectedId validity always hold", () => {
    const rnd = lcg(12345);
    let state = play(loadFirst).state;
    for (let step = 0; step < 5000; step++) {
      state = reduce(state, randomEvent(rnd)).state;
      if (state.pendingPolygon.length > 0) expect(state.mode).toBe("draw_polygon");
      if (state.selectedId !== null) {
        expect(state.doc!.annotations.some((a) => a.id === state.selectedId)).toBe(true);
      }
      const ids = state.doc!.annotations.map((a) => a.id);
      expect(new Set(ids).size).toBe(ids.length);
    }
  });

  it("reduce is pure: same state and event give identical results", () => {
    const rnd = lcg(777);
    let state = play(loadFirst).state;
    for (let step = 0; step < 500; step++) {
      const event = randomEvent(rnd);
      const a = reduce(state, event);
      const b = reduce(state, event);
      expect(a).toEqual(b);
      state = a.state;
    }
  });
});
