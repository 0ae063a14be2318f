// Browser entry point: wires the reducer, renderer and service client to the
// DOM. All behavior lives in the reducer; this file only routes events.

import { ApiClient, ServiceError } from "./api";
import { screenToImage } from "./geometry";
import { loadOptions, saveOptions } from "./options";
import { initialState, reduce, UiState, UiEvent, EngineCommand } from "./reducer";
import { buildFrame, paint } from "./render";
import { shortcutHelp } from "./shortcuts";
import type { Point, TaxonomyJson } from "./types";

const api = new ApiClient();
let state: UiState = { ...initialState, options: loadOptions(localStorage) };
let taxonomy: TaxonomyJson = { classes: [] };
let image: HTMLImageElement | null = null;

const canvas = document.getElementById("canvas") as HTMLCanvasElement;
const ctx = canvas.getContext("2d")!;
const statusBar = document.getElementById("status")!;
const entryLabel = document.getElementById("entry-label")!;

function dispatch(event: UiEvent): void {
  const result = reduce(state, event);
  state = result.state;
  for (const command of result.commands) runCommand(command);
  sync();
}

async function runCommand(command: EngineCommand): Promise<void> {
  switch (command.kind) {
    case "save":
      try {
        await api.putAnnotations(command.index, command.doc);
        await api.setCursor(command.index);
        dispatch({ type: "save_ok" });
      } catch (err) {
        const message = err instanceof ServiceError ? err.message : String(err);
        dispatch({ type: "save_failed", message });
      }
      break;
    case "load":
      try {
        const doc = await api.getAnnotations(command.index);
        await api.setCursor(command.index);
        await loadImage(command.index);
        dispatch({ type: "doc_loaded", index: command.index, doc });
      } catch (err) {
        statusBar.textContent = `load failed: ${err}`;
      }
      break;
    case "persist_options":
      saveOptions(localStorage, command.options);
      break;
  }
}

function loadImage(index: number): Promise<void> {
  return new Promise((resolve, reject) => {
    const img = new Image();
    img.onload = () => {
      image = img;
      resolve();
    };
    img.onerror = reject;
    img.src = api.imageUrl(index);
  });
}

function canvasPoint(ev: MouseEvent): Point {
  const rect = canvas.getBoundingClientRect();
  return screenToImage(state.view, {
    x: ev.clientX - rect.left,
    y: ev.clientY - rect.top,
  });
}

function sync(): void {
  paint(ctx, buildFrame(state, state.doc), image);
  statusBar.textContent =
    state.message ??
    (state.dirty ? "unsaved changes (Ctrl+S to save)" : state.saving ? "saving…" : "ready");
  entryLabel.textContent = state.doc
    ? `${state.imageIndex + 1} / ${state.entryCount}: ${state.doc.imagePath}`
    : "";
  document.querySelectorAll<HTMLButtonElement>("[data-mode]").forEach((b) => {
    b.classList.toggle("active", b.dataset.mode === state.mode);
  });
  (document.getElementById("save-btn") as HTMLButtonElement).disabled = state.saving;
  syncLabelPicker();
  syncHelp();
  syncConfirm();
}

function syncLabelPicker(): void {
  const dialog = document.getElementById("label-dialog") as HTMLDialogElement;
  if (state.pendingShape && !dialog.open) {
    const nameInput = document.getElementById("label-name") as HTMLInputElement;
    nameInput.value = "";
    dialog.showModal();
  } else if (!state.pendingShape && dialog.open) {
    dialog.close();
  }
}

function syncHelp(): void {
  const dialog = document.getElementById("help-dialog") as HTMLDialogElement;
  if (state.helpOpen && !dialog.open) dialog.showModal();
  else if (!state.helpOpen && dialog.open) dialog.close();
}

function syncConfirm(): void {
  if (state.pendingNavigation !== null) {
    const proceed = window.confirm("Discard unsaved changes and switch image?");
    dispatch({ type: "confirm_navigation", proceed });
  }
}

function populateLabelPicker(): void {
  const classSelect = document.getElementById("label-class") as HTMLSelectElement;
  const typeSelect = document.getElementById("label-type") as HTMLSelectElement;
  classSelect.innerHTML = "";
  for (const c of taxonomy.classes) {
    const option = document.createElement("option");
    option.value = c.name;
    option.textContent = c.name;
    classSelect.appendChild(option);
  }
  const refreshTypes = () => {
    typeSelect.innerHTML = "";
    const cls = taxonomy.classes.find((c) => c.name === classSelect.value);
    for (const t of cls?.types ?? []) {
      const option = document.createElement("option");
      option.value = t;
      option.textContent = t;
      typeSelect.appendChild(option);
    }
  };
  classSelect.onchange = refreshTypes;
  refreshTypes();
}

function populateHelp(): void {
  const table = document.getElementById("help-table")!;
  table.innerHTML = "";
  for (const row of shortcutHelp()) {
    const tr = document.createElement("tr");
    tr.innerHTML = `<td><kbd>${row.keys}</kbd></td><td>${row.description}</td>`;
    table.appendChild(tr);
  }
}

function wireEvents(): void {
  canvas.addEventListener("mousedown", (ev) => dispatch({ type: "pointer_down", pos: canvasPoint(ev) }));
  canvas.addEventListener("mousemove", (ev) => dispatch({ type: "pointer_move", pos: canvasPoint(ev) }));
  canvas.addEventListener("mouseup", (ev) => dispatch({ type: "pointer_up", pos: canvasPoint(ev) }));
  canvas.addEventListener("dblclick", (ev) => dispatch({ type: "double_click", pos: canvasPoint(ev) }));
  window.addEventListener("keydown", (ev) => {
    if ((ev.target as HTMLElement)?.tagName === "INPUT") return;
    const handled = dispatchKey(ev.key, ev.ctrlKey || ev.metaKey);
    if (handled) ev.preventDefault();
  });
  document.querySelectorAll<HTMLButtonElement>("[data-mode]").forEach((b) => {
    const key = { select: "s", draw_rect: "r", draw_ellipse: "e", draw_polygon: "p" }[
      b.dataset.mode as string
    ];
    b.addEventListener("click", () => dispatch({ type: "key", key: key! }));
  });
  document.getElementById("save-btn")!.addEventListener("click", () =>
    dispatch({ type: "key", key: "s", ctrl: true })
  );
  document.getElementById("prev-btn")!.addEventListener("click", () => dispatch({ type: "key", key: "b" }));
  document.getElementById("next-btn")!.addEventListener("click", () => dispatch({ type: "key", key: "n" }));
  document.getElementById("help-btn")!.addEventListener("click", () => dispatch({ type: "key", key: "F1" }));
  document.getElementById("label-ok")!.addEventListener("click", (ev) => {
    ev.preventDefault();
    const cls = (document.getElementById("label-class") as HTMLSelectElement).value;
    const typ = (document.getElementById("label-type") as HTMLSelectElement).value;
    const name = (document.getElementById("label-name") as HTMLInputElement).value.trim();
    dispatch({ type: "label_picked", cls, typ, name: name || undefined });
  });
  document.getElementById("label-cancel")!.addEventListener("click", (ev) => {
    ev.preventDefault();
    dispatch({ type: "label_cancelled" });
  });
  wireOptions();
}

function dispatchKey(key: string, ctrl: boolean): boolean {
  const before = state;
  dispatch({ type: "key", key, ctrl });
  return state !== before;
}

function wireOptions(): void {
  const showLabels = document.getElementById("opt-show-labels") as HTMLInputElement;
  const lineWidth = document.getElementById("opt-line-width") as HTMLInputElement;
  const fillOpacity = document.getElementById("opt-fill-opacity") as HTMLInputElement;
  showLabels.checked = state.options.showLabels;
  lineWidth.value = String(state.options.lineWidth);
  fillOpacity.value = String(state.options.fillOpacity);
  const update = () =>
    dispatch({
      type: "options_changed",
      options: {
        ...state.options,
        showLabels: showLabels.checked,
        lineWidth: Math.max(1, Number(lineWidth.value) || 1),
        fillOpacity: Math.min(1, Math.max(0, Number(fillOpacity.value) || 0)),
      },
    });
  showLabels.addEventListener("change", update);
  lineWidth.addEventListener("change", update);
  fillOpacity.addEventListener("change", update);
}

async function boot(): Promise<void> {
  const project = await api.getProject();
  taxonomy = await api.getTaxonomy();
  populateLabelPicker();
  populateHelp();
  wireEvents();
  dispatch({ type: "project_loaded", entryCount: project.entries.length, cursor: project.cursor });
  await runCommand({ kind: "load", index: project.cursor });
}

boot().catch((err) => {
  statusBar.textContent = `failed to reach the annotation service: ${err}`;
});
