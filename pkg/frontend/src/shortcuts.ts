// Keyboard binding registry: the single source for both dispatch and the
// help overlay. Never list a shortcut anywhere else by hand.

export type ShortcutAction =
  | "mode_select"
  | "mode_rect"
  | "mode_ellipse"
  | "mode_polygon"
  | "delete_selection"
  | "save"
  | "next_image"
  | "prev_image"
  | "zoom_in"
  | "zoom_out"
  | "reset_view"
  | "close_polygon"
  | "cancel"
  | "help";

export interface Binding {
  key: string; // KeyboardEvent.key
  ctrl?: boolean;
  action: ShortcutAction;
  description: string;
}

export const BINDINGS: readonly Binding[] = [
  { key: "s", action: "mode_select", description: "Selection mode" },
  { key: "r", action: "mode_rect", description: "Draw rectangles" },
  { key: "e", action: "mode_ellipse", description: "Draw ellipses" },
  { key: "p", action: "mode_polygon", description: "Draw polygons" },
  { key: "Delete", action: "delete_selection", description: "Delete the selected annotation" },
  { key: "s", ctrl: true, action: "save", description: "Save annotations" },
  { key: "n", action: "next_image", description: "Next image" },
  { key: "b", action: "prev_image", description: "Previous image" },
  { key: "+", action: "zoom_in", description: "Zoom in" },
  { key: "-", action: "zoom_out", description: "Zoom out" },
  { key: "0", action: "reset_view", description: "Reset zoom and pan" },
  { key: "Enter", action: "close_polygon", description: "Close the polygon being drawn" },
  { key: "Escape", action: "cancel", description: "Cancel drawing / close dialogs" },
  { key: "F1", action: "help", description: "Show this shortcut list" },
];

export function lookupBinding(key: string, ctrl: boolean): Binding | null {
  return (
    BINDINGS.find((b) => b.key === key && Boolean(b.ctrl) === ctrl) ?? null
  );
}

export interface HelpRow {
  keys: string;
  description: string;
}

/** Help rows generated from the registry, one per binding. */
export function shortcutHelp(): HelpRow[] {
  return BINDINGS.map((b) => ({
    keys: b.ctrl ? `Ctrl+${b.key.toUpperCase()}` : b.key,
    description: b.description,
  }));
}
