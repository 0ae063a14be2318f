// Display options with browser persistence under "iat.options".

import type { DisplayOptions } from "./types";

export const OPTIONS_STORAGE_KEY = "iat.options";

export const defaultOptions: DisplayOptions = {
  outlineColor: { r: 255, g: 200, b: 0 },
  selectedColor: { r: 0, g: 200, b: 0 },
  lineWidth: 2,
  fillOpacity: 0.15,
  showLabels: true,
};

export function loadOptions(storage: Pick<Storage, "getItem"> | null): DisplayOptions {
  if (!storage) return defaultOptions;
  const raw = storage.getItem(OPTIONS_STORAGE_KEY);
  if (!raw) return defaultOptions;
  try {
    const parsed = JSON.parse(raw);
    return normalizeOptions(parsed);
  } catch {
    return defaultOptions;
  }
}

export function saveOptions(storage: Pick<Storage, "setItem">, options: DisplayOptions): void {
  storage.setItem(OPTIONS_STORAGE_KEY, JSON.stringify(options));
}

export function normalizeOptions(raw: unknown): DisplayOptions {
  const o = (raw ?? {}) as Partial<DisplayOptions>;
  return {
    outlineColor: o.outlineColor ?? defaultOptions.outlineColor,
    selectedColor: o.selectedColor ?? defaultOptions.selectedColor,
    lineWidth: Math.max(1, o.lineWidth ?? defaultOptions.lineWidth),
    fillOpacity: Math.min(1, Math.max(0, o.fillOpacity ?? defaultOptions.fillOpacity)),
    showLabels: o.showLabels ?? defaultOptions.showLabels,
  };
}

export function rgbCss({ r, g, b }: { r: number; g: number; b: number }): string {
  return `rgb(${r}, ${g}, ${b})`;
}
