// Wire types mirroring the service JSON documents 1:1.

export interface Point {
  x: number;
  y: number;
}

export type ShapeJson =
  | { kind: "rect"; x: number; y: number; w: number; h: number }
  | { kind: "ellipse"; cx: number; cy: number; rx: number; ry: number }
  | { kind: "polygon"; points: [number, number][] };

export interface LabelJson {
  class: string;
  type: string;
  name: string;
}

export interface AnnotationJson {
  id: number;
  shape: ShapeJson;
  label: LabelJson;
}

export interface AnnotationDocument {
  imagePath: string;
  width: number;
  height: number;
  annotations: AnnotationJson[];
}

export interface ProjectEntryJson {
  imagePath: string;
  status: "pending" | "annotated";
}

export interface ProjectJson {
  labelsPath: string;
  cursor: number;
  entries: ProjectEntryJson[];
}

export interface TaxonomyJson {
  classes: { name: string; types: string[] }[];
}

export interface ViewTransform {
  zoom: number;
  panX: number;
  panY: number;
}

export interface RGB {
  r: number;
  g: number;
  b: number;
}

export interface DisplayOptions {
  outlineColor: RGB;
  selectedColor: RGB;
  lineWidth: number;
  fillOpacity: number;
  showLabels: boolean;
}

export type Mode = "select" | "draw_rect" | "draw_ellipse" | "draw_polygon";
