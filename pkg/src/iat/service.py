"""Local HTTP bridge between the annotation engine and the browser UI.

Serves the project, taxonomy, images and per-image annotation documents as
JSON; accepts annotation updates and cursor moves and persists them through
the textual file formats. Binds localhost only.
"""

from __future__ import annotations

import mimetypes
import socket
import threading
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Optional

import uvicorn
from fastapi import FastAPI, Request
from fastapi.responses import FileResponse, JSONResponse, Response
from fastapi.staticfiles import StaticFiles
from PIL import Image

from . import project as project_mod
from .annotations import Annotation, AnnotationSet
from .errors import (
    DuplicateNameError,
    IatError,
    InvalidShapeError,
    ParseError,
    UnknownClassError,
    UnknownTypeError,
)
from .geometry import Ellipse, Point, Polygon, Rectangle, Shape, validate as validate_shape
from .iatfile import atomic_write, serialize_set
from .project import Project
from .taxonomy import Label, Taxonomy, parse_taxonomy, validate_label

DEFAULT_PORT = 8765


@dataclass(frozen=True)
class ServiceConfig:
    project_path: str
    port: int = DEFAULT_PORT
    static_dir: Optional[str] = None

    def __post_init__(self):
        if not 1024 <= self.port <= 65535:
            raise ValueError(f"port {self.port} outside [1024, 65535]")


class PayloadError(IatError):
    """A request body does not match the wire schema."""

    def __init__(self, message: str, annotation_index: Optional[int] = None):
        super().__init__(message)
        self.annotation_index = annotation_index


def shape_to_json(shape: Shape) -> dict[str, Any]:
    if isinstance(shape, Rectangle):
        return {"kind": "rect", "x": shape.x, "y": shape.y, "w": shape.w, "h": shape.h}
    if isinstance(shape, Ellipse):
        return {"kind": "ellipse", "cx": shape.cx, "cy": shape.cy, "rx": shape.rx, "ry": shape.ry}
    return {"kind": "polygon", "points": [[v.x, v.y] for v in shape.vertices]}


def shape_from_json(obj: Any) -> Shape:
    if not isinstance(obj, dict):
        raise PayloadError("shape must be an object")
    kind = obj.get("kind")

    def num(key: str) -> float:
        v = obj.get(key)
        if not isinstance(v, (int, float)) or isinstance(v, bool):
            raise PayloadError(f"shape field {key!r} must be a number")
        return float(v)

    if kind == "rect":
        return Rectangle(num("x"), num("y"), num("w"), num("h"))
    if kind == "ellipse":
        return Ellipse(num("cx"), num("cy"), num("rx"), num("ry"))
    if kind == "polygon":
        pts = obj.get("points")
        if not isinstance(pts, list):
            raise PayloadError("polygon points must be a list")
        vertices = []
        for p in pts:
            if (
                not isinstance(p, list)
                or len(p) != 2
                or any(not isinstance(c, (int, float)) or isinstance(c, bool) for c in p)
            ):
                raise PayloadError("polygon point must be [x, y]")
            vertices.append(Point(float(p[0]), float(p[1])))
        return Polygon(vertices)
    raise PayloadError(f"unknown shape kind: {kind!r}")


def annotation_set_to_json(aset: AnnotationSet) -> dict[str, Any]:
    return {
        "imagePath": aset.image_path,
        "width": aset.image_width,
        "height": aset.image_height,
        "annotations": [
            {
                "id": a.id,
                "shape": shape_to_json(a.shape),
                "label": {
                    "class": a.label.class_name,
                    "type": a.label.type_name,
                    "name": a.label.name,
                },
            }
            for a in aset.annotations
        ],
    }


def _label_from_json(obj: Any) -> Label:
    if not isinstance(obj, dict):
        raise PayloadError("label must be an object")
    fields = {}
    for key in ("class", "type", "name"):
        v = obj.get(key)
        if not isinstance(v, str):
            raise PayloadError(f"label field {key!r} must be a string")
        fields[key] = v
    label = Label(fields["class"], fields["type"], fields["name"])
    complaint = label.structural_error()
    if complaint:
        raise PayloadError(complaint)
    return label


def annotation_set_from_json(
    payload: Any, image_path: str, fallback_size: tuple[int, int], taxonomy: Taxonomy
) -> AnnotationSet:
    """Build a validated AnnotationSet from a PUT document.

    Entries carrying an "id" keep it; the rest get fresh ids. Validation
    errors carry the index of the offending annotation within the payload.
    """
    if not isinstance(payload, dict):
        raise PayloadError("body must be an object")
    width = payload.get("width", fallback_size[0])
    height = payload.get("height", fallback_size[1])
    if not isinstance(width, int) or not isinstance(height, int) or width <= 0 or height <= 0:
        raise PayloadError("width and height must be positive integers")
    items = payload.get("annotations")
    if not isinstance(items, list):
        raise PayloadError("annotations must be a list")

    given_ids = set()
    for idx, item in enumerate(items):
        if not isinstance(item, dict):
            raise PayloadError("annotation must be an object", idx)
        if "id" in item:
            if not isinstance(item["id"], int) or isinstance(item["id"], bool) or item["id"] < 0:
                raise PayloadError("id must be a non-negative integer", idx)
            if item["id"] in given_ids:
                raise PayloadError(f"repeated id {item['id']}", idx)
            given_ids.add(item["id"])

    next_fresh = max(given_ids, default=-1) + 1
    annotations: list[Annotation] = []
    seen_names: set[str] = set()
    for idx, item in enumerate(items):
        try:
            shape = shape_from_json(item.get("shape"))
            validate_shape(shape)
            label = _label_from_json(item.get("label"))
            validate_label(taxonomy, label)
        except PayloadError as exc:
            raise PayloadError(str(exc), idx) from exc
        except (InvalidShapeError, UnknownClassError, UnknownTypeError) as exc:
            exc.annotation_index = idx  # type: ignore[attr-defined]
            raise
        if label.name in seen_names:
            err = DuplicateNameError(label.name)
            err.annotation_index = idx  # type: ignore[attr-defined]
            raise err
        seen_names.add(label.name)
        if "id" in item:
            ann_id = item["id"]
        else:
            ann_id = next_fresh
            next_fresh += 1
        annotations.append(Annotation(ann_id, shape, label))

    annotations.sort(key=lambda a: a.id)
    next_id = annotations[-1].id + 1 if annotations else 0
    return AnnotationSet(image_path, width, height, tuple(annotations), next_id)


class ProjectService:
    """Mutable service state; all writes funnel through one lock."""

    def __init__(
        self,
        project: Project,
        taxonomy: Taxonomy,
        project_path: Optional[Path],
    ):
        self.project = project
        self.taxonomy = taxonomy
        self.project_path = project_path  # None => ephemeral single-image mode
        self.lock = threading.Lock()

    def image_size(self, index: int) -> tuple[int, int]:
        with Image.open(self.project.image_file(index)) as img:
            return img.size

    def annotation_document(self, index: int) -> AnnotationSet:
        aset = project_mod.load_annotation_set(self.project, index)
        if aset is None:
            width, height = self.image_size(index)
            aset = AnnotationSet(self.project.entries[index].image_path, width, height)
        return aset

    def put_annotations(self, index: int, payload: Any) -> None:
        with self.lock:
            entry = self.project.entries[index]
            fallback = self.image_size(index)
            aset = annotation_set_from_json(payload, entry.image_path, fallback, self.taxonomy)
            ann_file = self.project.annotation_file(index)
            ann_file.parent.mkdir(parents=True, exist_ok=True)
            atomic_write(ann_file, serialize_set(aset))
            self.project = project_mod.record_save(self.project, index)
            self._save_project()

    def set_cursor(self, index: int) -> None:
        with self.lock:
            self.project = project_mod.set_cursor(self.project, index)
            self._save_project()

    def _save_project(self) -> None:
        if self.project_path is not None:
            project_mod.save_project(self.project, self.project_path)


def _error_response(status: int, code: str, message: str, annotation_index=None) -> JSONResponse:
    return JSONResponse(
        {"code": code, "message": message, "annotationIndex": annotation_index},
        status_code=status,
    )


def create_app(state: ProjectService, static_dir: Optional[str] = None) -> FastAPI:
    app = FastAPI(title="iat", docs_url=None, redoc_url=None)
    app.state.service = state

    def entry_or_none(index: int):
        if 0 <= index < len(state.project.entries):
            return state.project.entries[index]
        return None

    @app.get("/api/project")
    def get_project():
        p = state.project
        return {
            "labelsPath": p.labels_path,
            "cursor": p.cursor,
            "entries": [
                {"imagePath": e.image_path, "status": e.status} for e in p.entries
            ],
        }

    @app.post("/api/project/cursor")
    async def post_cursor(request: Request):
        try:
            body = await request.json()
        except Exception:
            return _error_response(422, "bad_payload", "body is not valid JSON")
        index = body.get("index") if isinstance(body, dict) else None
        if not isinstance(index, int) or isinstance(index, bool):
            return _error_response(422, "bad_payload", "index must be an integer")
        try:
            state.set_cursor(index)
        except IndexError:
            return _error_response(422, "bad_payload", f"index {index} out of range")
        return Response(status_code=204)

    @app.get("/api/taxonomy")
    def get_taxonomy():
        return {
            "classes": [
                {"name": c.name, "types": list(c.types)} for c in state.taxonomy.classes
            ]
        }

    @app.get("/api/images/{index}")
    def get_image(index: int):
        if entry_or_none(index) is None:
            return _error_response(404, "not_found", f"no image at index {index}")
        path = state.project.image_file(index)
        if not path.exists():
            return _error_response(404, "not_found", f"image file missing: {path.name}")
        media_type = mimetypes.guess_type(path.name)[0] or "application/octet-stream"
        return FileResponse(path, media_type=media_type)

    @app.get("/api/images/{index}/annotations")
    def get_annotations(index: int):
        if entry_or_none(index) is None:
            return _error_response(404, "not_found", f"no image at index {index}")
        try:
            return annotation_set_to_json(state.annotation_document(index))
        except ParseError as exc:
            return _error_response(422, "bad_payload", f"stored annotations unreadable: {exc}")

    @app.put("/api/images/{index}/annotations")
    async def put_annotations(index: int, request: Request):
        if entry_or_none(index) is None:
            return _error_response(404, "not_found", f"no image at index {index}")
        try:
            payload = await request.json()
        except Exception:
            return _error_response(422, "bad_payload", "body is not valid JSON")
        try:
            state.put_annotations(index, payload)
        except PayloadError as exc:
            return _error_response(422, "bad_payload", str(exc), exc.annotation_index)
        except InvalidShapeError as exc:
            return _error_response(
                422, "invalid_shape", exc.reason, getattr(exc, "annotation_index", None)
            )
        except UnknownClassError as exc:
            return _error_response(
                422, "unknown_class", str(exc), getattr(exc, "annotation_index", None)
            )
        except UnknownTypeError as exc:
            return _error_response(
                422, "unknown_type", str(exc), getattr(exc, "annotation_index", None)
            )
        except DuplicateNameError as exc:
            return _error_response(
                422, "duplicate_name", str(exc), getattr(exc, "annotation_index", None)
            )
        return Response(status_code=204)

    if static_dir:
        app.mount("/", StaticFiles(directory=static_dir, html=True), name="ui")
    return app


class ServiceHandle:
    """A running service; stop() shuts it down and joins the thread."""

    def __init__(self, server: uvicorn.Server, thread: threading.Thread, port: int):
        self._server = server
        self._thread = thread
        self.port = port
        self.url = f"http://127.0.0.1:{port}"

    def stop(self) -> None:
        self._server.should_exit = True
        self._thread.join(timeout=10)


def build_service(config: ServiceConfig) -> ProjectService:
    """Load project and taxonomy from disk for a service config."""
    proj = project_mod.open_project(config.project_path)
    taxonomy = parse_taxonomy(proj.labels_file().read_text(encoding="utf-8"))
    return ProjectService(proj, taxonomy, Path(config.project_path))


def start_service(config: ServiceConfig, state: Optional[ProjectService] = None) -> ServiceHandle:
    """Start the HTTP service on localhost; raises OSError if the port is busy
    and ParseError/OSError if the project or label file is unusable."""
    if state is None:
        state = build_service(config)
    # Probe the port up front for a clean failure instead of a dead thread.
    probe = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    try:
        probe.bind(("127.0.0.1", config.port))
    finally:
        probe.close()

    app = create_app(state, static_dir=config.static_dir)
    uv_config = uvicorn.Config(
        app, host="127.0.0.1", port=config.port, log_level="warning"
    )
    server = uvicorn.Server(uv_config)
    thread = threading.Thread(target=server.run, daemon=True)
    thread.start()
    deadline = time.monotonic() + 10
    while not server.started:
        if not thread.is_alive():
            raise OSError(f"service failed to start on port {config.port}")
        if time.monotonic() > deadline:
            server.should_exit = True
            raise OSError("service start timed out")
        time.sleep(0.01)
    return ServiceHandle(server, thread, config.port)
