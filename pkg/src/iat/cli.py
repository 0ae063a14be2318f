"""Command-line entry point: create, validate and inspect projects, and run
the annotation service (project mode or single-image mode)."""

from __future__ import annotations

import argparse
import os
import sys
import time
from pathlib import Path

from . import project as project_mod
from .errors import IatError, ParseError
from .iatfile import parse_set
from .project import DEFAULT_EXTENSIONS, NoImagesError, Project, ProjectEntry
from .service import DEFAULT_PORT, ProjectService, ServiceConfig, start_service
from .taxonomy import parse_taxonomy

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2


def _default_port(explicit: int | None) -> int:
    if explicit is not None:
        return explicit
    env = os.environ.get("IAT_PORT")
    if env:
        try:
            return int(env)
        except ValueError:
            pass
    return DEFAULT_PORT


def cmd_new(args) -> int:
    root = Path(args.root)
    labels = Path(args.labels)
    if not root.is_dir():
        print(f"error: not a directory: {root}", file=sys.stderr)
        return EXIT_FAILURE
    try:
        taxonomy_text = labels.read_text(encoding="utf-8")
        parse_taxonomy(taxonomy_text)
    except OSError as exc:
        print(f"error: cannot read labels file: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    except ParseError as exc:
        print(f"error: {labels}: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    extensions = tuple(e.strip() for e in args.ext.split(",") if e.strip())
    try:
        labels_rel = os.path.relpath(labels, root)
        proj = project_mod.create_project(root, labels_rel, extensions)
    except NoImagesError:
        print("error: no images found", file=sys.stderr)
        return EXIT_FAILURE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    out = Path(args.out) if args.out else root / "project.iatproj"
    try:
        project_mod.save_project(proj, out)
    except OSError as exc:
        print(f"error: cannot write project file: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    print(f"created {out} with {len(proj.entries)} images")
    return EXIT_OK


def _detect_kind(path: Path, text: str) -> str:
    """Prefer the magic line over the extension (resilient to renames)."""
    first = text.split("\n", 1)[0].rstrip("\r")
    if first.startswith("IATPROJ\t"):
        return "project"
    if first.startswith("IAT\t"):
        return "annotations"
    if path.suffix == ".iatproj":
        return "project"
    if path.suffix == ".iat":
        return "annotations"
    return "labels"


def cmd_validate(args) -> int:
    path = Path(args.file)
    try:
        text = path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        print(f"error: cannot read {path}: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    kind = _detect_kind(path, text)
    try:
        if kind == "project":
            project_mod.parse_project(text, path.parent)
        elif kind == "annotations":
            parse_set(text)
        else:
            parse_taxonomy(text)
    except ParseError as exc:
        print(f"error: {path}: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    print("ok")
    return EXIT_OK


def cmd_stats(args) -> int:
    try:
        proj = project_mod.open_project(args.project)
        stats = project_mod.aggregate_stats(proj)
    except (OSError, ParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    for status, count in stats.status_counts:
        print(f"status\t{status}\t{count}")
    for (class_name, type_name), count in stats.label_counts:
        print(f"label\t{class_name}\t{type_name}\t{count}")
    return EXIT_OK


def _serve(state_factory, port: int, ui_dir: str | None) -> int:
    config = ServiceConfig(project_path="", port=port, static_dir=ui_dir)
    try:
        handle = start_service(config, state=state_factory())
    except (OSError, IatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    print(f"serving on {handle.url} (Ctrl+C to stop)")
    try:
        while True:
            time.sleep(0.5)
    except KeyboardInterrupt:
        handle.stop()
    return EXIT_OK


def cmd_serve(args) -> int:
    port = _default_port(args.port)
    project_path = Path(args.project)

    def factory() -> ProjectService:
        proj = project_mod.open_project(project_path)
        taxonomy = parse_taxonomy(proj.labels_file().read_text(encoding="utf-8"))
        return ProjectService(proj, taxonomy, project_path)

    return _serve(factory, port, args.ui)


def cmd_annotate(args) -> int:
    """Single-image mode: an ephemeral one-entry project, annotation file
    written beside the image as <image>.iat, no project file on disk."""
    port = _default_port(args.port)
    image = Path(args.image)
    labels = Path(args.labels)
    if not image.is_file():
        print(f"error: no such image: {image}", file=sys.stderr)
        return EXIT_FAILURE

    def factory() -> ProjectService:
        taxonomy = parse_taxonomy(labels.read_text(encoding="utf-8"))
        entry = ProjectEntry(image.name, "pending", image.name + ".iat")
        proj = Project(image.parent, str(labels), (entry,), 0)
        return ProjectService(proj, taxonomy, None)

    return _serve(factory, port, args.ui)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="iat", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_new = sub.add_parser("new", help="create a project from an image directory")
    p_new.add_argument("root")
    p_new.add_argument("--labels", required=True)
    p_new.add_argument("--ext", default=",".join(DEFAULT_EXTENSIONS))
    p_new.add_argument("--out")
    p_new.set_defaults(func=cmd_new)

    p_val = sub.add_parser("validate", help="parse an .iat/.iatproj/labels file")
    p_val.add_argument("file")
    p_val.set_defaults(func=cmd_validate)

    p_stats = sub.add_parser("stats", help="print project progress and label counts")
    p_stats.add_argument("project")
    p_stats.set_defaults(func=cmd_stats)

    p_serve = sub.add_parser("serve", help="serve a project to the browser UI")
    p_serve.add_argument("project")
    p_serve.add_argument("--port", type=int)
    p_serve.add_argument("--ui", help="directory of built browser UI files to serve")
    p_serve.set_defaults(func=cmd_serve)

    p_ann = sub.add_parser("annotate", help="annotate a single image")
    p_ann.add_argument("image")
    p_ann.add_argument("--labels", required=True)
    p_ann.add_argument("--port", type=int)
    p_ann.add_argument("--ui", help="directory of built browser UI files to serve")
    p_ann.set_defaults(func=cmd_annotate)

    return parser


def run(argv: list[str]) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    return args.func(args)


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
