"""Multi-image annotation project: ordered entries, statuses, resume cursor.

Project file (`.iatproj`, tab-separated, LF, UTF-8):

    IATPROJ<TAB>1
    labels<TAB><labels_path>
    cursor<TAB><index>
    entry<TAB><image_path><TAB>pending|annotated<TAB><annotation_path>
    ...
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Literal

from .annotations import AnnotationSet
from .errors import IatError, ParseError
from .iatfile import atomic_write, parse_set

PROJECT_MAGIC = "IATPROJ"
PROJECT_VERSION = "1"

DEFAULT_EXTENSIONS = ("png", "jpg", "jpeg", "bmp")

Status = Literal["pending", "annotated"]


class NoImagesError(IatError):
    """A project root holds no image files with the requested extensions."""


@dataclass(frozen=True)
class ProjectEntry:
    image_path: str
    status: Status
    annotation_path: str


@dataclass(frozen=True)
class Project:
    root: Path
    labels_path: str
    entries: tuple[ProjectEntry, ...]
    cursor: int = 0

    def image_file(self, index: int) -> Path:
        return self.root / self.entries[index].image_path

    def annotation_file(self, index: int) -> Path:
        return self.root / self.entries[index].annotation_path

    def labels_file(self) -> Path:
        return self.root / self.labels_path


def create_project(
    root: str | Path,
    labels_path: str,
    extensions: tuple[str, ...] = DEFAULT_EXTENSIONS,
) -> Project:
    """Scan ``root`` (non-recursive) for images, lexicographic filename order."""
    root = Path(root)
    wanted = {e.lower().lstrip(".") for e in extensions}
    names = sorted(
        p.name
        for p in root.iterdir()
        if p.is_file() and p.suffix.lower().lstrip(".") in wanted
    )
    if not names:
        raise NoImagesError(f"no images found under {root}")
    entries = tuple(
        ProjectEntry(name, "pending", f"annotations/{name}.iat") for name in names
    )
    return Project(root, labels_path, entries, 0)


def serialize_project(project: Project) -> str:
    lines = [
        f"{PROJECT_MAGIC}\t{PROJECT_VERSION}",
        f"labels\t{project.labels_path}",
        f"cursor\t{project.cursor}",
    ]
    for e in project.entries:
        lines.append(f"entry\t{e.image_path}\t{e.status}\t{e.annotation_path}")
    return "\n".join(lines) + "\n"


def parse_project(source: str, root: Path) -> Project:
    lines = [line.rstrip("\r") for line in source.split("\n")]
    while lines and lines[-1] == "":
        lines.pop()
    if len(lines) < 3:
        raise ParseError(1, "bad header")
    head = lines[0].split("\t")
    if len(head) != 2 or head[0] != PROJECT_MAGIC:
        raise ParseError(1, "bad header")
    if head[1] != PROJECT_VERSION:
        raise ParseError(1, f"unsupported version: {head[1]!r}")
    labels = lines[1].split("\t")
    if len(labels) != 2 or labels[0] != "labels" or not labels[1]:
        raise ParseError(2, "bad labels line")
    cur = lines[2].split("\t")
    if len(cur) != 2 or cur[0] != "cursor" or not re.fullmatch(r"\d+", cur[1]):
        raise ParseError(3, "bad cursor line")
    cursor = int(cur[1])

    entries: list[ProjectEntry] = []
    seen_paths: set[str] = set()
    for i, line in enumerate(lines[3:], start=4):
        fields = line.split("\t")
        if len(fields) != 4 or fields[0] != "entry":
            raise ParseError(i, f"bad entry line: {line!r}")
        _, image_path, status, annotation_path = fields
        if not image_path:
            raise ParseError(i, "empty image path")
        if status not in ("pending", "annotated"):
            raise ParseError(i, f"bad status: {status!r}")
        if not annotation_path:
            raise ParseError(i, "empty annotation path")
        if image_path in seen_paths:
            raise ParseError(i, f"duplicate image path: {image_path!r}")
        seen_paths.add(image_path)
        entries.append(ProjectEntry(image_path, status, annotation_path))
    if not entries:
        raise ParseError(len(lines), "project has no entries")
    if not 0 <= cursor < len(entries):
        raise ParseError(3, f"cursor {cursor} out of range for {len(entries)} entries")
    return Project(root, labels[1], tuple(entries), cursor)


def open_project(path: str | Path) -> Project:
    path = Path(path)
    source = path.read_text(encoding="utf-8")
    return parse_project(source, path.parent)


def save_project(project: Project, path: str | Path) -> None:
    atomic_write(path, serialize_project(project))


def move_cursor(project: Project, delta: int) -> Project:
    cursor = min(len(project.entries) - 1, max(0, project.cursor + delta))
    return replace(project, cursor=cursor)


def set_cursor(project: Project, index: int) -> Project:
    if not 0 <= index < len(project.entries):
        raise IndexError(f"cursor {index} out of range")
    return replace(project, cursor=index)


def record_save(project: Project, index: int) -> Project:
    """Mark an entry annotated (meaning: saved at least once); idempotent."""
    if not 0 <= index < len(project.entries):
        raise IndexError(f"entry index {index} out of range")
    entries = tuple(
        replace(e, status="annotated") if i == index else e
        for i, e in enumerate(project.entries)
    )
    return replace(project, entries=entries)


@dataclass(frozen=True)
class ProjectStats:
    status_counts: tuple[tuple[str, int], ...]
    label_counts: tuple[tuple[tuple[str, str], int], ...]


def aggregate_stats(project: Project) -> ProjectStats:
    """Label counts across all existing annotation files plus entry statuses.

    A corrupt annotation file raises ParseError naming the file.
    """
    status = Counter(e.status for e in project.entries)
    labels: Counter[tuple[str, str]] = Counter()
    for i, entry in enumerate(project.entries):
        ann_file = project.annotation_file(i)
        if not ann_file.exists():
            continue
        try:
            aset = parse_set(ann_file.read_text(encoding="utf-8"))
        except ParseError as exc:
            raise ParseError(exc.line, f"{ann_file}: {exc.message}") from exc
        labels.update(dict(aset.count_by_label()))
    status_counts = tuple((s, status.get(s, 0)) for s in ("pending", "annotated"))
    return ProjectStats(status_counts, tuple(sorted(labels.items())))


def load_annotation_set(project: Project, index: int) -> AnnotationSet | None:
    """Parsed annotation set for one entry, or None if not yet saved."""
    ann_file = project.annotation_file(index)
    if not ann_file.exists():
        return None
    return parse_set(ann_file.read_text(encoding="utf-8"))
