"""Per-image annotation set: labeled shapes with unique ids and names.

Sets are immutable values; every mutating operation returns a new set and
leaves the original untouched. Insertion order is z-order (last = topmost);
ids grow monotonically and are never reused.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, replace
from typing import Optional

from . import geometry
from .errors import DuplicateNameError, UnknownIdError
from .geometry import Point, Shape
from .taxonomy import Label, Taxonomy, validate_label


@dataclass(frozen=True)
class Annotation:
    id: int
    shape: Shape
    label: Label


@dataclass(frozen=True)
class AnnotationSet:
    image_path: str
    image_width: int
    image_height: int
    annotations: tuple[Annotation, ...] = ()
    next_id: int = 0

    def get(self, annotation_id: int) -> Annotation:
        for ann in self.annotations:
            if ann.id == annotation_id:
                return ann
        raise UnknownIdError(annotation_id)

    def add(self, shape: Shape, label: Label, taxonomy: Taxonomy) -> tuple["AnnotationSet", int]:
        """Append a validated annotation; returns (new set, assigned id)."""
        geometry.validate(shape)
        validate_label(taxonomy, label)
        if any(a.label.name == label.name for a in self.annotations):
            raise DuplicateNameError(label.name)
        new_id = self.next_id
        annotations = self.annotations + (Annotation(new_id, shape, label),)
        return replace(self, annotations=annotations, next_id=new_id + 1), new_id

    def update_shape(self, annotation_id: int, shape: Shape) -> "AnnotationSet":
        target = self.get(annotation_id)
        geometry.validate(shape)
        annotations = tuple(
            replace(a, shape=shape) if a.id == target.id else a for a in self.annotations
        )
        return replace(self, annotations=annotations)

    def update_label(self, annotation_id: int, label: Label, taxonomy: Taxonomy) -> "AnnotationSet":
        target = self.get(annotation_id)
        validate_label(taxonomy, label)
        if any(a.label.name == label.name and a.id != target.id for a in self.annotations):
            raise DuplicateNameError(label.name)
        annotations = tuple(
            replace(a, label=label) if a.id == target.id else a for a in self.annotations
        )
        return replace(self, annotations=annotations)

    def remove(self, annotation_id: int) -> "AnnotationSet":
        """Remove one annotation; next_id is never decremented."""
        self.get(annotation_id)
        annotations = tuple(a for a in self.annotations if a.id != annotation_id)
        return replace(self, annotations=annotations)

    def find_at(self, p: Point) -> Optional[int]:
        """Topmost (latest-inserted) annotation containing p, or None."""
        for ann in reversed(self.annotations):
            if geometry.contains(ann.shape, p):
                return ann.id
        return None

    def count_by_label(self) -> list[tuple[tuple[str, str], int]]:
        """Counts grouped by (class, type), sorted by class then type."""
        counts = Counter((a.label.class_name, a.label.type_name) for a in self.annotations)
        return sorted(counts.items())
