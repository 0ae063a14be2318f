"""The `.iat` annotation file format: canonical serializer, parser, atomic IO.

Tab-separated records, LF endings, UTF-8 without BOM:

    IAT<TAB>1
    image<TAB><path><TAB><width><TAB><height>
    ann<TAB><id>
    shape<TAB>rect|ellipse|polygon<TAB><coords...>
    label<TAB><class><TAB><type><TAB><name>
    end
    ...

Numbers use the shortest decimal that round-trips, at most 6 fractional
digits, no exponent; integral values are written without a fractional part.
"""

from __future__ import annotations

import os
import re
import tempfile
from pathlib import Path

from . import geometry
from .annotations import Annotation, AnnotationSet
from .errors import InvalidShapeError, ParseError, SerializeError
from .geometry import Ellipse, Point, Polygon, Rectangle, Shape
from .taxonomy import Label

FORMAT_MAGIC = "IAT"
FORMAT_VERSION = "1"

_NUMBER_RE = re.compile(r"-?\d+(\.\d+)?$")


def format_number(value: float) -> str:
    """Shortest no-exponent decimal, <= 6 fractional digits."""
    if value == int(value) and abs(value) < 1e15:
        return str(int(value))
    for digits in range(1, 7):
        s = f"{value:.{digits}f}"
        if float(s) == value:
            return s
    return f"{value:.6f}"


def _parse_number(text: str, lineno: int) -> float:
    if not _NUMBER_RE.match(text):
        raise ParseError(lineno, f"bad number: {text!r}")
    return float(text)


def _check_field(value: str, what: str) -> str:
    if "\t" in value or "\n" in value or "\r" in value:
        raise SerializeError(f"{what} contains a tab or newline: {value!r}")
    return value


def _shape_line(shape: Shape) -> str:
    if isinstance(shape, Rectangle):
        coords = (shape.x, shape.y, shape.w, shape.h)
        return "\t".join(["shape", "rect", *map(format_number, coords)])
    if isinstance(shape, Ellipse):
        coords = (shape.cx, shape.cy, shape.rx, shape.ry)
        return "\t".join(["shape", "ellipse", *map(format_number, coords)])
    flat = [c for v in shape.vertices for c in (v.x, v.y)]
    return "\t".join(["shape", "polygon", *map(format_number, flat)])


def serialize_set(aset: AnnotationSet) -> str:
    """Canonical text for an annotation set; deterministic byte output."""
    lines = [
        f"{FORMAT_MAGIC}\t{FORMAT_VERSION}",
        "\t".join(
            [
                "image",
                _check_field(aset.image_path, "image path"),
                str(aset.image_width),
                str(aset.image_height),
            ]
        ),
    ]
    for ann in sorted(aset.annotations, key=lambda a: a.id):
        lines.append(f"ann\t{ann.id}")
        lines.append(_shape_line(ann.shape))
        label = ann.label
        fields = [
            _check_field(label.class_name, "label class"),
            _check_field(label.type_name, "label type"),
            _check_field(label.name, "label name"),
        ]
        lines.append("\t".join(["label", *fields]))
        lines.append("end")
    return "\n".join(lines) + "\n"


def _parse_shape_fields(fields: list[str], lineno: int) -> Shape:
    kind = fields[0] if fields else ""
    nums = [_parse_number(f, lineno) for f in fields[1:]]
    if kind == "rect":
        if len(nums) != 4:
            raise ParseError(lineno, f"rect needs 4 coordinates, got {len(nums)}")
        shape: Shape = Rectangle(*nums)
    elif kind == "ellipse":
        if len(nums) != 4:
            raise ParseError(lineno, f"ellipse needs 4 coordinates, got {len(nums)}")
        shape = Ellipse(*nums)
    elif kind == "polygon":
        if len(nums) < 6 or len(nums) % 2 != 0:
            raise ParseError(lineno, f"polygon needs an even count of >= 6 coordinates, got {len(nums)}")
        shape = Polygon(Point(nums[i], nums[i + 1]) for i in range(0, len(nums), 2))
    else:
        raise ParseError(lineno, f"unknown shape kind: {kind!r}")
    try:
        geometry.validate(shape)
    except InvalidShapeError as exc:
        raise ParseError(lineno, f"invalid shape: {exc.reason}") from exc
    return shape


def parse_set(source: str) -> AnnotationSet:
    """Inverse of serialize_set; tolerates CRLF and trailing blank lines."""
    lines = source.split("\n")
    lines = [line.rstrip("\r") for line in lines]
    while lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise ParseError(1, "empty file")

    head = lines[0].split("\t")
    if len(head) != 2 or head[0] != FORMAT_MAGIC:
        raise ParseError(1, "bad magic")
    if head[1] != FORMAT_VERSION:
        raise ParseError(1, f"unsupported version: {head[1]!r}")
    if len(lines) < 2:
        raise ParseError(2, "missing image line")
    img = lines[1].split("\t")
    if len(img) != 4 or img[0] != "image":
        raise ParseError(2, "bad image line")
    if not re.fullmatch(r"\d+", img[2]) or not re.fullmatch(r"\d+", img[3]):
        raise ParseError(2, "bad image dimensions")
    width, height = int(img[2]), int(img[3])
    if width <= 0 or height <= 0:
        raise ParseError(2, "non-positive image dimensions")

    annotations: list[Annotation] = []
    seen_ids: set[int] = set()
    seen_names: set[str] = set()
    i = 2
    while i < len(lines):
        lineno = i + 1
        fields = lines[i].split("\t")
        if fields[0] != "ann" or len(fields) != 2:
            raise ParseError(lineno, f"expected 'ann' record, got {lines[i]!r}")
        if not re.fullmatch(r"\d+", fields[1]):
            raise ParseError(lineno, f"bad annotation id: {fields[1]!r}")
        ann_id = int(fields[1])
        if ann_id in seen_ids:
            raise ParseError(lineno, f"duplicate id {ann_id}")
        if annotations and ann_id < annotations[-1].id:
            raise ParseError(lineno, f"id {ann_id} out of order")
        seen_ids.add(ann_id)

        if i + 1 >= len(lines):
            raise ParseError(lineno + 1, "missing shape line")
        sfields = lines[i + 1].split("\t")
        if sfields[0] != "shape":
            raise ParseError(lineno + 1, f"expected 'shape' record, got {lines[i + 1]!r}")
        shape = _parse_shape_fields(sfields[1:], lineno + 1)

        if i + 2 >= len(lines):
            raise ParseError(lineno + 2, "missing label line")
        lfields = lines[i + 2].split("\t")
        if lfields[0] != "label" or len(lfields) != 4:
            raise ParseError(lineno + 2, f"expected 'label' record, got {lines[i + 2]!r}")
        label = Label(lfields[1], lfields[2], lfields[3])
        complaint = label.structural_error()
        if complaint:
            raise ParseError(lineno + 2, complaint)
        if label.name in seen_names:
            raise ParseError(lineno + 2, f"duplicate name {label.name!r}")
        seen_names.add(label.name)

        if i + 3 >= len(lines) or lines[i + 3] != "end":
            raise ParseError(lineno + 3, "missing 'end' record")
        annotations.append(Annotation(ann_id, shape, label))
        i += 4

    next_id = annotations[-1].id + 1 if annotations else 0
    return AnnotationSet(img[1], width, height, tuple(annotations), next_id)


def atomic_write(path: str | Path, content: str) -> None:
    """Write-temp-then-rename so a crash never leaves a partial file.

    The parent directory must already exist; errors surface as OSError.
    """
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name + ".", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as f:
            f.write(content)
            f.flush()
            os.fsync(f.fileno())
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise
