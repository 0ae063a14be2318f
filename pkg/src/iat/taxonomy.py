"""Two-level Class -> Type label hierarchy, loaded from a tab-indented file.

Label file grammar: UTF-8 lines, LF or CRLF; "#" comment lines and blank
lines are ignored; a line with no leading tab opens a class; a line with
exactly one leading tab adds a type to the current class.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ParseError, UnknownClassError, UnknownTypeError

FORBIDDEN_CHARS = ("\t", "\n", "|")


def _check_name(text: str) -> str | None:
    """Return a complaint for an unusable name, or None."""
    if not text:
        return "empty name"
    for ch in FORBIDDEN_CHARS:
        if ch in text:
            return f"forbidden character {ch!r}"
    return None


@dataclass(frozen=True)
class TaxonomyClass:
    name: str
    types: tuple[str, ...]


@dataclass(frozen=True)
class Taxonomy:
    classes: tuple[TaxonomyClass, ...]

    def class_names(self) -> list[str]:
        return [c.name for c in self.classes]

    def types_of(self, class_name: str) -> tuple[str, ...] | None:
        for c in self.classes:
            if c.name == class_name:
                return c.types
        return None


@dataclass(frozen=True)
class Label:
    """(Class, Type, Name) triple; Name identifies one entity per image."""

    class_name: str
    type_name: str
    name: str

    def structural_error(self) -> str | None:
        for field_name, value in (
            ("class", self.class_name),
            ("type", self.type_name),
            ("name", self.name),
        ):
            complaint = _check_name(value)
            if complaint:
                return f"{complaint} in label {field_name}"
        return None


def parse_taxonomy(source: str) -> Taxonomy:
    """Parse label-file text; raises ParseError with a 1-based line number."""
    classes: list[tuple[str, list[str]]] = []
    seen_classes: set[str] = set()
    open_class_line = 0

    def close_current() -> None:
        if classes and not classes[-1][1]:
            raise ParseError(open_class_line, f"class {classes[-1][0]!r} has no types")

    for lineno, raw in enumerate(source.split("\n"), start=1):
        line = raw.rstrip("\r").rstrip(" \t")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        if line.startswith("\t"):
            name = line[1:]
            if name.startswith("\t"):
                raise ParseError(lineno, "more than one level of indentation")
            if not classes:
                raise ParseError(lineno, "type before class")
            complaint = _check_name(name)
            if complaint:
                raise ParseError(lineno, complaint)
            if name in classes[-1][1]:
                raise ParseError(lineno, f"duplicate type {name!r} in class {classes[-1][0]!r}")
            classes[-1][1].append(name)
        else:
            complaint = _check_name(line)
            if complaint:
                raise ParseError(lineno, complaint)
            if line in seen_classes:
                raise ParseError(lineno, f"duplicate class {line!r}")
            close_current()
            seen_classes.add(line)
            classes.append((line, []))
            open_class_line = lineno
    if not classes:
        raise ParseError(max(1, source.count("\n") + 1), "no classes defined")
    close_current()
    return Taxonomy(tuple(TaxonomyClass(n, tuple(ts)) for n, ts in classes))


def serialize_taxonomy(t: Taxonomy) -> str:
    """Canonical form: class line, tab-indented types, LF endings."""
    out: list[str] = []
    for c in t.classes:
        out.append(c.name)
        out.extend("\t" + ty for ty in c.types)
    return "\n".join(out) + "\n"


def validate_label(t: Taxonomy, label: Label) -> None:
    """Check Class/Type membership; Name uniqueness is per-image and checked
    by the annotation set, not here."""
    types = t.types_of(label.class_name)
    if types is None:
        raise UnknownClassError(label.class_name)
    if label.type_name not in types:
        raise UnknownTypeError(label.class_name, label.type_name)
