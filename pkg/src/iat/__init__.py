"""iat: image region annotation engine, file formats, CLI and local service."""

from .annotations import Annotation, AnnotationSet
from .geometry import Ellipse, Point, Polygon, Rectangle, Shape, ViewTransform
from .taxonomy import Label, Taxonomy

__all__ = [
    "Annotation",
    "AnnotationSet",
    "Ellipse",
    "Label",
    "Point",
    "Polygon",
    "Rectangle",
    "Shape",
    "Taxonomy",
    "ViewTransform",
]

__version__ = "0.1.0"
