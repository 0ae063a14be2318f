import random

import pytest
from PIL import Image

from iat.annotations import AnnotationSet
from iat.geometry import Ellipse, Point, Polygon, Rectangle, is_valid
from iat.taxonomy import Label, Taxonomy, TaxonomyClass

# Coordinates are drawn from a 1/8 px grid so that decimal serialization
# (<= 6 fractional digits) round-trips exactly.
GRID = 8


def grid_coord(rng: random.Random, lo: float = 0.0, hi: float = 64.0) -> float:
    return rng.randint(int(lo * GRID), int(hi * GRID)) / GRID


def random_rectangle(rng: random.Random) -> Rectangle:
    x = grid_coord(rng, 0, 48)
    y = grid_coord(rng, 0, 48)
    w = grid_coord(rng, 0.5, 16)
    h = grid_coord(rng, 0.5, 16)
    return Rectangle(x, y, w, h)


def random_ellipse(rng: random.Random) -> Ellipse:
    cx = grid_coord(rng, 8, 56)
    cy = grid_coord(rng, 8, 56)
    rx = grid_coord(rng, 0.5, 8)
    ry = grid_coord(rng, 0.5, 8)
    return Ellipse(cx, cy, rx, ry)


def random_polygon(rng: random.Random, max_vertices: int = 10) -> Polygon:
    """Random simple polygon: star-shaped construction around a center."""
    import math

    while True:
        n = rng.randint(3, max_vertices)
        cx = grid_coord(rng, 16, 48)
        cy = grid_coord(rng, 16, 48)
        angles = sorted(rng.uniform(0, 2 * math.pi) for _ in range(n))
        pts = []
        for a in angles:
            r = rng.uniform(2, 14)
            pts.append(
                Point(
                    round((cx + r * math.cos(a)) * GRID) / GRID,
                    round((cy + r * math.sin(a)) * GRID) / GRID,
                )
            )
        poly = Polygon(pts)
        if is_valid(poly):
            return poly


def random_shape(rng: random.Random):
    kind = rng.randrange(3)
    if kind == 0:
        return random_rectangle(rng)
    if kind == 1:
        return random_ellipse(rng)
    return random_polygon(rng)


def random_annotation_set(rng: random.Random, taxonomy: Taxonomy, max_annotations: int = 50) -> AnnotationSet:
    aset = AnnotationSet("images/sample.png", 640, 480)
    for i in range(rng.randint(0, max_annotations)):
        cls = rng.choice(taxonomy.classes)
        typ = rng.choice(cls.types)
        label = Label(cls.name, typ, f"{typ}_{i}")
        aset, _ = aset.add(random_shape(rng), label, taxonomy)
    return aset


@pytest.fixture
def taxonomy() -> Taxonomy:
    return Taxonomy(
        (
            TaxonomyClass("vehicles", ("car", "bicycle")),
            TaxonomyClass("people", ("male", "female")),
            TaxonomyClass("foods", ("fruit", "vegetable")),
        )
    )


LABELS_TEXT = (
    "vehicles\n\tcar\n\tbicycle\n"
    "people\n\tmale\n\tfemale\n"
    "foods\n\tfruit\n\tvegetable\n"
)


def write_image(path, width: int = 32, height: int = 24, color=(120, 40, 40)) -> None:
    Image.new("RGB", (width, height), color).save(path)


@pytest.fixture
def free_port() -> int:
    import socket

    with socket.socket() as s:
        s.bind(("127.0.0.1", 0))
        return s.getsockname()[1]


@pytest.fixture
def project_dir(tmp_path):
    """Directory with three images and a labels file, ready for a project."""
    for name in ("a.png", "b.png", "c.png"):
        write_image(tmp_path / name)
    (tmp_path / "labels.txt").write_text(LABELS_TEXT, encoding="utf-8")
    return tmp_path
