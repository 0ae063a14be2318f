import random

import pytest

from iat.annotations import AnnotationSet
from iat.errors import ParseError
from iat.geometry import Rectangle
from iat.iatfile import atomic_write, serialize_set
from iat.project import (
    NoImagesError,
    aggregate_stats,
    create_project,
    move_cursor,
    open_project,
    parse_project,
    record_save,
    save_project,
    serialize_project,
)
from iat.taxonomy import Label

from conftest import LABELS_TEXT, write_image


def test_create_project_filters_and_sorts(tmp_path):
    write_image(tmp_path / "b.png")
    write_image(tmp_path / "a.png")
    (tmp_path / "c.txt").write_text("not an image")
    proj = create_project(tmp_path, "labels.txt")
    assert [e.image_path for e in proj.entries] == ["a.png", "b.png"]
    assert all(e.status == "pending" for e in proj.entries)
    assert proj.cursor == 0
    assert proj.entries[0].annotation_path == "annotations/a.png.iat"


def test_create_project_no_images(tmp_path):
    (tmp_path / "c.txt").write_text("x")
    with pytest.raises(NoImagesError):
        create_project(tmp_path, "labels.txt")


def test_create_project_case_insensitive_extension(tmp_path):
    write_image(tmp_path / "x.JPG")
    proj = create_project(tmp_path, "labels.txt")
    assert [e.image_path for e in proj.entries] == ["x.JPG"]


def test_save_open_roundtrip(project_dir):
    proj = create_project(project_dir, "labels.txt")
    proj = record_save(proj, 1)
    proj = move_cursor(proj, 2)
    path = project_dir / "project.iatproj"
    save_project(proj, path)
    assert open_project(path) == proj


def test_save_deterministic(project_dir):
    proj = create_project(project_dir, "labels.txt")
    p1, p2 = project_dir / "p1.iatproj", project_dir / "p2.iatproj"
    save_project(proj, p1)
    save_project(proj, p2)
    assert p1.read_bytes() == p2.read_bytes()


def test_parse_cursor_out_of_range(tmp_path):
    src = "IATPROJ\t1\nlabels\tl.txt\ncursor\t5\nentry\ta.png\tpending\tannotations/a.png.iat\n"
    with pytest.raises(ParseError) as exc:
        parse_project(src, tmp_path)
    assert exc.value.line == 3


def test_parse_missing_magic(tmp_path):
    with pytest.raises(ParseError) as exc:
        parse_project("nonsense\n", tmp_path)
    assert exc.value.line == 1
    assert "bad header" in exc.value.message


def test_parse_bad_status(tmp_path):
    src = "IATPROJ\t1\nlabels\tl.txt\ncursor\t0\nentry\ta.png\tdone\tx.iat\n"
    with pytest.raises(ParseError) as exc:
        parse_project(src, tmp_path)
    assert exc.value.line == 4


def test_parse_duplicate_image_path(tmp_path):
    src = (
        "IATPROJ\t1\nlabels\tl.txt\ncursor\t0\n"
        "entry\ta.png\tpending\tx.iat\nentry\ta.png\tpending\ty.iat\n"
    )
    with pytest.raises(ParseError) as exc:
        parse_project(src, tmp_path)
    assert exc.value.line == 5


def test_move_cursor_clamps(project_dir):
    proj = create_project(project_dir, "labels.txt")  # 3 entries
    assert move_cursor(proj, -5).cursor == 0
    assert move_cursor(move_cursor(proj, 2), 1).cursor == 2
    assert move_cursor(proj, 0).cursor == proj.cursor


def test_cursor_stays_in_bounds_random(project_dir):
    proj = create_project(project_dir, "labels.txt")
    rng = random.Random(31)
    for _ in range(2000):
        proj = move_cursor(proj, rng.randint(-4, 4))
        assert 0 <= proj.cursor < len(proj.entries)


def test_record_save_idempotent(project_dir):
    proj = create_project(project_dir, "labels.txt")
    once = record_save(proj, 0)
    assert once.entries[0].status == "annotated"
    assert record_save(once, 0) == once
    with pytest.raises(IndexError):
        record_save(proj, len(proj.entries))


def _write_annotations(proj, index, taxonomy, shapes_labels):
    aset = AnnotationSet(proj.entries[index].image_path, 32, 24)
    for shape, label in shapes_labels:
        aset, _ = aset.add(shape, label, taxonomy)
    ann_file = proj.annotation_file(index)
    ann_file.parent.mkdir(parents=True, exist_ok=True)
    atomic_write(ann_file, serialize_set(aset))


def test_aggregate_stats_fresh(project_dir):
    proj = create_project(project_dir, "labels.txt")
    stats = aggregate_stats(proj)
    assert stats.status_counts == (("pending", 3), ("annotated", 0))
    assert stats.label_counts == ()


def test_aggregate_stats_counts(project_dir, taxonomy):
    proj = create_project(project_dir, "labels.txt")
    _write_annotations(
        proj,
        0,
        taxonomy,
        [
            (Rectangle(0, 0, 2, 2), Label("vehicles", "car", "c1")),
            (Rectangle(4, 0, 2, 2), Label("vehicles", "car", "c2")),
        ],
    )
    proj = record_save(proj, 0)
    stats = aggregate_stats(proj)
    assert stats.status_counts == (("pending", 2), ("annotated", 1))
    assert stats.label_counts == ((("vehicles", "car"), 2),)


def test_aggregate_stats_corrupt_file_names_path(project_dir):
    proj = create_project(project_dir, "labels.txt")
    ann_file = proj.annotation_file(0)
    ann_file.parent.mkdir(parents=True, exist_ok=True)
    ann_file.write_text("garbage\n", encoding="utf-8")
    with pytest.raises(ParseError) as exc:
        aggregate_stats(proj)
    assert str(ann_file) in exc.value.message


def test_resume_scenario(project_dir, taxonomy):
    """create -> annotate image 0 -> save -> advance -> close -> reopen."""
    proj = create_project(project_dir, "labels.txt")
    _write_annotations(proj, 0, taxonomy, [(Rectangle(1, 1, 4, 4), Label("people", "male", "m1"))])
    proj = record_save(proj, 0)
    proj = move_cursor(proj, 1)
    path = project_dir / "project.iatproj"
    save_project(proj, path)
    saved_bytes = path.read_bytes()

    reopened = open_project(path)
    assert reopened == proj
    assert reopened.cursor == 1
    assert reopened.entries[0].status == "annotated"
    save_project(reopened, path)
    assert path.read_bytes() == saved_bytes


def test_serialize_project_format(project_dir):
    proj = create_project(project_dir, "labels.txt")
    text = serialize_project(proj)
    assert text.startswith("IATPROJ\t1\nlabels\tlabels.txt\ncursor\t0\n")
    assert "entry\ta.png\tpending\tannotations/a.png.iat\n" in text
