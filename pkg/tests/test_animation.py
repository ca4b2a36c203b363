import numpy as np
import pytest

from svgbench.core import parse_svg
from svgbench.metrics import rasterize_animation, rasterize_animation_text
from svgbench.render.animate import (
    Timing,
    document_at_time,
    parse_clock,
    resolve_duration,
)


def centroid_x(image: np.ndarray) -> float:
    """Mean x of non-white pixels, in pixel units."""
    mask = (image < 250).any(axis=2)
    ys, xs = np.nonzero(mask)
    assert xs.size > 0, "nothing drawn"
    return float(xs.mean())


ANIM = (
    '<svg viewBox="-16 -16 160 160">'
    '<circle cx="0" cy="64" r="10" fill="#000000">'
    '<animate attributeName="cx" from="0" to="128" dur="2s" fill="freeze"/>'
    "</circle></svg>"
)


class TestClock:
    def test_units(self):
        assert parse_clock("2s") == 2.0
        assert parse_clock("500ms") == 0.5
        assert parse_clock("1.5") == 1.5
        assert parse_clock("2min") == 120.0

    def test_timing_progress(self):
        t = Timing(begin=1.0, dur=2.0, repeat=2.0, freeze=True)
        assert t.progress(0.5) is None
        assert t.progress(1.0) == 0.0
        assert t.progress(2.0) == 0.5
        assert t.progress(3.5) == pytest.approx(0.25)  # second repetition
        assert t.progress(99.0) == 1.0  # frozen at the end value

    def test_fill_remove_reverts(self):
        t = Timing(begin=0.0, dur=1.0, repeat=1.0, freeze=False)
        assert t.progress(2.0) is None

    def test_indefinite_repeat_wraps(self):
        t = Timing(begin=0.0, dur=1.0, repeat=float("inf"), freeze=False)
        assert t.progress(5.25) == pytest.approx(0.25)


class TestSampling:
    def test_static_document_constant_frames(self):
        doc = parse_svg('<svg viewBox="0 0 128 128"><circle cx="64" cy="64" r="9"/></svg>')
        frames = rasterize_animation(doc, 64, 8)
        assert len(frames) == 8
        first = frames[0].image.data
        for f in frames[1:]:
            assert (f.image.data == first).all()

    def test_linear_cx_interpolation(self):
        doc = parse_svg(ANIM)
        frames = rasterize_animation(doc, 352, 8)  # 352 = 2.2 * 160: scale 2.2
        scale = 352 / 160.0
        for k, frame in enumerate(frames):
            assert not frame.penalized
            cx_user = centroid_x(frame.image.data) / scale - 16.0 + 0.5 / scale
            expected = 128.0 * k / 7.0
            assert abs(cx_user - expected) <= 1.0, (k, cx_user, expected)

    def test_duration_resolution(self):
        assert resolve_duration(parse_svg(ANIM)) == 2.0
        multi = parse_svg(
            '<svg viewBox="0 0 128 128"><circle r="4">'
            '<animate attributeName="r" from="1" to="9" begin="1s" dur="2s"/></circle>'
            '<rect width="5" height="5"><animate attributeName="x" from="0" to="9" dur="1s" repeatCount="2"/></rect>'
            "</svg>"
        )
        assert resolve_duration(multi) == 3.0

    def test_unrenderable_all_black(self):
        frames = rasterize_animation_text("<svg nope", 64, 8)
        assert len(frames) == 8
        assert all(f.penalized for f in frames)
        assert all((f.image.data == 0).all() for f in frames)

    def test_single_frame_at_zero(self):
        doc = parse_svg(ANIM)
        frames = rasterize_animation(doc, 352, 1)
        assert len(frames) == 1
        cx_user = centroid_x(frames[0].image.data) / 2.2 - 16.0
        assert abs(cx_user - 0.0) <= 1.0


class TestDocumentAtTime:
    def test_animate_color(self):
        doc = parse_svg(
            '<svg viewBox="0 0 128 128"><rect width="9" height="9" fill="#000000">'
            '<animate attributeName="fill" from="#000000" to="#ffffff" dur="2s" fill="freeze"/>'
            "</rect></svg>"
        )
        mid = document_at_time(doc, 1.0)
        assert mid.root.children[0].get_raw("fill") == "#808080"

    def test_animate_transform_rotate(self):
        doc = parse_svg(
            '<svg viewBox="0 0 128 128"><rect width="9" height="9">'
            '<animateTransform attributeName="transform" type="rotate" '
            'from="0 64 64" to="180 64 64" dur="2s" fill="freeze"/></rect></svg>'
        )
        mid = document_at_time(doc, 1.0)
        assert "rotate(90 64 64)" in mid.root.children[0].get_raw("transform")

    def test_values_track(self):
        doc = parse_svg(
            '<svg viewBox="0 0 128 128"><circle r="4">'
            '<animate attributeName="cx" values="0;100;50" dur="2s" fill="freeze"/>'
            "</circle></svg>"
        )
        assert document_at_time(doc, 0.5).root.children[0].get_raw("cx") == "50"
        assert document_at_time(doc, 1.5).root.children[0].get_raw("cx") == "75"
        assert document_at_time(doc, 2.0).root.children[0].get_raw("cx") == "50"

    def test_animate_motion_moves_along_path(self):
        doc = parse_svg(
            '<svg viewBox="0 0 128 128"><circle cx="0" cy="0" r="4" fill="#000">'
            '<animateMotion path="M10 10L110 10" dur="1s" fill="freeze"/></circle></svg>'
        )
        end = document_at_time(doc, 1.0)
        transform = end.root.children[0].get_raw("transform")
        assert "translate(110 10)" in transform

    def test_set_element(self):
        doc = parse_svg(
            '<svg viewBox="0 0 128 128"><rect width="9" height="9" fill="#000">'
            '<set attributeName="fill" to="#ff0000" begin="1s" dur="1s"/></rect></svg>'
        )
        assert document_at_time(doc, 0.5).root.children[0].get_raw("fill") == "#000"
        assert document_at_time(doc, 1.5).root.children[0].get_raw("fill") == "#ff0000"

    def test_sampled_document_is_static(self):
        snap = document_at_time(parse_svg(ANIM), 1.0)
        assert all(e.tag != "animate" for e in snap.iter())
