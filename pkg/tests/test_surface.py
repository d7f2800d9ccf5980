import math

import pytest

from tetrageo.core import random_tetra
from tetrageo.errors import NonConvexPolygon
from tetrageo.surface import (
    SurfacePoint,
    angle_at_cone_point,
    build_surface,
    cone_fan,
    surface_from_json,
    unfold_across_edge,
)


def test_tetra_surface_counts(reg_surface):
    s = reg_surface
    assert s.kind == "tetra"
    assert len(s.faces) == 4
    assert len(s.edges) == 6
    assert len(s.cone_angles) == 4
    for theta in s.cone_angles.values():
        assert theta == pytest.approx(math.pi, abs=1e-12)


def test_double_surface(rect_double):
    s = rect_double
    assert s.kind == "double"
    assert len(s.faces) == 2
    assert len(s.edges) == 4
    for theta in s.cone_angles.values():
        assert theta == pytest.approx(math.pi, abs=1e-12)
    assert s.area == pytest.approx(4.0, abs=1e-12)


def test_nonconvex_rejected():
    with pytest.raises(NonConvexPolygon):
        build_surface([(0, 0), (2, 0), (1, 0.2), (2, 2), (0, 2)])


def test_double_unfold_is_edge_reflection(square_double):
    s = square_double
    iso = unfold_across_edge(s, 0, 0)  # side from (0,0) to (1,0)
    assert iso.is_reflection
    # reflection across the x-axis
    assert iso.apply((0.3, 0.4)) == pytest.approx((0.3, -0.4), abs=1e-12)


def test_unfold_round_trip_identity():
    s = build_surface(random_tetra(5))
    for f, side, f2, s2 in s.edges:
        fwd = unfold_across_edge(s, f, side)
        back = unfold_across_edge(s, f2, s2)
        comp = fwd.compose(back)
        assert comp.apply((0.123, 0.456)) == pytest.approx((0.123, 0.456), abs=1e-12)


def test_unfold_reflects_neighbor_of_regular(reg_surface):
    s = reg_surface
    # unfolding any neighbor of face 0 across their shared edge must place the
    # far vertex at the reflection of face 0's far vertex across that edge
    f, side, f2, s2 = s.edges[0]
    iso = unfold_across_edge(s, f, side)
    face2 = s.faces[f2]
    far_id = face2.vertex_ids[(s2 + 2) % 3]
    image = iso.apply(face2.chart[(s2 + 2) % 3])
    (x1, y1), (x2, y2) = s.faces[f].side(side)
    # distance from the image to both edge endpoints equals the edge lengths
    d1 = math.hypot(image[0] - x1, image[1] - y1)
    d2 = math.hypot(image[0] - x2, image[1] - y2)
    assert d1 == pytest.approx(1.0, abs=1e-12)
    assert d2 == pytest.approx(1.0, abs=1e-12)
    # and on the opposite side of the edge from face f's own far vertex
    own_far = [p for p in s.faces[f].chart if p not in ((x1, y1), (x2, y2))][0]
    side_of = lambda p: (x2 - x1) * (p[1] - y1) - (y2 - y1) * (p[0] - x1)
    assert side_of(image) * side_of(own_far) < 0


def test_chart_3d_consistency():
    t = random_tetra(9)
    s = build_surface(t)
    import numpy as np

    pts = [np.array(p) for p in t.vertices]
    for f, face in enumerate(s.faces):
        ids = face.vertex_ids
        for i in range(3):
            for j in range(i + 1, 3):
                chart_d = math.hypot(
                    face.chart[i][0] - face.chart[j][0],
                    face.chart[i][1] - face.chart[j][1],
                )
                chord = float(np.linalg.norm(pts[ids[i]] - pts[ids[j]]))
                assert chart_d == pytest.approx(chord, abs=1e-12)


def test_angle_at_cone_point_square(square_double):
    for vid in range(4):
        assert angle_at_cone_point(square_double, vid) == pytest.approx(
            math.pi, abs=1e-12
        )


def test_hexagon_quadrilateral_cone_angles():
    pts = [
        (math.cos(k * math.pi / 3.0), math.sin(k * math.pi / 3.0)) for k in range(4)
    ]
    s = build_surface(pts)
    assert angle_at_cone_point(s, 1) == pytest.approx(4.0 * math.pi / 3.0, abs=1e-12)
    assert angle_at_cone_point(s, 2) == pytest.approx(4.0 * math.pi / 3.0, abs=1e-12)
    assert angle_at_cone_point(s, 0) == pytest.approx(2.0 * math.pi / 3.0, abs=1e-12)
    assert angle_at_cone_point(s, 3) == pytest.approx(2.0 * math.pi / 3.0, abs=1e-12)


def test_fan_interior(reg_surface):
    fan = cone_fan(reg_surface, SurfacePoint(0, 0.5, 0.28))
    assert fan.total_angle == pytest.approx(2 * math.pi)
    a = fan.to_cone_angle(0, (1.0, 0.0))
    b = fan.to_cone_angle(0, (0.0, 1.0))
    assert (b - a) % (2 * math.pi) == pytest.approx(math.pi / 2.0, abs=1e-12)


def test_fan_vertex_total(reg_surface):
    sp = reg_surface.vertex_point(2)
    fan = cone_fan(reg_surface, sp)
    assert fan.total_angle == pytest.approx(math.pi, abs=1e-12)
    assert len(fan.entries) == 3


def test_fan_vertex_round_trip(square_double):
    sp = square_double.vertex_point(1)
    fan = cone_fan(square_double, sp)
    assert fan.total_angle == pytest.approx(math.pi, abs=1e-12)
    for psi in (0.1, 0.9, 1.6, 2.6):
        psi = psi % fan.total_angle
        face, vec = fan.from_cone_angle(psi)
        assert fan.to_cone_angle(face, vec) == pytest.approx(psi, abs=1e-10)


def test_fan_edge_point(square_double):
    sp = SurfacePoint(0, 0.5, 0.0)
    fan = cone_fan(square_double, sp)
    assert fan.total_angle == pytest.approx(2 * math.pi)
    assert len(fan.entries) == 2
    face, vec = fan.from_cone_angle(math.pi * 1.5)
    assert face == 1


def test_point_realizations(square_double):
    s = square_double
    interior = SurfacePoint(0, 0.25, 0.25)
    assert len(s.realizations(interior)) == 1
    on_edge = SurfacePoint(0, 0.5, 0.0)
    reals = s.realizations(on_edge)
    assert sorted(r[0] for r in reals) == [0, 1]
    at_vertex = SurfacePoint(1, 1.0, 1.0)
    reals = s.realizations(at_vertex)
    assert sorted(r[0] for r in reals) == [0, 1]
    assert s.canonical_point(at_vertex).face == 0


def test_json_round_trip(reg_surface):
    s2 = surface_from_json(reg_surface.to_json())
    assert s2.kind == reg_surface.kind
    assert len(s2.faces) == 4
    assert s2.area == pytest.approx(reg_surface.area, rel=1e-12)
