"""Uniform intrinsic-surface model for tetrahedra and doubly covered convex
polygons.

A Surface is a set of planar face charts glued along edges by planar
isometries.  Tetra surfaces have 4 triangular charts laid out isometrically
to their 3D faces (counterclockwise as seen from outside); doubles have two
identical copies of one convex polygon glued rim to rim, so crossing the rim
is a reflection.  All queries are pure; surfaces are immutable.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .core import Tetra, FlatDouble
from .errors import GeometryError, InternalError, NonConvexPolygon, ParamOutOfRange

TWO_PI = 2.0 * math.pi


class PlanarIsometry(NamedTuple):
    """Affine planar isometry (x,y) -> (a x + b y + tx, c x + d y + ty)."""

    a: float
    b: float
    c: float
    d: float
    tx: float
    ty: float

    def apply(self, p):
        x, y = p
        return (self.a * x + self.b * y + self.tx, self.c * x + self.d * y + self.ty)

    def apply_vec(self, v):
        x, y = v
        return (self.a * x + self.b * y, self.c * x + self.d * y)

    def compose(self, other: "PlanarIsometry") -> "PlanarIsometry":
        """self after other: (self.compose(other)).apply(p) == self.apply(other.apply(p))."""
        a, b, c, d, tx, ty = self
        a2, b2, c2, d2, tx2, ty2 = other
        return PlanarIsometry(
            a * a2 + b * c2,
            a * b2 + b * d2,
            c * a2 + d * c2,
            c * b2 + d * d2,
            a * tx2 + b * ty2 + tx,
            c * tx2 + d * ty2 + ty,
        )

    def invert(self) -> "PlanarIsometry":
        a, b, c, d, tx, ty = self
        det = a * d - b * c  # +-1
        ia, ib, ic, id_ = d / det, -b / det, -c / det, a / det
        return PlanarIsometry(ia, ib, ic, id_, -(ia * tx + ib * ty), -(ic * tx + id_ * ty))

    @property
    def is_reflection(self) -> bool:
        return self.a * self.d - self.b * self.c < 0.0


IDENTITY = PlanarIsometry(1.0, 0.0, 0.0, 1.0, 0.0, 0.0)


def _rotation_about(px, py, cos_t, sin_t) -> PlanarIsometry:
    return PlanarIsometry(
        cos_t, -sin_t, sin_t, cos_t,
        px - cos_t * px + sin_t * py,
        py - sin_t * px - cos_t * py,
    )


def reflect_across_line(p, q) -> PlanarIsometry:
    dx, dy = q[0] - p[0], q[1] - p[1]
    n = math.hypot(dx, dy)
    dx, dy = dx / n, dy / n
    a = dx * dx - dy * dy
    b = 2.0 * dx * dy
    # M = [[a, b], [b, -a]]; fixed point p
    return PlanarIsometry(a, b, b, -a, p[0] - a * p[0] - b * p[1], p[1] - b * p[0] + a * p[1])


class SurfacePoint(NamedTuple):
    """A point located intrinsically: face id plus 2D chart coordinates."""

    face: int
    x: float
    y: float

    @property
    def coords(self):
        return (self.x, self.y)


@dataclass(frozen=True)
class Face:
    chart: tuple  # n x (x, y), counterclockwise in the chart plane
    vertex_ids: tuple  # global cone-point ids per chart vertex

    @property
    def n(self):
        return len(self.chart)

    def side(self, s):
        return self.chart[s], self.chart[(s + 1) % self.n]

    def centroid(self):
        n = self.n
        return (sum(p[0] for p in self.chart) / n, sum(p[1] for p in self.chart) / n)

    def area(self):
        total = 0.0
        for i in range(self.n):
            x1, y1 = self.chart[i]
            x2, y2 = self.chart[(i + 1) % self.n]
            total += x1 * y2 - x2 * y1
        return 0.5 * total


@dataclass(frozen=True)
class Surface:
    kind: str  # "tetra" | "double"
    faces: tuple
    edges: tuple  # (fa, sa, fb, sb) with sa/sb side indices
    cone_angles: dict  # vertex id -> theta
    glue: dict = field(repr=False)  # (face, side) -> (face2, side2, PlanarIsometry chart2->chart)
    vertex_slot: dict = field(repr=False)  # (face, vid) -> local chart index
    scale: float = 0.0
    source: object = None

    # -- basic queries ----------------------------------------------------

    @property
    def cone_ids(self):
        return tuple(sorted(self.cone_angles))

    @property
    def area(self):
        return sum(f.area() for f in self.faces)

    @property
    def curvatures(self):
        return {v: TWO_PI - t for v, t in self.cone_angles.items()}

    def vertex_point(self, vid) -> SurfacePoint:
        """Canonical SurfacePoint of a cone point (lowest incident face)."""
        for f, face in enumerate(self.faces):
            if vid in face.vertex_ids:
                i = face.vertex_ids.index(vid)
                return SurfacePoint(f, face.chart[i][0], face.chart[i][1])
        raise ParamOutOfRange(f"no cone point with id {vid}")

    def contains(self, face_id, p, tol=None) -> bool:
        if tol is None:
            tol = 1e-9 * self.scale
        face = self.faces[face_id]
        x, y = p
        for i in range(face.n):
            x1, y1 = face.chart[i]
            x2, y2 = face.chart[(i + 1) % face.n]
            if (x2 - x1) * (y - y1) - (y2 - y1) * (x - x1) < -tol:
                return False
        return True

    def classify_point(self, sp: SurfacePoint, tol=None):
        """('vertex', vid) | ('edge', (face, side, t)) | ('interior', None)."""
        if tol is None:
            tol = 1e-9 * self.scale
        face = self.faces[sp.face]
        px, py = sp.x, sp.y
        for i, (cx, cy) in enumerate(face.chart):
            if math.hypot(px - cx, py - cy) <= tol:
                return ("vertex", face.vertex_ids[i])
        for s in range(face.n):
            (x1, y1), (x2, y2) = face.side(s)
            dx, dy = x2 - x1, y2 - y1
            L2 = dx * dx + dy * dy
            t = ((px - x1) * dx + (py - y1) * dy) / L2
            if -1e-12 <= t <= 1.0 + 1e-12:
                dist = abs(dy * (px - x1) - dx * (py - y1)) / math.sqrt(L2)
                if dist <= tol:
                    return ("edge", (sp.face, s, min(max(t, 0.0), 1.0)))
        return ("interior", None)

    def realizations(self, sp: SurfacePoint, tol=None):
        """All (face, (x, y)) chart representations of a surface point."""
        kind, info = self.classify_point(sp, tol)
        if kind == "vertex":
            vid = info
            out = []
            for f, face in enumerate(self.faces):
                if vid in face.vertex_ids:
                    out.append((f, face.chart[face.vertex_ids.index(vid)]))
            return out
        if kind == "edge":
            f, s, _t = info
            f2, s2, iso = self.glue[(f, s)]
            back = iso.invert()
            return [(f, (sp.x, sp.y)), (f2, back.apply((sp.x, sp.y)))]
        return [(sp.face, (sp.x, sp.y))]

    def canonical_point(self, sp: SurfacePoint) -> SurfacePoint:
        """Boundary points get a canonical owner face (lowest id) so that
        equality of surface points is well defined."""
        reals = self.realizations(sp)
        f, (x, y) = min(reals, key=lambda r: r[0])
        return SurfacePoint(f, x, y)

    def points_equal(self, p: SurfacePoint, q: SurfacePoint, tol=None) -> bool:
        if tol is None:
            tol = 1e-9 * self.scale
        cp, cq = self.canonical_point(p), self.canonical_point(q)
        return cp.face == cq.face and math.hypot(cp.x - cq.x, cp.y - cq.y) <= tol

    def embed3(self, sp: SurfacePoint):
        """Ambient 3D position of a surface point (tetra kind), or the planar
        position with z=0 for degenerate doubles."""
        if self.kind == "tetra":
            t = self.source
            if not isinstance(t, Tetra):
                raise ParamOutOfRange("surface lacks its source tetrahedron")
            face = self.faces[sp.face]
            p0, p1, p2 = (np.array(t.vertices[v]) for v in face.vertex_ids)
            e1 = p1 - p0
            u = e1 / np.linalg.norm(e1)
            (c0, c1, c2) = face.chart
            w = p2 - p0
            x2 = float(np.dot(w, u))
            y2v = w - x2 * u
            v = y2v / np.linalg.norm(y2v)
            pos = p0 + sp.x * u + sp.y * v
            return tuple(float(z) for z in pos)
        return (sp.x, sp.y, 0.0)

    def face_point(self, face_id, bary) -> SurfacePoint:
        """Point from barycentric-style weights over the face's chart corners."""
        face = self.faces[face_id]
        w = list(bary)
        if len(w) != face.n:
            raise ParamOutOfRange("weight count must match face vertex count")
        tot = sum(w)
        x = sum(wi * p[0] for wi, p in zip(w, face.chart)) / tot
        y = sum(wi * p[1] for wi, p in zip(w, face.chart)) / tot
        return SurfacePoint(face_id, x, y)

    # -- serialization ----------------------------------------------------

    def to_json(self) -> str:
        doc = {
            "kind": self.kind,
            "faces": [
                {"chart": [list(p) for p in f.chart], "vertex_ids": list(f.vertex_ids)}
                for f in self.faces
            ],
            "edges": [list(e) for e in self.edges],
            "cones": [[v, self.cone_angles[v]] for v in self.cone_ids],
        }
        return json.dumps(doc)


def surface_from_json(text: str) -> Surface:
    doc = json.loads(text)
    faces = tuple(
        Face(chart=tuple(tuple(p) for p in f["chart"]), vertex_ids=tuple(f["vertex_ids"]))
        for f in doc["faces"]
    )
    edges = tuple(tuple(e) for e in doc["edges"])
    return _assemble(doc["kind"], faces, edges, source=None)


# -- construction ---------------------------------------------------------


def build_surface(src) -> Surface:
    """Surface from a Tetra, a FlatDouble, or a convex planar polygon
    (sequence of 2D points)."""
    if isinstance(src, Tetra):
        return _surface_from_tetra(src)
    if isinstance(src, FlatDouble):
        order = src.hull_order
        if order is None:
            raise NonConvexPolygon(
                "flat double without four extreme points cannot be doubled"
            )
        poly = [src.planar[i] for i in order]
        return _surface_from_polygon(poly, source=src)
    return _surface_from_polygon(src, source=None)


def _chart_from_3d(p0, p1, p2):
    e1 = p1 - p0
    L = float(np.linalg.norm(e1))
    u = e1 / L
    w = p2 - p0
    x2 = float(np.dot(w, u))
    y2 = float(np.linalg.norm(w - x2 * u))
    return ((0.0, 0.0), (L, 0.0), (x2, y2))


def _surface_from_tetra(t: Tetra) -> Surface:
    pts = [np.array(p) for p in t.vertices]
    faces = []
    for tri in t.faces:
        chart = _chart_from_3d(pts[tri[0]], pts[tri[1]], pts[tri[2]])
        faces.append(Face(chart=chart, vertex_ids=tuple(tri)))
    directed = {}
    for f, face in enumerate(faces):
        ids = face.vertex_ids
        for s in range(3):
            directed[(ids[s], ids[(s + 1) % 3])] = (f, s)
    edges = []
    seen = set()
    for (u, v), (f, s) in directed.items():
        if (v, u) in seen or (u, v) in seen:
            continue
        f2, s2 = directed[(v, u)]
        edges.append((f, s, f2, s2))
        seen.add((u, v))
    return _assemble("tetra", tuple(faces), tuple(edges), source=t)


def _surface_from_polygon(poly, source) -> Surface:
    pts = [(float(p[0]), float(p[1])) for p in poly]
    n = len(pts)
    if n < 3:
        raise NonConvexPolygon("polygon needs at least 3 vertices")
    area2 = sum(
        pts[i][0] * pts[(i + 1) % n][1] - pts[(i + 1) % n][0] * pts[i][1] for i in range(n)
    )
    if area2 < 0.0:
        pts = pts[::-1]
    scale = max(
        math.hypot(pts[(i + 1) % n][0] - pts[i][0], pts[(i + 1) % n][1] - pts[i][1])
        for i in range(n)
    )
    for i in range(n):
        ax, ay = pts[i]
        bx, by = pts[(i + 1) % n]
        cx, cy = pts[(i + 2) % n]
        cr = (bx - ax) * (cy - by) - (by - ay) * (cx - bx)
        if cr <= 1e-12 * scale * scale:
            raise NonConvexPolygon(
                f"polygon is not strictly convex at vertex {(i + 1) % n}"
            )
    chart = tuple(pts)
    ids = tuple(range(n))
    faces = (Face(chart=chart, vertex_ids=ids), Face(chart=chart, vertex_ids=ids))
    edges = tuple((0, s, 1, s) for s in range(n))
    return _assemble("double", faces, edges, source=source)


def _glue_isometry(faces, fa, sa, fb, sb):
    """Isometry mapping face fb's chart into face fa's chart so the shared
    edge coincides pointwise (matched by vertex id) and fb's interior lands
    on the far side of the edge."""
    face_a, face_b = faces[fa], faces[fb]
    ids_a = (face_a.vertex_ids[sa], face_a.vertex_ids[(sa + 1) % face_a.n])
    ids_b = (face_b.vertex_ids[sb], face_b.vertex_ids[(sb + 1) % face_b.n])
    if set(ids_a) != set(ids_b):
        raise GeometryError(f"edge ({fa},{sa})~({fb},{sb}) joins different vertices")
    A = {ids_a[0]: face_a.chart[sa], ids_a[1]: face_a.chart[(sa + 1) % face_a.n]}
    B = {ids_b[0]: face_b.chart[sb], ids_b[1]: face_b.chart[(sb + 1) % face_b.n]}
    u, v = ids_a
    au, av = A[u], A[v]
    bu, bv = B[u], B[v]
    dax, day = av[0] - au[0], av[1] - au[1]
    dbx, dby = bv[0] - bu[0], bv[1] - bu[1]
    la = math.hypot(dax, day)
    lb = math.hypot(dbx, dby)
    if abs(la - lb) > 1e-12 * max(la, lb):
        raise GeometryError(
            f"glued edge lengths disagree: {la!r} vs {lb!r} on ({fa},{sa})~({fb},{sb})"
        )
    cos_t = (dbx * dax + dby * day) / (la * lb)
    sin_t = (dbx * day - dby * dax) / (la * lb)
    rot = PlanarIsometry(cos_t, -sin_t, sin_t, cos_t, 0.0, 0.0)
    ru = rot.apply(bu)
    t0 = PlanarIsometry(cos_t, -sin_t, sin_t, cos_t, au[0] - ru[0], au[1] - ru[1])
    probe = t0.apply(face_b.centroid())
    ca = face_a.centroid()
    side_probe = dax * (probe[1] - au[1]) - day * (probe[0] - au[0])
    side_a = dax * (ca[1] - au[1]) - day * (ca[0] - au[0])
    if side_probe * side_a > 0.0:
        return t0.compose(reflect_across_line(bu, bv))
    return t0


def _assemble(kind, faces, edges, source) -> Surface:
    glue = {}
    for fa, sa, fb, sb in edges:
        glue[(fa, sa)] = (fb, sb, _glue_isometry(faces, fa, sa, fb, sb))
        glue[(fb, sb)] = (fa, sa, _glue_isometry(faces, fb, sb, fa, sa))
    vertex_slot = {}
    for f, face in enumerate(faces):
        for i, vid in enumerate(face.vertex_ids):
            vertex_slot[(f, vid)] = i
    scale = 0.0
    for face in faces:
        for s in range(face.n):
            (x1, y1), (x2, y2) = face.side(s)
            scale = max(scale, math.hypot(x2 - x1, y2 - y1))
    surf = Surface(
        kind=kind,
        faces=faces,
        edges=tuple(tuple(e) for e in edges),
        cone_angles={},
        glue=glue,
        vertex_slot=vertex_slot,
        scale=scale,
        source=source,
    )
    vids = sorted({vid for face in faces for vid in face.vertex_ids})
    n_v, n_e, n_f = len(vids), len(edges), len(faces)
    if n_v - n_e + n_f != 2:
        raise GeometryError(
            f"face complex is not a sphere: V-E+F = {n_v}-{n_e}+{n_f}"
        )
    angles = {vid: _corner_angle_sum(surf, vid) for vid in vids}
    object.__setattr__(surf, "cone_angles", angles)
    total_curv = sum(TWO_PI - t for t in angles.values())
    if abs(total_curv - 4.0 * math.pi) > 1e-11:
        raise InternalError(
            f"Gauss-Bonnet violated: total curvature {total_curv!r} != 4*pi"
        )
    if isinstance(source, Tetra):
        for vid in vids:
            if abs(angles[vid] - source.cone_angles[vid]) > 1e-11:
                raise InternalError("chart cone angle disagrees with 3D cone angle")
    return surf


def _corner_angle_sum(s: Surface, vid) -> float:
    total = 0.0
    for face in s.faces:
        if vid in face.vertex_ids:
            i = face.vertex_ids.index(vid)
            p = face.chart[i]
            q = face.chart[(i + 1) % face.n]
            r = face.chart[(i - 1) % face.n]
            ux, uy = q[0] - p[0], q[1] - p[1]
            wx, wy = r[0] - p[0], r[1] - p[1]
            total += math.atan2(abs(ux * wy - uy * wx), ux * wx + uy * wy)
    return total


def unfold_across_edge(s: Surface, from_face: int, side: int) -> PlanarIsometry:
    """Planar isometry carrying the neighbor face's chart into ``from_face``'s
    chart so the shared edge coincides pointwise."""
    return s.glue[(from_face, side)][2]


def angle_at_cone_point(s: Surface, vid) -> float:
    if vid not in s.cone_angles:
        raise ParamOutOfRange(f"no cone point with id {vid}")
    return s.cone_angles[vid]


# -- cone fans ------------------------------------------------------------


@dataclass(frozen=True)
class FanEntry:
    face: int
    iso: PlanarIsometry  # chart -> fan plane (point at origin)
    start_dir: tuple  # fan-plane unit vector where this wedge starts (CCW)
    offset: float  # cone angle of start_dir
    width: float


@dataclass(frozen=True)
class ConeFan:
    """Development of the total angle around a surface point.

    Wedges are laid out counterclockwise in the plane of the owner face's
    chart, translated so the point sits at the origin.  Cone coordinates are
    angles in [0, total_angle)."""

    point: SurfacePoint
    entries: tuple
    total_angle: float

    def entry_for_face(self, face):
        for e in self.entries:
            if e.face == face:
                return e
        raise ParamOutOfRange(f"face {face} is not incident to the fan point")

    def to_cone_angle(self, face, vec) -> float:
        e = self.entry_for_face(face)
        vx, vy = e.iso.apply_vec(vec)
        sx, sy = e.start_dir
        delta = math.atan2(sx * vy - sy * vx, sx * vx + sy * vy)
        psi = e.offset + delta
        return psi % self.total_angle

    def from_cone_angle(self, psi):
        """(face, unit chart direction) at cone coordinate psi."""
        psi = psi % self.total_angle
        for e in self.entries:
            if e.offset - 1e-12 <= psi <= e.offset + e.width + 1e-12:
                delta = psi - e.offset
                sx, sy = e.start_dir
                fx = sx * math.cos(delta) - sy * math.sin(delta)
                fy = sx * math.sin(delta) + sy * math.cos(delta)
                back = e.iso.invert()
                return e.face, back.apply_vec((fx, fy))
        e = self.entries[-1]
        delta = psi - e.offset
        sx, sy = e.start_dir
        fx = sx * math.cos(delta) - sy * math.sin(delta)
        fy = sx * math.sin(delta) + sy * math.cos(delta)
        return e.face, e.iso.invert().apply_vec((fx, fy))

    def gaps(self, cone_angles):
        """Cyclic gaps between sorted cone coordinates; sums to total_angle."""
        if not cone_angles:
            return []
        a = sorted(x % self.total_angle for x in cone_angles)
        out = [a[i + 1] - a[i] for i in range(len(a) - 1)]
        out.append(self.total_angle - a[-1] + a[0])
        return out


def cone_fan(s: Surface, sp: SurfacePoint) -> ConeFan:
    kind, info = s.classify_point(sp)
    if kind == "interior":
        iso = PlanarIsometry(1.0, 0.0, 0.0, 1.0, -sp.x, -sp.y)
        entry = FanEntry(sp.face, iso, (1.0, 0.0), 0.0, TWO_PI)
        return ConeFan(sp, (entry,), TWO_PI)
    if kind == "edge":
        f, side, _t = info
        (x1, y1), (x2, y2) = s.faces[f].side(side)
        L = math.hypot(x2 - x1, y2 - y1)
        d0 = ((x2 - x1) / L, (y2 - y1) / L)
        iso0 = PlanarIsometry(1.0, 0.0, 0.0, 1.0, -sp.x, -sp.y)
        f2, s2, gl = s.glue[(f, side)]
        iso1 = iso0.compose(gl)
        e0 = FanEntry(f, iso0, d0, 0.0, math.pi)
        e1 = FanEntry(f2, iso1, (-d0[0], -d0[1]), math.pi, math.pi)
        return ConeFan(sp, (e0, e1), TWO_PI)
    vid = info
    # walk faces around the vertex counterclockwise starting at the owner;
    # a reflecting chart-to-fan isometry swaps which corner side starts the
    # wedge (counterclockwise in the fan plane) and which side to cross next
    f0 = sp.face
    entries = []
    offset = 0.0
    face_id = f0
    iso = PlanarIsometry(1.0, 0.0, 0.0, 1.0, -sp.x, -sp.y)
    while True:
        face = s.faces[face_id]
        i = s.vertex_slot[(face_id, vid)]
        p = face.chart[i]
        out_dir = _unit(face.chart[(i + 1) % face.n], p)
        in_dir = _unit(face.chart[(i - 1) % face.n], p)
        width = _ccw_angle(out_dir, in_dir)
        if iso.is_reflection:
            start_chart, next_side = in_dir, i
        else:
            start_chart, next_side = out_dir, (i - 1) % face.n
        entries.append(
            FanEntry(face_id, iso, _norm(iso.apply_vec(start_chart)), offset, width)
        )
        offset += width
        f2, s2, gl = s.glue[(face_id, next_side)]
        if f2 == f0:
            break
        iso = iso.compose(gl)
        face_id = f2
        if len(entries) > len(s.faces):
            raise InternalError("vertex fan walk did not close")
    total = offset
    if abs(total - s.cone_angles[vid]) > 1e-9:
        raise InternalError("fan total angle disagrees with cone angle")
    return ConeFan(SurfacePoint(sp.face, sp.x, sp.y), tuple(entries), total)


def _unit(q, p):
    dx, dy = q[0] - p[0], q[1] - p[1]
    n = math.hypot(dx, dy)
    return (dx / n, dy / n)


def _norm(v):
    n = math.hypot(v[0], v[1])
    return (v[0] / n, v[1] / n)


def _ccw_angle(u, w):
    """Angle swept rotating u counterclockwise onto w, in (0, 2*pi)."""
    ang = math.atan2(u[0] * w[1] - u[1] * w[0], u[0] * w[0] + u[1] * w[1])
    if ang <= 0.0:
        ang += TWO_PI
    return ang
