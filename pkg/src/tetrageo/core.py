"""Tetrahedra as metric objects.

Construction from vertices, cone angles and curvature, embedding of six edge
lengths (Cayley-Menger), canonical form modulo isometry + reflection +
homothety, and seeded random sampling of the tetrahedron space.

Conventions: vertices are labeled 0..3 (aliases "a".."d"); the six edges are
indexed by the pair order (0,1),(0,2),(0,3),(1,2),(1,3),(2,3).
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateInput, MetricInfeasible, ParamOutOfRange, SamplerExhausted

VERTEX_NAMES = "abcd"
EDGE_PAIRS = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))
EDGE_INDEX = {p: i for i, p in enumerate(EDGE_PAIRS)}
# face i is opposite vertex i
FACE_OPPOSITE = ((1, 2, 3), (0, 2, 3), (0, 1, 3), (0, 1, 2))

DEGENERACY_FRACTION = 1e-10  # degenerate when volume < fraction * (longest edge)^3


def vertex_index(v) -> int:
    if isinstance(v, str):
        v = VERTEX_NAMES.index(v)
    if not 0 <= v <= 3:
        raise ParamOutOfRange(f"vertex label out of range: {v!r}")
    return v


def _triangle_angle(p, q, r):
    """Angle at p in triangle pqr, numerically stable via atan2."""
    u = q - p
    w = r - p
    c = np.cross(u, w)
    return math.atan2(float(np.linalg.norm(c)), float(np.dot(u, w)))


@dataclass(frozen=True)
class Tetra:
    """Boundary of the convex hull of four non-coplanar points.

    ``faces`` lists vertex triples ordered counterclockwise as seen from
    outside; ``edge_lengths`` follows EDGE_PAIRS order.
    """

    vertices: tuple  # 4 x (x, y, z)
    faces: tuple  # 4 triples of vertex ids, faces[i] opposite vertex i
    edge_lengths: tuple  # 6 floats
    cone_angles: tuple  # 4 floats, theta_v
    volume: float

    @property
    def curvatures(self):
        return tuple(2.0 * math.pi - t for t in self.cone_angles)

    @property
    def longest_edge(self):
        return max(self.edge_lengths)

    def edge_length(self, u, v):
        u, v = vertex_index(u), vertex_index(v)
        return self.edge_lengths[EDGE_INDEX[(min(u, v), max(u, v))]]

    def point(self, v):
        return np.array(self.vertices[vertex_index(v)])

    def to_json(self) -> str:
        return json.dumps({"vertices": [list(p) for p in self.vertices]})


def tetra_from_vertices(p1, p2, p3, p4) -> Tetra:
    """Build a Tetra from four 3D points; rejects coplanar input.

    Degeneracy rule: volume below DEGENERACY_FRACTION * (longest edge)^3.
    """
    pts = [np.asarray(p, dtype=float) for p in (p1, p2, p3, p4)]
    if any(p.shape != (3,) for p in pts):
        raise ParamOutOfRange("vertices must be 3D points")
    lengths = tuple(float(np.linalg.norm(pts[i] - pts[j])) for i, j in EDGE_PAIRS)
    lmax = max(lengths)
    if lmax == 0.0:
        raise DegenerateInput("all four points coincide")
    vol = float(np.dot(np.cross(pts[1] - pts[0], pts[2] - pts[0]), pts[3] - pts[0])) / 6.0
    if abs(vol) < DEGENERACY_FRACTION * lmax**3:
        raise DegenerateInput(
            f"coplanar vertices: volume {abs(vol):g} below tolerance "
            f"{DEGENERACY_FRACTION * lmax ** 3:g}"
        )

    faces = []
    for opp, tri in enumerate(FACE_OPPOSITE):
        i, j, k = tri
        n = np.cross(pts[j] - pts[i], pts[k] - pts[i])
        if np.dot(n, pts[i] - pts[opp]) < 0.0:
            tri = (i, k, j)
        faces.append(tri)

    angles = []
    for v in range(4):
        total = 0.0
        for tri in faces:
            if v in tri:
                others = [w for w in tri if w != v]
                total += _triangle_angle(pts[v], pts[others[0]], pts[others[1]])
        angles.append(total)

    return Tetra(
        vertices=tuple(tuple(float(x) for x in p) for p in pts),
        faces=tuple(faces),
        edge_lengths=lengths,
        cone_angles=tuple(angles),
        volume=abs(vol),
    )


def tetra_from_json(text: str) -> Tetra:
    doc = json.loads(text)
    return tetra_from_vertices(*doc["vertices"])


def cone_angle(t: Tetra, v) -> float:
    """Total surface angle theta_v at a vertex (sum of incident face angles)."""
    return t.cone_angles[vertex_index(v)]


@dataclass(frozen=True)
class FlatDouble:
    """Four coplanar labeled points: a degenerate 'tetrahedron', i.e. the
    double of their convex hull.  ``planar`` keeps the original labels."""

    planar: tuple  # 4 x (x, y)

    @property
    def hull_order(self):
        """Labels in convex position (counterclockwise), or None if some
        point is inside / on the hull boundary of the others."""
        pts = [np.array(p) for p in self.planar]
        centroid = sum(pts) / 4.0
        order = sorted(range(4), key=lambda i: math.atan2(*(pts[i] - centroid)[::-1]))
        # strict convexity of the angular ordering
        for k in range(4):
            a, b, c = pts[order[k]], pts[order[(k + 1) % 4]], pts[order[(k + 2) % 4]]
            cr = (b[0] - a[0]) * (c[1] - b[1]) - (b[1] - a[1]) * (c[0] - b[0])
            if cr <= 0.0:
                return None
        return tuple(order)

    @property
    def is_quadrilateral(self) -> bool:
        return self.hull_order is not None


def _embed_lengths(lengths):
    d_ab, d_ac, d_ad, d_bc, d_bd, d_cd = lengths
    a = np.zeros(3)
    b = np.array([d_ab, 0.0, 0.0])
    xc = (d_ab**2 + d_ac**2 - d_bc**2) / (2.0 * d_ab)
    yc2 = d_ac**2 - xc**2
    yc = math.sqrt(max(yc2, 0.0))
    if yc < 1e-12 * max(d_ab, d_ac, d_bc):
        raise MetricInfeasible("face abc is degenerate (collinear points)")
    c = np.array([xc, yc, 0.0])
    xd = (d_ab**2 + d_ad**2 - d_bd**2) / (2.0 * d_ab)
    yd = (d_ad**2 - d_cd**2 + xc**2 + yc**2 - 2.0 * xd * xc) / (2.0 * yc)
    zd2 = d_ad**2 - xd**2 - yd**2
    d = np.array([xd, yd, 0.0])
    return a, b, c, d, zd2


def cayley_menger_embed(lengths):
    """Embed six edge lengths as a Tetra, or a FlatDouble when the
    Cayley-Menger determinant vanishes within the degeneracy tolerance.

    Raises MetricInfeasible when a face violates the triangle inequality or
    the determinant is negative beyond tolerance.
    """
    lengths = tuple(float(x) for x in lengths)
    if len(lengths) != 6 or any(x <= 0.0 for x in lengths):
        raise ParamOutOfRange("need 6 positive lengths ordered (ab,ac,ad,bc,bd,cd)")
    lmax = max(lengths)
    for tri in FACE_OPPOSITE:
        ls = sorted(
            lengths[EDGE_INDEX[(min(u, v), max(u, v))]]
            for u, v in itertools.combinations(tri, 2)
        )
        if ls[0] + ls[1] < ls[2] * (1.0 - 1e-12):
            raise MetricInfeasible(
                f"face {''.join(VERTEX_NAMES[i] for i in tri)} violates the "
                f"triangle inequality: {ls}"
            )
    a, b, c, d, zd2 = _embed_lengths(lengths)
    # volume^2 = (base area * zd / 3)^2; test zd^2 against the scale-free cube
    zd_flat = DEGENERACY_FRACTION * lmax**3 * 6.0 / (2.0 * _tri_area(a, b, c))
    if zd2 <= zd_flat**2:
        if zd2 < -1e-9 * lmax**2:
            raise MetricInfeasible(f"negative Cayley-Menger height term: {zd2:g}")
        return FlatDouble(planar=tuple((float(p[0]), float(p[1])) for p in (a, b, c, d)))
    d[2] = math.sqrt(zd2)
    return tetra_from_vertices(a, b, c, d)


def _tri_area(p, q, r):
    return 0.5 * float(np.linalg.norm(np.cross(q - p, r - p)))


@dataclass(frozen=True)
class CanonicalClass:
    """Edge lengths scaled to max 1 and relabeled to the lexicographically
    minimal vector: a computable representative of a tetrahedron modulo
    isometry, reflection and homothety.

    The associated ``distance`` is a proxy metric on the quotient space (the
    true Pompeiu-Hausdorff distance between isometry classes is out of scope).
    """

    lengths: tuple  # 6 floats, max == 1

    def distance(self, other: "CanonicalClass") -> float:
        best = math.inf
        for perm in _PERMUTED_EDGE_ORDERS:
            m = max(
                abs(self.lengths[i] - other.lengths[perm[i]]) for i in range(6)
            )
            if m < best:
                best = m
        return best

    def to_json(self) -> str:
        return json.dumps({"lengths": list(self.lengths)})


def _edge_orders():
    orders = []
    for sigma in itertools.permutations(range(4)):
        order = tuple(
            EDGE_INDEX[(min(sigma[u], sigma[v]), max(sigma[u], sigma[v]))]
            for u, v in EDGE_PAIRS
        )
        orders.append(order)
    return tuple(orders)


_PERMUTED_EDGE_ORDERS = _edge_orders()


def canonicalize(obj) -> CanonicalClass:
    """Canonical class of a Tetra (or of 6 raw edge lengths)."""
    lengths = obj.edge_lengths if isinstance(obj, Tetra) else tuple(map(float, obj))
    lmax = max(lengths)
    scaled = tuple(x / lmax for x in lengths)
    best = min(tuple(scaled[i] for i in order) for order in _PERMUTED_EDGE_ORDERS)
    return CanonicalClass(lengths=best)


def random_tetra(seed: int, conditioning: float = 0.1, max_tries: int = 10000) -> Tetra:
    """Deterministic random tetrahedron: i.i.d. uniform vertices in the unit
    ball, rejected until volume / (regular volume at the longest edge) exceeds
    ``conditioning``.  The rejection model is part of the survey contract.
    """
    if not 0.0 < conditioning < 1.0:
        raise ParamOutOfRange("conditioning must lie in (0, 1)")
    rng = np.random.default_rng(seed)
    for _ in range(max_tries):
        pts = _uniform_ball(rng, 4)
        lengths = [float(np.linalg.norm(pts[i] - pts[j])) for i, j in EDGE_PAIRS]
        lmax = max(lengths)
        if lmax == 0.0:
            continue
        vol = abs(float(np.dot(np.cross(pts[1] - pts[0], pts[2] - pts[0]), pts[3] - pts[0]))) / 6.0
        v_reg = lmax**3 / (6.0 * math.sqrt(2.0))
        if vol / v_reg >= conditioning:
            return tetra_from_vertices(*pts)
    raise SamplerExhausted(
        f"no tetrahedron with volume fraction >= {conditioning} in {max_tries} draws"
    )


def _uniform_ball(rng, n):
    pts = []
    for _ in range(n):
        u = rng.standard_normal(3)
        norm = float(np.linalg.norm(u))
        while norm == 0.0:
            u = rng.standard_normal(3)
            norm = float(np.linalg.norm(u))
        r = rng.random() ** (1.0 / 3.0)
        pts.append(u / norm * r)
    return pts
