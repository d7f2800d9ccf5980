import math

import numpy as np
import pytest

from tetrageo.core import (
    EDGE_PAIRS,
    FlatDouble,
    canonicalize,
    cayley_menger_embed,
    cone_angle,
    random_tetra,
    tetra_from_vertices,
)
from tetrageo.errors import DegenerateInput, MetricInfeasible, SamplerExhausted

from conftest import regular_tetra


def test_regular_tetra_cone_angles():
    t = regular_tetra()
    for v in range(4):
        assert cone_angle(t, v) == pytest.approx(math.pi, abs=1e-12)
    assert sum(t.curvatures) == pytest.approx(4 * math.pi, abs=1e-12)


def test_coplanar_rejected():
    with pytest.raises(DegenerateInput):
        tetra_from_vertices((0, 0, 0), (1, 0, 0), (0, 1, 0), (1, 1, 0))


def test_thin_tetra_accepted_and_sharp():
    t = tetra_from_vertices((0, 0, 0), (1, 0, 0), (0.5, 0.04, 0.02), (0.5, -0.04, 0.02))
    eps = math.hypot(0.04, 0.02)
    assert eps <= 0.5 * math.sin(math.pi / 16.0) + 1e-12
    assert cone_angle(t, "a") <= math.pi / 4.0 + 1e-12


def test_embed_regular():
    t = cayley_menger_embed([1.0] * 6)
    assert t.volume == pytest.approx(1.0 / (6.0 * math.sqrt(2.0)), abs=1e-12)
    for i, j in EDGE_PAIRS:
        assert t.edge_length(i, j) == pytest.approx(1.0, rel=1e-12)


def test_embed_flat_square():
    fd = cayley_menger_embed((1.0, 1.0, math.sqrt(2.0), math.sqrt(2.0), 1.0, 1.0))
    assert isinstance(fd, FlatDouble)
    assert fd.is_quadrilateral


def test_embed_infeasible():
    with pytest.raises(MetricInfeasible):
        cayley_menger_embed((1.0, 1.0, 1.0, 3.0, 1.0, 1.0))


def test_embed_round_trip_random():
    for seed in range(20):
        t = random_tetra(seed)
        t2 = cayley_menger_embed(t.edge_lengths)
        assert canonicalize(t).distance(canonicalize(t2)) < 1e-10


def test_canonical_invariance():
    rng = np.random.default_rng(7)
    t = random_tetra(3)
    base = canonicalize(t)
    pts = np.array(t.vertices)
    for k in range(20):
        q, _ = np.linalg.qr(rng.standard_normal((3, 3)))
        if np.linalg.det(q) < 0 and k % 2 == 0:
            q = -q  # mix rotations and reflections
        scale = math.exp(rng.normal())
        shift = rng.standard_normal(3)
        moved = pts @ q.T * scale + shift
        perm = rng.permutation(4)
        t2 = tetra_from_vertices(*moved[perm])
        assert base.distance(canonicalize(t2)) < 1e-12


def test_canonical_regular_is_ones():
    c = canonicalize(regular_tetra(2.5))
    assert max(abs(x - 1.0) for x in c.lengths) < 1e-12


def test_random_tetra_determinism_and_gauss_bonnet():
    a = random_tetra(42)
    b = random_tetra(42)
    assert a.vertices == b.vertices
    for seed in range(200):
        t = random_tetra(seed)
        assert abs(sum(t.curvatures) - 4 * math.pi) < 1e-12


def test_sampler_exhaustion():
    with pytest.raises(SamplerExhausted):
        random_tetra(1, conditioning=0.99, max_tries=300)


def test_cone_angle_permutation_consistent():
    t = random_tetra(11)
    perm = (2, 0, 3, 1)
    pts = [t.vertices[p] for p in perm]
    t2 = tetra_from_vertices(*pts)
    for new_label, old_label in enumerate(perm):
        assert cone_angle(t2, new_label) == pytest.approx(
            cone_angle(t, old_label), abs=1e-12
        )
