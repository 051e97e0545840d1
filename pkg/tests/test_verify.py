import math

import numpy as np
import pytest

from stretchnet.errors import LengthMismatch, VerticalSegment
from stretchnet.pipeline import stretch_and_unfold
from stretchnet.tree import enumerate_spanning_trees
from stretchnet.unfold import BoundaryCurve, boundary_curve, cut, develop
from stretchnet.verdict import Status
from stretchnet.verify import (
    certify_net,
    check_arm_conclusion,
    check_arm_hypotheses,
    check_self_intersection,
    check_turn_directions,
    decompose_boundary,
    decomposition_prefixes,
    face_centroids,
    polyline_self_intersections,
    winding_injectivity_check,
)

from conftest import winding_angle_sum


def synthetic_boundary(points):
    n = len(points)
    return BoundaryCurve(
        points=[(float(x), float(y)) for x, y in points],
        duals=list(range(n)),
        source_edges=[(0, 0)] * n,
        source_vertices=list(range(n)),
        provenance=[(0, i) for i in range(n)],
    )


# counterclockwise "flat hexagon": rightward along the bottom, leftward
# along the top, starting at its leftmost corner, no vertical segments
FLAT_HEXAGON = [(0, 0), (2, -0.1), (4, 0.05), (4.2, 1.0), (2, 1.1), (0.4, 0.9)]


def test_decompose_two_runs():
    D = decompose_boundary(synthetic_boundary(FLAT_HEXAGON))
    assert [r.direction for r in D.runs] == ["R", "L"]
    assert D.alternating
    assert D.runs[0].segments == (0, 1, 2)
    assert D.runs[1].segments == (3, 4, 5)


def test_decompose_vertical_segment():
    square = [(0, 0), (1, 0), (1, 1), (0, 1)]
    with pytest.raises(VerticalSegment):
        decompose_boundary(synthetic_boundary(square))


def test_decompose_eight_runs_zigzag():
    # closed zigzag whose open prefix has the run structure R1 L1 R2 L2
    # R3 L3 R4 (a final leftward run closes the curve); run counts are
    # derived from this constructed instance
    pts = [
        (0.0, 0.0), (4.0, 0.2),            # R1
        (2.5, 0.5),                        # L1
        (5.0, 0.9),                        # R2
        (1.5, 1.3),                        # L2
        (4.5, 1.7),                        # R3
        (2.0, 2.1),                        # L3
        (6.0, 2.6), (8.0, 2.5),            # R4 (two segments, then home)
    ]
    D = decompose_boundary(synthetic_boundary(pts))
    assert [r.direction for r in D.runs[:7]] == ["R", "L", "R", "L", "R", "L", "R"]
    assert len(D.runs) == 8 and D.runs[7].direction == "L"
    assert D.alternating
    assert sum(len(r.segments) for r in D.runs) == len(pts)


def test_turn_directions_two_run_convex_pass():
    D = decompose_boundary(synthetic_boundary(FLAT_HEXAGON))
    assert check_turn_directions(D).ok


def test_turn_directions_bad_switch_fails():
    # leftward run placed *below* the rightward one: the R->L switch
    # turns clockwise, violating the zigzag rule
    pts = [(0.0, 0.0), (3.0, 0.1), (2.0, -1.0), (-0.5, -1.1)]
    D = decompose_boundary(synthetic_boundary(pts))
    verdict = check_turn_directions(D)
    assert not verdict.ok
    assert verdict.witnesses


def test_self_intersection_convex_pass():
    verdict = check_self_intersection(synthetic_boundary(FLAT_HEXAGON))
    assert verdict.ok
    assert verdict.witnesses == ()


def test_self_intersection_bowtie():
    bowtie = [(0, 0), (2, 2), (2, 0), (0, 2)]
    verdict = check_self_intersection(synthetic_boundary(bowtie))
    assert verdict.status is Status.OVERLAP
    assert len(verdict.witnesses) == 1
    w = verdict.witnesses[0]
    assert w.point == pytest.approx((1.0, 1.0))


def test_polyline_open_vs_closed():
    # simple open arc whose closing chord crosses its middle segment
    pts = [(0, 0), (1, 2), (2, -0.5), (3, 2)]
    assert polyline_self_intersections(pts, closed=False) == []
    assert polyline_self_intersections(pts, closed=True)


def test_winding_injectivity_simple_ccw():
    verdict = winding_injectivity_check(synthetic_boundary(FLAT_HEXAGON))
    assert verdict.ok
    assert verdict.checks["winding_in_0_1"]
    assert verdict.checks["ccw_orientation"]


def test_winding_injectivity_clockwise_flagged():
    cw = list(reversed(FLAT_HEXAGON))
    verdict = winding_injectivity_check(synthetic_boundary(cw))
    assert verdict.status is Status.PRECONDITION_FAILURE
    assert not verdict.checks["ccw_orientation"]


def test_winding_injectivity_double_cover():
    # expected winding of the doubly-traversed square core frozen from
    # the angle-summation oracle
    sq = [(1, 0.01), (0.02, 1), (-1, -0.015), (0.01, -1)]
    twice = sq + [(x + 0.003, y + 0.004) for x, y in sq]
    assert winding_angle_sum(twice, (0.0, 0.0)) == 2
    verdict = winding_injectivity_check(
        synthetic_boundary(twice), extra_points=[(0.0, 0.0)]
    )
    assert verdict.status is Status.OVERLAP
    assert any("winding=2" in w.note for w in verdict.witnesses)


# -- arm-style chain checks -------------------------------------------------


def chain_from_args(origin, lengths, args):
    pts = [origin]
    for L, a in zip(lengths, args):
        x, y = pts[-1]
        pts.append((x + L * math.cos(a), y + L * math.sin(a)))
    return pts


def test_arm_hypotheses_identical_chains():
    u = chain_from_args((0, 0), [1, 1, 1], [0.1, -0.05, 0.2])
    assert check_arm_hypotheses(u, list(u))


def test_arm_hypotheses_rotated_chain():
    lengths = [1.0, 0.7, 1.3]
    u_args = [-0.1, 0.0, 0.05]
    v_args = [a + math.pi / 20 for a in u_args]
    u = chain_from_args((0, 0), lengths, u_args)
    v = chain_from_args((0, 0), lengths, v_args)
    assert check_arm_hypotheses(u, v)


def test_arm_hypotheses_window_violation():
    # pi/9 > pi/10: outside the almost-horizontal window
    u = chain_from_args((0, 0), [1, 1], [0.0, math.pi / 9])
    v = chain_from_args((0, 0), [1, 1], [0.0, math.pi / 9])
    assert not check_arm_hypotheses(u, v)


def test_arm_hypotheses_order_violation():
    u = chain_from_args((0, 0), [1.0], [0.1])
    v = chain_from_args((0, 0), [1.0], [-0.1])
    assert not check_arm_hypotheses(u, v)


def test_arm_hypotheses_length_mismatch():
    with pytest.raises(LengthMismatch):
        check_arm_hypotheses([(0, 0), (1, 0)], [(0, 0), (1, 0), (2, 0)])


def test_arm_conclusion_mirror_pair():
    # one segment each, mirrored: the endpoint difference is exactly vertical
    u = chain_from_args((0, 0), [1.0], [-math.pi / 20])
    v = chain_from_args((0, 0), [1.0], [+math.pi / 20])
    assert check_arm_hypotheses(u, v)
    assert check_arm_conclusion(u, v)


def test_arm_conclusion_coincident_endpoints_rejected():
    u = chain_from_args((0, 0), [1.0, 1.0], [0.05, -0.05])
    with pytest.raises(ValueError):
        check_arm_conclusion(u, list(u))


def random_arm_pair(rng, m_max=8):
    m = int(rng.integers(1, m_max + 1))
    lengths = rng.uniform(0.2, 1.0, m)
    bound = math.pi / 10
    a = rng.uniform(-bound, bound, (2, m))
    u = chain_from_args((0.0, 0.0), lengths, np.minimum(a[0], a[1]))
    v = chain_from_args((0.0, 0.0), lengths, np.maximum(a[0], a[1]))
    return u, v


def test_arm_property_small_batch():
    rng = np.random.default_rng(42)
    for _ in range(500):
        u, v = random_arm_pair(rng)
        assert check_arm_hypotheses(u, v)
        assert check_arm_conclusion(u, v)


# -- full certification ------------------------------------------------------


def test_certify_boundary_net_and_prefixes(icosa):
    run = stretch_and_unfold(icosa)
    assert run.verdict.status is Status.NET
    D = decompose_boundary(run.boundary)
    assert D.runs[0].direction == "R"
    assert D.runs[0].segments[0] == 0
    for prefix in decomposition_prefixes(run.boundary, D):
        assert polyline_self_intersections(prefix, closed=False) == []


def test_certify_overlap_reports_traversal_first_witness():
    from stretchnet.oracle import find_overlap_tetrahedron

    ex = find_overlap_tetrahedron()
    assert ex is not None
    v = ex.verdict
    assert v.status is Status.OVERLAP
    seg_pairs = [(w.seg_a, w.seg_b) for w in v.witnesses if w.seg_a is not None]
    assert seg_pairs == sorted(seg_pairs, key=lambda ab: ab[1])


def test_lemma2_consistency_over_census(tetra):
    # whenever self-intersection passes with ccw orientation, the winding
    # check must also pass; tested over every unfolding of the tetrahedron
    from stretchnet.transform import apply_stretch, plan_stretch

    Q = apply_stretch(tetra, plan_stretch(tetra))
    for T in enumerate_spanning_trees(Q):
        L = develop(cut(Q, T))
        B = boundary_curve(L)
        si = check_self_intersection(B)
        wv = winding_injectivity_check(B, extra_points=face_centroids(L))
        area = sum(
            B.points[i][0] * B.points[(i + 1) % len(B)][1]
            - B.points[(i + 1) % len(B)][0] * B.points[i][1]
            for i in range(len(B))
        )
        if si.ok and area > 0:
            assert wv.ok


def test_certify_net_statuses(tetra):
    run = stretch_and_unfold(tetra)
    verdict = certify_net(run.layout)
    assert verdict.status is Status.NET
    assert verdict.witnesses == ()
    assert set(verdict.checks) == {
        "boundary_decomposition",
        "segment_tilt",
        "turn_directions",
        "self_intersection",
        "winding_in_0_1",
        "ccw_orientation",
    }


def test_certify_unstretched_is_not_net(tetra):
    # without stretching the structural checks fail (or an overlap shows
    # up); either way the verdict cannot be a net certificate
    for T in enumerate_spanning_trees(tetra, cap=3):
        verdict = certify_net(develop(cut(tetra, T)))
        assert verdict.status in (Status.PRECONDITION_FAILURE, Status.OVERLAP)


def test_two_face_strip_certifies_net():
    # a strip of two skinny near-horizontal triangles sharing one fold
    # edge: two convex polygons joined along an edge cannot overlap, and
    # with this geometry the structural checks hold too
    import numpy as np

    from stretchnet.unfold import BoundaryEdge, CutSurface, develop

    pts = {
        0: (0.0, 0.0, 0.0),
        1: (10.0, 0.1, 0.05),
        2: (4.0, 0.3, 0.1),
        3: (14.0, 0.35, 0.12),
    }
    face_a, face_b = (0, 1, 2), (1, 3, 2)
    boundary = (
        BoundaryEdge(0, 0, 0, 1, (0, 1), 0),
        BoundaryEdge(1, 0, 1, 3, (1, 3), 1),
        BoundaryEdge(1, 1, 3, 2, (2, 3), 2),
        BoundaryEdge(0, 2, 2, 0, (0, 2), 3),
    )
    S = CutSurface(
        faces=(face_a, face_b),
        face_points3d=(
            np.array([pts[i] for i in face_a]),
            np.array([pts[i] for i in face_b]),
        ),
        cut_edges=frozenset({(0, 1), (1, 3), (2, 3), (0, 2)}),
        fold_edges=frozenset({(1, 2)}),
        fold_adjacency={(1, 2): ((0, 1), (1, 2))},
        boundary=boundary,
    )
    verdict = certify_net(develop(S))
    assert verdict.status is Status.NET
