"""Certification that an unfolding is a net.

The certificate stacks four checks on the boundary polyline: it splits
into alternating rightward/leftward runs of nearly horizontal segments,
the run junctions turn the required way, no two segments collide, and
the winding number around sampled interior points stays in {0, 1}.  The
last two alone already imply injectivity of the unfolding (preimage
count equals winding number for isometric immersions of a disc); the
first two are the structural facts the stretching is meant to buy, so
their failure is reported as a precondition problem rather than overlap.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import LengthMismatch, VerticalSegment
from .geometry import (
    EPS,
    EndpointPolicy,
    arg,
    crossing_point,
    normalize_angle,
    segments_intersect,
)
from .unfold import BoundaryCurve, PlanarLayout, boundary_curve
from .verdict import Status, Verdict, Witness

#: Every developed edge must stay within this angle of horizontal.
TILT_BOUND = math.pi / 10.0


@dataclass(frozen=True)
class Run:
    direction: str          # "R" (dx > 0 on every segment) or "L"
    segments: tuple


@dataclass(frozen=True)
class Turn:
    corner: int             # corner index where the runs meet
    from_dir: str
    to_dir: str
    angle: float            # signed turn in (-pi, pi]; > 0 is counterclockwise


@dataclass(frozen=True)
class BoundaryDecomposition:
    runs: tuple
    turns: tuple
    max_tilt: float
    leftmost_corner: int = 0

    @property
    def alternating(self) -> bool:
        n = len(self.runs)
        return n >= 2 and all(
            self.runs[i].direction != self.runs[(i + 1) % n].direction for i in range(n)
        )


def _tilt(v: tuple) -> float:
    a = abs(arg(v))
    return min(a, math.pi - a)


def decompose_boundary(B: BoundaryCurve) -> BoundaryDecomposition:
    """Split the closed boundary into maximal rightward/leftward runs.

    Every segment must have |dx| above tolerance; a near-vertical segment
    raises VerticalSegment, the signature of insufficient stretching.
    Runs are listed in traversal order beginning with the run containing
    segment 0, and each junction's signed turn angle is recorded.
    """
    n = len(B)
    dirs = []
    max_tilt = 0.0
    for i in range(n):
        dx, dy = B.segment_vector(i)
        if abs(dx) <= EPS:
            raise VerticalSegment(f"segment {i} has |dx| = {abs(dx):.3e}")
        dirs.append("R" if dx > 0 else "L")
        max_tilt = max(max_tilt, _tilt((dx, dy)))

    leftmost = min(range(n), key=lambda i: (B.points[i][0], B.points[i][1]))
    breaks = [i for i in range(n) if dirs[i] != dirs[i - 1]]
    if not breaks:
        return BoundaryDecomposition((Run(dirs[0], tuple(range(n))),), (), max_tilt, leftmost)

    runs = []
    for k, start in enumerate(breaks):
        end = breaks[(k + 1) % len(breaks)]
        segs = []
        i = start
        while i != end:
            segs.append(i)
            i = (i + 1) % n
        runs.append(Run(dirs[start], tuple(segs)))
    # rotate so the run containing segment 0 comes first
    for k, run in enumerate(runs):
        if 0 in run.segments:
            runs = runs[k:] + runs[:k]
            break

    turns = []
    for k, run in enumerate(runs):
        nxt = runs[(k + 1) % len(runs)]
        i_prev, i_next = run.segments[-1], nxt.segments[0]
        angle = normalize_angle(arg(B.segment_vector(i_next)) - arg(B.segment_vector(i_prev)))
        turns.append(Turn(i_next, run.direction, nxt.direction, angle))
    return BoundaryDecomposition(tuple(runs), tuple(turns), max_tilt, leftmost)


def check_turn_directions(D: BoundaryDecomposition) -> Verdict:
    """Every switch right->left must turn counterclockwise, left->right clockwise.

    The closing junction at the leftmost corner is exempt: the run
    sequence starts and ends there, and at a global extreme the curve is
    locally convex, so that switch always turns counterclockwise.
    """
    witnesses = []
    for t in D.turns:
        if t.from_dir == t.to_dir or t.corner == D.leftmost_corner:
            continue
        ccw = t.angle > 0.0
        want_ccw = t.from_dir == "R"
        if ccw != want_ccw:
            witnesses.append(
                Witness(
                    note=(
                        f"corner {t.corner}: {t.from_dir}->{t.to_dir} turns "
                        f"{'ccw' if ccw else 'cw'} by {t.angle!r}"
                    )
                )
            )
    if witnesses:
        return Verdict(Status.PRECONDITION_FAILURE, tuple(witnesses), {"turn_directions": False})
    return Verdict(Status.NET, (), {"turn_directions": True})


def _pairwise_segment_distances(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """All-pairs distances between segments A[i]->B[i] and A[j]->B[j].

    Zero where a pair crosses transversally, else the minimum of the four
    endpoint-to-segment distances.  Vectorized counterpart of
    geometry.segment_distance.
    """
    m = len(A)
    D = B - A

    def cross(v, w):
        return v[..., 0] * w[..., 1] - v[..., 1] * w[..., 0]

    Ai = A[:, None, :]
    Di = D[:, None, :]
    o1 = cross(Di, A[None, :, :] - Ai)
    o2 = cross(Di, B[None, :, :] - Ai)
    proper = (
        ((o1 > 0) != (o2 > 0))
        & ((o1.T > 0) != (o2.T > 0))
        & (o1 != 0) & (o2 != 0) & (o1.T != 0) & (o2.T != 0)
    )

    def point_to_segs(P):
        # P[j] against segment i: (m, m) distances
        rel = P[None, :, :] - A[:, None, :]
        L2 = np.maximum((D * D).sum(axis=1), 1e-300)
        t = np.clip((rel * D[:, None, :]).sum(axis=2) / L2[:, None], 0.0, 1.0)
        closest = A[:, None, :] + t[..., None] * D[:, None, :]
        return np.linalg.norm(P[None, :, :] - closest, axis=2)

    PA = point_to_segs(A)  # PA[i, j] = distance of endpoint A_j to segment i
    PB = point_to_segs(B)
    dist = np.minimum(np.minimum(PA, PB), np.minimum(PA.T, PB.T))
    return np.where(proper, 0.0, dist)


def polyline_self_intersections(points: Sequence, closed: bool) -> list:
    """Witnesses for all illegal contacts of a polyline with itself.

    Non-consecutive segments may not come within EPS of each other;
    consecutive ones may meet only at their shared endpoint.  Witnesses
    are ordered by discovery along the traversal (the first one is where
    a pen tracing the curve first touches ink), matching how a first
    self-contact would be located while drawing the boundary.
    """
    pts = [(float(p[0]), float(p[1])) for p in points]
    m = len(pts) if closed else len(pts) - 1

    def seg(i):
        return pts[i], pts[(i + 1) % len(pts)]

    A = np.array([seg(i)[0] for i in range(m)])
    B = np.array([seg(i)[1] for i in range(m)])
    dist = _pairwise_segment_distances(A, B)

    raw = []
    for j in range(m):
        for i in range(j):
            consecutive = i + 1 == j or (closed and i == 0 and j == m - 1)
            a1, a2 = seg(i)
            b1, b2 = seg(j)
            if consecutive:
                hit = segments_intersect(a1, a2, b1, b2, EndpointPolicy.EXCLUDE_SHARED_ENDPOINT)
            elif dist[i, j] > EPS:
                continue
            else:
                hit = True
            if hit:
                point, t = crossing_point(a1, a2, b1, b2)
                raw.append((j, t, i, point))
    raw.sort()
    return [Witness(seg_a=i, seg_b=j, point=point) for j, t, i, point in raw]


def check_self_intersection(B: BoundaryCurve) -> Verdict:
    """Overlap verdict when any two boundary segments collide.

    Touching within EPS counts as overlap (conservative); consecutive
    segments are only allowed their shared corner.  The witness list is
    ordered along the traversal, so the first witness is the analogue of
    the first self-contact point reached from the start corner.
    """
    witnesses = polyline_self_intersections(B.points, closed=True)
    if witnesses:
        return Verdict(Status.OVERLAP, tuple(witnesses), {"self_intersection": False})
    return Verdict(Status.NET, (), {"self_intersection": True})


def _winding_grid(points: np.ndarray, samples: np.ndarray) -> np.ndarray:
    """Winding numbers of a closed polyline around many sample points.

    Vectorized version of the half-open crossing rule used by
    geometry.winding_number; both must agree segment for segment.
    """
    w = np.zeros(len(samples), dtype=int)
    px, py = samples[:, 0], samples[:, 1]
    n = len(points)
    for i in range(n):
        sx, sy = points[i]
        tx, ty = points[(i + 1) % n]
        left = (tx - sx) * (py - sy) - (px - sx) * (ty - sy)
        if sy <= ty:
            w += ((sy <= py) & (ty > py) & (left > 0.0)).astype(int)
        if sy >= ty:
            w -= ((sy > py) & (ty <= py) & (left < 0.0)).astype(int)
    return w


def _distance_mask(points: np.ndarray, samples: np.ndarray, radius: float) -> np.ndarray:
    """True for samples farther than ``radius`` from every segment."""
    keep = np.ones(len(samples), dtype=bool)
    n = len(points)
    for i in range(n):
        a = points[i]
        b = points[(i + 1) % n]
        d = b - a
        L2 = float(d @ d)
        rel = samples - a
        t = np.clip((rel @ d) / L2, 0.0, 1.0) if L2 > 0 else np.zeros(len(samples))
        closest = a + t[:, None] * d
        dist = np.linalg.norm(samples - closest, axis=1)
        keep &= dist > radius
    return keep


def winding_injectivity_check(
    B: BoundaryCurve, samples: int = 64, extra_points: Iterable = ()
) -> Verdict:
    """Windings over a samples x samples grid (plus probes) must lie in {0, 1}.

    Winding 0 means outside, 1 means covered once.  Any value >= 2 is a
    double cover (overlap); negative values mean the curve runs clockwise,
    which is flagged as an orientation precondition failure, not a net.
    Points within EPS of the curve are skipped.
    """
    pts = np.asarray(B.points, dtype=float)
    lo, hi = pts.min(axis=0), pts.max(axis=0)
    xs = np.linspace(lo[0], hi[0], samples)
    ys = np.linspace(lo[1], hi[1], samples)
    gx, gy = np.meshgrid(xs, ys)
    probes = np.column_stack([gx.ravel(), gy.ravel()])
    extra = np.asarray(list(extra_points), dtype=float).reshape(-1, 2)
    if len(extra):
        probes = np.vstack([probes, extra])
    keep = _distance_mask(pts, probes, EPS)
    probes = probes[keep]
    w = _winding_grid(pts, probes)

    checks = {
        "winding_in_0_1": bool(((w == 0) | (w == 1)).all()),
        "ccw_orientation": bool((w >= 0).all()),
    }
    if checks["winding_in_0_1"]:
        return Verdict(Status.NET, (), checks)
    witnesses = tuple(
        Witness(point=(float(p[0]), float(p[1])), note=f"winding={int(k)}")
        for p, k in zip(probes, w)
        if k < 0 or k > 1
    )
    status = Status.OVERLAP if int(w.max()) > 1 else Status.PRECONDITION_FAILURE
    return Verdict(status, witnesses, checks)


# -- two-chain (arm) property oracles -------------------------------------


def check_arm_hypotheses(u: Sequence, v: Sequence) -> bool:
    """Whether two broken lines satisfy the arm-style hypotheses.

    Required: common start point, pairwise equal segment lengths, every
    segment argument inside (-pi/10, pi/10), and the v-chain's arguments
    dominating the u-chain's position by position.
    """
    if len(u) != len(v):
        raise LengthMismatch(f"chains have {len(u)} and {len(v)} points")
    if len(u) < 2:
        raise ValueError("chains need at least two points")
    if math.hypot(u[0][0] - v[0][0], u[0][1] - v[0][1]) > EPS:
        return False
    bound = math.pi / 10.0
    for j in range(1, len(u)):
        du = (u[j][0] - u[j - 1][0], u[j][1] - u[j - 1][1])
        dv = (v[j][0] - v[j - 1][0], v[j][1] - v[j - 1][1])
        lu, lv = math.hypot(*du), math.hypot(*dv)
        if abs(lu - lv) > EPS:
            return False
        au, av = arg(du), arg(dv)
        if not (-bound < au < bound and -bound < av < bound):
            return False
        if av < au:
            return False
    return True


def check_arm_conclusion(u: Sequence, v: Sequence) -> bool:
    """Whether the two chains avoid crossing and end almost vertically apart.

    Passing means: no contact between the chains except at the shared
    start point, and arg(v_end - u_end) inside (2*pi/5, 3*pi/5).  Touching
    within EPS anywhere else counts as a crossing (conservative).
    """
    if len(u) != len(v):
        raise LengthMismatch(f"chains have {len(u)} and {len(v)} points")
    m = len(u) - 1
    end_diff = (v[m][0] - u[m][0], v[m][1] - u[m][1])
    if math.hypot(*end_diff) <= EPS:
        raise ValueError("chain endpoints coincide; conclusion undefined")
    a = arg(end_diff)
    if not (math.pi / 2 - math.pi / 10 < a < math.pi / 2 + math.pi / 10):
        return False
    for i in range(m):
        for j in range(m):
            policy = (
                EndpointPolicy.EXCLUDE_SHARED_ENDPOINT
                if i == 0 and j == 0
                else EndpointPolicy.INCLUDE
            )
            if segments_intersect(u[i], u[i + 1], v[j], v[j + 1], policy):
                return False
    return True


# -- full certification ----------------------------------------------------


def certify_boundary(B: BoundaryCurve, interior_probes: Iterable = ()) -> Verdict:
    """Run the full check stack on a boundary polyline.

    Overlap evidence (segment collisions or winding >= 2) dominates the
    verdict; otherwise all checks must pass for a net.
    """
    checks: dict = {}
    witnesses: list = []

    decomposition = None
    try:
        decomposition = decompose_boundary(B)
        checks["boundary_decomposition"] = decomposition.alternating
        if not decomposition.alternating:
            witnesses.append(Witness(note="runs do not alternate rightward/leftward"))
    except VerticalSegment as exc:
        checks["boundary_decomposition"] = False
        witnesses.append(Witness(note=str(exc)))

    if decomposition is not None:
        checks["segment_tilt"] = decomposition.max_tilt < TILT_BOUND
        if not checks["segment_tilt"]:
            witnesses.append(
                Witness(note=f"segment tilt {decomposition.max_tilt!r} exceeds pi/10")
            )
        turn = check_turn_directions(decomposition)
        checks.update(turn.checks)
        witnesses.extend(turn.witnesses)

    self_int = check_self_intersection(B)
    checks.update(self_int.checks)
    witnesses.extend(self_int.witnesses)

    winding = winding_injectivity_check(B, extra_points=interior_probes)
    checks.update(winding.checks)
    witnesses.extend(winding.witnesses)

    if self_int.status is Status.OVERLAP or winding.status is Status.OVERLAP:
        status = Status.OVERLAP
    elif all(checks.values()):
        status = Status.NET
    else:
        status = Status.PRECONDITION_FAILURE
    return Verdict(status, tuple(witnesses), checks)


def face_centroids(L: PlanarLayout) -> list:
    return [
        (sum(x for x, _ in pts) / len(pts), sum(y for _, y in pts) / len(pts))
        for pts in L.face_points
    ]


def certify_net(L: PlanarLayout, S=None) -> Verdict:
    """Certify a developed layout: net, overlap (with witnesses), or
    precondition failure.  Face centroids are probed in addition to the
    winding grid so a doubly covered face cannot be missed."""
    B = boundary_curve(L, S)
    return certify_boundary(B, interior_probes=face_centroids(L))


def decomposition_prefixes(B: BoundaryCurve, D: BoundaryDecomposition) -> list:
    """Open polylines R_1, R_1 L_1 R_2, ... ending at each rightward run.

    Only meaningful when the decomposition starts at segment 0 with a
    rightward run (the normal situation for an increasing-tree boundary
    traversed from the minimal corner).
    """
    if D.runs[0].segments[0] != 0:
        raise ValueError("decomposition does not start at segment 0")
    prefixes = []
    for k, run in enumerate(D.runs):
        if run.direction != "R":
            continue
        last = run.segments[-1]
        prefixes.append([B.points[i] for i in range(0, last + 1)] + [B.points[(last + 1) % len(B)]])
    return prefixes
