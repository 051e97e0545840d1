"""Convex polyhedron representation, OFF I/O, and intrinsic angles.

A Polyhedron is immutable after construction and validated up front:
closed orientable surface with sphere topology, planar convex faces
oriented counterclockwise as seen from outside, every vertex an extreme
point of the hull, and total intrinsic angle below 2*pi at each vertex.
Coordinates are normalized to unit bounding-box diameter on ingestion.
"""

from __future__ import annotations

import math
import warnings
from typing import IO, Mapping, Union

import numpy as np
from scipy.spatial import ConvexHull, QhullError

from . import verdict as vd
from .errors import (
    CoplanarFacesWarning,
    NonPlanarFace,
    NotAnEdge,
    NotClosed,
    NotConvex,
    OffParseError,
)
from .geometry import EPS, TWO_PI


class Polyhedron:
    """Validated convex mesh with derived edge and half-edge structure.

    Attributes
    ----------
    vertices : (V, 3) float array of coordinates.
    faces : tuple of vertex-index cycles, counterclockwise from outside.
    edges : tuple of (u, v) pairs with u < v, sorted.
    edge_faces : per edge, the pair of incident face indices.
    n_edges : edge count (the N of the stretch bound pi / (20 N)).
    """

    def __init__(self, vertices: np.ndarray, faces: tuple, _validated: bool = False):
        if not _validated:
            raise TypeError("use Polyhedron.build(...) or load_off(...)")
        self.vertices = vertices
        self.faces = faces
        self._derive()

    # -- construction -------------------------------------------------

    @classmethod
    def build(cls, vertices, faces, normalize: bool = True) -> "Polyhedron":
        """Validate raw vertex/face data and construct a Polyhedron.

        Faces may arrive with inconsistent winding; each cycle is
        reoriented to counterclockwise-from-outside using the body
        centroid, then rotated so its smallest vertex index comes first.
        """
        verts = np.asarray(vertices, dtype=float)
        if verts.ndim != 2 or verts.shape[1] != 3:
            raise ValueError("vertices must be an (V, 3) array")
        if not np.isfinite(verts).all():
            raise ValueError("vertex coordinates must be finite")
        nv = len(verts)
        if nv < 4:
            raise NotClosed("a closed polyhedron needs at least 4 vertices")

        cycles = []
        for i, f in enumerate(faces):
            cyc = tuple(int(v) for v in f)
            if len(cyc) < 3:
                raise ValueError(f"face {i} has fewer than 3 vertices")
            if len(set(cyc)) != len(cyc):
                raise ValueError(f"face {i} repeats a vertex")
            if min(cyc) < 0 or max(cyc) >= nv:
                raise ValueError(f"face {i} references a missing vertex")
            cycles.append(cyc)

        if normalize:
            lo, hi = verts.min(axis=0), verts.max(axis=0)
            diag = float(np.linalg.norm(hi - lo))
            if diag <= 0.0:
                raise NotConvex("all vertices coincide")
            verts = (verts - (lo + hi) / 2.0) / diag

        centroid = verts.mean(axis=0)
        diameter = float(np.linalg.norm(verts.max(axis=0) - verts.min(axis=0)))
        tol = EPS * diameter

        oriented = []
        for i, cyc in enumerate(cycles):
            pts = verts[list(cyc)]
            normal = _newell_normal(pts)
            nrm = np.linalg.norm(normal)
            if nrm <= tol:
                raise NonPlanarFace(f"face {i} is degenerate (zero area)")
            normal = normal / nrm
            # planarity: residual against the best-fit plane
            rel = pts - pts.mean(axis=0)
            dev = float(np.abs(rel @ normal).max())
            if dev > tol:
                raise NonPlanarFace(f"face {i} deviates {dev:.3e} from planar (tol {tol:.3e})")
            side = float(normal @ (pts.mean(axis=0) - centroid))
            if abs(side) <= tol:
                raise NotConvex(f"face {i} passes through the body centroid")
            if side < 0.0:
                cyc = tuple(reversed(cyc))
                normal = -normal
            if not _face_is_convex(verts[list(cyc)], normal, tol):
                raise ValueError(f"face {i} is not a convex polygon")
            k = cyc.index(min(cyc))
            oriented.append(cyc[k:] + cyc[:k])

        poly = cls(verts, tuple(oriented), _validated=True)
        poly._validate(tol)
        return poly

    def _derive(self):
        half: dict[tuple[int, int], tuple[int, int]] = {}
        for fi, cyc in enumerate(self.faces):
            k = len(cyc)
            for pos in range(k):
                a, b = cyc[pos], cyc[(pos + 1) % k]
                if (a, b) in half:
                    raise NotClosed(f"directed edge {a}->{b} appears twice (inconsistent orientation)")
                half[(a, b)] = (fi, pos)
        edge_faces: dict[tuple[int, int], list[int]] = {}
        for (a, b), (fi, _) in half.items():
            edge_faces.setdefault((min(a, b), max(a, b)), []).append(fi)
        for e, fs in edge_faces.items():
            if len(fs) != 2:
                raise NotClosed(f"edge {e} borders {len(fs)} face(s), expected 2")
        self.half = half
        self.edges = tuple(sorted(edge_faces))
        self.edge_index = {e: i for i, e in enumerate(self.edges)}
        self.edge_faces = tuple(tuple(edge_faces[e]) for e in self.edges)
        adj: list[set[int]] = [set() for _ in range(len(self.vertices))]
        for a, b in self.edges:
            adj[a].add(b)
            adj[b].add(a)
        self.adjacency = tuple(tuple(sorted(s)) for s in adj)

    def _validate(self, tol: float):
        nv, ne, nf = len(self.vertices), len(self.edges), len(self.faces)
        if nv - ne + nf != 2:
            raise NotClosed(f"Euler characteristic V-E+F = {nv - ne + nf}, expected 2")
        if any(len(a) == 0 for a in self.adjacency):
            raise NotClosed("isolated vertex")
        # connectivity of the edge graph
        seen = {0}
        stack = [0]
        while stack:
            v = stack.pop()
            for u in self.adjacency[v]:
                if u not in seen:
                    seen.add(u)
                    stack.append(u)
        if len(seen) != nv:
            raise NotClosed("edge graph is disconnected")

        # convexity: every vertex inside (or on) every face's supporting plane
        for fi, cyc in enumerate(self.faces):
            pts = self.vertices[list(cyc)]
            normal = _newell_normal(pts)
            normal = normal / np.linalg.norm(normal)
            offset = float(normal @ pts[0])
            worst = float((self.vertices @ normal).max()) - offset
            if worst > tol:
                raise NotConvex(f"a vertex lies {worst:.3e} outside the plane of face {fi}")

        # every vertex is an extreme point of the hull
        try:
            hull = ConvexHull(self.vertices)
        except QhullError as exc:
            raise NotConvex(f"degenerate vertex set: {exc}") from exc
        if len(set(hull.vertices)) != nv:
            missing = sorted(set(range(nv)) - set(hull.vertices))
            raise NotConvex(f"vertices {missing} are not extreme points of the hull")

        # positive curvature at every vertex
        for v in range(nv):
            if self.cone_angle(v) >= TWO_PI - EPS:
                raise NotConvex(f"vertex {v} has total intrinsic angle >= 2*pi")

        # accepted but reported: coplanar neighbors across an edge
        for e, (f, g) in zip(self.edges, self.edge_faces):
            nf_ = _newell_normal(self.vertices[list(self.faces[f])])
            ng_ = _newell_normal(self.vertices[list(self.faces[g])])
            cosang = float(nf_ @ ng_ / (np.linalg.norm(nf_) * np.linalg.norm(ng_)))
            if cosang >= 1.0 - 1e-12:
                warnings.warn(
                    f"faces {f} and {g} are coplanar across edge {e}; kept unmerged",
                    CoplanarFacesWarning,
                    stacklevel=3,
                )

    # -- queries -------------------------------------------------------

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def n_faces(self) -> int:
        return len(self.faces)

    @property
    def x(self) -> np.ndarray:
        return self.vertices[:, 0]

    def edge_vector(self, e: tuple[int, int]) -> np.ndarray:
        return self.vertices[e[1]] - self.vertices[e[0]]

    def has_edge(self, a: int, b: int) -> bool:
        return (min(a, b), max(a, b)) in self.edge_index

    def corner_angle(self, face: int, pos: int) -> float:
        """Interior angle of ``face`` at cycle position ``pos``."""
        cyc = self.faces[face]
        k = len(cyc)
        p = self.vertices[cyc[pos]]
        u = self.vertices[cyc[(pos + 1) % k]] - p
        w = self.vertices[cyc[(pos - 1) % k]] - p
        return _angle_between(u, w)

    def ccw_neighbor(self, a: int, b: int) -> tuple[int, int]:
        """From edge a->b, the next neighbor of ``a`` counterclockwise (seen from outside).

        Returns (next_vertex, face crossed), where the face is the one
        containing the directed edge a->b.
        """
        fi, pos = self.half[(a, b)]
        cyc = self.faces[fi]
        prev = cyc[(pos - 1) % len(cyc)]
        return prev, fi

    def vertex_star(self, a: int) -> tuple[int, ...]:
        """Neighbors of ``a`` in counterclockwise order (seen from outside)."""
        b0 = self.adjacency[a][0]
        star = [b0]
        cur = b0
        while True:
            cur, _ = self.ccw_neighbor(a, cur)
            if cur == b0:
                break
            star.append(cur)
            if len(star) > len(self.adjacency[a]):
                raise NotClosed(f"vertex {a} has a broken edge fan")
        return tuple(star)

    def cone_angle(self, a: int) -> float:
        """Total intrinsic angle around vertex ``a``."""
        total = 0.0
        for fi, cyc in enumerate(self.faces):
            if a in cyc:
                total += self.corner_angle(fi, cyc.index(a))
        return total


def _newell_normal(pts: np.ndarray) -> np.ndarray:
    nxt = np.roll(pts, -1, axis=0)
    return np.array(
        [
            float(((pts[:, 1] - nxt[:, 1]) * (pts[:, 2] + nxt[:, 2])).sum()),
            float(((pts[:, 2] - nxt[:, 2]) * (pts[:, 0] + nxt[:, 0])).sum()),
            float(((pts[:, 0] - nxt[:, 0]) * (pts[:, 1] + nxt[:, 1])).sum()),
        ]
    )


def _face_is_convex(pts: np.ndarray, normal: np.ndarray, tol: float) -> bool:
    k = len(pts)
    for i in range(k):
        u = pts[(i + 1) % k] - pts[i]
        w = pts[(i + 2) % k] - pts[(i + 1) % k]
        if float(np.cross(u, w) @ normal) < -tol:
            return False
    return True


def _angle_between(u: np.ndarray, w: np.ndarray) -> float:
    # atan2 form stays accurate for the tiny angles of stretched slivers
    return math.atan2(float(np.linalg.norm(np.cross(u, w))), float(u @ w))


# -- OFF format ---------------------------------------------------------


def load_off(source: Union[str, bytes, IO]) -> Polyhedron:
    """Parse ASCII OFF text into a validated, normalized Polyhedron.

    Accepts a string, bytes, or a readable file object.  The edge count
    field is ignored and recomputed.  Comment lines (``#``) and blank
    lines are skipped.  Parse failures report the 1-based line number.
    """
    if hasattr(source, "read"):
        text = source.read()
    else:
        text = source
    if isinstance(text, bytes):
        text = text.decode("utf-8")

    lines = []  # (lineno, payload)
    for no, raw in enumerate(text.splitlines(), start=1):
        payload = raw.split("#", 1)[0].strip()
        if payload:
            lines.append((no, payload))

    if not lines:
        raise OffParseError(1, "empty input")
    it = iter(lines)
    no, header = next(it)
    if header != "OFF":
        raise OffParseError(no, f"expected 'OFF' header, got {header!r}")
    try:
        no, counts = next(it)
    except StopIteration:
        raise OffParseError(no, "missing vertex/face/edge counts") from None
    parts = counts.split()
    if len(parts) != 3:
        raise OffParseError(no, "expected 'V F E' counts")
    try:
        nv, nf = int(parts[0]), int(parts[1])
        int(parts[2])
    except ValueError:
        raise OffParseError(no, f"bad counts {counts!r}") from None

    verts = []
    for _ in range(nv):
        try:
            no, row = next(it)
        except StopIteration:
            raise OffParseError(no, f"expected {nv} vertex lines, file ended early") from None
        toks = row.split()
        if len(toks) != 3:
            raise OffParseError(no, f"expected 3 coordinates, got {len(toks)}")
        try:
            verts.append([float(t) for t in toks])
        except ValueError:
            raise OffParseError(no, f"bad coordinate in {row!r}") from None

    faces = []
    for _ in range(nf):
        try:
            no, row = next(it)
        except StopIteration:
            raise OffParseError(no, f"expected {nf} face lines, file ended early") from None
        toks = row.split()
        try:
            k = int(toks[0])
            idx = [int(t) for t in toks[1:]]
        except ValueError:
            raise OffParseError(no, f"bad face line {row!r}") from None
        if len(idx) != k:
            raise OffParseError(no, f"face declares {k} vertices but lists {len(idx)}")
        faces.append(tuple(idx))

    return Polyhedron.build(np.array(verts, dtype=float), faces, normalize=True)


def export_off(P: Polyhedron) -> str:
    """Serialize a Polyhedron to OFF text (17-significant-digit floats)."""
    out = ["OFF", f"{P.n_vertices} {P.n_faces} {P.n_edges}"]
    for v in P.vertices:
        out.append(" ".join(format(float(c), ".17g") for c in v))
    for cyc in P.faces:
        out.append(str(len(cyc)) + " " + " ".join(str(i) for i in cyc))
    return "\n".join(out) + "\n"


# -- intrinsic angles ----------------------------------------------------


def intrinsic_angle(P: Polyhedron, a: int, b: int, c: int) -> float:
    """Surface angle at ``a`` swept counterclockwise from edge ab to edge ac.

    The sweep direction is counterclockwise as seen from outside; the
    result is the sum of the face-corner angles crossed, in [0, 2*pi).
    """
    for other in (b, c):
        if not P.has_edge(a, other):
            raise NotAnEdge(f"({a}, {other}) is not an edge")
    if b == c:
        return 0.0
    total = 0.0
    cur = b
    for _ in range(len(P.adjacency[a]) + 1):
        nxt, face = P.ccw_neighbor(a, cur)
        total += P.corner_angle(face, P.faces[face].index(a))
        cur = nxt
        if cur == c:
            return total
    raise NotAnEdge(f"edge ({a}, {c}) not reachable in the fan of {a}")


def check_alexandrov(P: Polyhedron) -> vd.Verdict:
    """Check that every vertex has total intrinsic angle strictly below 2*pi.

    Equivalently, for every pair of edges ab, ac the two intrinsic angles
    between them sum below 2*pi.  Returns a witness triple on violation.
    """
    for a in range(P.n_vertices):
        cone = P.cone_angle(a)
        if cone >= TWO_PI - EPS:
            star = P.vertex_star(a)
            w = vd.Witness(note=f"vertex {a}: angle {cone!r} via edges to {star[0]} and {star[1 % len(star)]}")
            return vd.Verdict(vd.Status.PRECONDITION_FAILURE, (w,), {"alexandrov": False})
    return vd.Verdict(vd.Status.NET, (), {"alexandrov": True})


def edge_graph(P: Polyhedron) -> Mapping[int, tuple[int, ...]]:
    """Undirected vertex adjacency of the mesh (connected, N edges)."""
    return {v: P.adjacency[v] for v in range(P.n_vertices)}
