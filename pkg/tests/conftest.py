import math

import pytest

from stretchnet import shapes


@pytest.fixture(scope="session")
def tetra():
    return shapes.tetrahedron()


@pytest.fixture(scope="session")
def cube():
    return shapes.cube()


@pytest.fixture(scope="session")
def octa():
    return shapes.octahedron()


@pytest.fixture(scope="session")
def icosa():
    return shapes.icosahedron()


@pytest.fixture(scope="session")
def dodeca():
    return shapes.dodecahedron()


def winding_angle_sum(points, p, subdiv=32):
    """Independent winding oracle: accumulated argument change along a
    densely sampled traversal of the curve, divided by 2*pi."""
    total = 0.0
    n = len(points)
    prev = None
    for i in range(n + 1):
        a = points[i % n]
        b = points[(i + 1) % n]
        for k in range(subdiv):
            t = k / subdiv
            q = (a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1]))
            ang = math.atan2(q[1] - p[1], q[0] - p[0])
            if prev is not None:
                d = ang - prev
                while d > math.pi:
                    d -= 2 * math.pi
                while d <= -math.pi:
                    d += 2 * math.pi
                total += d
            prev = ang
        if i == n:
            break
    return round(total / (2 * math.pi))
