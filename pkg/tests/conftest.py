import random
from fractions import Fraction
from itertools import combinations, product

import pytest

from k3dual import dataset
from k3dual.errors import K3DualError
from k3dual.polytope import convex_hull, cross, dot, is_reflexive, primitive

CUBE = [p for p in product((-1, 1), repeat=3)]
OCTAHEDRON = [(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1)]
# reflexive, with an edge and its dual edge both carrying interior points
L0_POSITIVE = [(-1, 0, -1), (-1, 0, 1), (0, 0, -1), (0, 1, 1), (1, -1, 0), (1, -1, 1)]

_ACCEPTANCE: list[str] = []


def record_acceptance(line: str) -> None:
    print(line)
    _ACCEPTANCE.append(line)


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE):
            terminalreporter.write_line(line)


def builtin_polytopes():
    """(label, reference ray list) for the eight built-in polytopes."""
    out = []
    for c in dataset.raw_cases():
        for side in ("delta", "delta_prime"):
            out.append((f"{c['name']}:{side}", c["ordering"][side]))
    return out


# ---------------------------------------------------------------------------
# independent oracles (brute force, no shared code with the library's hull)


def brute_facets(points):
    """Supporting planes through every affinely independent triple:
    set of (primitive normal, offset) with <n, x> >= -offset on all points."""
    pts = [tuple(p) for p in set(map(tuple, points))]
    out = set()
    for a, b, c in combinations(pts, 3):
        n = cross([b[i] - a[i] for i in range(3)], [c[i] - a[i] for i in range(3)])
        if not any(n):
            continue
        n = primitive(n)
        for s in (1, -1):
            m = tuple(s * x for x in n)
            vals = [dot(m, p) for p in pts]
            if min(vals) == dot(m, a):
                out.add((m, -dot(m, a)))
    return out


def box_classify(points):
    """Classify every lattice point of the hull by the number of tight
    brute-force facets: 0 interior, 1 facet, 2 edge, >=3 vertex."""
    facets = brute_facets(points)
    lo = [min(p[i] for p in points) for i in range(3)]
    hi = [max(p[i] for p in points) for i in range(3)]
    out = {"vertex": set(), "edge": set(), "facet": set(), "interior": set()}
    for x in product(*(range(lo[i], hi[i] + 1) for i in range(3))):
        vals = [dot(n, x) + o for n, o in facets]
        if min(vals) < 0:
            continue
        tight = sum(1 for v in vals if v == 0)
        key = "interior" if tight == 0 else "facet" if tight == 1 else "edge" if tight == 2 else "vertex"
        out[key].add(x)
    return out


def brute_dual_vertices(points):
    """Vertices of the polar dual: facet normals divided by their offsets."""
    return sorted(tuple(Fraction(c, o) for c in n) for n, o in brute_facets(points))


def random_reflexive(rng: random.Random, count: int):
    """Rejection-sample reflexive hulls of subsets of {-1,0,1}^3, moved by a
    random unimodular map to avoid a fixed coordinate frame."""
    pts = [p for p in product((-1, 0, 1), repeat=3) if any(p)]
    out = []
    while len(out) < count:
        S = rng.sample(pts, rng.randint(5, 14))
        try:
            P = convex_hull(S)
            if not P.origin_interior() or not is_reflexive(P):
                continue
        except K3DualError:
            continue
        out.append(P.transform(random_unimodular(rng, 3, steps=4)))
    return out


def random_unimodular(rng: random.Random, n: int, steps: int = 6):
    """Product of random elementary operations (det +-1)."""
    m = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(steps):
        i, j = rng.sample(range(n), 2) if n > 1 else (0, 0)
        kind = rng.random()
        if kind < 0.6 and n > 1:
            k = rng.choice((-2, -1, 1, 2))
            m[i] = [a + k * b for a, b in zip(m[i], m[j])]
        elif kind < 0.8 and n > 1:
            m[i], m[j] = m[j], m[i]
        else:
            m[i] = [-a for a in m[i]]
    return m


@pytest.fixture(scope="session")
def cube():
    return convex_hull(CUBE, "cube")


@pytest.fixture(scope="session")
def octahedron():
    return convex_hull(OCTAHEDRON, "octahedron")


@pytest.fixture(scope="session")
def builtin():
    from k3dual.pipeline import builtin_cases

    return {c.name: c for c in builtin_cases()}


@pytest.fixture(scope="session")
def reports():
    from k3dual.pipeline import SearchConfig, verify_all

    return {r.case: r for r in verify_all(SearchConfig())}
