"""Exact geometry of integral 3-polytopes.

Polytopes are built by :func:`convex_hull` and are immutable. Half-spaces use
the convention ``<normal, x> >= -offset`` with a primitive integer normal, so
the polar dual of a polytope with facets ``(n_j, c_j)`` is the hull of the
points ``n_j / c_j`` and dual faces pair at ``<x, y> = -1``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations, permutations, product
from math import gcd
from typing import Iterable, NamedTuple, Sequence

from . import intmat
from .errors import (
    DegenerateInput,
    NonIntegralDual,
    NotInLattice,
    NotReflexive,
    OriginNotInterior,
    WrongDegree,
)


class LatticeVector(NamedTuple):
    x: int
    y: int
    z: int

    def __add__(self, other):  # type: ignore[override]
        return LatticeVector(self.x + other[0], self.y + other[1], self.z + other[2])

    def __sub__(self, other):
        return LatticeVector(self.x - other[0], self.y - other[1], self.z - other[2])

    def scale(self, k: int) -> "LatticeVector":
        return LatticeVector(k * self.x, k * self.y, k * self.z)


def vec(p: Sequence[int]) -> LatticeVector:
    if len(p) != 3:
        raise ValueError(f"expected 3 coordinates, got {len(p)}")
    out = []
    for c in p:
        if isinstance(c, bool) or int(c) != c:
            raise ValueError(f"non-integral coordinate {c!r}")
        out.append(int(c))
    return LatticeVector(*out)


def dot(a: Sequence, b: Sequence):
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


def cross(a: Sequence[int], b: Sequence[int]) -> LatticeVector:
    return LatticeVector(
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    )


def orient(a, b, c, d) -> int:
    """Sign-carrying volume: det(b - a, c - a, d - a)."""
    return dot(cross(b - a, c - a), d - a)


def primitive(v: Sequence[int]) -> LatticeVector:
    g = gcd(*v)
    return LatticeVector(*(c // g for c in v))


@dataclass(frozen=True, order=True)
class HalfSpace:
    """``{x : <normal, x> >= -offset}`` with a primitive normal."""

    normal: LatticeVector
    offset: int

    def value(self, p: Sequence[int]) -> int:
        """Slack of ``p``: zero on the boundary plane, positive inside."""
        return dot(self.normal, p) + self.offset


@dataclass(frozen=True)
class Face:
    """A face given by its vertex set (sorted); ``dim`` is 0, 1 or 2."""

    dim: int
    vertices: tuple[LatticeVector, ...]


@dataclass(frozen=True)
class Edge:
    ends: tuple[int, int]
    interior: tuple[LatticeVector, ...]


@dataclass(frozen=True)
class Polytope3:
    vertices: tuple[LatticeVector, ...]
    facets: tuple[HalfSpace, ...]
    facet_vertices: tuple[tuple[int, ...], ...]
    edges: tuple[Edge, ...]
    edge_facets: tuple[tuple[int, int], ...]
    name: str = field(default="", compare=False)

    @cached_property
    def vertex_facets(self) -> tuple[tuple[int, ...], ...]:
        return tuple(
            tuple(j for j, fv in enumerate(self.facet_vertices) if i in fv)
            for i in range(len(self.vertices))
        )

    @cached_property
    def vertex_edges(self) -> tuple[tuple[int, ...], ...]:
        return tuple(
            tuple(k for k, e in enumerate(self.edges) if i in e.ends)
            for i in range(len(self.vertices))
        )

    def vertex_face(self, i: int) -> Face:
        return Face(0, (self.vertices[i],))

    def edge_face(self, k: int) -> Face:
        a, b = self.edges[k].ends
        return Face(1, tuple(sorted((self.vertices[a], self.vertices[b]))))

    def facet_face(self, j: int) -> Face:
        return Face(2, tuple(sorted(self.vertices[i] for i in self.facet_vertices[j])))

    def faces(self, dim: int) -> list[Face]:
        if dim == 0:
            return [self.vertex_face(i) for i in range(len(self.vertices))]
        if dim == 1:
            return [self.edge_face(k) for k in range(len(self.edges))]
        if dim == 2:
            return [self.facet_face(j) for j in range(len(self.facets))]
        raise ValueError(f"no faces of dimension {dim}")

    def contains_point(self, p: Sequence[int]) -> bool:
        return all(h.value(p) >= 0 for h in self.facets)

    def origin_interior(self) -> bool:
        return all(h.offset > 0 for h in self.facets)

    def bounding_box(self) -> tuple[LatticeVector, LatticeVector]:
        lo = LatticeVector(*(min(v[i] for v in self.vertices) for i in range(3)))
        hi = LatticeVector(*(max(v[i] for v in self.vertices) for i in range(3)))
        return lo, hi

    def transform(self, t: Sequence[Sequence[int]]) -> "Polytope3":
        """Image under the row action ``v -> v @ t``."""
        return convex_hull([apply_row_action(v, t) for v in self.vertices], name=self.name)


def apply_row_action(v: Sequence[int], t: Sequence[Sequence[int]]) -> LatticeVector:
    return LatticeVector(*(sum(v[i] * t[i][j] for i in range(3)) for j in range(3)))


def _initial_simplex(pts: list[LatticeVector]) -> tuple[int, int, int, int]:
    a = 0
    b = next((i for i in range(1, len(pts)) if pts[i] != pts[a]), None)
    if b is None:
        raise DegenerateInput("fewer than 2 distinct points")
    c = next(
        (i for i in range(len(pts)) if cross(pts[b] - pts[a], pts[i] - pts[a]) != (0, 0, 0)),
        None,
    )
    if c is None:
        raise DegenerateInput("points are collinear")
    d = next(
        (i for i in range(len(pts)) if orient(pts[a], pts[b], pts[c], pts[i]) != 0),
        None,
    )
    if d is None:
        raise DegenerateInput("points are coplanar")
    return a, b, c, d


def convex_hull(points: Iterable[Sequence[int]], name: str = "") -> Polytope3:
    """Exact incremental 3D hull with full face lattice.

    Triangles are kept oriented so that ``orient(tri, p) > 0`` means ``p`` is
    strictly outside; points on the current boundary are skipped.
    """
    pts = sorted({vec(p) for p in points})
    if len(pts) < 4:
        raise DegenerateInput(f"need at least 4 distinct points, got {len(pts)}")
    a, b, c, d = _initial_simplex(pts)
    if orient(pts[a], pts[b], pts[c], pts[d]) > 0:
        b, c = c, b
    tris = {(a, b, c), (a, d, b), (b, d, c), (c, d, a)}
    used = {a, b, c, d}
    for i, p in enumerate(pts):
        if i in used:
            continue
        visible = {t for t in tris if orient(pts[t[0]], pts[t[1]], pts[t[2]], p) > 0}
        if not visible:
            continue
        directed = {(t[k], t[(k + 1) % 3]) for t in visible for k in range(3)}
        horizon = [(u, v) for (u, v) in directed if (v, u) not in directed]
        tris -= visible
        for u, v in horizon:
            tris.add((u, v, i))

    halfspaces = set()
    for t in tris:
        out = cross(pts[t[1]] - pts[t[0]], pts[t[2]] - pts[t[0]])
        assert out != (0, 0, 0), "degenerate hull triangle"
        n = primitive(out).scale(-1)
        halfspaces.add(HalfSpace(n, -dot(n, pts[t[0]])))
    facets = tuple(sorted(halfspaces))

    tight = {p: frozenset(j for j, h in enumerate(facets) if h.value(p) == 0) for p in pts}
    verts = tuple(p for p in pts if len(tight[p]) >= 3)
    facet_vertices = tuple(
        tuple(i for i, v in enumerate(verts) if j in tight[v]) for j in range(len(facets))
    )
    edges = []
    edge_facets = []
    for j1, j2 in combinations(range(len(facets)), 2):
        common = sorted(set(facet_vertices[j1]) & set(facet_vertices[j2]))
        if len(common) == 2:
            edges.append(Edge(tuple(common), _segment_interior(verts[common[0]], verts[common[1]])))
            edge_facets.append((j1, j2))
    order = sorted(range(len(edges)), key=lambda k: edges[k].ends)
    return Polytope3(
        vertices=verts,
        facets=facets,
        facet_vertices=facet_vertices,
        edges=tuple(edges[k] for k in order),
        edge_facets=tuple(edge_facets[k] for k in order),
        name=name,
    )


def _segment_interior(p: LatticeVector, q: LatticeVector) -> tuple[LatticeVector, ...]:
    d = q - p
    g = gcd(*d)
    step = LatticeVector(*(c // g for c in d))
    return tuple(p + step.scale(k) for k in range(1, g))


def segment_points(p: Sequence[int], q: Sequence[int]) -> tuple[LatticeVector, ...]:
    """All lattice points of the segment ``[p, q]`` ordered from ``p``."""
    p, q = vec(p), vec(q)
    return (p,) + _segment_interior(p, q) + (q,)


# ---------------------------------------------------------------------------
# polar duality


def polar_dual(P: Polytope3) -> Polytope3:
    """``{y : <x, y> >= -1 for all x in P}``."""
    if not P.origin_interior():
        raise OriginNotInterior(P.name or "polytope")
    if any(h.offset != 1 for h in P.facets):
        raise NonIntegralDual(
            tuple(Fraction(c, h.offset) for c in h.normal) for h in P.facets
        )
    return convex_hull([h.normal for h in P.facets], name=f"{P.name}*" if P.name else "")


def is_reflexive(P: Polytope3) -> bool:
    if not P.origin_interior():
        raise OriginNotInterior(P.name or "polytope")
    return all(h.offset == 1 for h in P.facets)


def dual_face(P: Polytope3, face: Face) -> Face:
    """The face of ``polar_dual(P)`` dual to ``face``.

    Its vertices are the normals of the facets of ``P`` containing ``face``.
    """
    if not (P.origin_interior() and all(h.offset == 1 for h in P.facets)):
        raise NotReflexive(P.name or "polytope")
    members = set(face.vertices)
    normals = sorted(
        h.normal
        for h, fv in zip(P.facets, P.facet_vertices)
        if members <= {P.vertices[i] for i in fv}
    )
    if not normals:
        raise ValueError("not a face of P")
    return Face(2 - face.dim, tuple(normals))


# ---------------------------------------------------------------------------
# lattice points


def _plane_coordinates(normal: LatticeVector):
    """Unimodular ``U`` whose first row is ``normal``-dual.

    Returns ``(Q, Qinv)`` with ``normal @ Q = (1, 0, 0)`` up to sign, so the last
    two coordinates of ``Qinv @ x`` parametrise each plane ``<normal, x> = c``.
    """
    _, _, q = intmat.smith_normal_form([list(normal)])
    qinv = [[int(x) for x in row] for row in intmat.inverse(q)]
    return q, qinv


def _convex_polygon(points: list[tuple[int, int]]) -> list[tuple[int, int]]:
    pts = sorted(set(points))

    def turn(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower: list = []
    for p in pts:
        while len(lower) >= 2 and turn(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list = []
    for p in reversed(pts):
        while len(upper) >= 2 and turn(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def relative_interior_points(face: Face) -> list[LatticeVector]:
    """Lattice points in the relative interior of a face."""
    if face.dim == 0:
        return []
    if face.dim == 1:
        return list(_segment_interior(*face.vertices))
    v0 = face.vertices[0]
    normal = primitive(cross(face.vertices[1] - v0, face.vertices[2] - v0))
    q, qinv = _plane_coordinates(normal)
    coords = [tuple(intmat.matvec(qinv, v)) for v in face.vertices]
    level = coords[0][0]
    poly = _convex_polygon([(c[1], c[2]) for c in coords])
    lo = [min(p[k] for p in poly) for k in range(2)]
    hi = [max(p[k] for p in poly) for k in range(2)]
    out = []
    m = len(poly)
    for a in range(lo[0] + 1, hi[0]):
        for b in range(lo[1] + 1, hi[1]):
            inside = True
            for k in range(m):
                (x0, y0), (x1, y1) = poly[k], poly[(k + 1) % m]
                if (x1 - x0) * (b - y0) - (y1 - y0) * (a - x0) <= 0:
                    inside = False
                    break
            if inside:
                out.append(LatticeVector(*intmat.matvec(q, (level, a, b))))
    return sorted(out)


def l_star(face: Face) -> int:
    """Number of lattice points in the relative interior of ``face``."""
    return len(relative_interior_points(face))


@dataclass(frozen=True)
class LatticePoints:
    vertices: tuple[LatticeVector, ...]
    edge_interior: tuple[LatticeVector, ...]
    facet_interior: tuple[LatticeVector, ...]
    interior: tuple[LatticeVector, ...]

    @property
    def boundary(self) -> tuple[LatticeVector, ...]:
        return tuple(sorted(self.vertices + self.edge_interior + self.facet_interior))

    @property
    def all(self) -> tuple[LatticeVector, ...]:
        return tuple(sorted(self.boundary + self.interior))

    def counts(self) -> dict[str, int]:
        return {
            "vertex": len(self.vertices),
            "edge": len(self.edge_interior),
            "facet": len(self.facet_interior),
            "interior": len(self.interior),
        }


def lattice_points(P: Polytope3) -> LatticePoints:
    """All lattice points of ``P``, classified by the smallest face containing them."""
    edge_pts = sorted(p for e in P.edges for p in e.interior)
    facet_pts = sorted(
        p for j in range(len(P.facets)) for p in relative_interior_points(P.facet_face(j))
    )
    lo, hi = P.bounding_box()
    interior = [
        LatticeVector(*p)
        for p in product(*(range(lo[i] + 1, hi[i]) for i in range(3)))
        if all(h.value(p) > 0 for h in P.facets)
    ]
    return LatticePoints(tuple(P.vertices), tuple(edge_pts), tuple(facet_pts), tuple(interior))


# ---------------------------------------------------------------------------
# unimodular equivalence


def _vertex_profiles(P: Polytope3) -> list[tuple]:
    edge_l = [len(e.interior) for e in P.edges]
    facet_l = [l_star(P.facet_face(j)) for j in range(len(P.facets))]
    facet_size = [len(fv) for fv in P.facet_vertices]
    return [
        (
            len(P.vertex_edges[i]),
            tuple(sorted(edge_l[k] for k in P.vertex_edges[i])),
            tuple(sorted((facet_size[j], facet_l[j]) for j in P.vertex_facets[i])),
        )
        for i in range(len(P.vertices))
    ]


def unimodular_equivalent(P: Polytope3, Q: Polytope3) -> tuple[tuple[int, ...], ...] | None:
    """A matrix ``T`` in GL(3, Z) with ``{v @ T : v in P} = Q``, or None.

    Candidate images of three linearly independent vertices are matched only
    against vertices with the same combinatorial profile; each candidate ``T``
    is then checked on the whole vertex set.
    """
    if len(P.vertices) != len(Q.vertices) or len(P.facets) != len(Q.facets):
        return None
    if len(P.edges) != len(Q.edges):
        return None
    prof_p = _vertex_profiles(P)
    prof_q = _vertex_profiles(Q)
    if sorted(prof_p) != sorted(prof_q):
        return None
    basis = next(
        (
            tri
            for tri in combinations(range(len(P.vertices)), 3)
            if intmat.determinant([P.vertices[i] for i in tri]) != 0
        ),
        None,
    )
    if basis is None:
        return None
    a = [list(P.vertices[i]) for i in basis]
    a_inv = intmat.inverse(a)
    target = set(Q.vertices)
    for img in permutations(range(len(Q.vertices)), 3):
        if any(prof_q[j] != prof_p[i] for i, j in zip(basis, img)):
            continue
        t = intmat.matmul(a_inv, [list(Q.vertices[j]) for j in img])
        if any(x.denominator != 1 for row in t for x in row):
            continue
        t = [[int(x) for x in row] for row in t]
        if abs(intmat.determinant(t)) != 1:
            continue
        if {apply_row_action(v, t) for v in P.vertices} == target:
            return tuple(tuple(row) for row in t)
    return None


def is_equivalence_witness(P: Polytope3, Q: Polytope3, t: Sequence[Sequence[int]]) -> bool:
    if abs(intmat.determinant(t)) != 1:
        return False
    return sorted(apply_row_action(v, t) for v in P.vertices) == sorted(Q.vertices)


def contains(P: Polytope3, Q: Polytope3 | Iterable[Sequence[int]]) -> bool:
    """True iff every vertex of ``Q`` (or every given point) lies in ``P``."""
    pts = Q.vertices if isinstance(Q, Polytope3) else list(Q)
    return all(P.contains_point(p) for p in pts)


# ---------------------------------------------------------------------------
# weighted monomials


@dataclass(frozen=True)
class WeightSystem:
    """Weights of a weighted projective 3-space and a basis of the
    weight-orthogonal lattice ``{u in Z^4 : sum w_i u_i = 0}``."""

    weights: tuple[int, int, int, int]
    basis: tuple[tuple[int, int, int, int], ...]

    def __post_init__(self):
        if len(self.weights) != 4 or any(w <= 0 for w in self.weights):
            raise ValueError("need four positive weights")
        if len(self.basis) != 3 or any(len(b) != 4 for b in self.basis):
            raise ValueError("need three basis vectors in Z^4")
        for b in self.basis:
            if sum(w * x for w, x in zip(self.weights, b)) != 0:
                raise ValueError(f"basis vector {b} is not weight-orthogonal")
        if intmat.rank(self.basis) != 3:
            raise ValueError("basis vectors are linearly dependent")

    @property
    def degree(self) -> int:
        return sum(self.weights)

    def lattice_index(self) -> int:
        """Index of the span of ``basis`` in the full weight-orthogonal lattice."""
        d = intmat.invariant_factors(self.basis)
        out = 1
        for x in d:
            out *= x
        return out


def monomial_to_lattice_point(ws: WeightSystem, exponents: Sequence[int]) -> LatticeVector:
    """Coordinates of ``exponents - (1, 1, 1, 1)`` in the basis of ``ws``."""
    if len(exponents) != 4 or any(e < 0 for e in exponents):
        raise ValueError("need four non-negative exponents")
    deg = sum(w * e for w, e in zip(ws.weights, exponents))
    if deg != ws.degree:
        raise WrongDegree(f"monomial degree {deg} != {ws.degree}")
    u = [e - 1 for e in exponents]
    x = intmat.solve_rational(intmat.transpose(ws.basis), u)
    if x is None or any(c.denominator != 1 for c in x):
        raise NotInLattice(f"{tuple(exponents)} is not in the span of the basis")
    return LatticeVector(*(int(c) for c in x))


def newton_points(ws: WeightSystem, monomials: Iterable[Sequence[int]]) -> list[LatticeVector]:
    return [monomial_to_lattice_point(ws, m) for m in monomials]
