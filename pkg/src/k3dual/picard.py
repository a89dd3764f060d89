"""Picard lattices of K3 families attached to reflexive 3-polytopes.

The rays of the (resolved) fan are the boundary lattice points of the polytope
that are not interior to a facet. Intersection numbers of the restricted
toric divisors follow the standard toric K3 rules, valid when rk L0 = 0:

* ``D_i^2 = 2 l*(psi_i) - 2`` for a vertex ``v_i`` with dual facet ``psi_i``,
  and ``-2`` for a point interior to an edge;
* ``D_i . D_j = l*(m*) + 1`` when ``v_i, v_j`` are consecutive lattice points
  on an edge ``m`` with dual edge ``m*``, and 0 otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Sequence

from . import intmat
from .errors import FormulaMismatch, InvalidOverride, L0NotZero, NoBasis, NotReflexive, RankDeficient
from .lattice import GramLattice
from .polytope import (
    LatticeVector,
    Polytope3,
    dual_face,
    is_reflexive,
    l_star,
    vec,
)


def _require_reflexive(P: Polytope3) -> None:
    if not is_reflexive(P):
        raise NotReflexive(P.name or "polytope")


@dataclass(frozen=True)
class RaySet:
    polytope: Polytope3
    rays: tuple[LatticeVector, ...]
    kinds: tuple[str, ...]  # "vertex" | "edge"
    owners: tuple[int, ...]  # vertex index or edge index into polytope

    def __len__(self):
        return len(self.rays)

    def index(self, p: Sequence[int]) -> int:
        return self.rays.index(vec(p))

    @cached_property
    def _dual_lstar(self) -> dict:
        """l* of the dual face of every vertex and edge of the polytope."""
        P = self.polytope
        out = {}
        for i in range(len(P.vertices)):
            out[("vertex", i)] = l_star(dual_face(P, P.vertex_face(i)))
        for k in range(len(P.edges)):
            out[("edge", k)] = l_star(dual_face(P, P.edge_face(k)))
        return out


def picard_rays(P: Polytope3, order: Sequence[Sequence[int]] | None = None) -> RaySet:
    """Boundary lattice points of ``P`` that are not facet-interior.

    Sorted lexicographically unless ``order`` lists the same points in the
    desired order.
    """
    _require_reflexive(P)
    kind: dict[LatticeVector, tuple[str, int]] = {}
    for i, v in enumerate(P.vertices):
        kind[v] = ("vertex", i)
    for k, e in enumerate(P.edges):
        for p in e.interior:
            kind[p] = ("edge", k)
    if order is None:
        rays = sorted(kind)
    else:
        rays = [vec(p) for p in order]
        if sorted(rays) != sorted(kind):
            missing = sorted(set(kind) - set(rays))
            extra = sorted(set(rays) - set(kind))
            raise ValueError(f"ray ordering does not match the polytope (missing {missing}, extra {extra})")
    return RaySet(
        polytope=P,
        rays=tuple(rays),
        kinds=tuple(kind[r][0] for r in rays),
        owners=tuple(kind[r][1] for r in rays),
    )


def linear_relations(rs: RaySet) -> list[list[int]]:
    """3 x n matrix whose row j is ``(<v_i, e_j>)_i``."""
    m = [[r[j] for r in rs.rays] for j in range(3)]
    if intmat.rank(m) != 3:
        raise RankDeficient("rays do not span Z^3")
    return m


@dataclass(frozen=True)
class PicardBasis:
    """Indices are 0-based positions in the RaySet."""

    dropped: tuple[int, int, int]
    kept: tuple[int, ...]


def select_basis(rs: RaySet, dropped: Sequence[int] | None = None) -> PicardBasis:
    """Choose three rays to eliminate with the linear relations.

    The dropped rays must form a unimodular 3x3 matrix, so the remaining
    divisors form a Z-basis of the Picard group. Without an override the
    lexicographically smallest valid triple is used.
    """
    n = len(rs)
    if dropped is not None:
        tri = tuple(sorted(int(i) for i in dropped))
        if len(set(tri)) != 3 or not all(0 <= i < n for i in tri):
            raise InvalidOverride(f"dropped set {list(dropped)} is not 3 distinct ray indices")
        if abs(intmat.determinant([rs.rays[i] for i in tri])) != 1:
            raise InvalidOverride(f"dropped rays {list(tri)} are not unimodular")
    else:
        tri = next(
            (t for t in combinations(range(n), 3)
             if abs(intmat.determinant([rs.rays[i] for i in t])) == 1),
            None,
        )
        if tri is None:
            raise NoBasis("no unimodular triple of rays")
    return PicardBasis(tri, tuple(i for i in range(n) if i not in tri))


def rk_l0(P: Polytope3) -> int:
    """Sum over edges of ``l*(edge) * l*(dual edge)``."""
    _require_reflexive(P)
    return sum(
        len(e.interior) * l_star(dual_face(P, P.edge_face(k))) for k, e in enumerate(P.edges)
    )


def full_intersection_matrix(rs: RaySet) -> list[list[int]]:
    """Intersection numbers of all restricted toric divisors (n x n)."""
    P = rs.polytope
    if rk_l0(P) != 0:
        raise L0NotZero(P.name or "polytope")
    n = len(rs)
    pos = {r: i for i, r in enumerate(rs.rays)}
    g = [[0] * n for _ in range(n)]
    for i in range(n):
        if rs.kinds[i] == "vertex":
            g[i][i] = 2 * rs._dual_lstar[("vertex", rs.owners[i])] - 2
        else:
            g[i][i] = -2
    for k, e in enumerate(P.edges):
        a, b = e.ends
        chain = (P.vertices[a],) + e.interior + (P.vertices[b],)
        w = rs._dual_lstar[("edge", k)] + 1
        for p, q in zip(chain, chain[1:]):
            g[pos[p]][pos[q]] = g[pos[q]][pos[p]] = w
    return g


def intersection_matrix(rs: RaySet, basis: PicardBasis | None = None) -> GramLattice:
    """Gram matrix of the Picard lattice on the kept rays of ``basis``."""
    basis = basis or select_basis(rs)
    if len(basis.kept) + 3 != len(rs) or set(basis.kept) & set(basis.dropped):
        raise InvalidOverride("basis does not match the ray set")
    g = full_intersection_matrix(rs)
    label = rs.polytope.name and f"Pic({rs.polytope.name})"
    return GramLattice(tuple(tuple(g[i][j] for j in basis.kept) for i in basis.kept), label or "")


def picard_number(P: Polytope3) -> int:
    """rho = #rays - 3 + rk L0, cross-checked against the count
    ``l(P) - 4 - sum_facets l*(facet) + rk L0`` with ``l(P)`` taken from a
    direct scan of the bounding box."""
    _require_reflexive(P)
    l0 = rk_l0(P)
    rho = len(picard_rays(P)) - 3 + l0
    lo, hi = P.bounding_box()
    total = sum(
        1
        for x in range(lo[0], hi[0] + 1)
        for y in range(lo[1], hi[1] + 1)
        for z in range(lo[2], hi[2] + 1)
        if P.contains_point((x, y, z))
    )
    facet_interior = sum(l_star(f) for f in P.faces(2))
    other = total - 4 - facet_interior + l0
    if other != rho:
        raise FormulaMismatch(f"ray count gives {rho}, point count gives {other}")
    return rho

