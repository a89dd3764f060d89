#!/usr/bin/env python3
"""Walk through the Q17/Z20 correspondence by hand.

Computes the polar dual of the Z20 polytope, finds the unimodular map onto the
Q17 polytope, and places the monomials of both weighted polynomials in Z^3.
"""

import sys

from k3dual import dataset
from k3dual.polytope import (
    contains,
    convex_hull,
    is_equivalence_witness,
    monomial_to_lattice_point,
    polar_dual,
    unimodular_equivalent,
)


def show_matrix(rows, indent="    "):
    for r in rows:
        print(indent + " ".join(f"{x:>3}" for x in r))


def main() -> int:
    delta = convex_hull(dataset.EXAMPLE_DELTA, "Q17")
    delta_p = convex_hull(dataset.EXAMPLE_DELTA_PRIME, "Z20")
    dual = polar_dual(delta_p)
    print("vertices of the dual of Z20:")
    for v in sorted(dual.vertices):
        print("   ", tuple(v))

    T = unimodular_equivalent(delta, dual)
    if T is None:
        print("no unimodular map found")
        return 1
    print("\nT with v . T mapping Q17 onto the dual:")
    show_matrix(T)
    print("stored matrix is a witness:", is_equivalence_witness(delta, dual, dataset.EXAMPLE_T))

    ok = True
    for label, weights, table, poly in (
        ("F", dataset.WEIGHTS_DELTA, dataset.MONOMIALS_F, delta),
        ("F'", dataset.WEIGHTS_DELTA_PRIME, dataset.MONOMIALS_F_PRIME, delta_p),
    ):
        print(f"\nmonomials of {label}, weights {weights.weights} (sublattice index {weights.lattice_index()}):")
        pts = []
        for name, (exps, want) in table.items():
            got = tuple(monomial_to_lattice_point(weights, exps))
            pts.append(got)
            mark = "ok" if got == tuple(want) else f"expected {want}"
            ok &= got == tuple(want)
            print(f"    {name:<8} {exps} -> {got}  {mark}")
        inside = contains(poly, pts)
        ok &= inside
        print(f"    Newton polytope inside {poly.name}: {inside}")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
