"""Built-in polytope pairs and the weighted-monomial example.

The four lattice-dual pairs are stored as reference ray lists (``ordering``),
reference dropped triples (1-based) and reference Gram matrices (``golden``).
The polytopes themselves are rebuilt as hulls of the rays, and
:func:`self_check` confirms that the ray computation reproduces each list.
"""

from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources

from .polytope import WeightSystem, convex_hull

CASE_NAMES = ("Z10", "U10", "Q17_Z20", "W10")


@lru_cache(maxsize=1)
def raw_cases() -> tuple[dict, ...]:
    text = resources.files("k3dual").joinpath("data/cases.json").read_text(encoding="utf-8")
    return tuple(json.loads(text))


def raw_case(name: str) -> dict:
    for c in raw_cases():
        if c["name"] == name:
            return c
    raise KeyError(f"unknown builtin case {name!r}; known: {', '.join(CASE_NAMES)}")


def self_check() -> list[str]:
    """Return a list of problems (empty when every reference ray list is the
    computed set of boundary points that are not facet-interior)."""
    from .picard import picard_rays

    problems = []
    for c in raw_cases():
        for side in ("delta", "delta_prime"):
            rays = c["ordering"][side]
            P = convex_hull(rays, f"{c['name']}:{side}")
            try:
                rs = picard_rays(P, order=rays)
            except ValueError as exc:
                problems.append(f"{c['name']} {side}: {exc}")
                continue
            if [list(r) for r in rs.rays] != rays:
                problems.append(f"{c['name']} {side}: ray order differs")
    return problems


# ---------------------------------------------------------------------------
# weighted monomials (variables W, X, Y, Z)

WEIGHTS_DELTA = WeightSystem((1, 1, 3, 5), ((-3, 3, 0, 0), (-8, 0, 1, 1), (-6, 1, 0, 1)))
WEIGHTS_DELTA_PRIME = WeightSystem((1, 1, 2, 3), ((-1, 1, 0, 0), (-2, 0, 1, 0), (-3, 0, 0, 1)))

# F = W^7 Y + X^5 Z + X Y^3 + Z^2 and F' = W^7 + X^5 Y + W Y^3 + X Z^2
MONOMIALS_F = {
    "W^7Y": ((7, 0, 1, 0), (0, 0, -1)),
    "X^5Z": ((0, 5, 0, 1), (1, -1, 1)),
    "XY^3": ((0, 1, 3, 0), (1, 2, -3)),
    "Z^2": ((0, 0, 0, 2), (-1, -1, 2)),
}
MONOMIALS_F_PRIME = {
    "W^7": ((7, 0, 0, 0), (-1, -1, -1)),
    "X^5Y": ((0, 5, 1, 0), (4, 0, -1)),
    "WY^3": ((1, 0, 3, 0), (-1, 2, -1)),
    "XZ^2": ((0, 1, 0, 2), (0, -1, 1)),
}

EXAMPLE_DELTA = ((-1, -1, 2), (0, -1, 0), (1, -1, 0), (1, -1, 1), (1, 2, -3), (0, 0, -1))
EXAMPLE_DELTA_PRIME = ((-1, 2, -1), (-1, -1, 1), (-1, -1, -1), (6, -1, -1), (2, 1, -1), (0, -1, 1))
EXAMPLE_DUAL_OF_DELTA_PRIME = ((-1, -3, -4), (0, -2, -3), (0, 1, 0), (1, 0, 0), (0, 0, 1), (-1, -2, -3))
EXAMPLE_T = ((1, 1, 1), (1, 3, 4), (1, 2, 3))
