"""Discriminant groups ``L*/L`` and their quadratic forms.

If ``P G Q = S`` is the Smith normal form of the Gram matrix ``G``, the
vectors ``Q e_i / d_i`` (in coordinates of ``L ⊗ Q``) generate the cyclic
factors of ``L*/L``. Quadratic values live in Q/2Z, bilinear values in Q/Z;
both are stored reduced to ``[0, 2)`` and ``[0, 1)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterator, Sequence

from . import intmat
from .errors import Degenerate, GroupTooLarge, NotEven
from .lattice import GramLattice


def mod2(x: Fraction) -> Fraction:
    return x - 2 * (x // 2)


def mod1(x: Fraction) -> Fraction:
    return x - (x // 1)


@dataclass(frozen=True)
class FiniteQuadraticForm:
    invariant_factors: tuple[int, ...]
    generators: tuple[tuple[Fraction, ...], ...]
    q_values: tuple[Fraction, ...]
    b_values: tuple[tuple[Fraction, ...], ...]

    @property
    def order(self) -> int:
        out = 1
        for d in self.invariant_factors:
            out *= d
        return out

    def elements(self) -> Iterator[tuple[int, ...]]:
        """All elements as coefficient tuples on the generators."""
        return product(*(range(d) for d in self.invariant_factors))

    def q(self, a: Sequence[int]) -> Fraction:
        k = len(a)
        s = sum(a[i] * a[i] * self.q_values[i] for i in range(k))
        s += sum(2 * a[i] * a[j] * self.b_values[i][j] for i in range(k) for j in range(i + 1, k))
        return mod2(Fraction(s))

    def b(self, a: Sequence[int], c: Sequence[int]) -> Fraction:
        k = len(a)
        return mod1(Fraction(sum(a[i] * c[j] * self.b_values[i][j] for i in range(k) for j in range(k))))

    def element_order(self, a: Sequence[int]) -> int:
        from math import gcd, lcm

        out = 1
        for x, d in zip(a, self.invariant_factors):
            out = lcm(out, d // gcd(x % d, d))
        return out

    def reduce(self, a: Sequence[int]) -> tuple[int, ...]:
        return tuple(x % d for x, d in zip(a, self.invariant_factors))

    def as_dict(self) -> dict:
        return {
            "invariant_factors": list(self.invariant_factors),
            "q_values": [str(x) for x in self.q_values],
            "b_values": [[str(x) for x in row] for row in self.b_values],
        }


def discriminant_form(L: GramLattice) -> FiniteQuadraticForm:
    if not L.is_even():
        raise NotEven(L.label or "lattice")
    if L.rank and L.determinant() == 0:
        raise Degenerate(L.label or "lattice")
    g = L.gram
    n = L.rank
    s, _, q = intmat.smith_normal_form(g) if n else ([], [], [])
    gens = []
    factors = []
    for i in range(n):
        d = s[i][i]
        if d > 1:
            factors.append(d)
            gens.append(tuple(Fraction(q[r][i], d) for r in range(n)))
    qv = tuple(mod2(L.inner(x, x)) for x in gens)
    bv = tuple(tuple(mod1(L.inner(x, y)) for y in gens) for x in gens)
    return FiniteQuadraticForm(tuple(factors), tuple(gens), qv, bv)


def min_generators(F: FiniteQuadraticForm) -> int:
    return len(F.invariant_factors)


def torsion_order(L: GramLattice, x: Sequence[int]) -> int:
    """Order in ``L*/L`` of ``sum x_i e_i*`` (``x`` in the dual basis)."""
    if L.determinant() == 0:
        raise Degenerate(L.label or "lattice")
    ginv = intmat.inverse(L.gram)
    return intmat.denominator_lcm(intmat.vecmat(list(x), ginv))


def dual_coordinates(L: GramLattice, v: Sequence[Fraction]) -> list[int]:
    """Dual-basis coordinates ``G v`` of a vector of ``L*`` given in ``L ⊗ Q``."""
    out = intmat.matvec(L.gram, v)
    if any(Fraction(c).denominator != 1 for c in out):
        raise ValueError("vector is not in the dual lattice")
    return [int(c) for c in out]


def find_form_isomorphism(
    F1: FiniteQuadraticForm,
    F2: FiniteQuadraticForm,
    sign: int = 1,
    max_order: int = 10_000,
) -> tuple[tuple[int, ...], ...] | None:
    """Group isomorphism ``phi: A1 -> A2`` with ``q2(phi x) = sign * q1(x)``.

    Returned as the images of the generators of ``F1`` (coefficient tuples on
    the generators of ``F2``). Exhaustive over generator images.
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    if F1.invariant_factors != F2.invariant_factors:
        return None
    if F1.order > max_order:
        raise GroupTooLarge(f"group order {F1.order} exceeds {max_order}")
    k = len(F1.invariant_factors)
    if k == 0:
        return ()
    by_order: dict[int, list[tuple[int, ...]]] = {}
    for y in F2.elements():
        by_order.setdefault(F2.element_order(y), []).append(y)
    target_q = [mod2(sign * v) for v in F1.q_values]
    target_b = [[mod1(sign * v) for v in row] for row in F1.b_values]
    chosen: list[tuple[int, ...]] = []

    def extend(i: int):
        if i == k:
            return tuple(chosen) if _is_bijective(F1, F2, chosen) else None
        for y in by_order.get(F1.invariant_factors[i], ()):
            if F2.q(y) != target_q[i]:
                continue
            if any(F2.b(y, chosen[j]) != target_b[i][j] for j in range(i)):
                continue
            chosen.append(y)
            found = extend(i + 1)
            if found is not None:
                return found
            chosen.pop()
        return None

    return extend(0)


def _image(F1, F2, images, a):
    out = [0] * len(F2.invariant_factors)
    for coeff, y in zip(a, images):
        for j in range(len(out)):
            out[j] += coeff * y[j]
    return F2.reduce(out)


def _is_bijective(F1, F2, images) -> bool:
    if F1.order != F2.order:
        return False
    seen = set()
    for a in F1.elements():
        seen.add(_image(F1, F2, images, a))
    return len(seen) == F2.order


def forms_opposite(F1: FiniteQuadraticForm, F2: FiniteQuadraticForm, max_order: int = 10_000):
    """Witness that ``q1`` is isomorphic to ``-q2``, or None."""
    return find_form_isomorphism(F1, F2, sign=-1, max_order=max_order)


def forms_isomorphic(F1: FiniteQuadraticForm, F2: FiniteQuadraticForm, max_order: int = 10_000):
    return find_form_isomorphism(F1, F2, sign=1, max_order=max_order)


def verify_form_witness(F1: FiniteQuadraticForm, F2: FiniteQuadraticForm, images, sign: int = -1) -> bool:
    """Check a witness from :func:`find_form_isomorphism` on every element."""
    images = [tuple(int(c) for c in y) for y in images]
    if len(images) != len(F1.invariant_factors):
        return False
    if any(len(y) != len(F2.invariant_factors) for y in images):
        return False
    for d, y in zip(F1.invariant_factors, images):
        if any(x % 1 for x in y) or F2.reduce([d * c for c in y]) != F2.reduce([0] * len(y)):
            return False
    if not _is_bijective(F1, F2, images):
        return False
    return all(F2.q(_image(F1, F2, images, a)) == mod2(sign * F1.q(a)) for a in F1.elements())
