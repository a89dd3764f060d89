"""Integral lattices given by Gram matrices.

Root lattices follow the sign convention of K3 Picard lattices: ``A_n``,
``D_n`` and ``E_n`` are negated Cartan matrices (negative definite, even).
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import NamedTuple, Sequence

from . import intmat
from .errors import Degenerate, NonIntegral, NotEven


class SignaturePair(NamedTuple):
    positive: int
    negative: int


@dataclass(frozen=True)
class GramLattice:
    gram: tuple[tuple[int, ...], ...]
    label: str = ""

    def __post_init__(self):
        g = tuple(tuple(int(x) for x in row) for row in self.gram)
        n = len(g)
        if any(len(row) != n for row in g):
            raise ValueError("Gram matrix must be square")
        if any(g[i][j] != g[j][i] for i in range(n) for j in range(i)):
            raise ValueError("Gram matrix must be symmetric")
        object.__setattr__(self, "gram", g)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], label: str = "") -> "GramLattice":
        return cls(tuple(tuple(r) for r in rows), label)

    @property
    def rank(self) -> int:
        return len(self.gram)

    def determinant(self) -> int:
        return intmat.determinant(self.gram)

    def is_even(self) -> bool:
        return all(self.gram[i][i] % 2 == 0 for i in range(self.rank))

    def signature(self) -> SignaturePair:
        pos, neg, zero = inertia(self.gram)
        if zero:
            raise Degenerate(f"{self.label or 'lattice'} has a {zero}-dimensional radical")
        return SignaturePair(pos, neg)

    def inner(self, x: Sequence[int], y: Sequence[int]):
        g = self.gram
        return sum(x[i] * g[i][j] * y[j] for i in range(len(g)) for j in range(len(g)) if x[i] and y[j])

    def norm(self, x: Sequence[int]):
        return self.inner(x, x)

    def relabel(self, label: str) -> "GramLattice":
        return GramLattice(self.gram, label)


def rank(L: GramLattice) -> int:
    return L.rank


def determinant(L: GramLattice) -> int:
    return L.determinant()


def signature(L: GramLattice) -> SignaturePair:
    return L.signature()


def inertia(g: Sequence[Sequence[int]]) -> tuple[int, int, int]:
    """(positive, negative, zero) counts by exact congruent diagonalisation.

    A zero pivot with a nonzero off-diagonal entry ``a`` is split off as the
    hyperbolic block ``[[0, a], [a, 0]]``, which contributes one of each sign.
    """
    m = [[Fraction(x) for x in row] for row in g]
    pos = neg = zero = 0
    while m:
        n = len(m)
        k = next((i for i in range(n) if m[i][i] != 0), None)
        if k is not None:
            p = m[k][k]
            if p > 0:
                pos += 1
            else:
                neg += 1
            rest = [i for i in range(n) if i != k]
            m = [[m[i][j] - m[i][k] * m[k][j] / p for j in rest] for i in rest]
            continue
        pair = next(((i, j) for i in range(n) for j in range(i + 1, n) if m[i][j] != 0), None)
        if pair is None:
            zero += n
            break
        i0, j0 = pair
        a = m[i0][j0]
        pos += 1
        neg += 1
        rest = [i for i in range(n) if i not in pair]
        # Schur complement against [[0, a], [a, 0]] whose inverse is [[0, 1/a], [1/a, 0]]
        m = [
            [m[i][j] - (m[i][i0] * m[j0][j] + m[i][j0] * m[i0][j]) / a for j in rest]
            for i in rest
        ]
    return pos, neg, zero


def characteristic_polynomial(g: Sequence[Sequence[int]]) -> list[int]:
    """Coefficients ``[1, c_1, ..., c_n]`` of ``det(x I - g)`` (Faddeev-LeVerrier)."""
    n = len(g)
    a = [[Fraction(x) for x in row] for row in g]
    coeffs = [Fraction(1)]
    m = [[Fraction(0)] * n for _ in range(n)]
    for k in range(1, n + 1):
        # M_k = A M_{k-1} + c_{k-1} I
        m = intmat.matmul(a, m)
        for i in range(n):
            m[i][i] += coeffs[-1]
        am = intmat.matmul(a, m)
        c = -sum(am[i][i] for i in range(n)) / k
        coeffs.append(c)
    return [int(c) for c in coeffs]


def signature_descartes(g: Sequence[Sequence[int]]) -> SignaturePair:
    """Signature from sign changes of the characteristic polynomial.

    Exact for symmetric matrices, whose eigenvalues are all real.
    """
    coeffs = characteristic_polynomial(g)
    if coeffs[-1] == 0:
        raise Degenerate("singular matrix")

    def changes(cs):
        signs = [c > 0 for c in cs if c != 0]
        return sum(1 for s, t in zip(signs, signs[1:]) if s != t)

    n = len(coeffs) - 1
    flipped = [c * (-1) ** (n - i) for i, c in enumerate(coeffs)]
    return SignaturePair(changes(coeffs), changes(flipped))


# ---------------------------------------------------------------------------
# constructors


def _cartan_from_edges(n: int, edges: Sequence[tuple[int, int]]) -> list[list[int]]:
    g = [[0] * n for _ in range(n)]
    for i in range(n):
        g[i][i] = -2
    for i, j in edges:
        g[i][j] = g[j][i] = 1
    return g


def standard_lattice(name: str, n: int | None = None) -> GramLattice:
    """Named lattices: ``U``, ``A<n>``, ``D<n>``, ``E6/E7/E8`` and ``C6_8``.

    ``name`` may carry the rank inline (``"A3"``) or take it via ``n``.
    """
    m = re.fullmatch(r"([A-Za-z]+)(\d*)(?:_(\d+))?", name.strip())
    if not m:
        raise ValueError(f"unknown lattice {name!r}")
    kind, digits, sub = m.group(1).upper(), m.group(2), m.group(3)
    if kind == "U" and not digits:
        return GramLattice(((0, 1), (1, 0)), "U")
    if kind == "C" and digits == "6" and sub == "8":
        return GramLattice(((-4, 1), (1, -2)), "C6_8")
    if digits:
        n = int(digits)
    if n is None:
        raise ValueError(f"lattice {name!r} needs a rank")
    if kind == "A":
        if n < 1:
            raise ValueError("A_n needs n >= 1")
        return GramLattice.from_rows(_cartan_from_edges(n, [(i, i + 1) for i in range(n - 1)]), f"A{n}")
    if kind == "D":
        if n < 2:
            raise ValueError("D_n needs n >= 2")
        edges = [(i, i + 1) for i in range(n - 2)]
        if n >= 3:
            edges.append((n - 3, n - 1))
        return GramLattice.from_rows(_cartan_from_edges(n, edges), f"D{n}")
    if kind == "E":
        if n not in (6, 7, 8):
            raise ValueError("E_n needs n in {6, 7, 8}")
        # Bourbaki labels 1-3-4-5-...-n with 2 attached to 4 (0-based below)
        edges = [(0, 2), (1, 3)] + [(i, i + 1) for i in range(2, n - 1)]
        return GramLattice.from_rows(_cartan_from_edges(n, edges), f"E{n}")
    raise ValueError(f"unknown lattice {name!r}")


def direct_sum(*lattices: GramLattice) -> GramLattice:
    n = sum(L.rank for L in lattices)
    g = [[0] * n for _ in range(n)]
    off = 0
    for L in lattices:
        for i in range(L.rank):
            for j in range(L.rank):
                g[off + i][off + j] = L.gram[i][j]
        off += L.rank
    return GramLattice.from_rows(g, "+".join(L.label or "?" for L in lattices))


def load_gram_json(path: str | Path) -> GramLattice:
    from .io import gram_from_json

    return gram_from_json(json.loads(Path(path).read_text(encoding="utf-8")))


def parse_lattice(expr: str, base_dir: str | Path | None = None) -> GramLattice:
    """Parse ``"U+A1+A3"``-style sums; ``custom:<path>`` loads Gram JSON."""
    terms = [t.strip() for t in expr.split("+")]
    if not terms or any(not t for t in terms):
        raise ValueError(f"malformed lattice expression {expr!r}")
    parts = []
    for t in terms:
        if t.startswith("custom:"):
            p = Path(t[len("custom:"):])
            if base_dir is not None and not p.is_absolute():
                p = Path(base_dir) / p
            parts.append(load_gram_json(p))
        else:
            parts.append(standard_lattice(t))
    out = parts[0] if len(parts) == 1 else direct_sum(*parts)
    return out.relabel(expr.replace(" ", ""))


# ---------------------------------------------------------------------------
# basis changes and embeddings


def apply_basis_change(L: GramLattice, b: Sequence[Sequence[int]], label: str = "") -> GramLattice:
    """Gram matrix ``B G B^T`` of the vectors given by the rows of ``b``."""
    rows = []
    for row in b:
        if len(row) != L.rank:
            raise ValueError(f"basis row has length {len(row)}, expected {L.rank}")
        if any(isinstance(x, float) or Fraction(x).denominator != 1 for x in row):
            raise NonIntegral(f"non-integral basis row {list(row)}")
        rows.append([int(x) for x in row])
    if intmat.rank(rows) != len(rows):
        raise ValueError("basis rows are linearly dependent")
    return GramLattice.from_rows(intmat.congruence(rows, L.gram), label)


def orthogonal_complement(L: GramLattice, vectors: Sequence[Sequence[int]]) -> tuple[list[list[int]], GramLattice]:
    """Integer basis (rows) of ``{x : <x, v> = 0 for all v}`` and its Gram matrix."""
    pair = intmat.matmul(vectors, L.gram)
    k = intmat.integer_kernel(pair)
    return k, GramLattice.from_rows(intmat.congruence(k, L.gram)) if k else GramLattice(())


@dataclass(frozen=True)
class NikulinCheck:
    """Outcome of the primitive-embedding criterion for an even lattice."""

    ambient: tuple[int, int]
    signature: tuple[int, int]
    rank: int
    ambient_rank: int
    length: int  # minimal number of generators of the discriminant group
    strict: bool
    cond_signature_mod8: bool
    cond_room: bool
    cond_length: bool

    @property
    def passed(self) -> bool:
        return self.cond_signature_mod8 and self.cond_room and self.cond_length

    @property
    def room(self) -> tuple[int, int]:
        return (self.ambient[0] - self.signature[0], self.ambient[1] - self.signature[1])

    @property
    def rank_gap(self) -> int:
        return self.ambient_rank - self.rank

    def as_dict(self) -> dict:
        return {
            "ambient": list(self.ambient),
            "signature": list(self.signature),
            "l_plus_minus_t_plus": self.room[0],
            "l_minus_minus_t_minus": self.room[1],
            "rank_gap": self.rank_gap,
            "l_A": self.length,
            "strict": self.strict,
            "conditions": {
                "signature_mod_8": self.cond_signature_mod8,
                "room": self.cond_room,
                "length": self.cond_length,
            },
            "passed": self.passed,
        }


def nikulin_embedding_check(L: GramLattice, ambient: tuple[int, int] = (3, 19), strict: bool = True) -> NikulinCheck:
    """Existence criterion for a primitive embedding into an even unimodular
    lattice of signature ``ambient`` (the K3 lattice by default).

    ``strict`` selects ``rk - rk L > l(A_L)``; pass False for ``>=``.
    """
    from .discriminant import discriminant_form

    if not L.is_even():
        raise NotEven(L.label or "lattice")
    sig = L.signature()
    length = len(discriminant_form(L).invariant_factors)
    lp, lm = ambient
    gap = lp + lm - L.rank
    return NikulinCheck(
        ambient=(lp, lm),
        signature=(sig.positive, sig.negative),
        rank=L.rank,
        ambient_rank=lp + lm,
        length=length,
        strict=strict,
        cond_signature_mod8=(lp - lm) % 8 == 0,
        cond_room=lm - sig.negative >= 0 and lp - sig.positive >= 0,
        cond_length=gap > length if strict else gap >= length,
    )
