"""Bounded searches for lattice embeddings, isometries and hyperbolic planes.

All searches are bounded: coordinates of candidate vectors are limited by
``search_bound`` and an optional wall-clock ``deadline`` (seconds, monotonic
clock). A ``None`` result means "not found within the bounds", never a proof
of nonexistence. Every returned witness is re-checked exactly with Python ints.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

import numpy as np

from . import intmat
from .discriminant import discriminant_form, forms_isomorphic
from .errors import Degenerate
from .lattice import GramLattice, orthogonal_complement, standard_lattice


class SearchTimeout(Exception):
    pass


def _check_deadline(deadline: float | None) -> None:
    if deadline is not None and time.monotonic() > deadline:
        raise SearchTimeout


def _box_vectors(n: int, bound: int, chunk: int = 1 << 18):
    """Yield the integer box ``[-bound, bound]^n`` in numpy chunks."""
    side = 2 * bound + 1
    total = side**n
    for start in range(0, total, chunk):
        idx = np.arange(start, min(start + chunk, total), dtype=np.int64)
        out = np.empty((idx.size, n), dtype=np.int64)
        for k in range(n - 1, -1, -1):
            out[:, k] = idx % side - bound
            idx //= side
        yield out


def _vectors_of_norms(g: np.ndarray, norms: set[int], bound: int, deadline) -> dict[int, np.ndarray]:
    n = g.shape[0]
    found: dict[int, list[np.ndarray]] = {v: [] for v in norms}
    for block in _box_vectors(n, bound):
        _check_deadline(deadline)
        vals = np.einsum("ij,jk,ik->i", block, g, block)
        for v in norms:
            hit = block[vals == v]
            if hit.size:
                found[v].append(hit)
    return {
        v: (np.concatenate(parts) if parts else np.empty((0, n), dtype=np.int64))
        for v, parts in found.items()
    }


def _max_entry_ok(g: Sequence[Sequence[int]], bound: int) -> bool:
    # int64 safety for v^T G v with |v_i| <= bound
    n = len(g)
    m = max((abs(x) for row in g for x in row), default=0)
    return n * n * m * bound * bound < 2**62


def find_embedding(
    small: GramLattice,
    big: GramLattice,
    search_bound: int,
    deadline: float | None = None,
) -> list[list[int]] | None:
    """Rows ``B`` (coordinates in ``big``) with ``B G_big B^T = G_small``.

    Candidate vectors come from the box ``[-search_bound, search_bound]^n``;
    rows are fixed one by one, each filtered by its pairings with the rows
    already chosen.
    """
    if not _max_entry_ok(big.gram, search_bound):
        raise ValueError("search bound too large for exact int64 screening")
    g = np.array(big.gram, dtype=np.int64)
    target = small.gram
    k = small.rank
    try:
        pools = _vectors_of_norms(g, {target[i][i] for i in range(k)}, search_bound, deadline)
        chosen: list[np.ndarray] = []

        def extend(i: int):
            if i == k:
                return [list(map(int, r)) for r in chosen]
            cand = pools[target[i][i]]
            for j, row in enumerate(chosen):
                if cand.shape[0] == 0:
                    break
                cand = cand[cand @ (g @ row) == target[i][j]]
            for row in cand:
                _check_deadline(deadline)
                chosen.append(row)
                found = extend(i + 1)
                if found is not None:
                    return found
                chosen.pop()
            return None

        rows = extend(0)
    except SearchTimeout:
        return None
    if rows is None:
        return None
    assert intmat.congruence(rows, big.gram) == [list(r) for r in target]
    return rows


def find_isometry(
    L1: GramLattice,
    L2: GramLattice,
    search_bound: int,
    deadline: float | None = None,
) -> list[list[int]] | None:
    """Unimodular ``B`` with ``B G1 B^T = G2``, searched by iterative deepening
    on the coordinate bound."""
    if L1.rank != L2.rank or L1.determinant() != L2.determinant():
        return None
    try:
        if L1.signature() != L2.signature():
            return None
    except Degenerate:
        return None
    for bound in range(1, search_bound + 1):
        b = find_embedding(L2, L1, bound, deadline)
        if b is not None:
            assert abs(intmat.determinant(b)) == 1
            return b
        if deadline is not None and time.monotonic() > deadline:
            return None
    return None


def is_isometry_witness(L1: GramLattice, L2: GramLattice, b: Sequence[Sequence[int]]) -> bool:
    return (
        len(b) == L1.rank == L2.rank
        and abs(intmat.determinant(b)) == 1
        and intmat.congruence(b, L1.gram) == [list(r) for r in L2.gram]
    )


# ---------------------------------------------------------------------------
# hyperbolic planes


@dataclass(frozen=True)
class HyperbolicSplit:
    e: tuple[int, ...]
    f: tuple[int, ...]
    complement_basis: tuple[tuple[int, ...], ...]
    complement: GramLattice

    def as_dict(self) -> dict:
        return {
            "e": list(self.e),
            "f": list(self.f),
            "complement_basis": [list(r) for r in self.complement_basis],
            "complement_gram": [list(r) for r in self.complement.gram],
            "complement_rank": self.complement.rank,
            "complement_det": self.complement.determinant(),
        }


def is_hyperbolic_pair(L: GramLattice, e: Sequence[int], f: Sequence[int]) -> bool:
    return L.norm(e) == 0 and L.norm(f) == 0 and L.inner(e, f) == 1


def _connected_supports(adj: list[set[int]], gram, max_size: int, deadline):
    """Kernel vectors of singular negative-semidefinite principal blocks whose
    support is connected in the Gram graph.

    Growth stops at blocks that are no longer negative semidefinite.
    """
    from .lattice import inertia

    n = len(adj)
    seen: set[frozenset] = set()
    frontier = [frozenset([i]) for i in range(n)]
    while frontier:
        nxt = []
        for s in frontier:
            _check_deadline(deadline)
            for v in sorted(set().union(*(adj[i] for i in s)) - s):
                t = s | {v}
                if t in seen:
                    continue
                seen.add(t)
                idx = sorted(t)
                sub = [[gram[i][j] for j in idx] for i in idx]
                pos, neg, zero = inertia(sub)
                if pos:
                    continue
                if zero == 1:
                    (kv,) = intmat.integer_kernel(sub)
                    if sum(kv) < 0:
                        kv = [-x for x in kv]
                    full = [0] * n
                    for i, x in zip(idx, kv):
                        full[i] = x
                    yield full
                elif zero == 0 and len(t) < max_size:
                    nxt.append(t)
        frontier = nxt


def _isotropic_candidates(L: GramLattice, search_bound: int, deadline):
    n = L.rank
    g = L.gram
    for i in range(n):
        if g[i][i] == 0:
            yield [int(j == i) for j in range(n)]
    if n <= 6:
        for bound in range(1, search_bound + 1):
            pool = _vectors_of_norms(np.array(g, dtype=np.int64), {0}, bound, deadline)[0]
            for row in pool:
                if row.any():
                    yield [int(x) for x in row]
    adj = [{j for j in range(n) if j != i and g[i][j] != 0} for i in range(n)]
    for v in _connected_supports(adj, g, n, deadline):
        if max(abs(x) for x in v) <= search_bound:
            yield v


def find_hyperbolic_plane(
    L: GramLattice,
    search_bound: int,
    deadline: float | None = None,
) -> HyperbolicSplit | None:
    """Primitive ``e, f`` spanning a copy of U, plus the orthogonal complement.

    Isotropic ``e`` is sought among norm-zero basis vectors, small box vectors
    (low rank only) and null vectors of semidefinite connected sub-diagrams;
    ``f = s - (s.s / 2) e`` for any ``s`` with ``e.s = 1``.
    """
    if not L.is_even():
        return None
    g = L.gram
    tried = set()
    try:
        for e in _isotropic_candidates(L, search_bound, deadline):
            key = tuple(e)
            if key in tried:
                continue
            tried.add(key)
            if intmat.content(e) != 1:
                continue
            ge = intmat.matvec(g, e)
            unit = next((j for j, x in enumerate(ge) if abs(x) == 1), None)
            if unit is not None:
                s = [0] * L.rank
                s[unit] = ge[unit]
            else:
                d, coeffs = intmat.bezout(ge)
                if d != 1:
                    continue
                s = coeffs
            half = L.norm(s) // 2
            f = [si - half * ei for si, ei in zip(s, e)]
            if not is_hyperbolic_pair(L, e, f):
                continue
            basis, comp = orthogonal_complement(L, [e, f])
            return HyperbolicSplit(tuple(e), tuple(f), tuple(map(tuple, basis)), comp)
    except SearchTimeout:
        return None
    return None


# ---------------------------------------------------------------------------
# root sublattices of E8


E8_ROOT_COMPLEMENTS = {"A1": "E7", "A2": "E6", "A3": "D5"}


@dataclass(frozen=True)
class ComplementCheck:
    sublattice: str
    expected: str
    embedding: tuple[tuple[int, ...], ...]
    primitive: bool
    complement: GramLattice
    rank_ok: bool
    det_ok: bool
    signature_ok: bool
    form_ok: bool

    @property
    def passed(self) -> bool:
        return self.primitive and self.rank_ok and self.det_ok and self.signature_ok and self.form_ok


def verify_e8_complement(name: str, search_bound: int = 1) -> ComplementCheck:
    """Embed the root lattice ``name`` into E8 and compare the orthogonal
    complement's genus invariants with the tabulated lattice."""
    sub = standard_lattice(name)
    e8 = standard_lattice("E8")
    expected = standard_lattice(E8_ROOT_COMPLEMENTS[name])
    rows = find_embedding(sub, e8, search_bound)
    if rows is None:
        raise RuntimeError(f"no embedding of {name} into E8 within bound {search_bound}")
    primitive = all(d == 1 for d in intmat.invariant_factors(rows))
    _, comp = orthogonal_complement(e8, rows)
    form_ok = forms_isomorphic(discriminant_form(comp), discriminant_form(expected)) is not None
    return ComplementCheck(
        sublattice=name,
        expected=expected.label,
        embedding=tuple(map(tuple, rows)),
        primitive=primitive,
        complement=comp,
        rank_ok=comp.rank == expected.rank,
        det_ok=comp.determinant() == expected.determinant(),
        signature_ok=comp.signature() == expected.signature(),
        form_ok=form_ok,
    )



# ---------------------------------------------------------------------------
# root systems of negative-definite lattices


def short_vectors(L: GramLattice, max_norm: int, deadline: float | None = None) -> list[tuple[int, ...]]:
    """All nonzero ``x`` with ``-<x, x> <= max_norm`` in a negative-definite
    lattice, up to sign (first nonzero coordinate positive).

    Fincke-Pohst enumeration over an exact LDL^T decomposition of ``-G``.
    """
    from fractions import Fraction

    n = L.rank
    a = [[Fraction(-x) for x in row] for row in L.gram]
    # q[i][i] = d_i, q[i][j] = mu_ij for j > i, so -<x,x> = sum_i d_i (x_i + sum_{j>i} mu_ij x_j)^2
    q = [row[:] for row in a]
    for i in range(n):
        if q[i][i] <= 0:
            raise Degenerate("lattice is not negative definite")
        for j in range(i + 1, n):
            q[j][i] = q[i][j]
            q[i][j] = q[i][j] / q[i][i]
        for k in range(i + 1, n):
            for j in range(k, n):
                q[k][j] -= q[k][i] * q[i][j]
    out: list[tuple[int, ...]] = []
    x = [0] * n
    bound = Fraction(max_norm)

    def center(i: int) -> Fraction:
        return -sum((q[i][j] * x[j] for j in range(i + 1, n)), Fraction(0))

    def rec(i: int, rest: Fraction) -> None:
        _check_deadline(deadline)
        c = center(i)
        d = q[i][i]
        start = c.__floor__()
        for direction in (0, 1):
            v = start + direction if direction else start
            step = 1 if direction else -1
            while True:
                used = d * (v - c) ** 2
                if used > rest:
                    break
                x[i] = v
                if i == 0:
                    if any(x):
                        out.append(tuple(x))
                else:
                    rec(i - 1, rest - used)
                v += step
        x[i] = 0

    if n:
        rec(n - 1, bound)
    return sorted({v if next(c for c in v if c) > 0 else tuple(-c for c in v) for v in out})


@dataclass(frozen=True)
class RootSystem:
    simple_roots: tuple[tuple[int, ...], ...]
    components: tuple[tuple[str, tuple[int, ...]], ...]  # (type, indices into simple_roots)
    root_count: int

    @property
    def types(self) -> tuple[str, ...]:
        return tuple(sorted(t for t, _ in self.components))


def _ade_type(nodes: Sequence[int], adj: dict[int, set[int]]) -> str:
    n = len(nodes)
    degs = sorted(len(adj[v]) for v in nodes)
    if n == 1 or degs[-1] <= 2:
        return f"A{n}"
    branch = next(v for v in nodes if len(adj[v]) == 3)
    arms = []
    for start in adj[branch]:
        length, prev, cur = 1, branch, start
        while True:
            nxt = [w for w in adj[cur] if w != prev]
            if not nxt:
                break
            prev, cur = cur, nxt[0]
            length += 1
        arms.append(length)
    arms.sort()
    if arms[0] == 1 and arms[1] == 1:
        return f"D{n}"
    if arms[:2] == [1, 2] and arms[2] in (2, 3, 4):
        return f"E{n}"
    raise ValueError(f"not a Dynkin diagram of finite type (arms {arms})")


def root_system(L: GramLattice, deadline: float | None = None) -> RootSystem:
    """Simple roots and Dynkin components of the norm ``-2`` vectors of a
    negative-definite even lattice."""
    roots = [r for r in short_vectors(L, 2, deadline) if L.norm(r) == -2]
    if not roots:
        return RootSystem((), (), 0)
    big = 2 * max(abs(c) for r in roots for c in r) + 1
    weights = [big**i for i in range(L.rank)]

    def height(v):
        return sum(w * c for w, c in zip(weights, v))

    positive = sorted({r if height(r) > 0 else tuple(-c for c in r) for r in roots}, key=height)
    pos_set = set(positive)
    simple = []
    for r in positive:
        decomposable = any(
            tuple(a - b for a, b in zip(r, s)) in pos_set for s in positive if height(s) < height(r)
        )
        if not decomposable:
            simple.append(r)
    adj: dict[int, set[int]] = {i: set() for i in range(len(simple))}
    for i, j in combinations(range(len(simple)), 2):
        if L.inner(simple[i], simple[j]) != 0:
            adj[i].add(j)
            adj[j].add(i)
    comps = []
    seen: set[int] = set()
    for i in range(len(simple)):
        if i in seen:
            continue
        stack, comp = [i], []
        seen.add(i)
        while stack:
            v = stack.pop()
            comp.append(v)
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        comp.sort()
        comps.append((_ade_type(comp, adj), tuple(comp)))
    return RootSystem(tuple(simple), tuple(comps), len(roots))


def _match_diagram(gram_a, gram_b) -> list[int] | None:
    """Permutation ``p`` with ``gram_a[p[i]][p[j]] == gram_b[i][j]``."""
    n = len(gram_b)
    if len(gram_a) != n:
        return None
    perm: list[int] = []
    used = [False] * n

    def extend(i):
        if i == n:
            return list(perm)
        for c in range(n):
            if used[c] or gram_a[c][c] != gram_b[i][i]:
                continue
            if any(gram_a[perm[j]][c] != gram_b[j][i] for j in range(i)):
                continue
            used[c] = True
            perm.append(c)
            found = extend(i + 1)
            if found:
                return found
            perm.pop()
            used[c] = False
        return None

    return extend(0)


def isometry_via_roots(
    L: GramLattice,
    target_terms: Sequence[str],
    search_bound: int,
    deadline: float | None = None,
) -> list[list[int]] | None:
    """Witness ``B`` with ``B G B^T`` equal to ``U + R_1 + ... + R_k`` (given as
    term names, U first, the rest root lattices).

    Splits off a hyperbolic plane, then identifies the negative-definite
    complement with the root lattice spanned by its simple roots; this works
    exactly when the complement is generated by its roots.
    """
    terms = list(target_terms)
    if not terms or terms[0] != "U":
        return None
    try:
        split = find_hyperbolic_plane(L, search_bound, deadline)
        if split is None:
            return None
        K = split.complement
        if K.rank == 0:
            rs = RootSystem((), (), 0)
        else:
            rs = root_system(K, deadline)
    except (SearchTimeout, Degenerate, ValueError):
        return None
    wanted = [standard_lattice(t) for t in terms[1:]]
    if sorted(w.label for w in wanted) != sorted(rs.types):
        return None
    if len(rs.simple_roots) != K.rank:
        return None
    rows_k: list[tuple[int, ...]] = []
    free = list(rs.components)
    for w in wanted:
        pick = next(c for c in free if c[0] == w.label)
        free.remove(pick)
        idx = pick[1]
        sub = [[K.inner(rs.simple_roots[i], rs.simple_roots[j]) for j in idx] for i in idx]
        perm = _match_diagram(sub, w.gram)
        if perm is None:
            return None
        rows_k.extend(rs.simple_roots[idx[p]] for p in perm)
    kb = [list(r) for r in split.complement_basis]
    rows = [list(split.e), list(split.f)] + [intmat.vecmat(list(r), kb) for r in rows_k]
    rows = [[int(c) for c in r] for r in rows]
    if abs(intmat.determinant(rows)) != 1:
        return None
    return rows
