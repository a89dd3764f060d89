import random
from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from k3dual import dataset, intmat
from k3dual.discriminant import (
    discriminant_form,
    find_form_isomorphism,
    forms_isomorphic,
    forms_opposite,
    min_generators,
    torsion_order,
    verify_form_witness,
)
from k3dual.errors import Degenerate, GroupTooLarge, NonIntegral, NotEven
from k3dual.lattice import (
    GramLattice,
    apply_basis_change,
    direct_sum,
    inertia,
    nikulin_embedding_check,
    parse_lattice,
    signature_descartes,
    standard_lattice,
)

from conftest import random_unimodular


def golden(name, side):
    return GramLattice.from_rows(dataset.raw_case(name)["golden"][f"gram_{side}"], f"{name}:{side}")


def sym_matrices(max_n=8, lo=-4, hi=4):
    def build(n):
        return st.lists(st.integers(lo, hi), min_size=n * (n + 1) // 2, max_size=n * (n + 1) // 2).map(
            lambda xs: _fill(n, xs)
        )

    return st.integers(1, max_n).flatmap(build)


def _fill(n, xs):
    g = [[0] * n for _ in range(n)]
    it = iter(xs)
    for i in range(n):
        for j in range(i, n):
            g[i][j] = g[j][i] = next(it)
    return g


def _even(g):
    return [[2 * x if i == j else x for j, x in enumerate(r)] for i, r in enumerate(g)]


# constructors -------------------------------------------------------------------


@pytest.mark.parametrize(
    "name,rank,det",
    [("U", 2, -1), ("A1", 1, -2), ("A2", 2, 3), ("A3", 3, -4), ("D4", 4, 4), ("D5", 5, -4),
     ("E6", 6, 3), ("E7", 7, -2), ("E8", 8, 1), ("C6_8", 2, 7)],
)
def test_standard_lattices(name, rank, det):
    L = standard_lattice(name)
    assert L.rank == rank and L.determinant() == det
    assert L.is_even()
    # cross-check the determinant with an independent implementation
    assert int(sympy.Matrix(L.gram).det()) == det
    if name not in ("U", "C6_8"):
        assert L.signature() == (0, rank)
        # Dynkin diagram is a tree
        edges = sum(1 for i in range(rank) for j in range(i) if L.gram[i][j])
        assert edges == rank - 1


def test_root_lattice_eigenvalues_are_negative():
    for name in ("A7", "D6", "E6", "E7", "E8"):
        ev = np.linalg.eigvalsh(np.array(standard_lattice(name).gram, dtype=float))
        assert (ev < 0).all()


def test_invalid_names():
    for bad in ("A0", "E5", "E9", "D1", "X3", "Q"):
        with pytest.raises(ValueError):
            standard_lattice(bad)


def test_parse_lattice_and_sums():
    L = parse_lattice("U+A1+A3")
    assert L.rank == 6 and L.determinant() == -8
    assert intmat.invariant_factors(L.gram) == [1, 1, 1, 1, 2, 4]
    UU = direct_sum(standard_lattice("U"), standard_lattice("U"))
    assert UU.rank == 4 and UU.signature() == (2, 2)
    A = direct_sum(standard_lattice("A1"), standard_lattice("A2"))
    assert A.determinant() == -6
    P = direct_sum(golden("Q17_Z20", "delta"), standard_lattice("U"))
    assert P.rank == 17 and abs(P.determinant()) == 6
    with pytest.raises(ValueError):
        parse_lattice("U++A1")


def test_parse_custom(tmp_path):
    (tmp_path / "m.json").write_text('{"label": "M", "gram": [[0, 2], [2, -2]]}', encoding="utf-8")
    L = parse_lattice("custom:m.json+A1", base_dir=tmp_path)
    assert L.rank == 3 and L.determinant() == 8


def test_gram_must_be_symmetric():
    with pytest.raises(ValueError):
        GramLattice.from_rows([[0, 1], [2, 0]])


# signature ----------------------------------------------------------------------


@settings(max_examples=100, deadline=None)
@given(sym_matrices())
def test_signature_two_methods_agree(g):
    pos, neg, zero = inertia(g)
    assert pos + neg + zero == len(g)
    if intmat.determinant(g) == 0:
        assert zero > 0
        with pytest.raises(Degenerate):
            signature_descartes(g)
        return
    assert zero == 0
    assert signature_descartes(g) == (pos, neg)


@settings(max_examples=50, deadline=None)
@given(sym_matrices(6))
def test_inertia_matches_numpy(g):
    ev = np.linalg.eigvalsh(np.array(g, dtype=float))
    if intmat.determinant(g) != 0:
        assert inertia(g)[:2] == (int((ev > 0).sum()), int((ev < 0).sum()))


def test_signature_examples():
    assert golden("Z10", "delta").signature() == (1, 13)
    assert golden("W10", "delta").signature() == (1, 17)
    assert standard_lattice("U").signature() == (1, 1)
    with pytest.raises(Degenerate):
        GramLattice.from_rows([[0, 0], [0, -2]]).signature()


def test_zero_diagonal_pivot():
    # every diagonal entry zero: needs the hyperbolic block step
    g = [[0, 1, 2], [1, 0, 3], [2, 3, 0]]
    assert inertia(g) == (1, 2, 0)
    assert signature_descartes(g) == (1, 2)


# discriminant forms ---------------------------------------------------------------


def test_a1_form():
    F = discriminant_form(standard_lattice("A1"))
    assert F.invariant_factors == (2,)
    assert F.q_values == (Fraction(3, 2),)  # -1/2 mod 2
    assert forms_opposite(F, F) is None
    assert forms_isomorphic(F, F) is not None


def test_trivial_form():
    F = discriminant_form(standard_lattice("E8"))
    assert F.order == 1 and min_generators(F) == 0
    assert forms_opposite(F, F) == ()


@pytest.mark.parametrize(
    "name,factors",
    [("Z10", (2, 4)), ("U10", (18,)), ("Q17_Z20", (6,)), ("W10", (2, 2))],
)
def test_golden_groups(name, factors):
    for side in ("delta", "delta_prime"):
        L = golden(name, side)
        F = discriminant_form(L)
        assert F.invariant_factors == factors
        assert F.order == abs(L.determinant())
        s = sympy.Matrix(L.gram)
        assert F.order == abs(int(s.det()))


def _check_generators(L):
    F = discriminant_form(L)
    assert F.order == abs(L.determinant())
    assert all(b % a == 0 for a, b in zip(F.invariant_factors, F.invariant_factors[1:]))
    for d, g, qv in zip(F.invariant_factors, F.generators, F.q_values):
        assert all((d * c).denominator == 1 for c in g)  # d g lies in L
        dual = intmat.matvec(L.gram, g)
        assert all(Fraction(c).denominator == 1 for c in dual)  # g lies in L*
        assert torsion_order(L, [int(c) for c in dual]) == d
        val = L.inner(g, g)
        assert (val - qv) % 2 == 0


@pytest.mark.parametrize("name", ["Z10", "U10", "Q17_Z20", "W10"])
def test_generators_on_golden(name):
    for side in ("delta", "delta_prime"):
        _check_generators(golden(name, side))


@settings(max_examples=50, deadline=None)
@given(sym_matrices(5, -3, 3))
def test_generators_random(g):
    L = GramLattice.from_rows(_even(g))
    if L.determinant() == 0 or abs(L.determinant()) > 400:
        return
    _check_generators(L)


def test_basis_change_preserves_form():
    rng = random.Random(99)
    for name in ("Z10", "U10", "Q17_Z20", "W10"):
        L = golden(name, "delta_prime")
        B = random_unimodular(rng, L.rank)
        M = apply_basis_change(L, B)
        assert M.determinant() == L.determinant()
        assert M.signature() == L.signature()
        w = forms_isomorphic(discriminant_form(L), discriminant_form(M))
        assert w is not None
        assert verify_form_witness(discriminant_form(L), discriminant_form(M), w, sign=1)


def test_forms_opposite_on_cases():
    U = standard_lattice("U")
    for name in ("Z10", "U10", "Q17_Z20", "W10"):
        S = direct_sum(golden(name, "delta"), U)
        T = golden(name, "delta_prime")
        FS, FT = discriminant_form(S), discriminant_form(T)
        w = forms_opposite(FS, FT)
        assert w is not None and verify_form_witness(FS, FT, w, sign=-1)
        assert S.determinant() == -T.determinant()
        # A(L + U) and A(L) carry the same form
        assert forms_isomorphic(FS, discriminant_form(golden(name, "delta"))) is not None


def test_witness_verifier_rejects_tampering():
    FS = discriminant_form(golden("U10", "delta"))
    FT = discriminant_form(golden("U10", "delta_prime"))
    w = forms_opposite(FS, FT)
    assert verify_form_witness(FS, FT, w)
    assert not verify_form_witness(FS, FT, [(2,)])  # not a generator of C18
    assert not verify_form_witness(FS, FT, [(3,)])  # order 6 only


def test_group_too_large():
    L = GramLattice.from_rows([[-2 * 101, 0], [0, -2 * 103]])
    F = discriminant_form(L)
    with pytest.raises(GroupTooLarge):
        find_form_isomorphism(F, F, max_order=1000)


def test_discriminant_requires_even_and_nondegenerate():
    with pytest.raises(NotEven):
        discriminant_form(GramLattice.from_rows([[1]]))
    with pytest.raises(Degenerate):
        discriminant_form(GramLattice.from_rows([[0, 0], [0, -2]]))


def test_torsion_order_examples():
    M = golden("Z10", "delta")
    assert torsion_order(M, [0] * 14) == 1
    x = [3, 1, 2, 1, 1, 0, 5, 1, 2, 3, 1, 1, 2, 7]
    assert torsion_order(M, x) == 4
    W = golden("W10", "delta")
    rng = random.Random(1)
    for _ in range(20):
        assert 2 % torsion_order(W, [rng.randint(-5, 5) for _ in range(18)]) == 0


# embeddings -----------------------------------------------------------------------


def test_apply_basis_change_examples():
    M = golden("U10", "delta_prime")
    out = apply_basis_change(M, [[1, 1, 0], [0, 0, 1], [-1, 0, 0]])
    assert [list(r) for r in out.gram] == [[0, 3, 0], [3, -2, 0], [0, 0, -2]]
    assert apply_basis_change(M, intmat.identity(3)).gram == M.gram
    with pytest.raises(NonIntegral):
        apply_basis_change(M, [[Fraction(1, 2), 0, 0], [0, 1, 0], [0, 0, 1]])
    with pytest.raises(ValueError):
        apply_basis_change(M, [[1, 0, 0], [2, 0, 0]])


def test_nikulin_on_golden():
    for name in ("Z10", "U10", "Q17_Z20", "W10"):
        for side in ("delta", "delta_prime"):
            chk = nikulin_embedding_check(golden(name, side))
            assert chk.passed, (name, side, chk.as_dict())
    z = nikulin_embedding_check(golden("Z10", "delta"))
    assert z.rank_gap == 8 and z.length == 2 and z.room == (2, 6)


def test_nikulin_failures_and_flag():
    # rank 22 lattice with t_- = 20: no room on the negative side
    big = direct_sum(standard_lattice("U"), standard_lattice("U"), standard_lattice("E8"),
                     standard_lattice("E8"), standard_lattice("A1"), standard_lattice("A1"))
    chk = nikulin_embedding_check(big)
    assert big.signature() == (2, 20)
    assert not chk.cond_room and not chk.passed
    # gap equal to the length: strict fails, non-strict passes
    L = direct_sum(standard_lattice("U"), standard_lattice("E8"), standard_lattice("E8"),
                   standard_lattice("A1"), standard_lattice("A1"))
    assert L.rank == 20
    assert not nikulin_embedding_check(L).cond_length
    assert nikulin_embedding_check(L, strict=False).cond_length
    with pytest.raises(NotEven):
        nikulin_embedding_check(GramLattice.from_rows([[1]]))
