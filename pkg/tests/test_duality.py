from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, strategies as st

from upslopes.corpus import load_fixture_matrix
from upslopes.duality import (ClassicalBlock, ResidualProjector, check_idempotents,
                              commuting_projector_family, hodge_duality_check, idempotent_limit,
                              image_basis, pair, random_unit_matrix, separate_dominant_slope,
                              split_and_factor, verify_adjunction)
from upslopes.padic import CMatrix, CycloElt, PadicContext
from upslopes.spectral import char_series, newton_polygon

CTX = PadicContext(3, m=3, prec=20)


def test_pair_basis_vectors():
    assert pair([1, 0], [1, 0]) == 1
    assert pair([1, 0], [0, 1]) == 0


@given(st.lists(st.tuples(st.integers(-99, 99), st.integers(-99, 99)), min_size=1, max_size=8))
def test_pair_matches_dot_product(pairs):
    a = [x for x, _ in pairs]
    b = [y for _, y in pairs]
    assert pair(a, b) == sum(x * y for x, y in pairs)
    ea = [CycloElt.from_int(CTX, x) for x in a]
    eb = [CycloElt.from_int(CTX, y) for y in b]
    assert pair(ea, eb) == sum(x * y for x, y in pairs)


def test_pair_length_mismatch():
    with pytest.raises(ValueError):
        pair([1], [1, 2])


@pytest.mark.parametrize("name", ["m3", "m4"])
def test_fixture_adjunction(name):
    M = load_fixture_matrix(name)
    assert M.conj().T @ M == CMatrix.identity(M.ctx, M.nrows) * 3
    B = ClassicalBlock.self_conjugate(M, name)
    assert verify_adjunction(B)
    # the adjunction implies the Hodge duality
    assert hodge_duality_check(B)


def test_fixture_hodge_slopes():
    assert ClassicalBlock.self_conjugate(load_fixture_matrix("m3")).alphas() == [0, F(1, 2), 1]
    m4 = ClassicalBlock.self_conjugate(load_fixture_matrix("m4"))
    assert m4.alphas() == [F(0)] * 3 + [F(1, 2)] * 3 + [F(1)] * 3
    assert m4.is_integral()


def test_diagonal_pair():
    ctx = PadicContext(3, prec=10)
    B = ClassicalBlock(CMatrix.diag(ctx, [1, 3]), "d", CMatrix.diag(ctx, [3, 1]))
    assert verify_adjunction(B)
    assert hodge_duality_check(B)


def test_adjunction_fails_for_wrong_partner():
    ctx = PadicContext(3, prec=10)
    B = ClassicalBlock(CMatrix.diag(ctx, [1, 3]), "d", CMatrix.diag(ctx, [1, 3]))
    assert not verify_adjunction(B)


def test_missing_partner():
    with pytest.raises(ValueError):
        verify_adjunction(ClassicalBlock(CMatrix.identity(CTX, 2)))


# -- idempotents ------------------------------------------------------------------

def test_exact_idempotent_is_fixed():
    P = CMatrix.diag(CTX, [1, 0])
    assert idempotent_limit(P) == P


def test_perturbed_projector_converges():
    pi = CycloElt.uniformizer(CTX)
    N = CMatrix.from_ints(CTX, [[0, 5], [0, 0]])
    P = CMatrix.diag(CTX, [1, 0]) + N * pi
    Q = idempotent_limit(P)
    assert Q @ Q == Q
    assert ((Q - P) * 1).min_valuation() > 0
    assert idempotent_limit(Q) == Q


def test_non_idempotent_rejected():
    with pytest.raises(ValueError):
        idempotent_limit(CMatrix.diag(CTX, [2, 0]))


@pytest.mark.parametrize("seed", range(20))
def test_projector_family_identities(seed):
    rng = np.random.default_rng(seed)
    sizes = [int(x) for x in rng.integers(1, 3, size=int(rng.integers(2, 4)))]
    projs, _ = commuting_projector_family(CTX, sizes, rng)
    Qs = [idempotent_limit(P) for P in projs]
    n = sum(sizes)
    total = CMatrix.zeros(CTX, n)
    for i, Q in enumerate(Qs):
        assert Q @ Q == Q
        for j, R in enumerate(Qs):
            if i != j:
                assert (Q @ R).is_zero()
        total = total + Q
    assert total == CMatrix.identity(CTX, n)
    check_idempotents(Qs)


def test_from_hecke_rejects_indistinct_eigenvalues():
    T = CMatrix.diag(CTX, [1, 4])
    with pytest.raises(ValueError):
        ResidualProjector.from_hecke(CTX, [(T, 1, [4])])


def test_image_basis_left_inverse():
    rng = np.random.default_rng(3)
    projs, _ = commuting_projector_family(CTX, [2, 1], rng)
    Q = idempotent_limit(projs[0])
    B, L = image_basis(Q)
    assert B.ncols == 2
    assert L @ B == CMatrix.identity(CTX, 2)
    assert Q @ B == B


# -- splittings ---------------------------------------------------------------------

def test_split_coordinate_projectors():
    A = CMatrix.from_ints(CTX, [[3, 1], [9, 3]])
    Bm = CMatrix.from_ints(CTX, [[1]])
    M = CMatrix.block_diag([A, Bm])
    projs = [CMatrix.diag(CTX, [1, 1, 0]), CMatrix.diag(CTX, [0, 0, 1])]
    sp = split_and_factor(M, projs)
    assert sp.blocks[0] == A and sp.blocks[1] == Bm
    assert sp.product_ok


def test_split_rejects_noncommuting():
    M = CMatrix.from_ints(CTX, [[1, 1], [0, 3]])
    with pytest.raises(ValueError):
        split_and_factor(M, [CMatrix.diag(CTX, [1, 0]), CMatrix.diag(CTX, [0, 1])])


@pytest.mark.parametrize("seed", range(5))
def test_split_random_conjugate(seed):
    rng = np.random.default_rng(100 + seed)
    S = random_unit_matrix(CTX, 4, rng)
    Si = S.inverse()
    D = CMatrix.block_diag([CMatrix.from_ints(CTX, [[3, 1], [3, 6]]),
                            CMatrix.from_ints(CTX, [[1, 9], [0, 2]])])
    M = S @ D @ Si
    projs = [S @ CMatrix.diag(CTX, [1, 1, 0, 0]) @ Si, S @ CMatrix.diag(CTX, [0, 0, 1, 1]) @ Si]
    sp = split_and_factor(M, projs)
    assert sp.ranks == [2, 2]
    assert sp.product_ok
    assert sorted(sum(sp.slopes(), [])) == newton_polygon(char_series(M)).slopes()


@pytest.mark.parametrize("seed", range(4))
def test_hecke_projectors_commute_and_split(seed):
    rng = np.random.default_rng(200 + seed)
    S = random_unit_matrix(CTX, 4, rng)
    Si = S.inverse()
    A1 = CMatrix.from_ints(CTX, [[3, 1], [0, 9]])
    A2 = CMatrix.from_ints(CTX, [[1, 3], [3, 2]])
    M = S @ CMatrix.block_diag([A1, A2]) @ Si
    pi = CycloElt.uniformizer(CTX)
    # a Hecke-like operator: eigenvalue 1 on the first piece, 0 on the second, plus pi M
    T = S @ CMatrix.diag(CTX, [1, 1, 0, 0]) @ Si + M * pi
    P1 = ResidualProjector.from_hecke(CTX, [(T, 1, [0])], "first")
    P2 = ResidualProjector.from_hecke(CTX, [(T, 0, [1])], "second")
    for P in (P1, P2):
        assert P.is_residually_idempotent()
        assert P.commutes_with(M)
    sp = split_and_factor(M, [idempotent_limit(P1), idempotent_limit(P2)])
    assert sp.ranks == [2, 2] and sp.product_ok


def test_m3_dominant_splitting():
    hi = PadicContext(3, m=3, prec=160, cyclo_order=9)
    M = load_fixture_matrix("m3", 160)
    assert M.ctx == hi
    ds = separate_dominant_slope(M, 40)
    ctx = ds.matrix.ctx
    assert ds.eigenvalue.valuation() == F(1, 6)
    assert ds.hecke @ ds.matrix == ds.matrix @ ds.hecke
    rng = np.random.default_rng(1)
    U = random_unit_matrix(ctx, 3, rng)
    Ui = U.inverse()
    Mc = U @ ds.matrix @ Ui
    Tc = U @ ds.hecke @ Ui
    P = ResidualProjector.from_hecke(ctx, [(Tc, 1, [0])], "dominant")
    Pc = ResidualProjector.from_hecke(ctx, [(Tc, 0, [1])], "rest")
    assert P.is_residually_idempotent() and P.commutes_with(Mc)
    sp = split_and_factor(Mc, [idempotent_limit(P), idempotent_limit(Pc)])
    assert sp.ranks == [1, 2]
    assert sp.slopes() == [[F(1, 6)], [F(1, 2), F(5, 6)]]
    assert sp.product_ok
    assert sp.total.coeffs == char_series(load_fixture_matrix("m3", 40)).coeffs
