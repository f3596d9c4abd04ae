from math import comb

import pytest

from upslopes.padic import (Classical, CMatrix, CycloElt, DirichletCharacter, DiskPoint,
                            PadicContext, PrecisionError)
from upslopes.weightact import (RESCALE_B, RESCALE_PI, MonoidElt, Rescale, apply_scale,
                                generating_matrix, verify_congruence_shape)

TRIV = DirichletCharacter.trivial(3)
PSI = DirichletCharacter(3, 2, 0, 2)


def test_monoid_validation():
    with pytest.raises(ValueError):
        MonoidElt(1, 0, 3, 1, 3, m=2)
    with pytest.raises(ValueError):
        MonoidElt(1, 0, 0, 3, 3)
    with pytest.raises(ValueError):
        MonoidElt(1, 1, 0, 0, 3)
    assert MonoidElt(3, 2, 0, 4, 3, m=2).shape == "Up"
    assert MonoidElt(1, 2, 0, 4, 3, m=2).shape == "Tl"
    assert MonoidElt.parse("3, 2, 0, 4", 3, 2).entries() == (3, 2, 0, 4)


@pytest.mark.parametrize("kappa", [Classical(3, TRIV), DiskPoint(PSI, 5)])
def test_identity_acts_trivially(kappa):
    ctx = PadicContext(3, m=2, prec=12)
    A = generating_matrix(MonoidElt(1, 0, 0, 1, 3, m=2), kappa, 6, ctx)
    assert A.matrix == CMatrix.identity(ctx, 6)


@pytest.mark.parametrize("b", [1, 2, -5, 9])
def test_translation_matches_binomial_oracle(b):
    ctx = PadicContext(3, prec=15)
    N = 7
    A = generating_matrix(MonoidElt(1, b, 0, 1, 3), Classical(1, TRIV), N, ctx)
    expect = [[comb(j, i) * b ** (j - i) if j >= i else 0 for j in range(N)] for i in range(N)]
    assert A.matrix == CMatrix.from_ints(ctx, expect)


def test_example_first_term_against_closed_form():
    # kappa(4) / (4 - xy - 2 pi y) expanded: entry (i, j) = 4 xi C(j, i) (2 pi)^(j-i) / 4^(j+1)
    ctx = PadicContext(3, m=2, prec=20)
    N = 8
    gamma = MonoidElt(3, 2, 0, 4, 3, m=2)
    A = generating_matrix(gamma, DiskPoint(PSI, 0), N, ctx, RESCALE_PI)
    xi = CycloElt.zeta(ctx)
    two_pi = CycloElt.pi(ctx) * 2
    inv4 = CycloElt.from_int(ctx, 4).inverse()
    for i in range(N):
        for j in range(N):
            want = (xi * comb(j, i) * two_pi ** (j - i) * inv4 ** j) if j >= i else CycloElt.zero(ctx)
            assert A[i, j] == want


def test_example_first_term_displayed_form_mod_3():
    # the displayed term xi / (4 - xy - 2 pi y) agrees with the exact one modulo 3
    ctx = PadicContext(3, m=2, prec=20)
    N = 6
    A = generating_matrix(MonoidElt(3, 2, 0, 4, 3, m=2), DiskPoint(PSI, 0), N, ctx, RESCALE_PI)
    xi = CycloElt.zeta(ctx)
    two_pi = CycloElt.pi(ctx) * 2
    inv4 = CycloElt.from_int(ctx, 4).inverse()
    for i in range(N):
        for j in range(i, N):
            displayed = xi * comb(j, i) * two_pi ** (j - i) * inv4 ** (j + 1)
            assert (A[i, j] - displayed).valuation() >= 1


@pytest.mark.parametrize("rescale", [None, RESCALE_B])
def test_truncation_coherence(rescale):
    ctx = PadicContext(3, m=2, prec=15)
    gamma = MonoidElt(3, 5, 9, 7, 3, m=2)
    kappa = DiskPoint(PSI, 2)
    small = generating_matrix(gamma, kappa, 5, ctx, rescale).matrix
    for k in (1, 4):
        big = generating_matrix(gamma, kappa, 5 + k, ctx, rescale).matrix
        assert big.submatrix(range(5), range(5)) == small


@pytest.mark.parametrize("k", [1, 2, 3, 5])
def test_classical_weight_preserves_polynomials(k):
    ctx = PadicContext(3, m=2, prec=15)
    gamma = MonoidElt(3, 5, 9, 7, 3, m=2)
    N = k + 4
    A = generating_matrix(gamma, Classical(k, TRIV), N, ctx)
    for j in range(k):
        for i in range(k, N):
            assert A[i, j].is_zero()


def test_rescaled_up_diagonal_valuation():
    ctx = PadicContext(3, m=2, prec=20)
    gamma = MonoidElt(3, 5, 9, 7, 3, m=2)
    A = generating_matrix(gamma, DiskPoint(PSI, 1), 8, ctx, RESCALE_B)
    for i in range(8):
        assert A[i, i].valuation() == i


def test_rescale_must_be_integral():
    ctx = PadicContext(3, m=2, prec=10)
    with pytest.raises(ValueError):
        generating_matrix(MonoidElt(1, 1, 0, 1, 3), Classical(1, TRIV), 4, ctx,
                          Rescale(0, 0, -1, 0))


def test_apply_scale_unit_handling():
    ctx = PadicContext(3, m=2, prec=10)
    x = CycloElt.from_int(ctx, 9)
    assert apply_scale(x, -1, 0) == 3
    pi = CycloElt.pi(ctx)
    assert apply_scale(pi, 1, -1) == 3


def test_identity_congruence_tl():
    ctx = PadicContext(3, m=4, prec=10)
    A = generating_matrix(MonoidElt(1, 0, 0, 1, 3, m=4), DiskPoint(TRIV, 0), 5, ctx, RESCALE_B)
    assert verify_congruence_shape(A, "Tl")


def test_synthetic_up_congruence_strict():
    ctx = PadicContext(3, m=4, prec=12)
    gamma = MonoidElt(3, 0, 81, 1, 3, m=4)
    A = generating_matrix(gamma, DiskPoint(TRIV, 0), 6, ctx, RESCALE_B)
    rep = verify_congruence_shape(A)
    assert rep.strict and rep.passed


def test_example_congruence_report_only():
    ctx = PadicContext(3, m=2, prec=20)
    A = generating_matrix(MonoidElt(3, 2, 0, 4, 3, m=2), DiskPoint(PSI, 0), 6, ctx, RESCALE_B)
    rep = verify_congruence_shape(A)
    assert not rep.strict
    assert rep.to_json()["mode"] == "report-only"


def test_congruence_detects_corruption():
    ctx = PadicContext(3, m=4, prec=12)
    gamma = MonoidElt(3, 0, 81, 1, 3, m=4)
    A = generating_matrix(gamma, DiskPoint(TRIV, 0), 5, ctx, RESCALE_B)
    A.matrix.set(3, 1, A.matrix[3, 1] + 1)
    assert not verify_congruence_shape(A)


def test_low_precision_gamma_rejected():
    ctx = PadicContext(3, m=2, prec=20)
    gamma = MonoidElt(3, 2, 0, 4, 3, m=2, prec=5)
    with pytest.raises(PrecisionError):
        generating_matrix(gamma, DiskPoint(PSI, 0), 4, ctx)
