import numpy as np
import pytest
from hypothesis import given, strategies as st

from upslopes.padic import CMatrix, CycloElt, PadicContext, residue_rank, unit_inverse

CTX = PadicContext(3, m=2, prec=15)

int_matrices = st.integers(1, 4).flatmap(
    lambda n: st.lists(st.lists(st.integers(-20, 20), min_size=n, max_size=n),
                       min_size=n, max_size=n))


def int_matmul(A, B):
    return (np.array(A, dtype=object) @ np.array(B, dtype=object)).tolist()


@given(int_matrices, st.data())
def test_matmul_matches_integer_oracle(A, data):
    n = len(A)
    B = data.draw(st.lists(st.lists(st.integers(-20, 20), min_size=n, max_size=n),
                           min_size=n, max_size=n))
    lhs = CMatrix.from_ints(CTX, A) @ CMatrix.from_ints(CTX, B)
    assert lhs == CMatrix.from_ints(CTX, int_matmul(A, B))


def test_identity_and_diag():
    I = CMatrix.identity(CTX, 3)
    D = CMatrix.diag(CTX, [1, 3, 9])
    assert I @ D == D
    assert D[2, 2] == 9
    assert D.T == D


def test_block_diag():
    A = CMatrix.from_ints(CTX, [[1, 2], [3, 4]])
    B = CMatrix.from_ints(CTX, [[5]])
    M = CMatrix.block_diag([A, B])
    assert M.submatrix(range(2), range(2)) == A
    assert M[2, 2] == 5 and M[0, 2] == 0


@given(int_matrices)
def test_unit_inverse(A):
    M = CMatrix.from_ints(CTX, A)
    n = M.nrows
    if residue_rank(M) == n:
        assert M @ unit_inverse(M) == CMatrix.identity(CTX, n)
    else:
        with pytest.raises(ArithmeticError):
            unit_inverse(M)


def test_residue_rank():
    assert residue_rank(CMatrix.from_ints(CTX, [[1, 0], [0, 3]])) == 1
    assert residue_rank(CMatrix.from_ints(CTX, [[1, 2], [2, 1]])) == 1
    pi = CycloElt.uniformizer(CTX)
    M = CMatrix.from_entries(CTX, [[pi, CycloElt.zero(CTX)], [CycloElt.zero(CTX), CycloElt.one(CTX)]])
    assert residue_rank(M) == 1


def test_valuations_of_entries():
    M = CMatrix.from_ints(CTX, [[3, 1], [9, 0]])
    vals = M.valuations()
    assert vals[0][0] == 1 and vals[0][1] == 0 and vals[1][0] == 2
    assert not vals[1][1].exact
    assert M.min_valuation() == 0


def test_conj_and_power():
    ctx = PadicContext(3, m=3, prec=10)
    z = CycloElt.zeta(ctx)
    M = CMatrix.from_entries(ctx, [[z, z * z], [z, CycloElt.one(ctx)]])
    assert M.conj().conj() == M
    assert M ** 3 == M @ M @ M


def test_permute_matches_conjugation():
    M = CMatrix.from_ints(CTX, [[1, 2, 3], [4, 5, 6], [7, 8, 10]])
    perm = [2, 0, 1]
    P = CMatrix.from_ints(CTX, [[int(perm[i] == j) for j in range(3)] for i in range(3)])
    assert M.permute(perm) == P @ M @ P.T
