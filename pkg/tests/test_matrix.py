import numpy as np
import pytest

from jordanstrata.fields import GF
from jordanstrata.matrix import Matrix, MatrixError, _rref_generic, _rref_modp, _rref_table


F5 = GF(5)
F7 = GF(7)


def test_rank_zero_matrix():
    assert Matrix.zeros(F5, 4, 4).rank() == 0


def test_rank_identity():
    assert Matrix.identity(F7, 6).rank() == 6


def test_rank_dependent_rows():
    # second row is twice the first mod 5
    assert Matrix.from_rows(F5, [[1, 2], [2, 4]]).rank() == 1


def test_kernel_identity_empty():
    assert Matrix.identity(F5, 4).kernel_basis().cols == 0


def test_kernel_zero_is_standard_basis():
    assert Matrix.zeros(F5, 3, 3).kernel_basis() == Matrix.identity(F5, 3)


def test_kernel_single_nilpotent_block():
    j3 = Matrix.from_rows(F5, [[0, 1, 0], [0, 0, 1], [0, 0, 0]])
    ker = j3.kernel_basis()
    assert ker.cols == 1
    assert (j3 @ ker).is_zero()


def test_kernel_vectors_are_killed():
    rng = np.random.default_rng(3)
    for _ in range(20):
        A = Matrix(F5, rng.integers(0, 5, size=(5, 7)))
        ker = A.kernel_basis()
        assert ker.cols == 7 - A.rank()
        if ker.cols:
            assert (A @ ker).is_zero()


def test_rank_product_bound_random():
    rng = np.random.default_rng(11)
    F = GF(7, 2)
    for _ in range(25):
        A = Matrix(F, rng.integers(0, 49, size=(6, 4)))
        B = Matrix(F, rng.integers(0, 49, size=(4, 5)))
        assert (A @ B).rank() <= min(A.rank(), B.rank())


def test_three_engines_agree():
    rng = np.random.default_rng(5)
    F9 = GF(3, 2)
    for _ in range(15):
        a = rng.integers(0, 9, size=(6, 6))
        Rt, pt = _rref_table(a, F9.tables())
        Rg, pg = _rref_generic(a, F9)
        assert pt == pg and (Rt == Rg).all()
        b = rng.integers(0, 3, size=(6, 6))
        Rm, pm = _rref_modp(b, 3)
        Rg2, pg2 = _rref_generic(b, GF(3))
        assert pm == pg2 and (Rm == Rg2).all()


def test_matmul_against_naive():
    rng = np.random.default_rng(9)
    F = GF(3, 2)
    A = Matrix(F, rng.integers(0, 9, size=(4, 3)))
    B = Matrix(F, rng.integers(0, 9, size=(3, 5)))
    C = A @ B
    for i in range(4):
        for j in range(5):
            s = 0
            for k in range(3):
                s = F.add(s, F.mul(int(A.a[i, k]), int(B.a[k, j])))
            assert int(C.a[i, j]) == s


def test_kron_entry_formula():
    rng = np.random.default_rng(13)
    F = GF(5)
    A = Matrix(F, rng.integers(0, 5, size=(2, 3)))
    B = Matrix(F, rng.integers(0, 5, size=(3, 2)))
    K = A.kron(B)
    for i in range(2):
        for j in range(3):
            for k in range(3):
                for l in range(2):
                    assert int(K.a[i * 3 + k, j * 2 + l]) == F.mul(int(A.a[i, j]), int(B.a[k, l]))


def test_solve_and_inverse():
    rng = np.random.default_rng(21)
    F = GF(7, 2)
    while True:
        A = Matrix(F, rng.integers(0, 49, size=(5, 5)))
        if A.rank() == 5:
            break
    X = Matrix(F, rng.integers(0, 49, size=(5, 2)))
    rhs = A @ X
    sol = A.solve(rhs)
    assert sol == X  # full-rank square system has a unique solution
    inv = A.inverse()
    assert A @ inv == Matrix.identity(F, 5)


def test_solve_inconsistent_returns_none():
    A = Matrix.from_rows(F5, [[1, 0], [2, 0]])
    rhs = Matrix.from_rows(F5, [[0], [1]])
    assert A.solve(rhs) is None


def test_rank_chain_matches_block_structure():
    # ranks of powers of a nilpotent block matrix follow the partition formula
    from jordanstrata.jordan import JordanType

    t = JordanType.from_blocks(5, {3: 2, 2: 1, 1: 4})
    m = t.nilpotent_matrix()
    chain = m.rank_chain(5)
    expected = [sum(c * (i + 1 - j) for i, c in enumerate(t.counts) if i + 1 > j) for j in range(1, 6)]
    assert chain == expected


def test_immutability():
    A = Matrix.identity(F5, 3)
    with pytest.raises(ValueError):
        A.a[0, 0] = 2


def test_lift_prime_to_extension():
    A = Matrix.from_rows(F5, [[1, 2], [3, 4]])
    B = A.lift(GF(5, 3))
    assert B.field == GF(5, 3) and (B.a == A.a).all()
    with pytest.raises(MatrixError):
        B.lift(GF(5, 2))
