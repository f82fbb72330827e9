"""Dense exact matrices: elimination, canonical forms, wire format."""

from fractions import Fraction

import pytest

from splitdec.errors import ShapeMismatch, SingularMatrix
from splitdec.field import GroundField
from splitdec.matrix import (
    Mat,
    hstack,
    inverse,
    kernel,
    rank,
    rcef,
    rref,
    rref_rank_kernel,
    solve,
    vstack,
)

F = GroundField(2)
q = F.q


def M_(rows):
    return Mat.from_rows(F, rows)


class TestBasics:
    def test_construct_and_index(self):
        A = M_([[1, 2], [3, 4]])
        assert A[0, 1] == 2 and A[1, 0] == 3
        assert A.row(1) == [F.scalar(3), F.scalar(4)]
        assert A.col(0) == [F.scalar(1), F.scalar(3)]

    def test_shape_errors(self):
        A = M_([[1, 2], [3, 4]])
        B = M_([[1, 2, 3]])
        with pytest.raises(ShapeMismatch):
            A + B
        with pytest.raises(ShapeMismatch):
            A @ B.transpose()

    def test_matmul_oracle(self):
        # row0: (1*q + q*1, 1*0 + q*1) = (2q, q); row1: (1, 1)
        A = M_([[1, q], [0, 1]])
        B = M_([[q, 0], [1, 1]])
        assert A @ B == M_([[2 * q, q], [1, 1]])

    def test_conj_transpose(self):
        Fm = GroundField(-2)
        A = Mat.from_rows(Fm, [[Fm.q, 1], [0, 2]])
        H = A.conj_transpose()
        assert H[0, 0] == -Fm.q and H[1, 0] == 1

    def test_trace_hadamard(self):
        A = M_([[1, 2], [3, 4]])
        B = M_([[5, 6], [7, 8]])
        assert A.trace() == 5
        assert A.hadamard(B) == M_([[5, 12], [21, 32]])

    def test_scalar_multiplication(self):
        A = M_([[1, 2], [3, 4]])
        assert A * 2 == M_([[2, 4], [6, 8]])
        assert q * A == A.scale(q)
        with pytest.raises(TypeError):
            A * A  # matrix product is @

    def test_stacking(self):
        A = M_([[1, 2]])
        B = M_([[3, 4]])
        assert vstack([A, B]) == M_([[1, 2], [3, 4]])
        assert hstack([A.transpose(), B.transpose()]) == M_([[1, 3], [2, 4]])


class TestElimination:
    def test_rref_oracle(self):
        # [[0,1,2],[0,2,4],[1,1,1]] -> rref [[1,0,-1],[0,1,2],[0,0,0]]
        R, rk, piv = rref(M_([[0, 1, 2], [0, 2, 4], [1, 1, 1]]))
        assert rk == 2 and piv == (0, 1)
        assert R == M_([[1, 0, -1], [0, 1, 2], [0, 0, 0]])

    def test_rank_with_q_relations(self):
        # second row is q * first row
        assert rank(M_([[1, q, 0], [q, 2, 0], [0, 0, 1]])) == 2

    def test_kernel_oracle(self):
        # kernel of [1 1 1] canonical basis: (1,0,-1), (0,1,-1)
        K = kernel(M_([[1, 1, 1]]))
        assert K == M_([[1, 0], [0, 1], [-1, -1]])

    def test_kernel_annihilates(self):
        A = M_([[1, q, 3], [q, 2, 3 * q]])  # rank 1... check: row1 = q*row0? q*(1,q,3)=(q,2,3q) yes
        K = kernel(A)
        assert K.cols == 2
        assert (A @ K).is_zero()

    def test_rref_rank_kernel_consistent(self):
        A = M_([[1, 2, 3], [4, 5, 6], [7, 8, 9]])
        R, rk, K = rref_rank_kernel(A)
        assert rk == 2 and K.cols == 1
        assert (A @ K).is_zero()
        # canonical: kernel of [[1,2,3],[4,5,6]] is spanned by (1,-2,1)
        assert K == M_([[1], [-2], [1]])

    def test_rcef_canonical(self):
        # two spanning sets of the same column space give the same basis:
        # (3,1,1) = (1,1,0) + (2,0,1), so A and B span the same plane
        A = M_([[1, 2], [1, 0], [0, 1]])
        B = M_([[3, 1], [1, 1], [1, 0]])
        BA, prows_a = rcef(A)
        BB, prows_b = rcef(B)
        assert BA == BB and prows_a == prows_b
        assert BA.cols == 2 and prows_a == (0, 1)
        C = hstack([A, A.take_cols([0])])
        assert rcef(C)[0] == BA  # duplicates do not change the canonical basis

    def test_inverse_oracle(self):
        A = M_([[1, q], [0, 1]])
        assert inverse(A) == M_([[1, -q], [0, 1]])
        with pytest.raises(SingularMatrix):
            inverse(M_([[1, 2], [2, 4]]))

    def test_solve(self):
        A = M_([[1, q], [q, 1]])  # det = 1 - 2 = -1
        B = M_([[1], [0]])
        X = solve(A, B)
        assert A @ X == B
        assert X == M_([[-1], [q]])  # (-1, q): check 1*-1 + q*q = 1 ok; q*-1 + q = 0 ok

    def test_zero_and_empty(self):
        Z = Mat.zeros(F, 2, 3)
        assert rank(Z) == 0
        assert kernel(Z) == Mat.identity(F, 3)
        E = Mat.zeros(F, 0, 3)
        assert kernel(E) == Mat.identity(F, 3)
        assert rank(Mat.zeros(F, 3, 0)) == 0


class TestWireFormat:
    def test_roundtrip(self):
        A = M_([[Fraction(1, 2), q], [1 - q, 0]])
        B = Mat.parse(A.encode())
        assert B == A and B.field == F

    def test_negative_b_roundtrip(self):
        Fm = GroundField(-2, qsign=-1)
        A = Mat.from_rows(Fm, [[Fm.q, 1]])
        B = Mat.parse(A.encode())
        assert B == A and B.field.qsign == -1

    def test_rational_mode_roundtrip(self):
        F9 = GroundField(9)
        A = Mat.from_rows(F9, [[Fraction(22, 7), 3]])
        assert Mat.parse(A.encode()) == A

    def test_header_mismatch(self):
        text = M_([[1, 2]]).encode().replace("1 2 2", "1 3 2", 1)
        with pytest.raises(ValueError):
            Mat.parse(text)


class TestNumericBridges:
    def test_to_real(self):
        import numpy as np

        A = M_([[1, q], [0, 2]])
        X = A.to_real()
        assert np.allclose(X, [[1.0, 2 ** 0.5], [0.0, 2.0]])

    def test_to_complex_negative_b(self):
        import numpy as np

        Fm = GroundField(-2)
        A = Mat.from_rows(Fm, [[Fm.q]])
        assert np.allclose(A.to_complex(), [[1j * 2 ** 0.5]])

    def test_int_rep_roundtrip(self):
        A = M_([[Fraction(1, 2), q], [1 - q, 0]])
        U, V, den = A.int_rep()
        assert Mat.from_int_rep(F, U, V, den) == A

    def test_int_rep_no_qpart_is_none(self):
        A = M_([[1, Fraction(2, 3)]])
        _, V, den = A.int_rep()
        assert V is None and den == 3


def test_dimension_formula_random():
    import random

    rng = random.Random(5)
    for _ in range(6):
        A = Mat.from_rows(
            F,
            [
                [F.scalar(rng.randint(-4, 4), rng.randint(-2, 2)) for _ in range(6)]
                for _ in range(3)
            ],
        )
        B = Mat.from_rows(
            F,
            [
                [F.scalar(rng.randint(-4, 4), rng.randint(-2, 2)) for _ in range(6)]
                for _ in range(3)
            ],
        )
        # dim(U + W) + dim(U cap W) = dim U + dim W, via ranks of stacked maps
        ru, rw = rank(A), rank(B)
        rsum = rank(vstack([A, B]))
        # intersection dim: ru + rw - rsum
        assert 0 <= ru + rw - rsum <= min(ru, rw)
