"""Eigenvalues, idempotents, Krein parameters, orderings, dual data."""

import numpy as np
import pytest

from splitdec.errors import ConfigError, EigenvalueNotInField
from splitdec.field import GroundField
from splitdec.graphs import (
    bilinear_forms,
    cycle,
    distance_data,
    hamming,
    hermitian_forms,
    intersection_numbers,
    johnson,
)
from splitdec.matrix import Mat
from splitdec.scheme import (
    check_self_dual,
    dual_data,
    eigenvalues_A1,
    required_field_b,
    scheme_data,
)


def load(g):
    dd = distance_data(g)
    return dd, intersection_numbers(g, dd)


def build(g, b=1, **kw):
    dd, inter = load(g)
    return scheme_data(g, dd, inter, GroundField(b), **kw)


class TestEigenvalues:
    def test_cube(self):
        _, inter = load(hamming(3, 2))
        assert required_field_b(inter) == 1
        th = eigenvalues_A1(inter, GroundField(1))
        assert [t.encode() for t in th] == ["3", "1", "-1", "-3"]

    def test_cycle8_needs_sqrt2(self):
        _, inter = load(cycle(8))
        assert required_field_b(inter) == 2
        with pytest.raises(EigenvalueNotInField):
            eigenvalues_A1(inter, GroundField(1))
        with pytest.raises(EigenvalueNotInField):
            eigenvalues_A1(inter, GroundField(3))
        th = eigenvalues_A1(inter, GroundField(2))
        assert [t.encode() for t in th] == ["2", "0+1*r", "0", "0-1*r", "-2"]

    def test_johnson(self):
        _, inter = load(johnson(5, 2))
        th = eigenvalues_A1(inter, GroundField(1))
        assert [t.encode() for t in th] == ["6", "1", "-2"]

    def test_bilinear(self):
        _, inter = load(bilinear_forms(3, 3, 2))
        th = eigenvalues_A1(inter, GroundField(2))
        assert [t.encode() for t in th] == ["49", "17", "1", "-7"]

    def test_hermitian(self):
        _, inter = load(hermitian_forms(3, 2))
        th = eigenvalues_A1(inter, GroundField(-2))
        assert [t.encode() for t in th] == ["21", "5", "-3", "-11"]


class TestSchemeData:
    def test_cube_multiplicities_and_self_duality(self):
        sd = build(hamming(3, 2))
        assert sd.m == (1, 3, 3, 1)
        assert sd.orderings == ((0, 1, 2, 3),)
        assert sd.self_dual and sd.ordering == (0, 1, 2, 3)

    def test_hamming33(self):
        sd = build(hamming(3, 3))
        assert sd.m == (1, 6, 12, 8)
        assert sd.self_dual

    def test_cycle8_two_orderings(self):
        sd = build(cycle(8), b=2)
        assert sd.m == (1, 2, 2, 2, 1)
        assert sd.orderings == ((0, 1, 2, 3, 4), (0, 3, 2, 1, 4))
        assert sd.self_dual

    def test_johnson_not_self_dual(self):
        sd = build(johnson(5, 2))
        assert sd.m == (1, 4, 5)
        assert set(sd.orderings) == {(0, 1, 2), (0, 2, 1)}
        assert not sd.self_dual
        ok, witness = check_self_dual(sd.krein, sd.p, sd.ordering)
        assert not ok and set(witness) == {"h", "i", "j", "krein", "p"}

    def test_bilinear(self):
        sd = build(bilinear_forms(3, 3, 2), b=2)
        assert sd.m == (1, 49, 294, 168)
        assert sd.self_dual and sd.ordering == (0, 1, 2, 3)

    def test_hermitian_nonnatural_ordering(self):
        sd = build(hermitian_forms(3, 2), b=-2)
        assert sd.m == (1, 210, 280, 21)
        assert sd.orderings == ((0, 3, 1, 2),)
        assert sd.self_dual and sd.ordering == (0, 3, 1, 2)

    def test_explicit_ordering_validation(self):
        with pytest.raises(ConfigError):
            build(hamming(3, 2), ordering=(0, 2, 1, 3))
        sd = build(cycle(8), b=2, ordering=(0, 3, 2, 1, 4))
        assert sd.ordering == (0, 3, 2, 1, 4)

    def test_krein_matches_p_on_self_dual_scheme(self):
        sd = build(hamming(3, 2))
        for h in range(4):
            for i in range(4):
                for j in range(4):
                    assert sd.krein[h][i][j] == int(sd.p[h, i, j])

    def test_idempotent_matrices(self):
        sd = build(hamming(3, 2))
        F = sd.field
        E = sd.idempotents()
        n = sd.n
        assert E[0] == Mat(F, n, n, [F.scalar(1, 0) / F.scalar(n)] * (n * n))
        total = Mat.zeros(F, n, n)
        for Ei in E:
            total = total + Ei
        assert total == Mat.identity(F, n)
        for i, Ei in enumerate(E):
            assert Ei @ Ei == Ei
            assert Ei.transpose() == Ei
            assert Ei.trace() == sd.m[i]
        assert (E[1] @ E[2]).is_zero()


class TestDualData:
    def test_cube_dual_eigenvalues(self):
        sd = build(hamming(3, 2))
        du = dual_data(sd, 0)
        assert [t.encode() for t in du.theta_star] == ["3", "1", "-1", "-3"]

    def test_hermitian_dual_eigenvalues_follow_ordering(self):
        sd = build(hermitian_forms(3, 2), b=-2)
        du = dual_data(sd, 0)
        assert [t.encode() for t in du.theta_star] == ["21", "-11", "5", "-3"]

    def test_dual_matrices_small(self):
        sd = build(hamming(3, 2))
        du = dual_data(sd, 0)
        F = sd.field
        n = sd.n
        # E*_i are diagonal 0/1 and resolve the identity
        total = Mat.zeros(F, n, n)
        for i in range(4):
            Ei = du.estar(i)
            assert Ei @ Ei == Ei
            total = total + Ei
        assert total == Mat.identity(F, n)
        # A*_1 = sum_i theta*_i E*_i and A*_i A*_j = sum_h qhat^h_{ij} A*_h
        astar1 = du.astar(1)
        acc = Mat.zeros(F, n, n)
        for i in range(4):
            acc = acc + du.estar(i) * du.theta_star[i]
        assert acc == astar1
        sig = sd.ordering
        for i in range(4):
            for j in range(4):
                lhs = du.astar(i) @ du.astar(j)
                rhs = Mat.zeros(F, n, n)
                for h in range(4):
                    rhs = rhs + du.astar(h) * sd.krein[sig[h]][sig[i]][sig[j]]
                assert lhs == rhs

    def test_base_vertex_validation(self):
        sd = build(hamming(3, 2))
        with pytest.raises(ConfigError):
            dual_data(sd, 99)

    def test_dual_at_other_base_vertex(self):
        sd = build(cycle(8), b=2)
        du0 = dual_data(sd, 0)
        du3 = dual_data(sd, 3)
        assert du0.theta_star == du3.theta_star
        assert np.array_equal(
            du3.estar(0).to_real(), np.diag(np.eye(8)[3])
        )
