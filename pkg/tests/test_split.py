"""Split-decomposition layer: grids, tilde cells, projectors, suite."""

import random
from fractions import Fraction

import pytest

from splitdec.field import GroundField
from splitdec.graphs import distance_data, graph_from_spec, intersection_numbers
from splitdec.matrix import Mat, hstack
from splitdec.scheme import dual_data, scheme_data
from splitdec.split import (
    GRID_LABELS,
    cell_components,
    displacement_projectors,
    split_cell,
    split_decomposition,
    verify_split_suite,
)
from splitdec.subspace import Subspace, coordinate_subspace
from splitdec.errors import IndexOutOfRange


def build(spec, b=1, x=0):
    g = graph_from_spec(spec)
    dd = distance_data(g)
    inter = intersection_numbers(g, dd)
    sch = scheme_data(g, dd, inter, GroundField(b))
    return sch, dual_data(sch, x)


@pytest.fixture(scope="module")
def cube():
    sch, du = build("hamming:3,2")
    return sch, du, split_decomposition(sch, du)


@pytest.fixture(scope="module")
def cycle8():
    sch, du = build("cycle:8", b=2)
    return sch, du, split_decomposition(sch, du)


@pytest.fixture(scope="module")
def h33():
    sch, du = build("hamming:3,3")
    return sch, du, split_decomposition(sch, du)


class TestCellConstruction:
    def test_cube_dims_all_grids(self, cube):
        _, _, sys_ = cube
        want = [[0, 0, 0, 1], [0, 0, 3, 0], [0, 3, 0, 0], [1, 0, 0, 0]]
        for label in GRID_LABELS:
            assert sys_.grid(label).dims() == want

    def test_cycle8_dims(self, cycle8):
        _, _, sys_ = cycle8
        want = [
            [0, 0, 0, 0, 1],
            [0, 0, 0, 2, 0],
            [0, 0, 2, 0, 0],
            [0, 2, 0, 0, 0],
            [1, 0, 0, 0, 0],
        ]
        assert sys_.grid("dd").dims() == want

    def test_h33_dd_dims(self, h33):
        _, _, sys_ = h33
        want = [[0, 0, 0, 1], [0, 0, 3, 3], [0, 3, 6, 3], [1, 3, 3, 1]]
        assert sys_.grid("dd").dims() == want

    def test_johnson_dd_dims(self):
        sch, du = build("johnson:5,2")
        sys_ = split_decomposition(sch, du)
        assert sys_.grid("dd").dims() == [[0, 0, 1], [0, 2, 4], [1, 2, 0]]

    def test_negative_index_is_zero(self, cube):
        sch, du, _ = cube
        assert split_cell(sch, du, "d", "d", -1, 2).dim == 0
        assert split_cell(sch, du, "u", "d", 1, -1).dim == 0

    def test_out_of_range_raises(self, cube):
        sch, du, sys_ = cube
        with pytest.raises(IndexOutOfRange):
            split_cell(sch, du, "d", "d", 4, 0)
        with pytest.raises(IndexOutOfRange):
            split_cell(sch, du, "d", "d", 0, -2)
        with pytest.raises(IndexOutOfRange):
            split_cell(sch, du, "x", "d", 0, 0)
        with pytest.raises(IndexOutOfRange):
            sys_.grid("xy")
        with pytest.raises(IndexOutOfRange):
            sys_.tilde("dd", -1, 0)

    def test_corner_cells_cube(self, cube):
        sch, du, _ = cube
        # V^{dd}_{i,D} is the ball of radius i around the base vertex
        for i in range(4):
            ball = [v for v in range(8) if sch.dd.dist[0][v] <= i]
            V = split_cell(sch, du, "d", "d", i, 3)
            assert V == coordinate_subspace(sch.field, 8, ball)
        # V^{dd}_{D,j} is the sum of the first j+1 eigenspaces
        for j in range(4):
            cols = hstack([sch.idempotent(sch.ordering[t]) for t in range(j + 1)])
            assert split_cell(sch, du, "d", "d", 3, j) == Subspace.from_spanning(cols)

    def test_corner_cell_basis_vectors(self, cube):
        sch, _, sys_ = cube
        F = sch.field
        # tilde cell (0, D) is the base vertex's coordinate line
        e0 = Mat.col_vector(F, [1, 0, 0, 0, 0, 0, 0, 0])
        assert sys_.tilde("dd", 0, 3).basis == e0
        # tilde cell (D, 0) is the all-ones line
        ones = Mat.col_vector(F, [1] * 8)
        assert sys_.tilde("dd", 3, 0).basis == ones

    def test_base_vertex_translation(self):
        # same dims at a different base vertex of an edge-transitive graph
        sch, du = build("hamming:3,2", x=5)
        sys_ = split_decomposition(sch, du)
        want = [[0, 0, 0, 1], [0, 0, 3, 0], [0, 3, 0, 0], [1, 0, 0, 0]]
        assert sys_.grid("dd").dims() == want
        assert sys_.tilde("dd", 0, 3).basis[5, 0] == 1


class TestVerifySuite:
    @pytest.mark.parametrize("name", ["cube", "cycle8", "h33"])
    def test_all_checks_pass(self, name, request):
        _, _, sys_ = request.getfixturevalue(name)
        checks = verify_split_suite(sys_)
        assert checks, "suite produced no checks"
        for c in checks:
            assert c["status"] == "pass", c
            assert c["max_residual"] == "0"

    def test_johnson_suite(self):
        sch, du = build("johnson:5,2")
        sys_ = split_decomposition(sch, du)
        assert all(c["status"] == "pass" for c in verify_split_suite(sys_))

    def test_check_names_cover_families(self, cube):
        _, _, sys_ = cube
        names = {c["name"] for c in verify_split_suite(sys_)}
        for label in GRID_LABELS:
            assert f"partition_annihilation_{label}" in names
        assert {"vanishing_pattern", "transpose_duality",
                "duality_orthogonality", "dimension_tables",
                "conjugate_stability", "phi_family", "psi_family"} <= names

    def test_certificate_path_matches_literal(self, cube):
        # force the large-n code path on a small graph
        _, _, sys_ = cube
        checks = verify_split_suite(sys_, materialize_limit=0)
        part = [c for c in checks if c["name"].startswith("partition_")]
        assert part and all(c["status"] == "pass" for c in part)


class TestProjectors:
    def test_projector_idempotent_and_shape(self, cube):
        _, _, sys_ = cube
        g = sys_.grid("du")
        P = g.projector(1, 2)
        assert P.rows == P.cols == 8
        assert P @ P == P
        assert g.projector(0, 0).is_zero()

    def test_phi_psi_cube(self, cube):
        sch, _, sys_ = cube
        ident = Mat.identity(sch.field, 8)
        # every tilde cell of the cube sits on i + j = D: displacement 0
        assert sys_.phi(0) == ident
        assert sys_.psi(0) == ident
        for eta in range(1, 4):
            assert sys_.phi(eta).is_zero()
        for zeta in list(range(-3, 0)) + list(range(1, 4)):
            assert sys_.psi(zeta).is_zero()
        with pytest.raises(IndexOutOfRange):
            sys_.phi(4)
        with pytest.raises(IndexOutOfRange):
            sys_.phi(-1)
        with pytest.raises(IndexOutOfRange):
            sys_.psi(5)

    def test_displacement_projectors_h33(self, h33):
        sch, _, sys_ = h33
        phis, psis = displacement_projectors(sys_)
        assert len(phis) == 4 and len(psis) == 7
        ident = Mat.identity(sch.field, 27)
        total = phis[0]
        for P in phis[1:]:
            total = total + P
        assert total == ident
        # ranks via trace (projector trace = rank): anti-diagonal sums
        # i + j = 3 + eta of the dd dimension grid
        # [[0,0,0,1],[0,0,3,3],[0,3,6,3],[1,3,3,1]]
        assert [int(P.trace().a0) for P in phis] == [8, 12, 6, 1]

    def test_component_oracle_matches_projectors(self, cycle8):
        sch, _, sys_ = cycle8
        rng = random.Random(42)
        F = sch.field
        v = Mat.col_vector(
            F, [Fraction(rng.randint(-9, 9), rng.randint(1, 9)) for _ in range(8)]
        )
        for label in GRID_LABELS:
            comps = cell_components(sys_, label, v)
            g = sys_.grid(label)
            total = Mat.zeros(F, 8, 1)
            for (i, j), comp in comps.items():
                assert g.projector(i, j) @ v == comp
                assert g.tilde[i][j].contains_vector(comp)
                total = total + comp
            assert total == v
