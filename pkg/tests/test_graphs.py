"""Graph builders, finite fields, distance data, and the file format."""

import numpy as np
import pytest

from splitdec.errors import (
    ConfigError,
    DegenerateParameters,
    Disconnected,
    LoopOrMultiEdge,
    NotDistanceRegular,
    ParseError,
    UnsupportedFieldOrder,
)
from splitdec.graphs import (
    FiniteField,
    bilinear_forms,
    cycle,
    distance_data,
    graph_from_spec,
    hamming,
    hermitian_forms,
    intersection_numbers,
    johnson,
    parse_graph_text,
)


def load(g):
    dd = distance_data(g)
    return dd, intersection_numbers(g, dd)


class TestFiniteField:
    @pytest.mark.parametrize("order", [2, 3, 4, 5, 7, 8, 9])
    def test_field_axioms(self, order):
        K = FiniteField(order)
        n = K.order
        for x in range(n):
            assert K.add[0][x] == x and K.mul[1][x] == x
            assert K.add[x][K.neg[x]] == 0
            if x:
                assert K.mul[x][K.inv[x]] == 1
        for x in range(n):
            for y in range(n):
                assert K.add[x][y] == K.add[y][x]
                assert K.mul[x][y] == K.mul[y][x]
                for z in range(n):
                    assert K.add[K.add[x][y]][z] == K.add[x][K.add[y][z]]
                    assert K.mul[K.mul[x][y]][z] == K.mul[x][K.mul[y][z]]
                    assert (
                        K.mul[x][K.add[y][z]]
                        == K.add[K.mul[x][y]][K.mul[x][z]]
                    )

    def test_conjugation_gf4(self):
        K = FiniteField(4)
        # x -> x^2 is an involutory automorphism fixing exactly GF(2)
        assert sorted(K.fixed_by_conj()) == [0, 1]
        for x in range(4):
            assert K.conj(K.conj(x)) == x

    def test_conjugation_gf9(self):
        K = FiniteField(9)
        assert len(K.fixed_by_conj()) == 3
        for x in range(9):
            for y in range(9):
                assert K.conj(K.mul[x][y]) == K.mul[K.conj(x)][K.conj(y)]

    def test_unsupported_order(self):
        with pytest.raises(UnsupportedFieldOrder):
            FiniteField(6)

    def test_rank(self):
        K = FiniteField(2)
        assert K.rank([1, 0, 0, 1], 2, 2) == 2
        assert K.rank([1, 1, 1, 1], 2, 2) == 1
        assert K.rank([0, 0, 0, 0], 2, 2) == 0
        K9 = FiniteField(9)
        t = 3  # a generator outside the prime field
        assert K9.rank([1, t, t, K9.mul[t][t]], 2, 2) == 1


class TestBuilders:
    def test_hamming_cube(self):
        g = hamming(3, 2)
        assert g.n == 8
        dd, inter = load(g)
        assert dd.D == 3
        assert inter.array == ((3, 2, 1), (1, 2, 3))
        assert dd.sphere_sizes() == (1, 3, 3, 1)

    def test_hamming_33(self):
        g = hamming(3, 3)
        assert g.n == 27
        _, inter = load(g)
        assert inter.array == ((6, 4, 2), (1, 2, 3))

    def test_johnson(self):
        g = johnson(5, 2)
        assert g.n == 10
        dd, inter = load(g)
        assert dd.D == 2
        assert inter.array == ((6, 2), (1, 4))

    def test_cycle(self):
        g = cycle(8)
        dd, inter = load(g)
        assert dd.D == 4
        assert inter.array == ((2, 1, 1, 1), (1, 1, 1, 2))

    def test_degenerate_parameters(self):
        for bad in (
            lambda: hamming(0, 2),
            lambda: hamming(2, 1),
            lambda: johnson(4, 0),
            lambda: johnson(4, 4),
            lambda: cycle(2),
        ):
            with pytest.raises(DegenerateParameters):
                bad()

    def test_bilinear_forms(self):
        g = bilinear_forms(3, 3, 2)
        assert g.n == 512
        dd, inter = load(g)
        assert dd.D == 3
        assert inter.array == ((49, 36, 16), (1, 6, 28))
        assert dd.sphere_sizes() == (1, 49, 294, 168)

    def test_hermitian_forms(self):
        g = hermitian_forms(3, 2)
        assert g.n == 512
        dd, inter = load(g)
        assert dd.D == 3
        assert inter.array == ((21, 20, 16), (1, 2, 12))
        assert dd.sphere_sizes() == (1, 21, 210, 280)


class TestDistanceData:
    def test_intersection_tensor_symmetries(self):
        g = johnson(5, 2)
        dd, inter = load(g)
        D = dd.D
        k = [int(inter.p[0, i, i]) for i in range(D + 1)]
        for h in range(D + 1):
            for i in range(D + 1):
                for j in range(D + 1):
                    assert inter.p[h, i, j] == inter.p[h, j, i]
                    # k_h p^h_{ij} = k_i p^i_{hj}
                    assert (
                        k[h] * inter.p[h, i, j] == k[i] * inter.p[i, h, j]
                    )

    def test_not_distance_regular_with_witness(self):
        # path on 4 vertices: not distance-regular
        g = parse_graph_text("4\n0 1\n1 2\n2 3\n")
        dd = distance_data(g)
        with pytest.raises(NotDistanceRegular) as exc:
            intersection_numbers(g, dd)
        assert isinstance(exc.value.witness, dict)

    def test_disconnected(self):
        with pytest.raises(Disconnected):
            parse_graph_text("4\n0 1\n2 3\n")


class TestFileFormat:
    def test_roundtrip_cycle(self):
        text = "# a 5-cycle\n5\n0 1\n1 2\n2 3\n3 4\n4 0\n"
        g = parse_graph_text(text)
        ref = cycle(5)
        assert g.n == 5
        assert np.array_equal(g.adj, ref.adj)

    @pytest.mark.parametrize(
        "text,lineno",
        [
            ("", 1),
            ("x\n", 1),
            ("3 4\n0 1\n", 1),
            ("3\n0\n", 2),
            ("3\n0 5\n", 2),
            ("3\n0 a\n", 2),
        ],
    )
    def test_parse_errors_carry_line_numbers(self, text, lineno):
        with pytest.raises(ParseError) as exc:
            parse_graph_text(text)
        assert exc.value.line == lineno
        assert f"line {lineno}:" in str(exc.value)

    def test_loops_and_multi_edges(self):
        with pytest.raises(LoopOrMultiEdge):
            parse_graph_text("3\n1 1\n")
        with pytest.raises(LoopOrMultiEdge):
            parse_graph_text("3\n0 1\n1 0\n")


class TestGraphSpec:
    @pytest.mark.parametrize(
        "spec,n",
        [
            ("hamming:3,2", 8),
            ("hypercube:3", 8),
            ("johnson:5,2", 10),
            ("cycle:8", 8),
        ],
    )
    def test_spec_strings(self, spec, n):
        assert graph_from_spec(spec).n == n

    @pytest.mark.parametrize(
        "spec",
        ["hamming", "hamming:3", "hamming:3,2,1", "petersen:1", "cycle:x"],
    )
    def test_bad_specs(self, spec):
        with pytest.raises(ConfigError):
            graph_from_spec(spec)

    def test_file_spec(self, tmp_path):
        p = tmp_path / "g.txt"
        p.write_text("3\n0 1\n1 2\n2 0\n")
        g = graph_from_spec(f"file:{p}")
        assert g.n == 3 and g.degrees().tolist() == [2, 2, 2]
