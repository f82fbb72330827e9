"""Classical-parameter detection and q-tetrahedron plumbing.

The full eight-matrix construction and relation suites run on 512-vertex
graphs and live in the acceptance tests; here we pin down the detection
logic, the alpha-fit, probe parsing, and the relation enumeration, which
are all cheap.
"""

import pytest

from fractions import Fraction

from splitdec.errors import (
    AlphaFitFailure,
    BEqualsOne,
    ConfigError,
    NotClassical,
)
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
from splitdec.qtet import (
    GEN_TRANSPOSE,
    GENERATOR_NAMES,
    Probe,
    _fit_alpha,
    detect_classical,
    parse_probe,
    relation_instances,
)


def inter_of(g):
    return intersection_numbers(g, distance_data(g))


class TestDetection:
    def test_bilinear_accepted(self):
        p = detect_classical(inter_of(bilinear_forms(3, 3, 2)))
        assert (p.D, p.b, p.alpha, p.beta) == (3, 2, 1, Fraction(7))
        assert p.field.b == 2
        assert p.alpha0 == -15
        assert p.alpha1 == p.field.scalar(0, 16)
        assert [str(t) for t in p.theta] == ["49", "17", "1", "-7"]

    def test_bilinear_rejects_minus_three(self):
        p = detect_classical(inter_of(bilinear_forms(3, 3, 2)))
        rejected = {c["b"]: c for c in p.candidates if not c["accepted"]}
        assert set(rejected) == {-3}
        assert "c_3" in rejected[-3]["reason"]
        assert "63" in rejected[-3]["reason"]

    def test_hermitian_accepted(self):
        p = detect_classical(inter_of(hermitian_forms(3, 2)))
        assert (p.D, p.b, p.alpha, p.beta) == (3, -2, -3, Fraction(7))
        assert [str(t) for t in p.theta] == ["21", "-11", "5", "-3"]
        assert p.alpha0 == Fraction(-1, 3)
        assert p.alpha1 == p.field.scalar(0, Fraction(16, 3))

    def test_hermitian_intersection_array(self):
        inter = inter_of(hermitian_forms(3, 2))
        assert inter.array == ((21, 20, 16), (1, 2, 12))

    def test_hamming_is_b_equals_one(self):
        with pytest.raises(BEqualsOne):
            detect_classical(inter_of(hamming(3, 2)))

    def test_hamming_candidate_minus_two_fails_c3(self):
        # the other root of x^2 + x - 2 is -2, ruled out by c_3 = 3 != 12
        try:
            detect_classical(inter_of(hamming(3, 2)))
        except BEqualsOne as e:
            assert "b = 1" in str(e)

    def test_cycle_not_classical(self):
        with pytest.raises(NotClassical):
            detect_classical(inter_of(cycle(8)))

    def test_johnson_diameter_too_small(self):
        with pytest.raises(NotClassical, match="diameter"):
            detect_classical(inter_of(johnson(5, 2)))

    def test_qsign_flows_into_field(self):
        p = detect_classical(inter_of(bilinear_forms(3, 3, 2)), qsign=-1)
        assert p.field.qsign == -1
        assert (p.D, p.b, p.alpha, p.beta) == (3, 2, 1, Fraction(7))


class TestAlphaFit:
    def test_synthetic_pure_shape(self):
        F = GroundField(2)
        theta = [F.qpow(3), F.qpow(1), F.qpow(-1), F.qpow(-3)]
        a0, a1, pred = _fit_alpha(F, theta, 3)
        assert a0 == 0 and a1 == 1
        assert list(pred) == theta

    def test_fit_failure(self):
        F = GroundField(2)
        theta = [F.scalar(9), F.scalar(5), F.scalar(2), F.scalar(-4)]
        with pytest.raises(AlphaFitFailure):
            _fit_alpha(F, theta, 3)


class TestProbe:
    def test_parse_full(self):
        assert parse_probe("full") == Probe("full")

    def test_parse_sample(self):
        assert parse_probe("sample:16:7") == Probe("sample", 16, 7)

    def test_default(self):
        assert Probe() == Probe("sample", 32, 42)

    @pytest.mark.parametrize("bad", ["", "sample", "sample:x:1",
                                     "sample:0:42", "probe:1:2"])
    def test_parse_errors(self, bad):
        with pytest.raises(ConfigError):
            parse_probe(bad)


class TestRelationEnumeration:
    def test_counts(self):
        inst = relation_instances()
        assert len(inst["inverse"]) == 4
        assert len(inst["weyl"]) == 12
        assert len(inst["serre"]) == 4

    def test_inverse_pairs(self):
        inst = relation_instances()
        assert set(inst["inverse"]) == {
            ("x02", "x20"), ("x13", "x31"), ("x20", "x02"), ("x31", "x13"),
        }

    def test_weyl_pairs_are_the_twelve(self):
        inst = relation_instances()
        expected = set()
        for h in range(4):
            expected.add((f"x{h}{(h + 1) % 4}", f"x{(h + 1) % 4}{(h + 2) % 4}"))
            expected.add((f"x{h}{(h + 1) % 4}", f"x{(h + 1) % 4}{(h + 3) % 4}"))
            expected.add((f"x{h}{(h + 2) % 4}", f"x{(h + 2) % 4}{(h + 3) % 4}"))
        assert set(inst["weyl"]) == expected
        assert len(inst["weyl"]) == len(set(inst["weyl"]))

    def test_serre_pairs(self):
        inst = relation_instances()
        assert inst["serre"] == [
            ("x01", "x23"), ("x12", "x30"), ("x23", "x01"), ("x30", "x12"),
        ]

    def test_transpose_table_is_an_involution(self):
        assert set(GEN_TRANSPOSE) == set(GENERATOR_NAMES)
        for a, b in GEN_TRANSPOSE.items():
            assert GEN_TRANSPOSE[b] == a
