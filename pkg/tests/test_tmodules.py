"""T-module decomposition: inventories, invariants, suite checks."""

from collections import Counter

import pytest

from splitdec.errors import (
    ConfigError,
    NonContiguousSupport,
    NotFullySplit,
    PropertyViolation,
)
from splitdec.field import GroundField
from splitdec.graphs import distance_data, graph_from_spec, intersection_numbers
from splitdec.matrix import Mat
from splitdec.scheme import dual_data, scheme_data
from splitdec.split import split_decomposition
from splitdec.subspace import Subspace
from splitdec.tmodules import (
    TModule,
    commutant_dimension,
    decompose,
    module_inventory,
    module_stats,
    verify_tmodule_suite,
)


def build(spec, b=1, x=0):
    g = graph_from_spec(spec)
    dd = distance_data(g)
    inter = intersection_numbers(g, dd)
    sch = scheme_data(g, dd, inter, GroundField(b))
    return sch, dual_data(sch, x)


def type_counter(modules):
    return Counter(
        (m["rho"], m["tau"], m["d"], m["dim"]) for m in module_inventory(modules)
    )


@pytest.fixture(scope="module")
def cube():
    sch, du = build("hamming:3,2")
    return sch, du, decompose(sch, du)


@pytest.fixture(scope="module")
def cycle8():
    sch, du = build("cycle:8", b=2)
    return sch, du, decompose(sch, du)


class TestDecompose:
    def test_cube_inventory(self, cube):
        _, _, mods = cube
        assert module_inventory(mods) == [
            {"dim": 4, "rho": 0, "tau": 0, "d": 3, "eta": 0, "zeta": 0},
            {"dim": 2, "rho": 1, "tau": 1, "d": 1, "eta": 0, "zeta": 0},
            {"dim": 2, "rho": 1, "tau": 1, "d": 1, "eta": 0, "zeta": 0},
        ]

    def test_cycle8_inventory(self, cycle8):
        _, _, mods = cycle8
        assert module_inventory(mods) == [
            {"dim": 5, "rho": 0, "tau": 0, "d": 4, "eta": 0, "zeta": 0},
            {"dim": 3, "rho": 1, "tau": 1, "d": 2, "eta": 0, "zeta": 0},
        ]

    def test_johnson_inventory(self):
        sch, du = build("johnson:5,2")
        mods = decompose(sch, du)
        assert type_counter(mods) == Counter({
            (0, 0, 2, 3): 1,
            (1, 1, 0, 1): 1,
            (1, 1, 1, 2): 2,
            (1, 2, 0, 1): 2,
        })
        # J(5,2) is not formally self-dual: nonzero displacements occur
        assert {m.eta for m in mods} == {0, 1}
        assert {m.zeta for m in mods} == {-1, 0}

    def test_h33_inventory(self):
        sch, du = build("hamming:3,3")
        mods = decompose(sch, du)
        assert type_counter(mods) == Counter({
            (0, 0, 3, 4): 1,
            (1, 1, 2, 3): 3,
            (1, 1, 1, 2): 2,
            (2, 2, 1, 2): 3,
            (2, 2, 0, 1): 3,
            (3, 3, 0, 1): 1,
        })

    def test_commutant_dimension_equals_sum_of_squared_multiplicities(self):
        # independent oracle: dim of the full commutant must match the
        # multiplicity census of the decomposition
        for spec, b, want in [
            ("hamming:3,2", 1, 5),     # 1^2 + 2^2
            ("cycle:8", 2, 2),         # 1^2 + 1^2
            ("johnson:5,2", 1, 10),    # 1 + 1 + 4 + 4
            ("hamming:3,3", 1, 33),    # 1 + 9 + 4 + 9 + 9 + 1
        ]:
            sch, du = build(spec, b)
            assert commutant_dimension(sch, du) == want, spec
            mods = decompose(sch, du)
            mult = Counter((m.rho, m.tau, m.d, m.dim) for m in mods)
            assert sum(v * v for v in mult.values()) == want, spec

    def test_modules_sorted_and_sum_to_n(self, cube):
        sch, _, mods = cube
        keys = [(m.rho, m.tau, m.d, m.dim) for m in mods]
        assert keys == sorted(keys)
        assert sum(m.dim for m in mods) == sch.n

    def test_bad_backend(self, cube):
        sch, du, _ = cube
        with pytest.raises(ConfigError):
            decompose(sch, du, backend="f32")

    def test_budget_zero_reports_partial(self):
        sch, du = build("johnson:5,2")
        with pytest.raises(NotFullySplit) as exc:
            decompose(sch, du, budget=0)
        assert [w.dim for w in exc.value.partial] == [3]


class TestFloatBackend:
    @pytest.mark.parametrize("spec,b", [
        ("hamming:3,2", 1),
        ("cycle:8", 2),
        ("johnson:5,2", 1),
        ("hamming:3,3", 1),
    ])
    def test_inventory_matches_exact(self, spec, b):
        sch, du = build(spec, b)
        exact = module_inventory(decompose(sch, du))
        flt = decompose(sch, du, backend="f64")
        assert module_inventory(flt) == exact
        assert all(m.mode == "float" for m in flt)


class TestStatsAndInvariants:
    def test_module_stats_of_primary(self, cube):
        sch, du, mods = cube
        assert module_stats(sch, du, mods[0].basis) == (0, 0, 3)

    def test_non_contiguous_support_raises(self, cube):
        sch, du, _ = cube
        F = sch.field
        # span of e_0 + e_7: vertex 7 is antipodal, shells {0, 3}
        v = Mat.col_vector(F, [1, 0, 0, 0, 0, 0, 0, 1])
        with pytest.raises(NonContiguousSupport):
            module_stats(sch, du, Subspace.from_spanning(v))

    def test_tmodule_invariant_validation(self, cube):
        _, _, mods = cube
        W = mods[0].basis
        with pytest.raises(PropertyViolation):
            TModule(W, rho=2, tau=2, d=3, D=3)  # rho + d > D
        with pytest.raises(PropertyViolation):
            TModule(W, rho=0, tau=0, d=0, D=3)  # 2*rho + d < D


class TestSuite:
    @pytest.mark.parametrize("name", ["cube", "cycle8"])
    def test_all_checks_pass(self, name, request):
        sch, du, mods = request.getfixturevalue(name)
        system = split_decomposition(sch, du)
        checks = verify_tmodule_suite(sch, du, system, mods)
        assert checks
        for c in checks:
            assert c["status"] == "pass", c
            assert c["max_residual"] == "0"

    def test_check_names(self, cube):
        sch, du, mods = cube
        system = split_decomposition(sch, du)
        names = {c["name"] for c in verify_tmodule_suite(sch, du, system, mods)}
        assert {
            "orthogonal_decomposition", "invariance",
            "irreducibility_closure", "displacement_action",
            "rank_phi_vs_displacement", "rank_psi_vs_displacement",
            "wcells_direct_sum_dd_m0", "wcells_containment_dd_m0",
            "wcells_direct_sum_uu_m2", "wcells_containment_uu_m2",
        } <= names
        assert len(names) == len(
            verify_tmodule_suite(sch, du, system, mods)
        )

    def test_cube_displacement_ranks(self, cube):
        sch, du, mods = cube
        system = split_decomposition(sch, du)
        assert int(system.phi(0).trace().a0) == 8
        assert int(system.psi(0).trace().a0) == 8
        assert all(m.eta == 0 and m.zeta == 0 for m in mods)
