import warnings

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from embedded_triplets.dirichlet import (
    CoefficientField,
    DirichletProblem,
    Grid1D,
    assemble_T,
    c4_growth,
    cell_average,
    check_conditions,
    convergence_study,
    difference_matrix,
    field_from_preset,
    form_a,
    form_a_via_space,
    functional_norm,
    is_injective,
    manufactured_load,
    preset,
    read_field_csv,
    sample,
    verify_inequality,
    weak_solve,
)
from embedded_triplets.errors import (
    ConditionC4Missing,
    DegenerateAtNode,
    FieldMismatch,
    NoSolution,
    PreconditionError,
)
from embedded_triplets.linops import gram

from conftest import seeds

PRESETS = ["const:1", "const:2.5", "pow:0.25", "pow:0.5", "linear", "pow:2"]


def problem(n, b, c="same", sampling="midpoint"):
    grid = Grid1D(n)
    return grid, field_from_preset(grid, b, c, sampling)


class TestGridAndField:
    def test_grid(self):
        g = Grid1D(3)
        assert g.h == 0.25
        np.testing.assert_allclose(g.nodes, [0.25, 0.5, 0.75])
        np.testing.assert_allclose(g.midpoints, [0.125, 0.375, 0.625, 0.875])

    def test_bad_grid(self):
        with pytest.raises(PreconditionError):
            Grid1D(0)

    def test_presets(self):
        x = np.array([0.25, 0.5])
        np.testing.assert_allclose(preset("const:3")(x), [3.0, 3.0])
        np.testing.assert_allclose(preset("pow:0.5")(x), [0.5, np.sqrt(0.5)])
        np.testing.assert_allclose(preset("linear")(x), x)
        for bad in ("const", "pow:", "cubic", "linear:2"):
            with pytest.raises(PreconditionError):
                preset(bad)

    def test_field_shape(self):
        with pytest.raises(FieldMismatch):
            CoefficientField(Grid1D(3), np.ones(3))
        with pytest.raises(FieldMismatch):
            CoefficientField(Grid1D(3), np.ones(4), np.ones(5))

    def test_cell_average_exact_for_polynomials(self):
        grid = Grid1D(4)
        avg = cell_average(grid, lambda x: x**3)
        edges = np.arange(grid.n + 2) * grid.h
        exact = np.diff(edges**4 / 4) / grid.h
        np.testing.assert_allclose(avg, exact, rtol=1e-14)

    def test_unknown_sampling(self):
        with pytest.raises(PreconditionError):
            sample(Grid1D(2), preset("linear"), "trapezoid")

    def test_read_csv(self, tmp_path):
        p = tmp_path / "f.csv"
        p.write_text("midpoint_index,b,c,g\n1,1,1,0.5\n0,2,1,-0.5\n", encoding="utf-8")
        fld, g = read_field_csv(p)
        assert fld.grid.n == 1
        np.testing.assert_array_equal(fld.b, [2.0, 1.0])
        np.testing.assert_array_equal(g, [-0.5, 0.5])
        p.write_text("midpoint_index,b\n0,1\n1,1\n", encoding="utf-8")
        fld, g = read_field_csv(p)
        assert fld.c is None and g is None
        p.write_text("index,b\n0,1\n", encoding="utf-8")
        with pytest.raises(PreconditionError):
            read_field_csv(p)


class TestAssembly:
    def test_hand_assembly(self):
        grid, fld = problem(1, "const:1")
        T = assemble_T(grid, fld)
        np.testing.assert_array_equal(T.entries, [[2.0], [-2.0]])
        np.testing.assert_array_equal(gram(T).entries, [[8.0]])

    def test_zero_field(self):
        grid = Grid1D(4)
        fld = CoefficientField(grid, np.zeros(5))
        assert not np.any(assemble_T(grid, fld).entries)
        assert not is_injective(grid, fld)

    def test_quadratic_midpoint_derivative(self):
        grid, fld = problem(3, "const:1")
        v = grid.nodes * (1 - grid.nodes)
        np.testing.assert_allclose(assemble_T(grid, fld) @ v, 1 - 2 * grid.midpoints, atol=1e-14)

    def test_field_grid_mismatch(self):
        with pytest.raises(FieldMismatch):
            assemble_T(Grid1D(3), field_from_preset(Grid1D(4), "const:1"))

    def test_difference_matrix_boundary(self):
        D = difference_matrix(Grid1D(2))
        np.testing.assert_allclose(D * (1 / 3), [[1, 0], [-1, 1], [0, -1]])


class TestConditions:
    def test_unit(self):
        rep = check_conditions(problem(16, "const:1")[1])
        assert rep.c1 and rep.c2 and rep.c3 and rep.c4
        assert rep.C == pytest.approx(1.0, rel=1e-14)

    def test_quarter_power_converges_to_sqrt_two(self):
        C = [check_conditions(problem(n, "pow:0.25")[1]).C for n in (64, 256, 1024, 4096)]
        assert np.all(np.diff(C) > 0)
        assert abs(C[-1] - np.sqrt(2)) <= 0.02 * np.sqrt(2)
        assert not c4_growth("pow:0.25", [256, 512, 1024, 2048, 4096]).diverging

    def test_linear_diverges(self):
        g = c4_growth("linear", [256, 512, 1024, 2048, 4096])
        assert g.diverging and np.all(np.diff(g.integrals) > 0)

    def test_missing_c(self):
        rep = check_conditions(problem(4, "const:1", c=None)[1])
        assert rep.c2 is None and rep.c4 is None and rep.C is None

    def test_c_above_b(self):
        grid = Grid1D(3)
        rep = check_conditions(CoefficientField(grid, np.ones(4), 2 * np.ones(4)))
        assert rep.c2 is False

    def test_zero_c_gives_infinite_integral(self):
        grid = Grid1D(3)
        rep = check_conditions(CoefficientField(grid, np.ones(4), np.array([1.0, 0.0, 1.0, 1.0])))
        assert rep.c4 is False

    def test_negative_b_rejected_by_solver(self):
        grid = Grid1D(3)
        fld = CoefficientField(grid, np.array([1.0, -1.0, 1.0, 1.0]))
        assert not check_conditions(fld).c1
        with pytest.raises(PreconditionError):
            DirichletProblem(grid, fld)


class TestInequality:
    def test_zero(self):
        grid, fld = problem(8, "const:1")
        chk = verify_inequality(grid, fld, np.zeros(8))
        assert chk.lhs == 0.0 and chk.rhs == 0.0 and chk.holds

    def test_sine(self):
        grid, fld = problem(256, "const:1")
        chk = verify_inequality(grid, fld, np.sin(np.pi * grid.nodes))
        assert chk.lhs == pytest.approx(2.0, rel=1e-4)
        assert chk.rhs == pytest.approx(np.pi / np.sqrt(2), rel=1e-4)
        assert chk.holds

    def test_quarter_power_quadratic(self):
        grid, fld = problem(256, "pow:0.25")
        assert verify_inequality(grid, fld, grid.nodes * (1 - grid.nodes)).holds

    def test_needs_c(self):
        grid, fld = problem(8, "const:1", c=None)
        with pytest.raises(ConditionC4Missing):
            verify_inequality(grid, fld, np.ones(8))

    @given(seed=seeds, b=st.sampled_from(PRESETS), n=st.integers(2, 80))
    def test_holds_for_random_u(self, seed, b, n):
        grid, fld = problem(n, b)
        u = np.random.default_rng(seed).standard_normal(n)
        assert verify_inequality(grid, fld, u).holds


class TestForm:
    def test_unit_is_seminorm(self):
        grid, fld = problem(10, "const:1")
        u = np.sin(grid.nodes)
        du = difference_matrix(grid) @ u
        assert form_a(grid, fld, u, u) == pytest.approx(grid.h * du @ du)

    def test_single_node(self):
        grid, fld = problem(1, "const:1")
        T = assemble_T(grid, fld)
        # midpoint-weighted form is h times the unweighted Gram entry 8
        assert form_a(grid, fld, np.ones(1), np.ones(1)) == pytest.approx(grid.h * gram(T).entries[0, 0])
        assert form_a(grid, fld, np.ones(1), np.ones(1)) == pytest.approx(4.0)

    @given(seed=seeds, b=st.sampled_from(PRESETS), n=st.integers(1, 40))
    def test_hermitian_and_space_route(self, seed, b, n):
        grid, fld = problem(n, b)
        rng = np.random.default_rng(seed)
        u = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        a_uv, a_vu = form_a(grid, fld, u, v), form_a(grid, fld, v, u)
        scale = np.sqrt(form_a(grid, fld, u, u).real * form_a(grid, fld, v, v).real)
        assert abs(a_uv - np.conj(a_vu)) <= 1e-12 * scale
        assert abs(form_a_via_space(grid, fld, u, v) - a_uv) <= 1e-10 * scale


class TestWeakSolve:
    @pytest.mark.parametrize("n", [1, 8, 64])
    def test_quadratic_exactness(self, n):
        grid, fld = problem(n, "const:1")
        sol = weak_solve(grid, fld, grid.midpoints - 0.5)
        x = grid.nodes
        np.testing.assert_allclose(sol.v, (x**2 - x) / 2, atol=1e-12, rtol=0)

    def test_zero_load(self):
        grid, fld = problem(12, "pow:0.25")
        np.testing.assert_array_equal(weak_solve(grid, fld, np.zeros(13)).v, np.zeros(12))

    def test_quarter_power_manufactured(self):
        errs = []
        for n in (16, 64, 256):
            grid, fld = problem(n, "pow:0.25")
            g = manufactured_load(grid, "pow:0.25", "quadratic")
            errs.append(np.max(np.abs(weak_solve(grid, fld, g).v - grid.nodes * (1 - grid.nodes))))
            assert errs[-1] <= grid.h

    @given(seed=seeds, b=st.sampled_from(PRESETS), n=st.integers(1, 60))
    def test_weak_identity_and_unitarity(self, seed, b, n):
        grid, fld = problem(n, b)
        prob = DirichletProblem(grid, fld)
        g = np.random.default_rng(seed).standard_normal(n + 1)
        sol = prob.solve(g)
        E = np.eye(n)
        lhs = np.array([form_a(grid, fld, e, sol.v) for e in E])
        rhs = np.array([prob.functional(g, e) for e in E])
        assert np.linalg.norm(lhs - rhs) <= 1e-8 * max(np.linalg.norm(rhs), 1e-300)
        fn = functional_norm(grid, fld, g)
        assert sol.plus_norm_of_v == pytest.approx(fn, rel=1e-8)
        assert form_a(grid, fld, sol.v, sol.v).real == pytest.approx(fn**2, rel=1e-8)
        tr = prob.triplet()
        assert tr.minus_norm(prob.minus_representative(g)) == pytest.approx(fn, rel=1e-8)

    def test_functional_norm_hand_values(self):
        grid, fld = problem(1, "const:1")
        assert functional_norm(grid, fld, np.ones(2)) == pytest.approx(0.0, abs=1e-15)
        g = np.array([2.0, -2.0])
        assert functional_norm(grid, fld, g) == pytest.approx(np.sqrt(grid.h) * np.linalg.norm(g))

    def test_load_shape(self):
        grid, fld = problem(4, "const:1")
        with pytest.raises(FieldMismatch):
            weak_solve(grid, fld, np.ones(4))


class TestDegenerate:
    def _dead(self):
        grid = Grid1D(5)
        b = np.ones(6)
        b[[1, 4]] = 0.0  # nodes 2..4 form a dead interval
        return grid, CoefficientField(grid, b, None)

    def test_warns_and_solves_on_reduced_range(self):
        grid, fld = self._dead()
        prob = DirichletProblem(grid, fld)
        assert prob.kernel_dim == 1
        with pytest.warns(DegenerateAtNode):
            sol = prob.solve(np.arange(6.0))
        assert sol.kernel_dim == 1
        kern = np.array([0, 1, 1, 1, 0], float)
        assert abs(kern @ sol.v) <= 1e-12

    def test_single_dead_cell_keeps_injectivity(self):
        grid = Grid1D(5)
        b = np.ones(6)
        b[2] = 0.0
        assert is_injective(grid, CoefficientField(grid, b))

    def test_load_on_dead_interval(self):
        grid, fld = self._dead()
        prob = DirichletProblem(grid, fld)
        with pytest.raises(NoSolution) as exc:
            prob.representative_from_load(np.array([0.0, 1.0, 0.0, 0.0, 0.0]))
        d = exc.value.direction
        np.testing.assert_allclose(np.abs(d), np.array([0, 1, 1, 1, 0]) / np.sqrt(3), atol=1e-12)

    def test_compatible_load(self):
        grid, fld = self._dead()
        prob = DirichletProblem(grid, fld)
        load = np.array([1.0, 1.0, -2.0, 1.0, 0.5])
        g = prob.representative_from_load(load)
        np.testing.assert_allclose(prob.T.entries.T @ g, load, atol=1e-12)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", DegenerateAtNode)
            v = prob.solve(g).v
        for e in np.eye(5):
            assert form_a(grid, fld, e, v) == pytest.approx(grid.h * (e @ load), abs=1e-10)


class TestConvergence:
    def test_unit_sine_is_second_order(self):
        st_ = convergence_study("const:1", "sine", [8, 16, 32, 64, 128, 256])
        assert st_.monotone
        assert st_.fitted_order == pytest.approx(2.0, abs=0.05)
        rows = st_.rows()
        assert [r["n"] for r in rows] == [8, 16, 32, 64, 128, 256]
        assert np.isnan(rows[0]["observed_order"])

    def test_cell_average_makes_unit_coefficient_exact(self):
        st_ = convergence_study("const:1", "sine", [8, 32], sampling="cell_average")
        assert max(st_.errors) <= 1e-13

    def test_unknown_solution(self):
        with pytest.raises(PreconditionError):
            convergence_study("const:1", "cubic", [8, 16])
        with pytest.raises(PreconditionError):
            manufactured_load(Grid1D(4), "const:1", "cubic")
