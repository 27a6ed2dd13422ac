"""Model building, exact and float solving, feasibility and slackness audits."""

import random
from fractions import Fraction

import numpy as np
import pytest
import scipy.optimize

from conftest import full_rank_matrices, literal_lp_model, rand_rational_profile
from paritylp.errors import BudgetError
from paritylp.f2lin import F2Matrix, all_vectors
from paritylp.lp import (
    DualSolution,
    PrimalSolution,
    build_dual,
    build_primal,
    check_dual_feasible,
    check_primal_feasible,
    complementary_slackness,
    solve,
    solve_dual,
    solve_primal,
)
from paritylp.profiles import AmplitudeProfile, CostFunction, bernoulli_profile


def profile(n, weights):
    return AmplitudeProfile.from_weights(n, weights)


def _scipy_raw(model):
    nv = model.n_vars
    c = np.array([float(v) for v in model.objective])
    if model.sense == "max":
        c = -c
    a_eq, b_eq, a_ub, b_ub = [], [], [], []
    for con in model.constraints:
        row = np.zeros(nv)
        for j, coef in con.coeffs.items():
            row[j] = float(coef)
        if con.rel == "=":
            a_eq.append(row)
            b_eq.append(float(con.rhs))
        elif con.rel == ">=":
            a_ub.append(-row)
            b_ub.append(-float(con.rhs))
        else:
            a_ub.append(row)
            b_ub.append(float(con.rhs))
    return scipy.optimize.linprog(
        c,
        A_eq=np.array(a_eq) if a_eq else None,
        b_eq=np.array(b_eq) if b_eq else None,
        A_ub=np.array(a_ub) if a_ub else None,
        b_ub=np.array(b_ub) if b_ub else None,
        bounds=(0, None),
        method="highs",
    )


def scipy_optimum(model):
    """Independent check through HiGHS."""
    res = _scipy_raw(model)
    assert res.status == 0, res.message
    return -res.fun if model.sense == "max" else res.fun


class TestBuildPrimal:
    def test_n1_uniform_shape(self):
        m = build_primal(profile(1, ["1/2", "1/2"]), CostFunction.average(1))
        assert m.n_vars == 3
        assert len(m.constraints) == 2

    def test_n2_variable_count(self):
        # sum_k [2 choose k]_2 * 2^(2-k) = 4 + 6 + 1
        m = build_primal(profile(2, ["1/4"] * 4), CostFunction.average(2))
        assert m.n_vars == 11

    def test_point_mass_pins_mixed_cosets(self):
        m = build_primal(profile(2, ["1", "0", "0", "0"]), CostFunction.average(2))
        # only the bottom coset {0} survives the zero-weight pinning
        assert m.n_vars == 1
        assert len(m.constraints) == 1

    def test_budget(self):
        with pytest.raises(BudgetError):
            build_primal(profile(6, ["1/64"] * 64), CostFunction.average(6))

    def test_text_dump(self):
        m = build_primal(profile(1, ["1/2", "1/2"]), CostFunction.average(1))
        text = m.to_text()
        assert "mu[" in text and "= 1" in text


class TestBuildDual:
    def test_n2_constraint_census(self):
        m = build_dual(profile(2, ["1/4"] * 4), CostFunction.average(2))
        rhs = sorted(float(c.rhs) for c in m.constraints)
        assert rhs == [0.0] * 4 + [2.0] * 6 + [8.0]

    def test_n1_constraints(self):
        m = build_dual(profile(1, ["1/2", "1/2"]), CostFunction.average(1))
        assert [float(c.rhs) for c in m.constraints] == [0.0, 0.0, 2.0]

    def test_threshold_tau_n_single_active(self):
        m = build_dual(profile(2, ["1/4"] * 4), CostFunction.threshold(2, 2))
        active = [c for c in m.constraints if c.rhs != 0]
        assert len(active) == 1
        assert float(active[0].rhs) == 4.0
        assert set(active[0].coeffs) == set(all_vectors(2))


class TestSolve:
    def test_n1_uniform_average(self):
        sol, rep = solve_primal(profile(1, ["1/2", "1/2"]), CostFunction.average(1))
        assert rep.objective == 1

    def test_n1_closed_form(self):
        # direct polytope argument: rho = 2 min(a, b) for average cost
        for a in (Fraction(1, 5), Fraction(2, 5), Fraction(1, 2)):
            p = profile(1, [a, 1 - a])
            _, rep = solve_primal(p, CostFunction.average(1))
            assert rep.objective == 2 * min(a, 1 - a)

    def test_worked_value_cohamming_regime(self):
        p = profile(2, ["1/20", "3/20", "3/10", "1/2"])
        _, rep = solve_primal(p, CostFunction.average(2))
        assert rep.objective == Fraction(11, 10)

    def test_worked_value_spike_regime(self):
        p = profile(2, ["1/20", "3/10", "3/10", "7/20"])
        _, rep = solve_primal(p, CostFunction.average(2))
        assert rep.objective == Fraction(6, 5)

    def test_uniform_is_n(self):
        for n in (1, 2, 3):
            p = profile(n, [Fraction(1, 1 << n)] * (1 << n))
            _, rep = solve_primal(p, CostFunction.average(n))
            assert rep.objective == n

    def test_point_mass_is_zero(self):
        p = profile(2, ["1", "0", "0", "0"])
        _, rep = solve_primal(p, CostFunction.average(2))
        assert rep.objective == 0
        _, drep = solve_dual(p, CostFunction.average(2))
        assert drep.objective == 0

    def test_float_mode(self):
        p = profile(2, [0.05, 0.15, 0.3, 0.5])
        _, rep = solve_primal(p, CostFunction.average(2), mode="float")
        assert rep.objective == pytest.approx(1.1, abs=1e-9)

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_strong_duality_exact(self, n):
        rng = random.Random(100 + n)
        cost = CostFunction.average(n)
        for _ in range(5):
            p = rand_rational_profile(n, rng)
            _, rp = solve_primal(p, cost)
            _, rd = solve_dual(p, cost)
            assert rp.objective == rd.objective

    @pytest.mark.parametrize("n", [1, 2])
    def test_against_scipy(self, n):
        rng = random.Random(17 + n)
        for kind in ("average", "threshold"):
            cost = (CostFunction.average(n) if kind == "average"
                    else CostFunction.threshold(n, 1))
            for _ in range(4):
                p = rand_rational_profile(n, rng)
                m = build_primal(p, cost)
                rep = solve(m, mode="float")
                assert float(rep.objective) == pytest.approx(
                    scipy_optimum(m), abs=1e-8
                )
                d = build_dual(p, cost)
                drep = solve(d, mode="float")
                assert float(drep.objective) == pytest.approx(
                    scipy_optimum(d), abs=1e-8
                )

    def test_random_small_models_against_scipy(self):
        from paritylp.lp import Constraint, LpModel

        rng = random.Random(60)
        agree = 0
        for trial in range(100):
            nv = rng.randint(1, 4)
            nc = rng.randint(1, 5)
            sense = rng.choice(["min", "max"])
            objective = [Fraction(rng.randint(-4, 4)) for _ in range(nv)]
            constraints = []
            for _ in range(nc):
                coeffs = {
                    j: Fraction(rng.randint(-3, 3)) for j in range(nv)
                    if rng.random() < 0.8
                }
                if not coeffs:
                    coeffs = {0: Fraction(1)}
                rel = rng.choice(["=", ">=", "<="])
                constraints.append(
                    Constraint(coeffs, rel, Fraction(rng.randint(-4, 4)))
                )
            model = LpModel(f"fuzz{trial}", sense, [("x", j) for j in range(nv)],
                            objective, constraints)
            report = solve(model, mode="exact")
            res = _scipy_raw(model)
            if report.status == "optimal":
                assert res.status == 0, (trial, res.message)
                expected = -res.fun if sense == "max" else res.fun
                assert float(report.objective) == pytest.approx(expected, abs=1e-7)
                agree += 1
            elif report.status == "infeasible":
                assert res.status == 2, trial
            else:
                assert res.status == 3, trial
        assert agree >= 10

    def test_n4_strong_duality_spot_check(self):
        rng = random.Random(61)
        p = rand_rational_profile(4, rng)
        for cost in (CostFunction.average(4), CostFunction.threshold(4, 2)):
            _, rp = solve_primal(p, cost)
            _, rd = solve_dual(p, cost)
            assert rp.objective == rd.objective

    def test_dualized_strategy_matches_two_phase(self, monkeypatch):
        import paritylp.lp as lpmod

        rng = random.Random(55)
        for n in (1, 2):
            p = rand_rational_profile(n, rng)
            for cost in (CostFunction.average(n), CostFunction.threshold(n, 1)):
                model = build_dual(p, cost)
                fast = solve(model)
                assert fast.strategy == "dualized"
                with monkeypatch.context() as m:
                    m.setattr(lpmod, "_dual_shaped", lambda _: False)
                    slow = lpmod.solve(model, "exact")
                assert slow.strategy == "two-phase"
                assert fast.objective == slow.objective

    def test_coset_reduction_matches_literal_program(self):
        rng = random.Random(3)
        for n in (1, 2):
            cost = CostFunction.average(n)
            matrices = [F2Matrix(n, ())]
            for k in range(1, n + 1):
                matrices.extend(m for m in full_rank_matrices(n, k))
            canonical = [F2Matrix(n, ())]
            seen = set()
            for m in matrices[1:]:
                space = frozenset(m.row_space())
                if space not in seen:
                    seen.add(space)
                    canonical.append(m)
            for _ in range(3):
                p = rand_rational_profile(n, rng)
                _, rep = solve_primal(p, cost)
                literal = literal_lp_model(p, cost, canonical)
                lit_rep = solve(literal)
                assert lit_rep.objective == rep.objective

    def test_duplicates_do_not_change_optimum(self):
        rng = random.Random(4)
        for n in (1, 2):
            cost = CostFunction.average(n)
            with_duplicates = [F2Matrix(n, ())]
            for k in range(1, n + 1):
                with_duplicates.extend(full_rank_matrices(n, k))
            for _ in range(3):
                p = rand_rational_profile(n, rng)
                _, rep = solve_primal(p, cost)
                literal = literal_lp_model(p, cost, with_duplicates)
                lit_rep = solve(literal)
                assert lit_rep.objective == rep.objective

    def test_monotone_in_cost(self):
        rng = random.Random(5)
        p = rand_rational_profile(2, rng)
        base = CostFunction.custom(2, [0, 1, 1])
        bigger = CostFunction.custom(2, [0, 1, 3])
        _, r1 = solve_primal(p, base)
        _, r2 = solve_primal(p, bigger)
        assert r2.objective >= r1.objective

    def test_exact_reproducible(self):
        p = profile(2, ["1/20", "3/20", "3/10", "1/2"])
        cost = CostFunction.average(2)
        first = solve(build_primal(p, cost))
        second = solve(build_primal(p, cost))
        assert first.objective == second.objective
        assert first.values == second.values

    def test_bernoulli_tightness(self):
        for n, t in ((1, 0.1), (2, 0.1), (3, 0.25)):
            p = bernoulli_profile(n, t)
            _, rep = solve_primal(p, CostFunction.average(n), mode="float")
            q = 0.5 - (t * (1 - t)) ** 0.5
            assert float(rep.objective) == pytest.approx(2 * n * q, abs=1e-9)


class TestSolverEdgeCases:
    def test_infeasible_hand_model(self):
        from paritylp.lp import Constraint, LpModel

        model = LpModel("clash", "min", [("x",)], [Fraction(1)], [
            Constraint({0: Fraction(1)}, "=", Fraction(1)),
            Constraint({0: Fraction(1)}, "=", Fraction(2)),
        ])
        assert solve(model).status == "infeasible"

    def test_unbounded_hand_model(self):
        from paritylp.lp import Constraint, LpModel

        model = LpModel("free", "max", [("x",)], [Fraction(1)], [
            Constraint({0: Fraction(1)}, ">=", Fraction(0)),
        ])
        assert solve(model).status == "unbounded"

    def test_negative_rhs_row_flipped(self):
        from paritylp.lp import Constraint, LpModel

        # x >= -1 is vacuous for x >= 0; optimum sits at the other bound
        model = LpModel("flip", "min", [("x",)], [Fraction(1)], [
            Constraint({0: Fraction(1)}, ">=", Fraction(-1)),
            Constraint({0: Fraction(1)}, ">=", Fraction(3)),
        ])
        report = solve(model)
        assert report.status == "optimal" and report.objective == 3


class TestFeasibilityChecks:
    def test_hamming_style_dual_feasible(self):
        from paritylp.f2lin import hamming_weight

        b = {i: 2 * hamming_weight(i) for i in all_vectors(2)}
        report = check_dual_feasible(DualSolution(2, b), CostFunction.average(2))
        assert report.feasible
        full_slacks = [
            s for (code, _), s in report.slacks.items() if code.k == 2
        ]
        assert full_slacks == [0]

    def test_zero_dual_infeasible(self):
        b = {i: 0 for i in all_vectors(2)}
        report = check_dual_feasible(DualSolution(2, b), CostFunction.average(2))
        assert not report.feasible
        assert report.max_violation == 8

    def test_bottom_only_primal_feasible(self):
        p = profile(2, ["1/4"] * 4)
        sol, _ = solve_primal(p, CostFunction.custom(2, [0, 0, 0]))
        report = check_primal_feasible(sol, p)
        assert report.feasible

    def test_catches_broken_normalization(self):
        p = profile(1, ["1/2", "1/2"])
        sol, _ = solve_primal(p, CostFunction.average(1))
        broken = PrimalSolution(sol.n, dict(sol.mu),
                                {k: 2 * v for k, v in sol.lam.items()},
                                sol.objective, sol.codes)
        report = check_primal_feasible(broken, p)
        assert not report.feasible


class TestSlackness:
    def test_optimal_pair_certifies(self):
        rng = random.Random(11)
        for n in (1, 2):
            p = rand_rational_profile(n, rng)
            cost = CostFunction.average(n)
            primal, _ = solve_primal(p, cost)
            dual, _ = solve_dual(p, cost)
            report = complementary_slackness(primal, dual, p, cost)
            assert report.certified
            assert report.primal_objective == report.dual_objective

    def test_suboptimal_pair_reports_nonzero_product(self):
        p = profile(2, ["1/20", "3/20", "3/10", "1/2"])
        cost = CostFunction.average(2)
        primal, _ = solve_primal(p, cost)
        # feasible but loose dual: constant 2^n * max C
        loose = DualSolution(2, {i: 8 for i in all_vectors(2)})
        assert check_dual_feasible(loose, cost).feasible
        report = complementary_slackness(primal, loose, p, cost)
        assert not report.certified
        assert report.violations
