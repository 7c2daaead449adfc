import random

import pytest

from contrex.errors import TooLargeError
from contrex.model import Assignment, LinearConstraint, Variable, build_model, evaluate_objective
from contrex.solver import (
    SolveParams,
    brute_force,
    optimistic_bound,
    propagate_bounds,
    pruning_bound,
    solve,
)


def _binaries(n):
    return [Variable(i, f"v{i}", is_solution_var=True) for i in range(n)]


def _random_model(rng, max_vars=10):
    n = rng.randint(1, max_vars)
    cons = []
    for _ in range(rng.randint(0, 5)):
        ids = rng.sample(range(n), rng.randint(1, n))
        cons.append(
            LinearConstraint(
                tuple((i, rng.randint(-4, 5)) for i in ids),
                rng.choice(["<=", "=", ">="]),
                rng.randint(-4, 8),
            )
        )
    obj = [(i, rng.randint(-5, 6)) for i in range(n)]
    return build_model(_binaries(n), cons, obj, rng.choice(["max", "min"]))


class TestPropagateBounds:
    def test_implied_fixing(self):
        cons = [LinearConstraint(((0, 1), (1, 1)), "<=", 1)]
        res = propagate_bounds(cons, [(1, 1), (0, 1)])
        assert not res.infeasible
        assert res.bounds[1] == (0, 0)
        assert res.fixed_ids == (1,)

    def test_only_satisfying_point(self):
        cons = [LinearConstraint(((0, 2), (1, 3)), ">=", 5)]
        res = propagate_bounds(cons, [(0, 1), (0, 1)])
        assert res.bounds == ((1, 1), (1, 1))

    def test_proven_infeasible(self):
        cons = [LinearConstraint(((0, 1), (1, 1)), ">=", 3)]
        res = propagate_bounds(cons, [(0, 1), (0, 1)])
        assert res.infeasible

    def test_soundness_on_random_models(self):
        # any feasible integral point survives propagation
        rng = random.Random(11)
        for _ in range(60):
            m = _random_model(rng, max_vars=7)
            res = propagate_bounds(m.constraints, [(v.lower, v.upper) for v in m.variables])
            r = brute_force(m)
            if r.status != "Optimal":
                continue
            assert not res.infeasible
            for v in m.variables:
                val = r.assignment.values[v.id]
                lo, hi = res.bounds[v.id]
                assert lo <= val <= hi


class TestOptimisticBound:
    def test_nothing_fixed(self):
        m = build_model(_binaries(3), [], [(0, 3), (1, 2), (2, -1)], "max")
        assert optimistic_bound(m, [(0, 1)] * 3) == 5

    def test_partial_fix(self):
        m = build_model(_binaries(3), [], [(0, 3), (1, 2), (2, -1)], "max")
        assert optimistic_bound(m, [(0, 0), (0, 1), (0, 1)]) == 2

    def test_fixed_point_equals_objective(self):
        rng = random.Random(3)
        for _ in range(25):
            m = _random_model(rng, max_vars=6)
            from contrex.model import normalize_sense

            norm = normalize_sense(m)
            vals = tuple(rng.randint(0, 1) for _ in norm.variables)
            bound = optimistic_bound(norm, [(v, v) for v in vals])
            assert bound == evaluate_objective(norm, Assignment(vals))

    def test_admissible_at_random_nodes(self):
        # bound >= every feasible completion within the node's box
        rng = random.Random(17)
        from contrex.model import normalize_sense
        from itertools import product

        for _ in range(30):
            m = _random_model(rng, max_vars=6)
            norm = normalize_sense(m)
            box = []
            for v in norm.variables:
                lo = rng.choice([0, 0, 1]) if rng.random() < 0.5 else 0
                hi = 1 if rng.random() < 0.7 else lo
                box.append((lo, max(lo, hi)))
            simple = optimistic_bound(norm, box)
            strong = pruning_bound(norm, box)
            assert strong <= simple
            from contrex.model import check_feasibility

            for combo in product(*[range(lo, hi + 1) for lo, hi in box]):
                a = Assignment(tuple(combo))
                if check_feasibility(norm, a).feasible:
                    val = evaluate_objective(norm, a)
                    assert simple >= val
                    assert strong >= val


class TestBruteForce:
    def test_kp_micro(self, kp_micro_model):
        r = brute_force(kp_micro_model)
        assert r.status == "Optimal"
        assert r.objective == 7

    def test_infeasible_toy(self):
        cons = [
            LinearConstraint(((0, 1),), ">=", 1),
            LinearConstraint(((0, 1),), "<=", 0),
        ]
        m = build_model(_binaries(1), cons, [(0, 1)], "max")
        assert brute_force(m).status == "Infeasible"

    def test_budget_guard(self):
        m = build_model(_binaries(30), [], [(i, 1) for i in range(30)], "max")
        with pytest.raises(TooLargeError):
            brute_force(m)

    def test_lexicographic_tie_break(self):
        # two optima: (0,1) and (1,0); the lexicographically smaller vector wins
        m = build_model(_binaries(2), [LinearConstraint(((0, 1), (1, 1)), "<=", 1)], [(0, 1), (1, 1)], "max")
        r = brute_force(m)
        assert r.assignment.values == (0, 1)


class TestSolve:
    def test_unconstrained_positive_coefs(self):
        m = build_model(_binaries(2), [], [(0, 3), (1, 2)], "max")
        r = solve(m)
        assert r.status == "Optimal"
        assert r.objective == 5
        assert r.assignment.values == (1, 1)

    def test_contradiction_infeasible(self):
        cons = [
            LinearConstraint(((0, 1),), ">=", 1),
            LinearConstraint(((0, 1),), "<=", 0),
        ]
        m = build_model(_binaries(1), cons, [(0, 1)], "max")
        assert solve(m).status == "Infeasible"

    def test_kp_micro(self, kp_micro_model, kp_micro_solved):
        assert kp_micro_solved.objective == 7
        picks = {
            kp_micro_model.variables[i].name
            for i, v in enumerate(kp_micro_solved.assignment.values)
            if v == 1
        }
        assert picks == {"x[Alice][lamp]", "x[Bob][bed]"}

    def test_oracle_equivalence_random(self):
        rng = random.Random(99)
        for _ in range(120):
            m = _random_model(rng)
            a, b = solve(m), brute_force(m)
            assert a.status == b.status
            if a.status == "Optimal":
                assert a.objective == b.objective

    def test_determinism(self):
        rng = random.Random(21)
        for _ in range(15):
            m = _random_model(rng)
            r1, r2 = solve(m), solve(m)
            assert r1.status == r2.status
            assert r1.objective == r2.objective
            assert r1.assignment == r2.assignment
            assert r1.stats.nodes == r2.stats.nodes

    def test_monotone_pruning(self):
        # adding a constraint never improves a maximization optimum
        rng = random.Random(31)
        for _ in range(40):
            m = _random_model(rng)
            if m.sense != "max":
                continue
            base = solve(m)
            if base.status != "Optimal":
                continue
            ids = rng.sample(range(len(m.variables)), rng.randint(1, len(m.variables)))
            extra = LinearConstraint(
                tuple((i, rng.randint(-3, 3)) for i in ids), rng.choice(["<=", ">="]), rng.randint(-2, 4)
            )
            m2 = build_model(m.variables, list(m.constraints) + [extra], m.objective, m.sense)
            r2 = solve(m2)
            if r2.status == "Optimal":
                assert r2.objective <= base.objective

    def test_timeout_returns_incumbent(self):
        rng = random.Random(7)
        n = 40
        cons = []
        for _ in range(12):
            ids = rng.sample(range(n), 10)
            cons.append(LinearConstraint(tuple((i, rng.randint(1, 9)) for i in ids), "<=", 20))
        m = build_model(_binaries(n), cons, [(i, rng.randint(1, 9)) for i in range(n)], "max")
        r = solve(m, SolveParams(time_limit=60, node_limit=50))
        assert r.status == "TimedOut"
        if r.assignment is not None:
            from contrex.model import check_feasibility

            assert check_feasibility(m, r.assignment).feasible

    def test_node_limit_is_timeout_status(self):
        m = build_model(_binaries(12), [], [(i, 1) for i in range(12)], "max")
        r = solve(m, SolveParams(node_limit=1))
        assert r.status == "TimedOut"

    def test_bounded_integer_variables(self):
        vars_ = [
            Variable(0, "x", kind="integer", lower=0, upper=5, is_solution_var=True),
            Variable(1, "y", kind="integer", lower=-2, upper=3, is_solution_var=True),
        ]
        cons = [LinearConstraint(((0, 1), (1, 2)), "<=", 7)]
        m = build_model(vars_, cons, [(0, 2), (1, 3)], "max")
        a, b = solve(m), brute_force(m)
        assert a.objective == b.objective == solve(m).objective

    def test_seed_param_is_inert(self):
        m = build_model(_binaries(5), [], [(i, i + 1) for i in range(5)], "max")
        assert solve(m, SolveParams(seed=1)) .objective == solve(m, SolveParams(seed=99)).objective

    def test_index_branching_rule_same_optimum(self):
        rng = random.Random(61)
        for _ in range(20):
            m = _random_model(rng, max_vars=8)
            default = solve(m)
            by_index = solve(m, SolveParams(branching="index"))
            assert default.status == by_index.status
            if default.status == "Optimal":
                assert default.objective == by_index.objective

    def test_oracle_equivalence_with_rational_data(self):
        # fractional coefficients leave the all-int fast paths; results stay exact
        from fractions import Fraction

        rng = random.Random(55)
        for _ in range(40):
            n = rng.randint(1, 7)
            cons = []
            for _ in range(rng.randint(0, 3)):
                ids = rng.sample(range(n), rng.randint(1, n))
                cons.append(
                    LinearConstraint(
                        tuple((i, Fraction(rng.randint(-6, 7), rng.randint(1, 4))) for i in ids),
                        rng.choice(["<=", "=", ">="]),
                        Fraction(rng.randint(-6, 10), rng.randint(1, 3)),
                    )
                )
            obj = [(i, Fraction(rng.randint(-8, 9), rng.randint(1, 4))) for i in range(n)]
            m = build_model(_binaries(n), cons, obj, rng.choice(["max", "min"]))
            a, b = solve(m), brute_force(m)
            assert a.status == b.status
            if a.status == "Optimal":
                assert a.objective == b.objective

    def test_coupled_continuous_variables_refused(self):
        # two continuous variables in one row cannot be pinned down at a leaf
        from contrex.errors import UnsupportedModelError

        vars_ = [
            Variable(0, "x", is_solution_var=True),
            Variable(1, "u", kind="continuous", lower=0, upper=1),
            Variable(2, "w", kind="continuous", lower=0, upper=1),
        ]
        cons = [
            LinearConstraint(((1, 1), (2, 1)), ">=", 1),
            LinearConstraint(((1, 1), (2, 1)), "<=", 1),
        ]
        m = build_model(vars_, cons, [(0, 1), (1, -1), (2, -1)], "max")
        with pytest.raises(UnsupportedModelError):
            solve(m)
        with pytest.raises(UnsupportedModelError):
            brute_force(m)
