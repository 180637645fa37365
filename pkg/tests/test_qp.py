import random
from fractions import Fraction
from itertools import combinations

import pytest

from l0mult.errors import EmptyPolyhedron
from l0mult.model import is_feasible
from l0mult.qp import embed, min_residual, region_nonempty, support_feasible

from conftest import random_instance

F = Fraction


class TestMinResidual:
    def test_example_unconstrained_support(self, example):
        res = min_residual(example, (2, 3))
        assert res.qstar == 0
        assert res.witness == (F(2), F(1))
        assert res.active_rows == (0, 2)

    def test_empty_support_is_empty_polyhedron(self, example):
        with pytest.raises(EmptyPolyhedron):
            min_residual(example, ())

    def test_single_support(self, example):
        res = min_residual(example, (0,))
        assert res.qstar == 1
        assert res.witness == (F(1),)

    def test_blocked_support_qstar(self, example):
        res = min_residual(example, (0, 1))
        assert res.qstar == F(2, 27)
        assert res.witness == (F(10, 9), -F(7, 9))
        assert res.active_rows == (2,)

    def test_monotone_in_support(self, example):
        rng = random.Random(21)
        for _ in range(30):
            size = rng.randint(1, 3)
            small = tuple(sorted(rng.sample(range(4), size)))
            extra = rng.choice([i for i in range(4) if i not in small])
            large = tuple(sorted(small + (extra,)))

            def q(s):
                try:
                    return min_residual(example, s).qstar
                except EmptyPolyhedron:
                    return None

            qs, ql = q(small), q(large)
            if qs is not None and ql is not None:
                assert ql <= qs

    def test_forcing_monotone_in_region(self, example):
        # region_nonempty(S, I') implies region_nonempty(S, I) for I within I'
        for s in combinations(range(4), 2):
            for big in combinations(range(3), 2):
                if region_nonempty(example, s, big):
                    for small in combinations(big, 1):
                        assert region_nonempty(example, s, small)

    def test_witness_exactness_via_is_feasible(self, example):
        for s in [(2, 3), (1, 2), (0, 2), (0, 3), (1, 3)]:
            res = min_residual(example, s)
            x = embed(s, res.witness, example.n)
            assert res.qstar == 0
            assert is_feasible(example, x)


class TestSupportFeasible:
    def test_example_supports(self, example):
        ok, w = support_feasible(example, (1, 2))
        assert ok and w == (F(0), F(1), -F(1, 2), F(0))
        ok, _ = support_feasible(example, (0, 1))
        assert not ok
        ok, w = support_feasible(example, (0, 2))
        assert ok and w == (F(1, 2), F(0), -F(1, 4), F(0))


class TestRegionNonempty:
    def test_example_regions(self, example):
        assert region_nonempty(example, (2, 3), (0, 2))
        assert not region_nonempty(example, (2, 3), (0, 1, 2))
        assert not region_nonempty(example, (1, 2), (0, 2))

    def test_restricted_max_cardinality_for_one_support(self, example):
        # over support {2,3} alone, only I = {1} is achievable
        sizes = [len(i) for size in range(3, -1, -1)
                 for i in combinations(range(3), size)
                 if region_nonempty(example, (1, 2), i)]
        assert max(sizes) == 1


class TestFloatOracle:
    def test_qstar_matches_cvxpy(self):
        cp = pytest.importorskip("cvxpy")
        import numpy as np

        rng = random.Random(22)
        compared = 0
        while compared < 100:
            inst = random_instance(rng)
            if inst.n > 5:
                continue
            size = rng.randint(1, min(3, inst.n))
            support = tuple(sorted(rng.sample(range(inst.n), size)))
            try:
                res = min_residual(inst, support)
            except EmptyPolyhedron:
                continue
            a = np.array([[float(x) for x in row] for row in
                          inst.A.select_cols(support).data])
            y = np.array([float(x) for x in inst.y])
            z = cp.Variable(size)
            cons = []
            if inst.l:
                b_s = np.array([[float(x) for x in row] for row in
                                inst.B.select_cols(support).data])
                cons = [b_s @ z <= np.array([float(x) for x in inst.b])]
            prob = cp.Problem(cp.Minimize(cp.sum_squares(y - a @ z)), cons)
            prob.solve(solver=cp.CLARABEL, tol_gap_abs=1e-12, tol_gap_rel=1e-12,
                       tol_feas=1e-12)
            if prob.status not in ("optimal", "optimal_inaccurate"):
                continue
            assert abs(float(res.qstar) - prob.value) < 1e-6
            compared += 1
        assert compared == 100
