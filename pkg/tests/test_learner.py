import math
from collections import Counter

import numpy as np
import pytest

from clifftomo import _kernels
from clifftomo.clifford import CliffordTableau, all_cliffords, conjugate, random_clifford, to_matrix
from clifftomo.densesim import DenseUnitary, distance, pauli_rotation, pauli_unitary
from clifftomo.f2la import F2Vec
from clifftomo.learner import (
    LearnParams,
    hoeffding_samples,
    learn_clifford,
    learn_clifford_noisy,
    learn_pauli_noisy,
    majority,
)
from clifftomo.oracle import make_clifford_oracle, make_dense_oracle, make_perturbed_clifford
from clifftomo.pauli import SignedPauli, all_paulis

P = SignedPauli.from_str
V = F2Vec.from_str


class TestExact:
    def test_identity_n1(self):
        o = make_clifford_oracle(CliffordTableau.identity(1))
        rep = learn_clifford(o)
        assert rep.recovered == CliffordTableau.identity(1)
        assert rep.queries == o.queries == 7
        assert rep.success and rep.unanimous

    def test_every_single_qubit_clifford(self):
        seen = 0
        for t in all_cliffords(1):
            rep = learn_clifford(make_clifford_oracle(t))
            assert rep.recovered == t
            # compare action on every Pauli, signs included
            for p in all_paulis(1):
                assert conjugate(rep.recovered, p) == conjugate(t, p)
            seen += 1
        assert seen == 24

    def test_n32(self):
        t = random_clifford(32, np.random.default_rng(32))
        o = make_clifford_oracle(t)
        rep = learn_clifford(o)
        assert rep.recovered == t and o.queries == 131

    @pytest.mark.parametrize("n", [2, 3, 5, 12, 64])
    def test_query_count(self, n):
        o = make_clifford_oracle(random_clifford(n, np.random.default_rng(n)))
        rep = learn_clifford(o)
        assert o.queries == rep.queries == 4 * n + 3
        assert rep.recovered == o.tableau

    @pytest.mark.parametrize("n", [1, 4, 9])
    def test_columns_match_symplectic_part(self, n):
        t = random_clifford(n, np.random.default_rng(40 + n))
        rep = learn_clifford(make_clifford_oracle(t))
        k0 = rep.records[0].k
        for i, rec in enumerate(rep.records[1:]):
            assert rec.j == F2Vec.unit(2 * n, i)
            assert rec.k ^ k0 == t.s.mat.col(i)

    def test_deterministic(self):
        t = random_clifford(6, np.random.default_rng(2))
        a, b = learn_clifford(make_clifford_oracle(t)), learn_clifford(make_clifford_oracle(t))
        assert a == b

    @pytest.mark.parametrize("backend", _kernels.available_backends())
    def test_each_kernel_backend(self, backend):
        t = random_clifford(10, np.random.default_rng(77))
        with _kernels.use_backend(backend):
            rep = learn_clifford(make_clifford_oracle(t))
        assert rep.recovered == t and rep.queries == 43

    def test_small_dense_agreement(self):
        rng = np.random.default_rng(3)
        for _ in range(10):
            t = random_clifford(3, rng)
            rep = learn_clifford(make_clifford_oracle(t))
            assert distance(to_matrix(rep.recovered), to_matrix(t)) <= 1e-9


class TestHoeffding:
    def test_examples(self):
        assert hoeffding_samples(0.01, 0.46) == 13
        assert hoeffding_samples(0.5, 0.5) == 3

    def test_always_odd_and_sufficient(self):
        for td in (0.3, 0.01, 1e-4):
            for margin in (0.05, 0.2, 0.49):
                n = hoeffding_samples(td, margin)
                assert n % 2 == 1
                assert 2 * math.exp(-2 * n * margin**2) <= td

    @pytest.mark.parametrize("td,margin", [(0.1, 0), (0.1, -0.2), (0, 0.3), (1, 0.3)])
    def test_rejects(self, td, margin):
        with pytest.raises(ValueError):
            hoeffding_samples(td, margin)

    def test_stage_sizes(self):
        params = LearnParams(0.1, 0.05)
        assert params.task_delta(2) == pytest.approx(0.05 / 6)
        assert params.stage_sizes(2) == (13, 13)
        assert params.predicted_queries(2) == 143


class TestMajority:
    def test_examples(self):
        assert majority(Counter({V("00"): 7, V("01"): 3})) == V("00")
        assert majority(Counter({V("01"): 5, V("00"): 5})) == V("00")
        assert majority(Counter({V("11"): 1})) == V("11")

    def test_empty(self):
        with pytest.raises(ValueError):
            majority(Counter())


class TestParams:
    @pytest.mark.parametrize("eps,delta", [(0.36, 0.05), (-0.1, 0.05), (0.1, 0), (0.1, 1)])
    def test_rejects(self, eps, delta):
        with pytest.raises(ValueError):
            LearnParams(eps, delta)

    def test_pauli_radius(self):
        assert LearnParams.for_pauli(0.7, 0.05).eps == 0.7
        with pytest.raises(ValueError):
            LearnParams.for_pauli(0.71, 0.05)


class TestPauliNoisy:
    def test_exact_y(self):
        o = make_dense_oracle(pauli_unitary(P("Y")))
        a, b = learn_pauli_noisy(o, LearnParams.for_pauli(0.2, 0.05), seed=0)
        assert (str(a), str(b)) == ("1", "1")
        assert o.queries == hoeffding_samples(0.05, 0.5 - 0.04)

    def test_perturbed_x(self):
        theta = math.asin(0.1)
        u = pauli_unitary(P("X")) @ pauli_rotation(P("Z"), theta)
        params = LearnParams.for_pauli(0.1, 0.05)
        wins = 0
        for trial in range(200):
            a, b = learn_pauli_noisy(make_dense_oracle(u), params, seed=trial)
            wins += (str(a), str(b)) == ("0", "1")
        assert wins / 200 >= 0.95

    def test_past_threshold(self):
        # bypass the params check to reach the sample-size guard
        params = object.__new__(LearnParams)
        object.__setattr__(params, "eps", 0.71)
        object.__setattr__(params, "delta", 0.05)
        with pytest.raises(ValueError):
            learn_pauli_noisy(make_dense_oracle(pauli_unitary(P("X"))), params, seed=0)


class TestCliffordNoisy:
    def test_exact_clifford_is_unanimous(self):
        rng = np.random.default_rng(0)
        params = LearnParams(0.0, 0.05)
        for trial in range(10):
            t = random_clifford(2, rng)
            o = make_dense_oracle(to_matrix(t))
            rep = learn_clifford_noisy(o, params, seed=trial)
            assert rep.success and rep.unanimous
            assert rep.recovered == t
            assert rep.queries == o.queries == params.predicted_queries(2)

    def test_query_count_and_quality(self):
        params = LearnParams(0.1, 0.05)
        rng = np.random.default_rng(11)
        hits = 0
        for trial in range(20):
            t = random_clifford(2, rng)
            o, u = make_perturbed_clifford(t, 0.1, rng)
            rep = learn_clifford_noisy(o, params, seed=trial)
            assert (rep.n1, rep.n2) == (13, 13)
            assert rep.queries == 143
            close = rep.success and distance(to_matrix(rep.recovered), u) <= 0.1 + 1e-6
            # inside the radius, being that close pins down the planted Clifford
            assert close == (rep.success and rep.recovered == t)
            hits += close
        assert hits >= 18

    def test_same_seed_same_report(self):
        t = random_clifford(2, np.random.default_rng(4))
        _, u = make_perturbed_clifford(t, 0.3, np.random.default_rng(5))
        params = LearnParams(0.3, 0.05)
        a = learn_clifford_noisy(make_dense_oracle(u), params, seed=99)
        b = learn_clifford_noisy(make_dense_oracle(u), params, seed=99)
        assert a == b

    def test_broken_promise_reports_failure(self):
        o = make_dense_oracle(DenseUnitary(np.eye(4)))

        def stuck(j, rng, shots):
            o._charge(2 * shots)
            return Counter({F2Vec.zeros(4): shots})

        o.sample_twin = stuck
        rep = learn_clifford_noisy(o, LearnParams(0.1, 0.05), seed=0)
        assert not rep.success and rep.recovered is None
        assert "symplectic" in rep.failure
        assert rep.queries == 2 * 5 * 13

    def test_recovers_closest_clifford(self):
        # for eps under the uniqueness radius the planted Clifford is the only one this close
        rng = np.random.default_rng(8)
        t = random_clifford(1, rng)
        _, u = make_perturbed_clifford(t, 0.3, rng)
        for other in all_cliffords(1):
            if other != t:
                assert distance(to_matrix(other), u) > 0.3
