"""Smoke tests for the python module: a thin pass over every exposed surface,
with values pinned by the C++ unit and acceptance suites."""

import math

import pytest

import bosonstat as bs


def test_partitions_and_dimensions():
    assert bs.partitions_of(4) == [[4], [3, 1], [2, 2], [2, 1, 1], [1, 1, 1, 1]]
    assert bs.hook_dimension([2, 1]) == 2
    assert bs.weyl_dimension([2], 2) == 3
    assert sum(bs.hook_dimension(p) ** 2 for p in bs.partitions_of(6)) == math.factorial(6)
    assert bs.character([1, 1, 1], [2, 1]) == -1


def test_young_orthogonal_rep():
    sign = bs.young_orthogonal_rep([1, 1], [2, 1])
    assert sign.shape == (1, 1)
    assert abs(sign[0][0] + 1.0) < 1e-12


def test_hom_suppression():
    u = bs.beam_splitter()
    assert abs(bs.bosonic_probability(u, [1, 2], [1, 1])) < 1e-12
    assert abs(bs.bosonic_probability(u, [1, 2], [2, 0]) - 0.5) < 1e-12
    assert abs(bs.distinguishable_probability(u, [1, 2], [1, 1]) - 0.5) < 1e-12


def test_permanent_and_conversions():
    import numpy as np

    assert abs(bs.permanent(np.eye(3, dtype=complex)) - 1.0) < 1e-12
    assert bs.zeta([2, 0, 1]) == [1, 1, 3]
    assert bs.xi([1, 1, 3], 3) == [2, 0, 1]


def test_thermal_weights_match_closed_form():
    x, n = 0.4, 5
    weights = bs.thermal_partition_weights(x, n)
    expect = 1.0
    for k in range(1, n + 1):
        expect *= (1 - x) / (1 - x**k)
    assert abs(weights[(n,)] - expect) < 1e-12
    assert abs(sum(weights.values()) - 1.0) < 1e-10
    k = bs.thermal_class_function(x, n)
    via_chars = bs.weights_from_class_function(k, n)
    for lam, w in weights.items():
        assert abs(via_chars[lam] - w) < 1e-10


def test_mixture_and_direct_models_agree():
    import numpy as np

    rng = np.random.default_rng(7)
    g = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    u, _ = np.linalg.qr(g)
    k = bs.thermal_class_function(0.3, 2)
    mix = bs.weights_from_class_function(k, 2)
    for occ in bs.enumerate_occupations(2, 4):
        direct = bs.direct_model_probability(u, [1, 2], k, occ)
        mixture = bs.mixture_probability(mix, u, [1, 2], occ)
        assert abs(direct - mixture) < 1e-10


def test_bunching_surface():
    import numpy as np

    u = bs.beam_splitter()
    assert abs(bs.hom_tau(u, [1], [2], 1, 2) - 1.0) < 1e-12
    assert bs.estimate_indistinguishability(0.0, 1.0) == 1.0
    assert abs(bs.normalized_immanant(np.eye(2, dtype=complex), [2]) - 1.0) < 1e-12
    assert bs.optimal_k(12, 3) == 8
    value, below = bs.average_generalized_bunching(u, [1, 2], 2, {(2,): 1.0})
    assert not below
    assert abs(value - 1.0) < 1e-10


def test_stats_surface():
    assert abs(bs.normal_cdf(bs.normal_quantile(0.16)) - 0.16) < 1e-10
    assert bs.clopper_pearson(0, 10, 0.05, "lower") == 0.0
    lo, hi, degenerate = bs.bootstrap_bc_interval([float(i) for i in range(1, 101)], 50.0, 0.16)
    assert lo < hi and not degenerate
    assert bs.loss_from_single_survival(0.18) == pytest.approx(0.1)
    assert bs.hoeffding_samples(0.1, 0.1, 2.0) == 0


def test_design_and_mle_round_trip():
    import numpy as np

    rng = np.random.default_rng(23)
    g = rng.normal(size=(5, 5)) + 1j * rng.normal(size=(5, 5))
    u, _ = np.linalg.qr(g)
    truth = u[:3, :2]
    settings = [[1], [2], [1, 2]]
    data = bs.sample_restricted_counts(truth, 0.1, 0.95, settings, 20000, 99)
    fit = bs.mle_fit(data, 3, 2, truth, 0.95)
    assert fit["converged"]
    assert abs(fit["p_loss"] - 0.1) < 0.02
    assert bs.max_tvd(fit["submatrix"], truth, fit["p_loss"], 0.95, settings) < 0.05

    probs = bs.two_particle_distribution(truth, 0.1, 0.95, [1, 2])
    assert abs(sum(probs) - 1.0) < 1e-10


def test_design_optimizers_agree():
    import numpy as np

    rng = np.random.default_rng(5)
    jacobians, probs = [], []
    for _ in range(3):
        z = rng.normal(size=4)
        p = np.exp(z - z.max())
        p /= p.sum()
        a = rng.normal(size=(4, 2))
        jacobians.append(np.diag(p) @ a - np.outer(p, p @ a))
        probs.append(p)
    basis, projected, count = bs.project_inferable(jacobians)
    y = np.ones(count)
    fims = [bs.fisher_information(t, p) for t, p in zip(projected, probs)]
    q_direct, cost_direct = bs.a_optimal_direct(fims, y)
    q_socp, cost_socp, d = bs.a_optimal_socp(projected, probs, y)
    assert cost_socp == pytest.approx(cost_direct, rel=1e-5)
    assert bs.shot_allocation(q_socp, 1000) is not None


def test_error_model():
    f = bs.fidelity_lower_bound(180, 1e-3, 1000.0, 6.45e-3)
    assert f == pytest.approx(0.51, abs=0.01)
    assert f >= 0.3
    assert bs.fidelity_lower_bound(2, 0.0, 1000.0, 1.0) == 1.0


def test_modified_bunching_mc_deterministic():
    data = [([1, 2, 0], [40, 40, 20]), ([2, 3, 0], [30, 60, 10])]
    a = bs.modified_bunching_mc(data, 4, 3, 10000, seed=99)
    b = bs.modified_bunching_mc(data, 4, 3, 10000, seed=99, n_threads=4)
    assert a == b
