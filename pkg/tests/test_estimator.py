"""Rank-ensemble Renyi/Shannon entropy estimation against closed forms.

Gaussian reference values come from the closed form
H_alpha = 0.5 ln(2 pi alpha^(1/(alpha-1)) Sigma):
    alpha=0.5 -> 0.5 ln(8 pi), alpha=1 -> 0.5 ln(2 pi e),
    alpha=1.5 -> 0.5 ln(4.5 pi), alpha=2 -> 0.5 ln(4 pi).
"""

import math

import numpy as np
import pytest

from rtekit import (ConvergenceRangeError, DegenerateSampleError, DomainError,
                    EstimatorConfig, PointCloud, conditional_renyi_entropy,
                    entropy_ensemble, knn_table, renyi_entropy_knn,
                    shannon_entropy_knn)

H_GAUSS = {
    0.5: 1.6120857137646178,   # 0.5*ln(8*pi)
    1.0: 1.4189385332046727,   # 0.5*ln(2*pi*e)
    1.5: 1.3244036413128371,   # 0.5*ln(4.5*pi)
    2.0: 1.2655121234846454,   # 0.5*ln(4*pi)
}


def gauss_cloud(n, seed, dim=1):
    rng = np.random.default_rng(seed)
    return PointCloud(rng.standard_normal((n, dim)))


# --- configuration validation ----------------------------------------------

def test_config_convergence_guard():
    with pytest.raises(ConvergenceRangeError):
        EstimatorConfig(alpha=3.5, n_min=5)
    EstimatorConfig(alpha=3.0, n_min=5)  # closed upper end admitted
    with pytest.raises(ConvergenceRangeError):
        EstimatorConfig(alpha=2.1, n_min=3)


def test_config_field_validation():
    with pytest.raises(DomainError):
        EstimatorConfig(alpha=-0.5)
    with pytest.raises(DomainError):
        EstimatorConfig(alpha=1.0, n_min=10, n_max=5)
    with pytest.raises(DomainError):
        EstimatorConfig(alpha=1.0, degenerate_policy="ignore")


def test_rank_level_convergence_checks():
    cloud = gauss_cloud(500, 0)
    table = knn_table(cloud, 10)
    # rank 1 in one dimension admits alpha <= 1.5
    renyi_entropy_knn(cloud, table, 1.4, 1)
    with pytest.raises(ConvergenceRangeError):
        renyi_entropy_knn(cloud, table, 1.6, 1)
    with pytest.raises(ConvergenceRangeError):
        renyi_entropy_knn(cloud, table, 3.2, 5)
    with pytest.raises(DomainError):
        renyi_entropy_knn(cloud, table, 1.0, 5)  # Shannon branch


# --- single-rank estimators -------------------------------------------------

def test_renyi_uniform_is_zero():
    rng = np.random.default_rng(42)
    cloud = PointCloud(rng.random(30000))
    table = knn_table(cloud, 5)
    assert renyi_entropy_knn(cloud, table, 2.0, 5) == pytest.approx(0.0,
                                                                    abs=0.05)


def test_renyi_gaussian_alpha2():
    cloud = gauss_cloud(100000, 1)
    table = knn_table(cloud, 5)
    est = renyi_entropy_knn(cloud, table, 2.0, 5)
    assert est == pytest.approx(H_GAUSS[2.0], abs=0.05)


def test_shannon_uniform_and_gaussian():
    rng = np.random.default_rng(5)
    ucloud = PointCloud(rng.random(30000))
    assert shannon_entropy_knn(ucloud, knn_table(ucloud, 5), 5) == \
        pytest.approx(0.0, abs=0.05)
    gcloud = gauss_cloud(100000, 2)
    assert shannon_entropy_knn(gcloud, knn_table(gcloud, 5), 5) == \
        pytest.approx(H_GAUSS[1.0], abs=0.05)


def test_renyi_brackets_shannon_near_alpha_one():
    cloud = gauss_cloud(50000, 3)
    table = knn_table(cloud, 5)
    h1 = shannon_entropy_knn(cloud, table, 5)
    lo = renyi_entropy_knn(cloud, table, 0.99, 5)
    hi = renyi_entropy_knn(cloud, table, 1.01, 5)
    assert abs(lo - h1) < 0.02 and abs(hi - h1) < 0.02
    assert hi <= h1 <= lo or abs(hi - lo) < 0.02


# --- scaling and translation laws -------------------------------------------

@pytest.mark.parametrize("alpha,base", [(2.0, math.e), (0.5, math.e),
                                        (1.0, 2.0)])
def test_scaling_law(alpha, base):
    rng = np.random.default_rng(7)
    pts = rng.standard_normal((2000, 2))
    c = 10.0
    cfg = EstimatorConfig(alpha=alpha, n_min=5, n_max=12, log_base=base)
    e1 = entropy_ensemble(PointCloud(pts), cfg)
    e2 = entropy_ensemble(PointCloud(c * pts), cfg)
    expect = 2 * math.log(c) / math.log(base)
    assert np.allclose(e2.values - e1.values, expect, atol=1e-9)


def test_translation_invariance_bit_for_bit():
    # integer-valued coordinates keep the translation exact in floating point
    rng = np.random.default_rng(9)
    pts = rng.integers(0, 2 ** 20, size=(800, 2)).astype(float)
    cfg = EstimatorConfig(alpha=2.0, n_min=5, n_max=10)
    e1 = entropy_ensemble(PointCloud(pts), cfg)
    e2 = entropy_ensemble(PointCloud(pts + np.array([3.0, -7.0])), cfg)
    assert np.array_equal(e1.values, e2.values)
    assert e1.mean == e2.mean and e1.std == e2.std


def test_translation_invariance_generic_floats():
    rng = np.random.default_rng(10)
    pts = rng.standard_normal((1500, 1))
    cfg = EstimatorConfig(alpha=1.5)
    e1 = entropy_ensemble(PointCloud(pts), cfg)
    e2 = entropy_ensemble(PointCloud(pts + 0.1234), cfg)
    assert np.allclose(e1.values, e2.values, atol=1e-9)


# --- ensembles ---------------------------------------------------------------

def test_ensemble_single_rank_has_zero_std():
    cloud = gauss_cloud(3000, 11)
    cfg = EstimatorConfig(alpha=2.0, n_min=5, n_max=5)
    est = entropy_ensemble(cloud, cfg)
    assert est.std == 0.0
    table = knn_table(cloud, 5)
    assert est.mean == pytest.approx(renyi_entropy_knn(cloud, table, 2.0, 5),
                                     abs=1e-12)
    assert est.per_rank == [(5, est.mean)]


def test_ensemble_gaussian_alpha2_default_ranks():
    est = entropy_ensemble(gauss_cloud(100000, 12), EstimatorConfig(alpha=2.0))
    assert est.mean == pytest.approx(H_GAUSS[2.0], abs=0.05)
    assert est.std < 0.05


def test_ensemble_monotone_in_alpha_with_margin():
    # closed-form ordering H_0.5 > H_1 > H_2 must be resolved by > 3 std
    cloud = gauss_cloud(100000, 13)
    ests = {a: entropy_ensemble(cloud, EstimatorConfig(alpha=a))
            for a in (0.5, 1.0, 2.0)}
    for lo, hi in ((0.5, 1.0), (1.0, 2.0)):
        margin = 3.0 * max(ests[lo].std, ests[hi].std)
        assert ests[lo].mean - ests[hi].mean > margin


def test_estimator_consistency_in_sample_size():
    # median absolute error over seeds shrinks as N grows 1e3 -> 1e5
    sizes = (1000, 10000, 100000)
    alphas = (0.5, 1.5, 2.0)
    errs = {a: {n: [] for n in sizes} for a in alphas}
    for seed in range(10):
        for n in sizes:
            cloud = gauss_cloud(n, 100 + seed)
            table = knn_table(cloud, 50)
            for a in alphas:
                vals = [renyi_entropy_knn(cloud, table, a, ell)
                        for ell in range(5, 51)]
                errs[a][n].append(abs(float(np.mean(vals)) - H_GAUSS[a]))
    for a in alphas:
        med = [float(np.median(errs[a][n])) for n in sizes]
        assert med[0] > med[1] > med[2], (a, med)


# --- conditional entropy ------------------------------------------------------

def test_conditional_independent_is_marginal():
    rng = np.random.default_rng(21)
    joint = PointCloud(rng.standard_normal((30000, 2)))
    cfg = EstimatorConfig(alpha=2.0)
    cond = conditional_renyi_entropy(joint, [1], cfg)
    marg = entropy_ensemble(PointCloud(joint.points[:, [0]]), cfg)
    assert abs(cond.mean - marg.mean) < 2.0 * max(cond.std, marg.std, 1e-3)


def test_conditional_correlated_gaussian_closed_form():
    r = 0.8
    rng = np.random.default_rng(22)
    y = rng.standard_normal(100000)
    x = r * y + math.sqrt(1 - r * r) * rng.standard_normal(100000)
    joint = PointCloud(np.column_stack([x, y]))
    cond = conditional_renyi_entropy(joint, [1], EstimatorConfig(alpha=2.0))
    expect = 0.5 * math.log(2.0 * math.pi * 2.0 * (1.0 - r * r))
    assert cond.mean == pytest.approx(expect, abs=0.05)


def test_conditional_deterministic_copy_strongly_negative():
    rng = np.random.default_rng(23)
    x = rng.standard_normal(100000)
    y = x + 1e-9 * rng.standard_normal(100000)
    joint = PointCloud(np.column_stack([x, y]))
    cond = conditional_renyi_entropy(joint, [1], EstimatorConfig(alpha=1.0))
    assert cond.mean < -5.0


def test_conditional_dims_validation():
    joint = PointCloud(np.random.default_rng(0).standard_normal((100, 3)))
    cfg = EstimatorConfig(alpha=1.0, n_min=2, n_max=4)
    with pytest.raises(DomainError):
        conditional_renyi_entropy(joint, [], cfg)
    with pytest.raises(DomainError):
        conditional_renyi_entropy(joint, [0, 1, 2], cfg)
    with pytest.raises(DomainError):
        conditional_renyi_entropy(joint, [3], cfg)


# --- degenerate samples -------------------------------------------------------

def duplicate_cloud():
    rng = np.random.default_rng(31)
    pts = rng.standard_normal((500, 1))
    pts[100:200] = pts[0]  # heavy duplication
    return PointCloud(pts)


def test_duplicates_raise_by_default():
    with pytest.raises(DegenerateSampleError):
        entropy_ensemble(duplicate_cloud(), EstimatorConfig(alpha=2.0))


def test_duplicates_jitter_policy_recovers():
    cfg = EstimatorConfig(alpha=2.0, degenerate_policy="jitter")
    est = entropy_ensemble(duplicate_cloud(), cfg)
    assert np.all(np.isfinite(est.values))


def test_zero_distance_errors_in_single_rank_ops():
    pts = np.zeros((10, 1))
    pts[8:, 0] = [1.0, 2.0]  # eight coincident points: rank 6 distance is 0
    cloud = PointCloud(pts)
    table = knn_table(cloud, 6)
    with pytest.raises(DegenerateSampleError):
        shannon_entropy_knn(cloud, table, 6)
    with pytest.raises(DegenerateSampleError):
        renyi_entropy_knn(cloud, table, 2.0, 6)  # negative rho exponent
    # positive exponent absorbs zero distances
    val = renyi_entropy_knn(cloud, table, 0.5, 6)
    assert np.isfinite(val)


def test_log_base_conversion():
    cloud = gauss_cloud(5000, 41)
    nats = entropy_ensemble(cloud, EstimatorConfig(alpha=2.0))
    bits = entropy_ensemble(cloud, EstimatorConfig(alpha=2.0, log_base=2.0))
    assert np.allclose(bits.values, nats.values / math.log(2.0), rtol=1e-12)
