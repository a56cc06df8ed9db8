import numpy as np
import pytest
from scipy import stats

from rotsym import distributions as dist
from rotsym import geometry, symtests
from rotsym.errors import (
    DegenerateCosinesError,
    DimensionError,
    PoleError,
)


def uniform_sample(n, p, seed):
    rng = np.random.default_rng(seed)
    return dist.sample_uniform_sphere(p, n, rng)


def signs_of(sample, theta):
    frame = geometry.tangent_frame(theta)
    return geometry.decompose_sample(sample, frame)


# quadratic-form oracles, deliberately O(n^2)


def q_loc_double_sum(v, u):
    n, pm1 = u.shape
    p = pm1 + 1
    gram = u @ u.T
    return (p - 1) / n * float(gram.sum())


def q_sc_double_sum(v, u):
    n, pm1 = u.shape
    p = pm1 + 1
    gram = u @ u.T
    return (p * p - 1) / (2.0 * n) * float(np.sum(gram**2) - n * n / (p - 1.0))


def q_cov_double_sum(v, u):
    n, pm1 = u.shape
    p = pm1 + 1
    gram = u @ u.T
    weighted = np.outer(v, v) * gram
    return (p - 1) * float(weighted.sum()) / float(v @ v)


THETA3 = np.array([0.0, 0.0, 1.0])


class TestQuadraticOracles:
    @pytest.mark.parametrize("p", [3, 4, 6])
    def test_loc_sc_cov_match_double_sums(self, p):
        theta = np.zeros(p)
        theta[0] = 1.0
        for seed in range(5):
            x = uniform_sample(80, p, seed)
            v, u = signs_of(x, theta)
            assert symtests.q_loc(x, theta).statistic == pytest.approx(
                q_loc_double_sum(v, u), abs=1e-9
            )
            assert symtests.q_sc(x, theta).statistic == pytest.approx(
                q_sc_double_sum(v, u), abs=1e-9
            )
            assert symtests.q_cov(x, theta).statistic == pytest.approx(
                q_cov_double_sum(v, u), abs=1e-9
            )

    def test_hybrid_is_sum(self):
        x = uniform_sample(60, 4, 0)
        theta = np.array([1.0, 0.0, 0.0, 0.0])
        total = symtests.q_loc(x, theta).statistic + symtests.q_sc(x, theta).statistic
        assert symtests.q_hyb(x, theta).statistic == pytest.approx(total, rel=1e-14)


class TestFisherHybrid:
    def test_p3_identity(self):
        # at p = 3 both components are chi^2_2, whose tail is exp(-x/2),
        # so the Fisher combination equals the plain sum exactly
        for seed in range(20):
            x = uniform_sample(40, 3, seed)
            plain = symtests.q_hyb(x, THETA3).statistic
            fisher = symtests.q_hyb_fisher(x, THETA3).statistic
            assert abs(plain - fisher) < 1e-10

    def test_p4_differs(self):
        x = uniform_sample(100, 4, 1)
        theta = np.array([0.0, 1.0, 0.0, 0.0])
        plain = symtests.q_hyb(x, theta)
        fisher = symtests.q_hyb_fisher(x, theta)
        assert plain.statistic != pytest.approx(fisher.statistic)
        assert fisher.df == 4 and plain.df == 8

    def test_clamp_flag(self):
        # wildly skewed sample drives the location p-value into underflow
        rng = np.random.default_rng(2)
        frame = geometry.tangent_frame(THETA3)
        v = rng.uniform(-0.9, 0.9, size=1500)
        u = np.tile([1.0, 0.0], (1500, 1))  # all signs identical
        x = geometry.reconstruct_sample(v, u, frame)
        res = symtests.q_hyb_fisher(x, THETA3)
        assert res.clamped
        assert np.isfinite(res.statistic)


class TestInvariance:
    def test_rotation_invariance(self):
        rng = np.random.default_rng(3)
        p = 4
        x = uniform_sample(120, p, 4)
        theta = np.zeros(p)
        theta[0] = 1.0
        rot, _ = np.linalg.qr(rng.standard_normal((p, p)))
        for fn in (symtests.q_loc, symtests.q_sc, symtests.q_hyb, symtests.q_cov):
            base = fn(x, theta).statistic
            rotated = fn(x @ rot.T, rot @ theta).statistic
            assert rotated == pytest.approx(base, abs=1e-9)

    def test_unspecified_rotation_invariance(self):
        rng = np.random.default_rng(5)
        x = dist.sample_vmf(THETA3, 2.0, 150, rng)
        rot, _ = np.linalg.qr(rng.standard_normal((3, 3)))
        base = symtests.q_loc_vmf(x).statistic
        rotated = symtests.q_loc_vmf(x @ rot.T).statistic
        assert rotated == pytest.approx(base, abs=1e-8)


class TestUnspecifiedLoc:
    def test_hand_oracle_n2(self):
        # V = (0, 0.6): D = (1/2)(0 + 0.75)/0.6 = 0.625, E = 0.9, F = 0.18
        frame = geometry.tangent_frame(THETA3)
        v = np.array([0.0, 0.6])
        u = np.array([[1.0, 0.0], [0.0, 1.0]])
        x = geometry.reconstruct_sample(v, u, frame)
        parts = symtests.unspecified_loc_stats(x, THETA3)
        assert parts.d_hat == pytest.approx(0.625, abs=1e-12)
        assert parts.e_hat == pytest.approx(0.9, abs=1e-12)
        assert parts.f_hat == pytest.approx(0.18, abs=1e-12)

    def test_gamma_formula(self):
        rng = np.random.default_rng(6)
        x = dist.sample_vmf(THETA3, 3.0, 200, rng)
        parts = symtests.unspecified_loc_stats(x, THETA3)
        expected = (
            1.0 - 2.0 * parts.d_hat * parts.e_hat + parts.d_hat**2 * (1.0 - parts.f_hat)
        ) / 2.0
        assert parts.gamma_hat_scalar == pytest.approx(expected, rel=1e-14)

    def test_degenerate_cosines(self):
        frame = geometry.tangent_frame(THETA3)
        v = np.array([0.5, -0.5])
        u = np.array([[1.0, 0.0], [0.0, 1.0]])
        x = geometry.reconstruct_sample(v, u, frame)
        with pytest.raises(DegenerateCosinesError):
            symtests.unspecified_loc_stats(x, THETA3)

    def test_efficient_score_reduces_to_vmf(self):
        # with the vMF score the concentration cancels from the statistic
        rng = np.random.default_rng(7)
        x = dist.sample_vmf(THETA3, 2.0, 150, rng)
        base = symtests.q_loc_vmf(x).statistic
        for kappa in (0.1, 1.0, 42.0):
            alt = symtests.efficient_score_loc(x, dist.vmf_angular(kappa)).statistic
            assert alt == pytest.approx(base, abs=1e-10)

    def test_estimator_choices(self):
        rng = np.random.default_rng(8)
        x = dist.sample_vmf(THETA3, 4.0, 200, rng)
        by_mean = symtests.q_loc_vmf(x, estimator="spherical_mean")
        explicit = symtests.q_loc_vmf(x, estimator=geometry.spherical_mean(x))
        assert by_mean.statistic == pytest.approx(explicit.statistic)
        assert by_mean.theta_mode == "estimated:spherical_mean"
        assert explicit.theta_mode == "estimated:fixed"
        with pytest.raises(DimensionError):
            symtests.q_loc_vmf(x, estimator="nope")


class TestNullCalibration:
    def test_p_values_roughly_uniform_under_null(self):
        pvals = {label: [] for label in ("s-loc", "s-sc", "s-cov", "u-loc")}
        for seed in range(300):
            rng = np.random.default_rng(1000 + seed)
            x = dist.sample_vmf(THETA3, 2.0, 120, rng)
            for label in pvals:
                pvals[label].append(
                    symtests.run_test(label, x, theta=THETA3).p_value
                )
        for label, vals in pvals.items():
            res = stats.kstest(vals, "uniform")
            assert res.pvalue > 0.001, (label, res)


class TestHighDim:
    def test_loc_standardization_values(self):
        x = uniform_sample(100, 10, 9)
        theta = np.zeros(10)
        theta[0] = 1.0
        raw = symtests.q_loc(x, theta)
        z = symtests.high_dim_standardize(raw)
        assert z.statistic == pytest.approx((raw.statistic - 9.0) / np.sqrt(18.0))
        assert z.df is None
        assert z.p_value == pytest.approx(stats.norm.sf(z.statistic))

    def test_hyb_center_is_sum_of_components(self):
        p = 12.0
        loc_c = p - 1.0
        sc_c = (p - 2.0) * (p + 1.0) / 2.0
        hyb_c = (p * (p + 1.0) - 4.0) / 2.0
        assert hyb_c == pytest.approx(loc_c + sc_c)

    def test_rejects_unsupported(self):
        x = uniform_sample(50, 5, 10)
        theta = np.zeros(5)
        theta[0] = 1.0
        with pytest.raises(DimensionError):
            symtests.high_dim_standardize(symtests.q_cov(x, theta))


class TestDispatch:
    def test_labels_cover_both_families(self):
        assert set(symtests.SPECIFIED_TESTS) == {"s-loc", "s-sc", "s-hyb", "s-hybF", "s-cov"}
        assert set(symtests.UNSPECIFIED_TESTS) == {"u-loc", "u-sc", "u-hyb", "u-hybF"}

    def test_specified_requires_theta(self):
        x = uniform_sample(50, 3, 11)
        with pytest.raises(DimensionError):
            symtests.run_test("s-loc", x)
        with pytest.raises(DimensionError):
            symtests.run_test("mystery", x)

    def test_p2_rejected(self):
        rng = np.random.default_rng(12)
        x = dist.sample_uniform_sphere(2, 50, rng)
        with pytest.raises(DimensionError):
            symtests.q_loc(x, np.array([1.0, 0.0]))

    def test_result_asdict_uses_report_labels(self):
        x = uniform_sample(50, 3, 13)
        d = symtests.q_loc(x, THETA3).asdict()
        assert d["method"] == "s-loc"
        assert set(d) == {"method", "statistic", "df", "p_value", "n", "p", "theta_mode"}

    def test_pole_observation_raises(self):
        x = np.vstack([uniform_sample(10, 3, 14), THETA3])
        with pytest.raises(PoleError):
            symtests.q_loc(x, THETA3)
