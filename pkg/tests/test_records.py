import math

import numpy as np
import pytest
from scipy import integrate, special, stats

from conftest import ALL_SPECS
from recordchar import DegenerateConditioningError, DistributionSpec, DomainError
from recordchar.distributions import cumulative_hazard, hazard, pdf, sample_iid
from recordchar.genbeta import GenBetaParams, genbeta_pdf, genbeta_sample
from recordchar.records import (
    RecordSequence,
    conditional_normalizer,
    extract_records,
    record_conditional_pdf,
    record_joint_pdf,
    record_pdf,
    record_quantile,
    sample_record_conditional,
    simulate_record_process,
    simulate_records,
)

E1 = DistributionSpec.exponential(1.0, 0.0)
W2 = DistributionSpec.weibull(2.0, 1.0)


class TestExtraction:
    @pytest.mark.parametrize("series,values,times", [
        ([3, 1, 4, 1, 5, 9, 2, 6], [3, 4, 5, 9], [1, 3, 5, 6]),
        ([1, 2, 3], [1, 2, 3], [1, 2, 3]),
        ([3, 2, 1], [3], [1]),
        ([2, 2, 2, 3], [2, 3], [1, 4]),  # ties are not records
        ([7.5], [7.5], [1]),
    ])
    def test_examples(self, series, values, times):
        rec = extract_records(series)
        np.testing.assert_array_equal(rec.values, values)
        np.testing.assert_array_equal(rec.times, times)

    def test_empty(self):
        with pytest.raises(DomainError):
            extract_records([])

    def test_idempotent(self, rng):
        for _ in range(50):
            x = rng.normal(size=int(rng.integers(1, 300)))
            rec = extract_records(x)
            again = extract_records(rec.values)
            np.testing.assert_array_equal(again.values, rec.values)
            np.testing.assert_array_equal(again.times, np.arange(1, len(rec) + 1))

    def test_record_is_running_maximum(self, rng):
        x = rng.normal(size=500)
        rec = extract_records(x)
        for val, t in zip(rec.values, rec.times):
            assert val == x[:t].max()

    def test_sequence_validation(self):
        with pytest.raises(DomainError):
            RecordSequence([1.0, 1.0])
        with pytest.raises(DomainError):
            RecordSequence([1.0, 2.0], [2, 3])


class TestSimulation:
    def test_strictly_increasing(self):
        for seed in range(1000):
            r = simulate_records(W2, 50, np.random.default_rng(seed))
            assert np.all(np.diff(r) > 0)

    def test_exponential_is_gamma_sum(self, rng):
        k, n = 5, 10**5
        r = simulate_records(E1, k, rng, size=n)
        assert abs(r[:, -1].mean() - k) < 4 * math.sqrt(k) / math.sqrt(n)

    def test_exponential_location_scale_exact(self):
        a = simulate_records(E1, 6, np.random.default_rng(9))
        b = simulate_records(DistributionSpec.exponential(2.0, 1.0), 6, np.random.default_rng(9))
        np.testing.assert_allclose(b, 1.0 + a / 2.0, rtol=0, atol=1e-15)

    @pytest.mark.parametrize("spec", ALL_SPECS, ids=str)
    def test_hazard_transform_is_gamma(self, spec):
        accepted = 0
        for seed in range(5):
            r = simulate_records(spec, 3, np.random.default_rng(seed), size=10**4)
            h = cumulative_hazard(spec, r[:, -1])
            accepted += stats.kstest(h, stats.gamma(3).cdf).pvalue >= 0.01
        assert accepted >= 4

    def test_needs_positive_k(self, rng):
        with pytest.raises(DomainError):
            simulate_records(E1, 0, rng)

    def test_agrees_with_extraction_from_series(self, rng):
        L, m = 2000, 10**4
        x = sample_iid(W2, rng, L * m).reshape(m, L)
        third = [rec.values[2] for rec in map(extract_records, x) if len(rec) >= 3]
        direct = simulate_records(W2, 3, rng, size=m)[:, 2]
        assert stats.ks_2samp(third, direct).pvalue >= 0.01

    def test_record_process_times(self, rng):
        # P(T_2 = j) = 1/(j(j-1)) for any continuous law, so P(T_2 <= 10) = 0.9
        m = 10**5
        _, times = simulate_record_process(W2, 3, 10**6, rng, m)
        frac = np.mean(times[:, 1] <= 10)
        assert abs(frac - 0.9) < 4 * math.sqrt(0.09 / m)
        assert np.all(times[:, 0] == 1)

    def test_record_process_matches_extraction(self, rng):
        L, m = 50, 20_000
        vals, times = simulate_record_process(W2, 4, L, rng, m)
        x = sample_iid(W2, rng, L * m).reshape(m, L)
        recs = [extract_records(row) for row in x]
        have4 = np.array([len(r) >= 4 for r in recs])
        # usable fraction: two binomial proportions
        p1, p2 = np.mean(np.isfinite(vals[:, 3])), have4.mean()
        assert abs(p1 - p2) < 4 * math.sqrt(2 * p1 * (1 - p1) / m)
        t_direct = times[np.isfinite(vals[:, 3]), 3]
        t_series = [r.times[3] for r in recs if len(r) >= 4]
        assert stats.ks_2samp(t_direct, t_series).pvalue >= 0.001
        v_direct = vals[np.isfinite(vals[:, 3]), 2]
        v_series = [r.values[2] for r in recs if len(r) >= 4]
        assert stats.ks_2samp(v_direct, v_series).pvalue >= 0.001

    def test_record_quantile(self):
        # H(R_k) ~ Gamma(k): the median of R_3 under Exp(2, 1)
        spec = DistributionSpec.exponential(2.0, 1.0)
        assert record_quantile(spec, 3, 0.5) == pytest.approx(1 + stats.gamma(3).median() / 2)


class TestDensities:
    @pytest.mark.parametrize("spec", ALL_SPECS, ids=str)
    def test_first_record_is_parent(self, spec):
        x = np.linspace(*spec.support, 9)[1:-1] if np.isfinite(spec.support[1]) else spec.support[0] + np.arange(1, 8)
        np.testing.assert_array_equal(record_pdf(spec, 1, x), pdf(spec, x))

    def test_second_record_normalized(self):
        val, _ = integrate.quad(lambda x: record_pdf(E1, 2, x), 0, np.inf, epsabs=1e-13)
        assert val == pytest.approx(1.0, abs=1e-8)

    def test_third_record_value(self, rng):
        assert record_pdf(E1, 3, 2.0) == pytest.approx(2 * math.exp(-2), rel=1e-14)
        # Monte Carlo histogram oracle around x = 2
        n, half = 10**6, 0.05
        r3 = simulate_records(E1, 3, rng, size=n)[:, 2]
        p = np.mean(np.abs(r3 - 2.0) < half)
        assert abs(p / (2 * half) - 2 * math.exp(-2)) < 4 * math.sqrt(p / n) / (2 * half) + 1e-3

    @pytest.mark.parametrize("spec", [E1, W2, DistributionSpec.pareto(2, 1)], ids=str)
    def test_joint_marginalizes_to_parent(self, spec):
        for x in record_quantile(spec, 1, np.array([0.2, 0.5, 0.8])):
            val, _ = integrate.quad(lambda y: record_joint_pdf(spec, 1, 2, x, y), x, np.inf, epsabs=0, epsrel=1e-12)
            assert val == pytest.approx(pdf(spec, x), abs=1e-8)

    @pytest.mark.parametrize("spec", ALL_SPECS, ids=str)
    def test_first_two_records(self, spec):
        x, y = record_quantile(spec, 1, 0.3), record_quantile(spec, 2, 0.7)
        assert record_joint_pdf(spec, 1, 2, x, y) == pytest.approx(float(hazard(spec, x) * pdf(spec, y)), rel=1e-13)

    def test_joint_normalized(self):
        val, _ = integrate.dblquad(lambda y, x: record_joint_pdf(E1, 1, 3, x, y), 0, np.inf,
                                   lambda x: x, lambda x: np.inf, epsabs=1e-10)
        assert val == pytest.approx(1.0, abs=1e-6)

    @pytest.mark.parametrize("m,n", [(1, 2), (2, 3), (2, 5), (3, 4)])
    @pytest.mark.parametrize("spec", [E1, W2, DistributionSpec.uniform(0, 1)], ids=str)
    def test_joint_marginal_consistency(self, spec, m, n):
        hi = spec.support[1]
        for x in record_quantile(spec, m, np.array([0.25, 0.5, 0.75])):
            val, _ = integrate.quad(lambda y: record_joint_pdf(spec, m, n, x, y), x, hi, epsabs=0, epsrel=1e-12, limit=200)
            assert val == pytest.approx(record_pdf(spec, m, x), abs=1e-8)

    def test_joint_order_violation(self):
        with pytest.raises(DomainError):
            record_joint_pdf(E1, 1, 2, 2.0, 1.0)
        with pytest.raises(DomainError):
            record_joint_pdf(E1, 2, 2, 1.0, 2.0)


class TestConditional:
    def test_adjacent_case_is_uniform(self):
        assert record_conditional_pdf(E1, 2, 1, 1, 1.0, 3.0, 2.0) == pytest.approx(0.5, rel=1e-12)

    def test_reduces_to_genbeta(self, rng):
        for _ in range(10):
            u = rng.uniform(0, 2)
            v = u + rng.uniform(0.1, 3)
            t = np.linspace(u, v, 64)
            np.testing.assert_allclose(record_conditional_pdf(E1, 3, 2, 1, u, v, t),
                                       genbeta_pdf(GenBetaParams(1, 2, u, v), t), atol=1e-10)

    def test_weibull_not_uniform(self):
        t = np.linspace(0.5, 1.5, 101)
        dev = np.abs(record_conditional_pdf(W2, 3, 1, 1, 0.5, 1.5, t) - 1.0)
        assert dev.max() > 0.05

    def test_independent_of_n(self, rng):
        for spec in [E1, W2, DistributionSpec.pareto(2, 1)]:
            u, v = record_quantile(spec, 2, 0.4), record_quantile(spec, 5, 0.7)
            t = np.linspace(u, v, 50)
            np.testing.assert_allclose(record_conditional_pdf(spec, 4, 2, 1, u, v, t),
                                       record_conditional_pdf(spec, 7, 2, 1, u, v, t), rtol=0, atol=1e-12)

    @pytest.mark.parametrize("spec", ALL_SPECS, ids=str)
    def test_normalizer_closed_form(self, spec):
        # substituting w = H(t) turns the normalizer into B(s, r) (H(v) - H(u))^(r+s-1)
        u, v = record_quantile(spec, 2, 0.3), record_quantile(spec, 4, 0.8)
        dh = cumulative_hazard(spec, v) - cumulative_hazard(spec, u)
        for s, r in [(1, 1), (2, 1), (1, 3), (3, 2)]:
            ref = special.beta(s, r) * dh ** (r + s - 1)
            assert conditional_normalizer(spec, s, r, u, v) == pytest.approx(ref, rel=1e-10)

    def test_integrates_to_one_for_controls(self):
        for spec in [W2, DistributionSpec.pareto(2, 1), DistributionSpec.uniform(0, 1)]:
            u, v = record_quantile(spec, 1, 0.5), record_quantile(spec, 4, 0.6)
            val, _ = integrate.quad(lambda t: record_conditional_pdf(spec, 3, 2, 2, u, v, t), u, v)
            assert val == pytest.approx(1.0, abs=1e-10)

    def test_zero_outside(self):
        assert record_conditional_pdf(E1, 3, 1, 1, 1.0, 2.0, 0.5) == 0.0
        assert record_conditional_pdf(E1, 3, 1, 1, 1.0, 2.0, 2.5) == 0.0

    @pytest.mark.parametrize("n,s,r,u,v", [
        (3, 3, 1, 0.0, 1.0), (3, 0, 1, 0.0, 1.0), (3, 1, 0, 0.0, 1.0),
        (3, 1, 1, 2.0, 1.0), (3, 1, 1, -1.0, 1.0),
    ])
    def test_invalid_conditioning(self, n, s, r, u, v):
        with pytest.raises(DomainError):
            record_conditional_pdf(E1, n, s, r, u, v, 0.5)

    def test_degenerate_conditioning(self):
        # far into the tail of the uniform the hazard gap underflows
        with pytest.raises(DegenerateConditioningError):
            record_conditional_pdf(E1, 6, 5, 3, 0.0, 1e-120, 5e-121)


class TestConditionalSampling:
    def test_adjacent_mean(self, rng):
        x = sample_record_conditional(E1, 2, 1, 1, 0.0, 1.0, rng, size=10**5)
        assert abs(x.mean() - 0.5) < 4 * x.std(ddof=1) / math.sqrt(10**5)

    def test_support(self, rng):
        for spec in [E1, W2, DistributionSpec.pareto(2, 1)]:
            u, v = record_quantile(spec, 2, 0.5), record_quantile(spec, 3, 0.6)
            x = sample_record_conditional(spec, 3, 1, 1, u, v, rng, size=10**4)
            assert np.all((x >= u) & (x <= v))

    def test_matches_genbeta(self, rng):
        a = sample_record_conditional(E1, 4, 2, 2, 0.0, 2.0, rng, size=10**5)
        b = genbeta_sample(GenBetaParams(2, 2, 0.0, 2.0), rng, 10**5)
        assert stats.ks_2samp(a, b).pvalue >= 0.01

    def test_deterministic(self):
        a = sample_record_conditional(W2, 3, 1, 1, 0.5, 1.5, np.random.default_rng(4), size=100)
        b = sample_record_conditional(W2, 3, 1, 1, 0.5, 1.5, np.random.default_rng(4), size=100)
        np.testing.assert_array_equal(a, b)

    def test_scalar(self, rng):
        x = sample_record_conditional(E1, 2, 1, 1, 0.0, 1.0, rng)
        assert isinstance(x, float)
