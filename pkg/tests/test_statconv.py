"""Window-density traces, their verdicts, and the modular lower bound."""

import random

import pytest

from geoseq import (
    CONVERGING,
    DIVERGING,
    GEO_ZERO,
    DensityTrace,
    Exponents,
    GeoScalar,
    LambdaSequence,
    OrliczFunction,
    SpaceSpec,
    from_log,
    modular_density_bound,
    stat_converges,
    stat_density,
)

IDENTITY = LambdaSequence.identity()
HALF = LambdaSequence.half()
EPS_E = GeoScalar.from_log(1.0)  # geometric threshold e


def fhat_spec(M=OrliczFunction.power(1.0), lam=None, rho=1.0, variant="limit"):
    return SpaceSpec(
        lam=lam or IDENTITY,
        orlicz=M,
        exponents=Exponents.constant(1.0),
        variant=variant,
        transform="fhat",
        rho=rho,
    )


def sequence_with_transform_rows(rows):
    """Invert the banded relation so the windowed view equals ``rows``."""
    from geoseq import fib

    m = len(rows)
    u = [0.0] * (m + 1)
    for k in range(m, 0, -1):
        r = fib(k) / fib(k + 1)
        u[k - 1] = r * (r * u[k] - rows[k - 1])
    return from_log(u)


class TestStatDensity:
    def test_all_ones_has_zero_densities(self):
        x = from_log([0.0] * 30)
        trace = stat_density(x, IDENTITY, GEO_ZERO, EPS_E)
        assert all(c == 0 for c in trace.counts)
        assert all(d == 0.0 for d in trace.densities)

    def test_single_spike_density_example(self):
        # windowed residuals (0, 0, 5, 0): one exceedance in window 4
        x = sequence_with_transform_rows([0.0, 0.0, 5.0, 0.0])
        trace = stat_density(x, IDENTITY, GEO_ZERO, EPS_E)
        assert trace.counts == [0, 0, 1, 1]
        assert trace.densities[3] == 0.25

    def test_threshold_must_exceed_geometric_zero(self):
        x = from_log([0.0] * 8)
        with pytest.raises(ValueError):
            stat_density(x, IDENTITY, GEO_ZERO, GeoScalar(1.0))
        with pytest.raises(ValueError):
            stat_density(x, IDENTITY, GEO_ZERO, GeoScalar(0.5))

    def test_constant_sequence_densities_die_out(self):
        c = 1.5
        x = from_log([c] * 120)
        trace = stat_density(x, HALF, GeoScalar.from_log(-c), GeoScalar.from_log(0.1))
        assert trace.densities[-1] == 0.0
        assert sum(trace.counts[40:]) == 0

    def test_density_bounded_by_window_fraction(self):
        rng = random.Random(31)
        x = from_log([rng.uniform(-6, 6) for _ in range(60)])
        for lam in (IDENTITY, HALF):
            trace = stat_density(x, lam, GEO_ZERO, EPS_E)
            for n in range(1, trace.n_windows + 1):
                frac = len(lam.window(n)) / lam.at(n)
                assert 0.0 <= trace.densities[n - 1] <= frac + 1e-15

    def test_monotone_in_threshold(self):
        rng = random.Random(32)
        x = from_log([rng.uniform(-6, 6) for _ in range(60)])
        eps_logs = [0.1, 0.5, 1.0, 2.0, 4.0]
        traces = [
            stat_density(x, HALF, GEO_ZERO, GeoScalar.from_log(h)) for h in eps_logs
        ]
        for a, b in zip(traces, traces[1:]):
            for da, db in zip(a.densities, b.densities):
                assert db <= da


class TestStatVerdict:
    def test_zero_densities_converge(self):
        x = from_log([0.0] * 50)
        trace = stat_density(x, IDENTITY, GEO_ZERO, EPS_E)
        assert stat_converges(trace) == CONVERGING

    def test_persistent_density_diverges(self):
        trace = DensityTrace(
            counts=[k // 2 for k in range(1, 61)],
            densities=[0.5] * 60,
            lambda_values=[float(n) for n in range(1, 61)],
            epsilon=EPS_E,
            ell=GEO_ZERO,
        )
        assert stat_converges(trace) == DIVERGING

    def test_empty_trace_rejected(self):
        trace = DensityTrace([], [], [], EPS_E, GEO_ZERO)
        with pytest.raises(ValueError):
            stat_converges(trace)

    def test_member_profile_converges(self):
        rows = [0.8 * 0.5 ** k for k in range(1, 61)]
        x = sequence_with_transform_rows(rows)
        trace = stat_density(x, HALF, GEO_ZERO, GeoScalar.from_log(0.1))
        assert stat_converges(trace) == CONVERGING


class TestModularDensityBound:
    def test_all_ones_is_zero_zero(self):
        x = from_log([0.0] * 20)
        lhs, rhs = modular_density_bound(x, fhat_spec(), GEO_ZERO, EPS_E, 10)
        assert lhs == 0.0
        assert rhs == 0.0

    def test_zero_density_makes_rhs_zero(self):
        rows = [0.01] * 19
        x = sequence_with_transform_rows(rows)
        lhs, rhs = modular_density_bound(x, fhat_spec(), GEO_ZERO, EPS_E, 12)
        assert rhs == 0.0
        assert lhs >= 0.0

    @pytest.mark.parametrize("M", [
        OrliczFunction.power(1.0),
        OrliczFunction.power(2.0),
        OrliczFunction.x_log1p(),
        OrliczFunction.exp_minus_one(),
    ])
    def test_bound_holds_on_random_sequences(self, M):
        rng = random.Random(33)
        for _ in range(25):
            n_terms = rng.randint(12, 40)
            x = from_log([rng.uniform(-4, 4) for _ in range(n_terms)])
            ell = GeoScalar.from_log(rng.uniform(-1, 1))
            epsilon = GeoScalar.from_log(rng.uniform(0.05, 2.0))
            s = fhat_spec(M=M, rho=rng.uniform(0.5, 2.0))
            for n in range(1, n_terms):
                lhs, rhs = modular_density_bound(x, s, ell, epsilon, n)
                assert lhs >= rhs - 1e-12 * max(1.0, abs(rhs))

    def test_exceedance_terms_dominate_pointwise(self):
        # brute-force the per-term argument on one window
        rng = random.Random(34)
        x = from_log([rng.uniform(-4, 4) for _ in range(20)])
        s = fhat_spec(M=OrliczFunction.power(2.0), rho=1.5)
        ell = GeoScalar.from_log(0.3)
        eps = GeoScalar.from_log(0.7)
        from geoseq import windowed_logs

        z = windowed_logs(x, "fhat")
        n = 15
        floor = s.orlicz.eval(eps.log / s.rho)
        for k in s.lam.window(n):
            resid = abs(z[k - 1] - ell.log)
            if resid >= eps.log:
                assert s.orlicz.eval(resid / s.rho) >= floor - 1e-15
