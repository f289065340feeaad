import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from clustercov import oracles
from clustercov.laplace import (
    laplace_coexist,
    laplace_inter_fixed_upper,
    laplace_inter_random_lower,
    laplace_intra_fixed,
    laplace_intra_fixed_gc,
    laplace_intra_ordered_fixed,
    laplace_intra_ordered_fixed_gc,
    laplace_intra_ordered_random,
    laplace_intra_ordered_random_gc,
    laplace_intra_random,
    laplace_intra_random_gc,
)
from clustercov.special import make_quadrature

from conftest import reference_link

LINK = reference_link()


def s_at(r: float, gamma_th: float = 0.1) -> float:
    """Transform argument rho = r^alpha gamma / (p_x0 eta) of the coverage chain."""
    return r**LINK.alpha * gamma_th / (LINK.p_x0 * LINK.eta)


S_GRID = [s_at(r, g) for r in (50.0, 250.0, 500.0) for g in (0.01, 0.1, 10.0)]


class TestTrivialValues:
    def test_unit_at_zero_s(self):
        quad = make_quadrature(30, 1)
        assert laplace_intra_fixed(0.0, 6, LINK) == 1.0
        assert laplace_intra_random(0.0, 6.0, LINK) == 1.0
        assert laplace_intra_fixed_gc(0.0, 6, LINK, quad) == 1.0
        assert laplace_intra_random_gc(0.0, 6.0, LINK, quad) == 1.0
        assert laplace_inter_fixed_upper(0.0, 6, LINK) == 1.0
        assert laplace_inter_random_lower(0.0, 6.0, LINK) == 1.0
        assert laplace_coexist(0.0, LINK) == 1.0
        assert laplace_intra_ordered_fixed(0.0, 3, 6, 100.0, LINK) == 1.0
        assert laplace_intra_ordered_random(0.0, 6.0, 100.0, LINK) == 1.0
        assert laplace_intra_ordered_fixed_gc(0.0, 3, 6, 100.0, LINK, quad) == 1.0
        assert laplace_intra_ordered_random_gc(0.0, 6.0, 100.0, LINK, quad) == 1.0

    def test_unit_with_no_interferers(self):
        quad = make_quadrature(30, 1)
        s = s_at(300.0)
        assert laplace_intra_fixed(s, 1, LINK) == 1.0
        assert laplace_intra_random(s, 1.0, LINK) == 1.0
        assert laplace_intra_fixed_gc(s, 1, LINK, quad) == 1.0
        assert laplace_intra_ordered_fixed(s, 1, 1, 100.0, LINK) == 1.0
        assert laplace_intra_ordered_random(s, 1.0, 100.0, LINK) == 1.0

    def test_unit_with_zero_density(self):
        link = reference_link(lambda_g=0.0, lambda_co=0.0)
        s = s_at(300.0)
        assert laplace_inter_fixed_upper(s, 6, link) == 1.0
        assert laplace_inter_random_lower(s, 6.0, link) == 1.0
        assert laplace_coexist(s, link) == 1.0


class TestAgainstIntegralOracles:
    @pytest.mark.parametrize("s", S_GRID)
    def test_intra_fixed(self, s):
        assert laplace_intra_fixed(s, 6, LINK) == pytest.approx(
            oracles.intra_fixed_integral(s, 6, LINK), rel=1e-6
        )

    @pytest.mark.parametrize("s", S_GRID)
    def test_intra_random(self, s):
        assert laplace_intra_random(s, 6.0, LINK) == pytest.approx(
            oracles.intra_random_integral(s, 6.0, LINK), rel=1e-6
        )

    @pytest.mark.parametrize("r_k", [50.0, 200.0, 450.0])
    @pytest.mark.parametrize("k", [1, 3, 6])
    def test_intra_ordered_fixed(self, r_k, k):
        s = s_at(r_k)
        assert laplace_intra_ordered_fixed(s, k, 6, r_k, LINK) == pytest.approx(
            oracles.intra_ordered_fixed_integral(s, k, 6, r_k, LINK), rel=1e-6
        )

    @pytest.mark.parametrize("r_n", [50.0, 200.0, 500.0])
    def test_intra_ordered_random(self, r_n):
        s = s_at(r_n)
        assert laplace_intra_ordered_random(s, 6.0, r_n, LINK) == pytest.approx(
            oracles.intra_ordered_random_integral(s, 6.0, r_n, LINK), rel=1e-6
        )

    def test_coexist_matches_reflection_form(self):
        # Gamma(1+d)Gamma(1-d) route equals the pi d / sin(pi d) route
        delta = LINK.delta
        for s in S_GRID:
            expo = (
                math.pi**2
                * LINK.lambda_co
                * delta
                / math.sin(math.pi * delta)
                * (s * LINK.p_z * LINK.eta) ** delta
            )
            assert laplace_coexist(s, LINK) == pytest.approx(math.exp(-expo), rel=1e-12)


class TestGaussChebyshev:
    def test_agreement_at_order_50(self):
        quad = make_quadrature(50, 1)
        for gamma_db in range(-20, 11, 2):
            gamma = 10.0 ** (gamma_db / 10.0)
            for r in (50.0, 250.0, 499.0):
                s = s_at(r, gamma)
                assert abs(
                    laplace_intra_fixed_gc(s, 6, LINK, quad) - laplace_intra_fixed(s, 6, LINK)
                ) <= 1e-3
                assert abs(
                    laplace_intra_random_gc(s, 6.0, LINK, quad)
                    - laplace_intra_random(s, 6.0, LINK)
                ) <= 1e-3
                assert abs(
                    laplace_intra_ordered_fixed_gc(s, 3, 6, r, LINK, quad)
                    - laplace_intra_ordered_fixed(s, 3, 6, r, LINK)
                ) <= 1e-3
                assert abs(
                    laplace_intra_ordered_random_gc(s, 6.0, r, LINK, quad)
                    - laplace_intra_ordered_random(s, 6.0, r, LINK)
                ) <= 1e-3

    def test_error_shrinks_with_order(self):
        coarse = make_quadrature(10, 1)
        fine = make_quadrature(50, 1)
        for s in S_GRID:
            exact = laplace_intra_fixed(s, 6, LINK)
            err_coarse = abs(laplace_intra_fixed_gc(s, 6, LINK, coarse) - exact)
            err_fine = abs(laplace_intra_fixed_gc(s, 6, LINK, fine) - exact)
            assert err_fine <= err_coarse + 1e-12


class TestShapeProperties:
    @pytest.mark.parametrize(
        "fn",
        [
            lambda s: laplace_intra_fixed(s, 6, LINK),
            lambda s: laplace_intra_random(s, 6.0, LINK),
            lambda s: laplace_inter_fixed_upper(s, 6, LINK),
            lambda s: laplace_inter_random_lower(s, 6.0, LINK),
            lambda s: laplace_coexist(s, LINK),
            lambda s: laplace_intra_ordered_fixed(s, 3, 6, 200.0, LINK),
        ],
    )
    def test_in_unit_interval_and_nonincreasing_in_s(self, fn):
        grid = [0.0] + sorted(S_GRID)
        values = [fn(s) for s in grid]
        assert all(0.0 < v <= 1.0 for v in values)
        assert all(x >= y for x, y in zip(values, values[1:]))

    def test_monotone_in_densities_and_power(self):
        s = s_at(300.0)
        dens = [laplace_inter_fixed_upper(s, 6, reference_link(lambda_g=f * 1e-7))
                for f in (0.5, 1.0, 2.0, 4.0)]
        assert all(x > y for x, y in zip(dens, dens[1:]))
        coex = [laplace_coexist(s, reference_link(lambda_co=f * 1e-7))
                for f in (0.5, 1.0, 2.0, 4.0)]
        assert all(x > y for x, y in zip(coex, coex[1:]))
        nbar = [laplace_inter_random_lower(s, v, LINK) for v in (1.0, 2.0, 4.0, 8.0)]
        assert all(x > y for x, y in zip(nbar, nbar[1:]))

    def test_monotone_in_interferer_power(self):
        import dataclasses

        s = s_at(300.0)
        links = [dataclasses.replace(LINK, p_x=f * LINK.p_x) for f in (0.5, 1.0, 2.0, 4.0)]
        for fn in (
            lambda link: laplace_intra_fixed(s, 6, link),
            lambda link: laplace_inter_fixed_upper(s, 6, link),
            lambda link: laplace_intra_ordered_fixed(s, 3, 6, 200.0, link),
        ):
            values = [fn(link) for link in links]
            assert all(x > y for x, y in zip(values, values[1:]))
        coex = [
            laplace_coexist(s, dataclasses.replace(LINK, p_z=f * LINK.p_z))
            for f in (0.5, 1.0, 2.0, 4.0)
        ]
        assert all(x > y for x, y in zip(coex, coex[1:]))

    @settings(max_examples=40, deadline=None, derandomize=True)
    @given(
        r=st.floats(10.0, 500.0),
        gamma=st.floats(1e-3, 1e3),
        factor=st.floats(1.01, 50.0),
    )
    def test_intra_fixed_monotone_property(self, r, gamma, factor):
        s = s_at(r, gamma)
        assert laplace_intra_fixed(s, 6, LINK) >= laplace_intra_fixed(s * factor, 6, LINK)

    def test_far_factor_continuous_at_rim(self):
        # r_k -> a is a removable singularity of the far-set factor
        s = s_at(499.0)
        at_rim = laplace_intra_ordered_fixed(s, 3, 6, LINK.a, LINK)
        near_rim = laplace_intra_ordered_fixed(s, 3, 6, LINK.a * (1.0 - 1e-7), LINK)
        assert at_rim == pytest.approx(near_rim, rel=1e-5)

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            laplace_intra_fixed(-1.0, 6, LINK)
        with pytest.raises(ValueError):
            laplace_intra_fixed(1.0, 0, LINK)
        with pytest.raises(ValueError):
            laplace_intra_random(1.0, 0.5, LINK)
        with pytest.raises(ValueError):
            laplace_inter_random_lower(1.0, 0.0, LINK)
        with pytest.raises(ValueError):
            laplace_intra_ordered_fixed(1.0, 7, 6, 100.0, LINK)
        with pytest.raises(ValueError):
            laplace_intra_ordered_fixed(1.0, 2, 6, 600.0, LINK)
        with pytest.raises(ValueError):
            laplace_intra_ordered_random(1.0, 6.0, 0.0, LINK)
