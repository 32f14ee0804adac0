import math

import numpy as np
import pytest

from ovlomax.dist_core import DomainError, InverseLomax
from ovlomax.overlap import (
    MEASURES,
    OverlapTriple,
    QuadratureError,
    kl_lambda,
    kl_symmetrized,
    matusita_rho,
    overlap_curvature,
    overlap_grad,
    overlap_grad_sq,
    overlap_value,
    ovl_by_quadrature,
    weitzman_delta,
)

GRID = np.concatenate([np.logspace(-2, 0, 40, endpoint=False), np.logspace(0, 2, 40)])


class TestClosedForms:
    def test_frozen_values_at_half(self):
        assert matusita_rho(0.5) == pytest.approx(0.9428090415820634, abs=1e-15)
        assert weitzman_delta(0.5) == pytest.approx(0.75, abs=1e-12)
        assert kl_lambda(0.5) == pytest.approx(2.0 / 3.0, abs=1e-15)

    def test_identical_populations_give_one(self):
        for meas in MEASURES:
            assert overlap_value(meas, 1.0) == 1.0

    def test_reciprocity_frozen(self):
        assert weitzman_delta(2.0) == pytest.approx(0.75, abs=1e-12)

    def test_triple_container(self):
        t = OverlapTriple.from_ratio(0.5)
        assert t.as_tuple() == (t.rho, t.delta, t.lam)
        d = t.as_dict()
        assert set(d) == {"rho", "delta", "lambda"}
        assert d["lambda"] == t.lam

    def test_vectorized_shape_preserved(self):
        r = np.array([[0.5, 1.0], [2.0, 0.1]])
        for meas in MEASURES:
            out = overlap_value(meas, r)
            assert out.shape == r.shape

    def test_bounds_on_grid(self):
        for meas in MEASURES:
            v = overlap_value(meas, GRID)
            assert np.all(v >= 0.0) and np.all(v <= 1.0)

    def test_reciprocity_on_grid(self):
        for meas in MEASURES:
            a = overlap_value(meas, GRID)
            b = overlap_value(meas, 1.0 / GRID)
            assert np.max(np.abs(a - b)) <= 1e-12

    def test_piecewise_monotone(self):
        below = np.linspace(0.01, 0.999, 200)
        above = np.linspace(1.001, 100.0, 200)
        for meas in MEASURES:
            assert np.all(np.diff(overlap_value(meas, below)) > 0)
            assert np.all(np.diff(overlap_value(meas, above)) < 0)

    def test_delta_continuous_at_one(self):
        for eps in (1e-6, 1e-9):
            assert weitzman_delta(1.0 - eps) == pytest.approx(1.0, abs=1e-5)
            assert weitzman_delta(1.0 + eps) == pytest.approx(1.0, abs=1e-5)

    def test_delta_closed_form_branches(self):
        # R < 1 branch equals 1 - R^(R/(1-R)) + R^(1/(1-R)) written directly
        for r in (0.1, 0.3, 0.7):
            direct = 1.0 - r ** (r / (1 - r)) + r ** (1 / (1 - r))
            assert weitzman_delta(r) == pytest.approx(direct, rel=1e-13)

    def test_domain_rejected(self):
        for meas in MEASURES:
            with pytest.raises(DomainError):
                overlap_value(meas, 0.0)
            with pytest.raises(DomainError):
                overlap_value(meas, -1.0)
        with pytest.raises(DomainError):
            overlap_value("unknown", 0.5)


class TestDerivatives:
    FD_GRID = (0.1, 0.25, 0.5, 0.75, 0.9, 1.1, 1.5, 2.0, 5.0)

    def test_grad_matches_finite_difference(self):
        for meas in MEASURES:
            for r in self.FD_GRID:
                h = 1e-5 * r
                fd = (overlap_value(meas, r + h) - overlap_value(meas, r - h)) / (2 * h)
                g = overlap_grad(meas, r)
                assert g == pytest.approx(fd, rel=1e-8, abs=1e-12)

    def test_curvature_matches_finite_difference_of_grad(self):
        for meas in MEASURES:
            for r in self.FD_GRID:
                h = 1e-5 * r
                fd = (overlap_grad(meas, r + h) - overlap_grad(meas, r - h)) / (2 * h)
                g2 = overlap_curvature(meas, r)
                assert g2 == pytest.approx(fd, rel=1e-8, abs=1e-12)

    def test_grad_sq_consistent_with_grad(self):
        for meas in MEASURES:
            for r in self.FD_GRID:
                assert overlap_grad_sq(meas, r) == pytest.approx(
                    overlap_grad(meas, r) ** 2, rel=1e-13
                )

    def test_frozen_curvatures(self):
        # high-precision references from 40-digit numerical differentiation
        assert overlap_curvature("rho", 0.5) == pytest.approx(-1.3618352822852026, rel=1e-12)
        assert overlap_curvature("delta", 0.5) == pytest.approx(-1.1492233334330245, rel=1e-12)
        assert overlap_curvature("delta", 2.0) == pytest.approx(0.1014603368004223, rel=1e-12)
        assert overlap_curvature("lambda", 0.5) == pytest.approx(-16.0 / 9.0, rel=1e-12)

    def test_matusita_flat_at_one(self):
        assert overlap_grad("rho", 1.0) == 0.0
        assert overlap_grad("lambda", 1.0) == 0.0

    def test_weitzman_kink_conventions(self):
        # slope is undefined at the kink; its square has a two-sided limit
        assert math.isnan(overlap_grad("delta", 1.0))
        assert overlap_grad_sq("delta", 1.0) == pytest.approx(math.exp(-2.0), rel=1e-12)
        assert overlap_curvature("delta", 1.0) == 0.0

    def test_weitzman_kink_slopes(self):
        e_inv = math.exp(-1.0)
        assert overlap_grad("delta", 1.0 - 1e-9) == pytest.approx(e_inv, rel=1e-6)
        assert overlap_grad("delta", 1.0 + 1e-9) == pytest.approx(-e_inv, rel=1e-6)


class TestQuadrature:
    def test_symmetrized_divergence_closed_form(self):
        # for this family the divergence is (R-1)^2/R
        for r in (0.25, 0.5, 2.0):
            f1, f2 = InverseLomax(r), InverseLomax(1.0)
            assert kl_symmetrized(f1, f2) == pytest.approx((r - 1) ** 2 / r, abs=1e-8)

    def test_overlap_matches_closed_forms(self):
        f1, f2 = InverseLomax(0.5), InverseLomax(1.0)
        for meas in MEASURES:
            assert ovl_by_quadrature(f1, f2, meas) == pytest.approx(
                overlap_value(meas, 0.5), abs=1e-8
            )

    def test_scale_invariance(self):
        # a common scale cancels out of every measure
        f1, f2 = InverseLomax(0.5, 7.0), InverseLomax(1.0, 7.0)
        assert ovl_by_quadrature(f1, f2, "delta") == pytest.approx(0.75, abs=1e-7)

    def test_accepts_bare_callables(self):
        f1, f2 = InverseLomax(2.0), InverseLomax(1.0)
        v = ovl_by_quadrature(f1.pdf, f2.pdf, "rho")
        assert v == pytest.approx(overlap_value("rho", 2.0), abs=1e-8)

    def test_identical_densities_integrate_to_one(self):
        f = InverseLomax(1.0)
        for meas in MEASURES:
            assert ovl_by_quadrature(f, f, meas) == pytest.approx(1.0, abs=1e-8)

    @pytest.mark.filterwarnings("ignore::scipy.integrate.IntegrationWarning")
    def test_unreachable_tolerance_raises(self):
        f1, f2 = InverseLomax(0.5), InverseLomax(1.0)
        with pytest.raises(QuadratureError) as exc:
            ovl_by_quadrature(f1, f2, "rho", tol=1e-300)
        assert exc.value.achieved > 0.0

    def test_unknown_measure_rejected(self):
        with pytest.raises(DomainError):
            ovl_by_quadrature(InverseLomax(1.0), InverseLomax(2.0), "nope")
