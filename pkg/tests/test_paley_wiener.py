"""Tests for the support-radius certification machinery.

Synthetic providers with known growth drive the estimators: a provider
whose log-magnitude lies exactly in the fit basis pins the type fit,
a Casimir-symmetric rational decay provider must certify every radius,
and a constant provider on a nonzero azimuthal type must be rejected
for breaking the reflection symmetry.
"""

import math

import numpy as np
import pytest

from crown_harmonics.errors import CrownDomainError, NumericalError, SchemaError
from crown_harmonics.paley_wiener import (
    Calibration,
    decay_constants,
    decay_profile,
    fit_type,
    pw_report,
    sample_line,
    type_estimate,
    weyl_lattice,
    weyl_residual,
)
from crown_harmonics.sphere import SphereGrid
from crown_harmonics.testbed import BumpSpec, make_bump
from crown_harmonics.transform import CallableProvider, ExtendProvider


def symmetric_poly_provider():
    # phi depends on l only through the Casimir value l(l+1), which is
    # invariant under l -> -l-1, so the reflection identity holds with
    # the trivial m=0 scalar; the decay is kept gentle so the disc
    # maxima are resolved at the base lattice
    return CallableProvider(
        lambda ell, m: 1.0 / (25.0 + abs(ell * (ell + 1.0))),
        ktypes=(0,),
    )


class TestTypeFit:
    def test_zero_provider(self):
        provider = CallableProvider(lambda ell, m: 0.0, ktypes=(0,))
        te = type_estimate(provider)
        assert (te.r_hat, te.lower, te.upper) == (0.0, 0.0, 0.0)

    def test_recovers_rate_in_basis(self):
        # log|phi| = r t + 0.5 sqrt(t) - 2 lies in the fit basis, so
        # the least-squares residual vanishes and r is reproduced
        r = 0.6180339887
        ts = np.linspace(0.25, 40.0, 160)
        vals = np.exp(r * ts + 0.5 * np.sqrt(ts) - 2.0)
        te = fit_type(ts, vals)
        assert abs(te.r_hat - r) < 1e-6
        assert te.upper - te.lower < 1e-6

    def test_polynomial_decay_reads_as_type_zero(self):
        te = type_estimate(symmetric_poly_provider())
        assert te.r_hat <= 0.02

    def test_too_few_tail_samples(self):
        ts = np.linspace(1.0, 10.0, 10)
        vals = np.exp(ts)
        with pytest.raises(NumericalError):
            fit_type(ts, vals, tail_fraction=0.2)

    def test_sample_line_shape(self):
        ts, vals = sample_line(symmetric_poly_provider(), t_max=10.0,
                               n_samples=20)
        assert ts.shape == (20,) and vals.shape == (20,)
        assert ts[0] > 0.0 and abs(ts[-1] - 10.0) < 1e-12
        assert np.all(vals >= 0.0)


class TestDecayConstants:
    def test_ratios_at_least_one(self):
        provider = symmetric_poly_provider()
        profile = decay_profile(provider, disc_radius=10.0)
        consts, ratios = decay_constants(provider, 0.5, kmax=3,
                                         disc_radius=10.0, profile=profile)
        for k in range(4):
            assert math.isfinite(consts[k]) and consts[k] > 0.0
            assert ratios[k] >= 1.0

    def test_zero_provider_ratios_default_to_one(self):
        provider = CallableProvider(lambda ell, m: 0.0, ktypes=(0,))
        consts, ratios = decay_constants(provider, 0.5, kmax=2)
        assert all(consts[k] == 0.0 for k in range(3))
        assert all(ratios[k] == 1.0 for k in range(3))

    def test_negative_radius_rejected(self):
        with pytest.raises(CrownDomainError):
            decay_constants(symmetric_poly_provider(), -0.1)


class TestWeylResidual:
    def test_symmetric_provider_near_zero(self):
        assert weyl_residual(symmetric_poly_provider()) < 1e-12

    def test_all_singular_lattice_raises(self):
        provider = CallableProvider(lambda ell, m: 1.0, ktypes=(1,))
        with pytest.raises(NumericalError):
            weyl_residual(provider, lattice=[(0.0j, 1)])

    def test_constant_on_type_one_breaks_symmetry(self):
        provider = CallableProvider(lambda ell, m: 1.0, ktypes=(1,))
        assert weyl_residual(provider) > 0.1

    def test_lattice_shape(self):
        lattice = weyl_lattice((0, 1))
        assert len(lattice) == 2 * 4 * 4
        assert all(isinstance(m, int) for _, m in lattice)


class TestCalibration:
    def test_replaced_unknown_key(self):
        with pytest.raises(SchemaError):
            Calibration().replaced(no_such_knob=1.0)

    def test_replaced_round_trip(self):
        calib = Calibration().replaced(weyl_tol=1e-4, decay_kmax=2)
        assert calib.weyl_tol == 1e-4
        assert calib.decay_kmax == 2
        assert calib.as_dict()["weyl_tol"] == 1e-4


class TestReport:
    def test_symmetric_provider_passes_everywhere(self):
        report = pw_report(symmetric_poly_provider(), [0.2, 0.7, 1.3])
        for r in (0.2, 0.7, 1.3):
            assert report.passed(r), report.verdict_for(r).reasons

    def test_asymmetric_provider_fails_with_symmetry_reason(self):
        provider = CallableProvider(lambda ell, m: 1.0, ktypes=(1,))
        report = pw_report(provider, [0.5])
        verdict = report.verdict_for(0.5)
        assert not verdict.passed
        assert any("symmetry residual" in reason for reason in verdict.reasons)

    def test_radii_validation(self):
        provider = symmetric_poly_provider()
        with pytest.raises(SchemaError):
            pw_report(provider, [])
        with pytest.raises(CrownDomainError):
            pw_report(provider, [2.0])
        with pytest.raises(CrownDomainError):
            pw_report(provider, [0.0])

    def test_bump_certifies_true_radius_and_rejects_smaller(self):
        bump = make_bump(BumpSpec(radius=0.8), SphereGrid(144, 8))
        report = pw_report(ExtendProvider(bump), [0.4, 0.9])
        assert not report.passed(0.4)
        assert report.passed(0.9), report.verdict_for(0.9).reasons
        reason = " ".join(report.verdict_for(0.4).reasons)
        assert "type upper bound" in reason

    def test_report_carries_inputs(self):
        report = pw_report(symmetric_poly_provider(), [0.5])
        ts, vals = report.line_samples
        assert len(ts) == report.calibration.n_samples
        assert len(vals) == len(ts)
        assert "symmetry lattice" in report.samples_used
        assert report.ktypes == (0,)
        with pytest.raises(KeyError):
            report.verdict_for(0.25)
