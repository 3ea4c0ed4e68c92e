"""Tests for the reflection scalars: closed form vs quadrature ratio.

The closed-form product and the probe-ratio measurement are
independent routes; their agreement on generic parameters is the main
event here. Frozen values: b_0 is identically 1, b_1(-3/2) = -2.
"""

import numpy as np
import pytest

from crown_harmonics.errors import SingularParameterError
from crown_harmonics.intertwining import (
    intertwiner_rational,
    intertwiner_scalar,
    probe_integral,
    sample_intertwiner,
    singular_distance,
    weyl_reflected,
)

GENERIC_TS = [
    0.3 + 0.4j, -1.2 + 0.9j, 2.1 - 0.6j, 0.05 + 1.5j, -2.3 - 1.1j,
]


class TestClosedForm:
    def test_b0_identically_one(self):
        for t in GENERIC_TS:
            assert intertwiner_rational(0, t) == 1.0

    def test_frozen_value_b1(self):
        assert abs(intertwiner_rational(1, -1.5) - (-2.0)) < 1e-15

    def test_product_form_b2(self):
        # b_2(t) = [(1/2-t)(3/2-t)] / [(1/2+t)(3/2+t)]
        t = 0.7 - 0.3j
        expect = ((0.5 - t) * (1.5 - t)) / ((0.5 + t) * (1.5 + t))
        assert abs(intertwiner_rational(2, t) - expect) < 1e-15

    def test_reciprocal_identity(self):
        for m in (1, 2, 3, 4):
            for t in GENERIC_TS:
                prod = intertwiner_rational(m, t) * intertwiner_rational(m, -t)
                assert abs(prod - 1.0) < 1e-12

    def test_m_sign_symmetry(self):
        for t in GENERIC_TS:
            assert intertwiner_rational(2, t) == intertwiner_rational(-2, t)

    def test_poles_raise(self):
        for m, t in ((1, -0.5), (2, -1.5), (3, -2.5)):
            with pytest.raises(SingularParameterError):
                intertwiner_rational(m, t)


class TestQuadratureScalar:
    def test_matches_closed_form(self):
        worst = 0.0
        for m in (0, 1, 2, 3):
            for t in GENERIC_TS:
                got = intertwiner_scalar(m, t)
                expect = intertwiner_rational(m, t)
                worst = max(worst, abs(got - expect) / abs(expect))
        assert worst < 1e-12

    def test_probe_angle_irrelevant(self):
        t = 0.8 + 0.25j
        vals = [intertwiner_scalar(2, t, theta_probe=th) for th in (0.2, 0.5, 1.0)]
        assert max(abs(v - vals[0]) for v in vals) < 1e-12 * abs(vals[0])

    def test_probe_integral_reflection_consistency(self):
        # the defining ratio: F_m(-t) / F_m(t) with F built from the
        # kernel mode at the reflected power
        m, t, theta = 2, 0.6 + 0.4j, 0.7
        ratio = probe_integral(m, -t, theta) / probe_integral(m, t, theta)
        assert abs(ratio - intertwiner_rational(m, t)) < 1e-12


class TestSingularBookkeeping:
    def test_singular_distance(self):
        assert singular_distance(0, -0.5) == float("inf")
        assert singular_distance(1, -0.5) == 0.0
        assert abs(singular_distance(2, -1.3) - 0.2) < 1e-14
        # the pole set grows with |m|: t = -5/2 is singular for m=3 only
        assert singular_distance(2, -2.5) >= 1.0
        assert singular_distance(3, -2.5) == 0.0

    def test_sample_intertwiner_skips_singular_points(self):
        ts = [-2.5, -1.5, -0.5, 0.5, 1.5]
        scalar = sample_intertwiner(2, ts)
        assert scalar.m == 2
        kept = {complex(t) for t in scalar.samples}
        assert complex(-0.5) not in kept
        assert complex(-1.5) not in kept
        assert complex(0.5) in kept


class TestWeylReflection:
    def test_formula_and_involution(self):
        assert weyl_reflected(3) == -4
        assert weyl_reflected(-4) == 3
        ell = 0.25 + 2.25j
        assert weyl_reflected(weyl_reflected(ell)) == ell

    def test_fixed_point_is_minus_half(self):
        assert weyl_reflected(-0.5) == -0.5
