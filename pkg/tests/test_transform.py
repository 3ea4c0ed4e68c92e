"""Tests for the dual pair analyze / synthesize and the derivative paths.

The degree-one checks are exact by hand:

  - the table {(1, 0): 1} must synthesize to 3 cos(theta), since the
    zonal kernel mode at degree 1 is cos(theta), the reflected
    evaluation multiplies by b_0 = 1, and the degree weight is 3;
  - applying the rotation generators to 3 cos(theta) must give
    3 sin(theta) cos(phi) (X), 3 sin(theta) sin(phi) (Y), and 0 (Z).
"""

import numpy as np
import pytest

from crown_harmonics.errors import (
    CrownDomainError,
    GridResolutionError,
    ProviderError,
    SchemaError,
)
from crown_harmonics.sphere import GridFunction, SphereGrid, rotate
from crown_harmonics.testbed import BumpSpec, make_bump, random_bandlimited
from crown_harmonics.transform import (
    CallableProvider,
    CoefficientTable,
    ExtendProvider,
    TableProvider,
    analyze,
    extend,
    ktype_project,
    rotation_derivative,
    synthesize,
    zonal_transform,
)


def grid_cos_theta(grid, scale=3.0):
    vals = scale * np.cos(grid.theta)[:, None] * np.ones(grid.n_phi)[None, :]
    return GridFunction(grid, vals.astype(complex))


class TestCoefficientTable:
    def test_validation(self):
        with pytest.raises(SchemaError):
            CoefficientTable(-1, {})
        with pytest.raises(SchemaError):
            CoefficientTable(2, {(3, 0): 1.0})
        with pytest.raises(SchemaError):
            CoefficientTable(2, {(1, 3): 1.0})

    def test_accessors(self):
        table = CoefficientTable(3, {(2, 1): 2j, (0, 0): 1.0, (3, -2): -0.5})
        assert table.get(2, 1) == 2j
        assert table.get(1, 0) == 0.0
        assert table.ktypes() == frozenset({1, 0, -2})
        assert table.max_abs() == 2.0
        assert [k for k, _ in table.items_sorted()] == [(0, 0), (2, 1), (3, -2)]
        assert CoefficientTable(1, {}).max_abs() == 0.0


class TestExactDegreeOne:
    def test_synthesize_zonal_degree_one(self):
        grid = SphereGrid(24, 8)
        table = CoefficientTable(1, {(1, 0): 1.0})
        f = synthesize(TableProvider(table), grid, 1)
        expect = grid_cos_theta(grid).values
        assert np.max(np.abs(f.values - expect)) < 1e-13

    def test_spectral_derivative_x(self):
        grid = SphereGrid(24, 8)
        f = grid_cos_theta(grid)
        df = rotation_derivative(f, "X", band_limit=1)
        expect = 3.0 * np.sin(grid.theta)[:, None] * np.cos(grid.phi_nodes)[None, :]
        assert np.max(np.abs(df.values - expect)) < 1e-13

    def test_spectral_derivative_y(self):
        grid = SphereGrid(24, 8)
        f = grid_cos_theta(grid)
        df = rotation_derivative(f, "Y", band_limit=1)
        expect = 3.0 * np.sin(grid.theta)[:, None] * np.sin(grid.phi_nodes)[None, :]
        assert np.max(np.abs(df.values - expect)) < 1e-13

    def test_spectral_derivative_z_kills_zonal(self):
        grid = SphereGrid(24, 8)
        df = rotation_derivative(grid_cos_theta(grid), "Z", band_limit=1)
        assert np.max(np.abs(df.values)) < 1e-13

    def test_spectral_path_requires_band_limit(self):
        grid = SphereGrid(24, 8)
        with pytest.raises(SchemaError):
            rotation_derivative(grid_cos_theta(grid), "X")


class TestAnalyzeSynthesize:
    def test_round_trip_random_band_limited(self):
        grid = SphereGrid(40, 20)
        f, table = random_bandlimited(grid, lmax=6, mmax=3, seed=11)
        recovered = analyze(f, 6)
        worst = 0.0
        scale = table.max_abs()
        for (l, m), v in table.items_sorted():
            worst = max(worst, abs(recovered.get(l, m) - v) / scale)
        assert worst < 1e-10

    def test_rotation_equivariance(self):
        grid = SphereGrid(40, 20)
        f, _ = random_bandlimited(grid, lmax=5, mmax=3, seed=3)
        steps = 4
        c = 2.0 * np.pi * steps / grid.n_phi
        before = analyze(f, 5)
        after = analyze(rotate(f, steps), 5)
        worst = 0.0
        for (l, m), v in before.items_sorted():
            worst = max(worst, abs(after.get(l, m) - np.exp(-1j * m * c) * v))
        assert worst < 1e-10 * before.max_abs()

    def test_refinement_invariance(self):
        # analyze must be stable under doubling the colatitude grid
        lmax = 8
        for radius in (0.6, 1.0):
            bump = make_bump(BumpSpec(radius=radius), SphereGrid(384, 24))
            fine = make_bump(BumpSpec(radius=radius), SphereGrid(768, 24))
            a = analyze(bump, lmax)
            b = analyze(fine, lmax)
            worst = max(
                abs(a.get(l, m) - b.get(l, m))
                for l in range(lmax + 1)
                for m in range(-l, l + 1)
            )
            assert worst < 1e-10

    def test_synthesize_rejects_unresolved_ktype(self):
        grid = SphereGrid(12, 6)
        table = CoefficientTable(4, {(4, 3): 1.0})
        with pytest.raises(GridResolutionError):
            synthesize(TableProvider(table), grid, 4)


class TestZonalTransform:
    def test_agrees_with_analyze(self):
        grid = SphereGrid(64, 24)
        bump = make_bump(BumpSpec(radius=0.9), grid)
        coeffs = zonal_transform(bump, 10)
        table = analyze(bump, 10)
        worst = max(abs(coeffs[l] - table.get(l, 0)) for l in range(11))
        assert worst < 1e-12 * max(np.max(np.abs(coeffs)), 1e-300)

    def test_rejects_non_zonal(self):
        grid = SphereGrid(32, 12)
        vals = np.cos(grid.theta)[:, None] * np.exp(1j * grid.phi_nodes)[None, :]
        with pytest.raises(SchemaError):
            zonal_transform(GridFunction(grid, vals), 4)


class TestKtypeProject:
    def test_pure_type_passthrough(self):
        grid = SphereGrid(20, 12)
        g = np.exp(-grid.theta)
        f = GridFunction(grid, np.outer(g, np.exp(2j * grid.phi_nodes)))
        same = ktype_project(f, 2)
        zero = ktype_project(f, 1)
        assert np.max(np.abs(same.values - f.values)) < 1e-14
        assert np.max(np.abs(zero.values)) < 1e-14

    def test_projections_sum_to_band_limited_input(self):
        grid = SphereGrid(24, 16)
        f, _ = random_bandlimited(grid, lmax=4, mmax=3, seed=5)
        total = np.zeros_like(f.values)
        for m in range(-3, 4):
            total += ktype_project(f, m).values
        assert np.max(np.abs(total - f.values)) < 1e-12 * np.max(np.abs(f.values))

    def test_resolution_guard(self):
        grid = SphereGrid(12, 6)
        f = GridFunction(grid, np.ones((12, 6), dtype=complex))
        with pytest.raises(GridResolutionError):
            ktype_project(f, 3)


class TestExtend:
    def test_matches_analyze_on_integers(self):
        grid = SphereGrid(96, 16)
        bump = make_bump(BumpSpec(radius=0.7, ktype=1), grid)
        table = analyze(bump, 6)
        worst = max(
            abs(extend(bump, float(l), 1) - table.get(l, 1)) for l in range(1, 7)
        )
        assert worst < 1e-12 * table.max_abs()

    def test_full_sphere_support_rejected(self):
        grid = SphereGrid(24, 8)
        f = GridFunction(grid, np.ones((24, 8), dtype=complex))
        with pytest.raises(CrownDomainError):
            extend(f, 2.0, 0)

    def test_zero_function_extends_to_zero(self):
        grid = SphereGrid(24, 8)
        f = GridFunction(grid, np.zeros((24, 8), dtype=complex))
        assert extend(f, 1.5 + 0.5j, 0) == 0.0


class TestProviders:
    def test_extend_provider_ktype_detection(self):
        grid = SphereGrid(96, 12)
        bump = make_bump(BumpSpec(radius=0.6, ktype=2), grid)
        provider = ExtendProvider(bump)
        assert provider.ktypes == frozenset({2})
        assert provider.eval(3.0, 0) == 0.0
        assert provider.eval(3.0, 2) != 0.0

    def test_amp_policy_reflection_is_exact_for_zonal(self):
        # at extreme degree the provider must route through the
        # functional equation; for m = 0 the scalar is exactly 1, so
        # eval(-97, 0) and eval(96, 0) are the same number
        grid = SphereGrid(96, 8)
        bump = make_bump(BumpSpec(radius=0.8), grid)
        provider = ExtendProvider(bump)
        assert provider.eval(-97.0, 0) == provider.eval(96.0, 0)

    def test_table_provider_reflection(self):
        table = CoefficientTable(2, {(1, 1): 0.25j, (1, -1): 2.0})
        provider = TableProvider(table)
        # phi(-2) = b_1(-3/2) phi(1) = -2 phi(1)
        assert abs(provider.eval(-2.0, 1) - (-0.5j)) < 1e-15
        assert abs(provider.eval(-2.0, -1) - (-4.0)) < 1e-15

    def test_table_provider_rejects_non_integers(self):
        provider = TableProvider(CoefficientTable(1, {(1, 0): 1.0}))
        with pytest.raises(ProviderError):
            provider.eval(0.5, 0)
        with pytest.raises(ProviderError):
            provider.eval(1.0 + 0.3j, 0)

    def test_table_provider_out_of_range(self):
        provider = TableProvider(CoefficientTable(1, {(1, 0): 1.0}))
        with pytest.raises(ProviderError):
            provider.eval(-3.0, 0)

    def test_callable_provider_restricts_ktypes(self):
        provider = CallableProvider(lambda ell, m: 1.0, ktypes=(0,))
        assert provider.eval(2.0, 1) == 0.0
        assert provider.eval(2.0, 0) == 1.0
