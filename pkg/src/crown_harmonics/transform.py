"""Kernel Fourier transform on the sphere and its holomorphic extension.

The primitive coefficients are taken against powers of the complexified
pairing:

    c(ell, m) = (1/2*pi) * integral over b of exp(-i m b)
                * integral over the sphere of f(x) Q(x, b)^ell dx db.

analyze computes the full integer table by direct quadrature over an
explicit boundary grid. extend evaluates a single coefficient at any
complex ell for cap-supported f, using a separated route (azimuthal FFT
of f against boundary modes of the kernel) that shares no inner loop
with analyze; agreement of the two routes at integer ell is one of the
library's primary cross-checks. synthesize runs the inversion series

    f(x) = sum over ell of (2*ell+1) * (1/2*pi)
           * integral of phi_hat(-ell-1, b) Q(x, b)^ell db,

pulling provider values at the reflected parameter -ell-1.

Coefficient providers (the table-backed, extension-backed, and callable
varieties) live here too, since synthesize consumes them and extend
produces the canonical one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    CrownDomainError,
    GridResolutionError,
    ProviderError,
    SchemaError,
)
from .intertwining import intertwiner_rational
from .sphere import (
    DEFAULT_BOUNDARY_SAMPLES,
    GridFunction,
    SphereGrid,
    boundary_log_pairing,
    ell_value,
    kernel_mode_profiles,
    require_resolution,
    support_radius,
)

#: direct evaluation is abandoned once the kernel magnitude spread
#: exceeds e^LOG_AMP_DIRECT_MAX, *and* the reflected parameter is at
#: least e^LOG_AMP_ADVANTAGE_MIN tamer. Both conditions are needed: the
#: growth along imaginary directions is genuine signal (no
#: cancellation), while growth from large negative real parts cancels
#: catastrophically and must be rerouted through the reflection.
_LOG_AMP_DIRECT_MAX = math.log(1e12)
_LOG_AMP_ADVANTAGE_MIN = math.log(1e3)


# ---------------------------------------------------------------------------
# coefficient tables


class CoefficientTable:
    """Integer-spectrum coefficient data {(l, m) -> complex}, l <= lmax."""

    def __init__(self, lmax: int, entries: dict):
        if lmax < 0:
            raise SchemaError("lmax must be nonnegative")
        self.lmax = int(lmax)
        self.entries = {}
        for key, value in entries.items():
            l, m = key
            l, m = int(l), int(m)
            if not (0 <= l <= self.lmax and abs(m) <= self.lmax):
                raise SchemaError(f"table entry ({l}, {m}) outside lmax={self.lmax}")
            self.entries[(l, m)] = complex(value)

    def get(self, l: int, m: int) -> complex:
        return self.entries.get((int(l), int(m)), 0.0 + 0.0j)

    def max_abs(self) -> float:
        if not self.entries:
            return 0.0
        return max(abs(v) for v in self.entries.values())

    def ktypes(self) -> frozenset:
        return frozenset(m for (_, m) in self.entries)

    def items_sorted(self):
        return sorted(self.entries.items())


# ---------------------------------------------------------------------------
# analyze: direct double quadrature over an explicit boundary grid


def analyze(f: GridFunction, lmax: int, n_boundary: int | None = None) -> CoefficientTable:
    """Full integer coefficient table of f up to degree lmax.

    Direct route: the pairing is tabulated on (theta, phi, boundary)
    nodes, raised through successive integer powers, integrated against
    f, and the boundary dependence is resolved by an FFT. The boundary
    grid defaults to 2*lmax + 2 nodes, which is alias-free because the
    b-profile of the degree-ell term is a trigonometric polynomial of
    degree at most ell.
    """
    require_resolution(f.grid, lmax)
    grid = f.grid
    nb = int(n_boundary) if n_boundary is not None else 2 * lmax + 2
    if nb < 2 * lmax + 2:
        raise GridResolutionError(f"boundary grid {nb} aliases modes at lmax={lmax}")
    th = grid.theta
    ph = grid.phi_nodes
    b = 2.0 * np.pi * np.arange(nb) / nb
    pairing = (
        np.cos(th)[:, None, None]
        + 1j * np.sin(th)[:, None, None] * np.cos(ph[None, :, None] - b[None, None, :])
    )
    weighted = f.values * (grid.theta_weights[:, None] / grid.n_phi)
    power = np.ones_like(pairing)
    entries = {}
    for l in range(lmax + 1):
        profile = np.einsum("tp,tpb->b", weighted, power)
        modes = np.fft.fft(profile) / nb
        for m in range(-lmax, lmax + 1):
            entries[(l, m)] = complex(modes[m % nb])
        if l < lmax:
            power *= pairing
    return CoefficientTable(lmax, entries)


def zonal_transform(f: GridFunction, lmax: int) -> np.ndarray:
    """Coefficients of a zonal f against Legendre polynomials.

    Independent of the kernel route on purpose: uses the classical
    three-term recurrence over the quadrature nodes, and must agree
    with analyze(...)(l, 0) to quadrature accuracy.
    """
    from .numerics import legendre_p_table

    require_resolution(f.grid, lmax)
    row_mean = f.values.mean(axis=1)
    spread = np.max(np.abs(f.values - row_mean[:, None]))
    scale = max(np.max(np.abs(f.values)), 1.0)
    if spread > 1e-12 * scale:
        raise SchemaError(
            f"input is not zonal: azimuthal spread {spread:.3e} exceeds 1e-12 relative"
        )
    u = np.cos(f.grid.theta)
    table = legendre_p_table(lmax, u)
    w = f.grid.theta_weights
    return np.array([np.sum(w * row_mean * table[l]) for l in range(lmax + 1)])


# ---------------------------------------------------------------------------
# extend: holomorphic evaluation at complex ell for cap-supported f


class _ExtendCore:
    """Shared machinery for extending a cap-supported grid function.

    Precomputes the azimuthal Fourier rows of f, the significant-row
    mask, and the boundary log-pairing on those rows; eval(ell, m) then
    costs one kernel exponential sweep. Instances are immutable after
    construction and safe to share across threads.
    """

    def __init__(self, f: GridFunction, n_boundary: int = DEFAULT_BOUNDARY_SAMPLES,
                 support_threshold: float = 1e-12):
        self.grid = f.grid
        self.n_boundary = int(n_boundary)
        self.radius = support_radius(f, support_threshold)
        peak = np.abs(f.values).max()
        self.is_zero = peak == 0.0
        if self.is_zero:
            self.mask = np.zeros(f.grid.n_theta, dtype=bool)
            self.row_modes = None
            self.log_pairing = None
            return
        if self.radius >= math.pi / 2.0:
            raise CrownDomainError(
                f"support radius {self.radius:.6g} reaches the crown boundary pi/2; "
                "holomorphic extension requires cap support"
            )
        row_mag = np.abs(f.values).max(axis=1)
        self.mask = row_mag > support_threshold * peak
        self.weights = f.grid.theta_weights[self.mask]
        # azimuthal modes: row_modes[:, m % n_phi] = (1/2pi) int f e^{-im phi}
        self.row_modes = np.fft.fft(f.values[self.mask], axis=1) / f.grid.n_phi
        self.log_pairing = boundary_log_pairing(f.grid.theta[self.mask], self.n_boundary)

    def resolves_mode(self, m: int) -> bool:
        return 2 * abs(int(m)) < self.grid.n_phi

    def _log_amplitude(self, ell: complex) -> float:
        return float(np.max(np.real(ell * self.log_pairing)))

    def _direct(self, ell: complex, m: int) -> complex:
        kernel = kernel_mode_profiles(ell, self.log_pairing)
        col = kernel[:, int(m) % self.n_boundary]
        fm = self.row_modes[:, int(m) % self.grid.n_phi]
        return complex(np.sum(self.weights * fm * col))

    def eval(self, ell, m: int) -> complex:
        ell = ell_value(ell)
        m = int(m)
        if self.is_zero:
            return 0.0 + 0.0j
        if not self.resolves_mode(m):
            raise GridResolutionError(
                f"azimuthal grid {self.grid.n_phi} cannot resolve K-type m={m}"
            )
        log_amp = self._log_amplitude(ell)
        reflected = -ell - 1.0
        log_amp_reflected = self._log_amplitude(reflected)
        if (
            log_amp > _LOG_AMP_DIRECT_MAX
            and log_amp_reflected < log_amp - _LOG_AMP_ADVANTAGE_MIN
        ):
            # direct power would cancel catastrophically; route through
            # the reflection functional equation phi(ell) =
            # b_m(ell + 1/2) * phi(-ell - 1), whose closed form is
            # validated against the quadrature ratio by the test suite.
            return intertwiner_rational(m, ell + 0.5) * self._direct(reflected, m)
        return self._direct(ell, m)


def extend(f: GridFunction, ell, m: int,
           n_boundary: int = DEFAULT_BOUNDARY_SAMPLES,
           support_threshold: float = 1e-12) -> complex:
    """One coefficient of f at a complex spectral parameter.

    Requires the support of f to stay inside the crown cap (checked via
    support_radius). At integer ell this agrees with the analyze table;
    off the integers it is the holomorphic interpolation of it.
    """
    return _ExtendCore(f, n_boundary, support_threshold).eval(ell, m)


# ---------------------------------------------------------------------------
# coefficient providers


class CoefficientProvider:
    """Evaluation contract (ell, m) -> complex with a declared K-type set.

    Subclasses fill in eval(); ktypes is the finite set of K-types on
    which the provider may be nonzero. Evaluation outside the declared
    set returns exactly 0.
    """

    ktypes: frozenset = frozenset()

    def eval(self, ell, m: int) -> complex:  # pragma: no cover - interface
        raise NotImplementedError


class ExtendProvider(CoefficientProvider):
    """Provider wrapping the holomorphic extension of a grid function.

    The K-type set is detected from the azimuthal Fourier rows of f
    unless declared explicitly: a K-type counts as present when its row
    modes carry more than rel 1e-12 of the overall peak.
    """

    def __init__(self, f: GridFunction, ktypes=None,
                 n_boundary: int = DEFAULT_BOUNDARY_SAMPLES,
                 support_threshold: float = 1e-12):
        self._core = _ExtendCore(f, n_boundary, support_threshold)
        if ktypes is not None:
            self.ktypes = frozenset(int(m) for m in ktypes)
        elif self._core.is_zero:
            self.ktypes = frozenset()
        else:
            modes = self._core.row_modes
            peak = np.abs(modes).max()
            half = f.grid.n_phi // 2
            present = []
            for m in range(-half + 1, half + 1):
                if np.abs(modes[:, m % f.grid.n_phi]).max() > 1e-12 * peak:
                    present.append(m)
            self.ktypes = frozenset(present)

    @property
    def radius(self) -> float:
        return self._core.radius

    def eval(self, ell, m: int) -> complex:
        if int(m) not in self.ktypes:
            return 0.0 + 0.0j
        return self._core.eval(ell, m)


class TableProvider(CoefficientProvider):
    """Provider backed by an integer coefficient table.

    Evaluates on the integer spectrum directly and on its reflection
    -l-1 through the functional equation with the closed-form scalar;
    any other parameter is outside the table's reach and raises.
    """

    def __init__(self, table: CoefficientTable):
        self.table = table
        self.ktypes = table.ktypes()

    def eval(self, ell, m: int) -> complex:
        ell = ell_value(ell)
        m = int(m)
        if m not in self.ktypes:
            return 0.0 + 0.0j
        if abs(ell.imag) > 1e-9:
            raise ProviderError(
                f"table provider is defined on integers and reflected integers, "
                f"got ell = {ell}", ell=ell, m=m)
        x = ell.real
        if abs(x - round(x)) > 1e-9:
            raise ProviderError(
                f"table provider is defined on integers and reflected integers, "
                f"got ell = {ell}", ell=ell, m=m)
        l = round(x)
        if l >= 0:
            return self.table.get(l, m)
        # reflected integer: phi(-n-1) = b_m(-n-1/2) phi(n) with n = -l-1
        n = -l - 1
        if n > self.table.lmax:
            raise ProviderError(f"table lmax={self.table.lmax} cannot reach ell={l}",
                                ell=ell, m=m)
        if abs(m) > n:
            return 0.0 + 0.0j
        return intertwiner_rational(m, ell + 0.5) * self.table.get(n, m)


class CallableProvider(CoefficientProvider):
    """Provider from an arbitrary function (ell, m) -> complex."""

    def __init__(self, fn, ktypes):
        self._fn = fn
        self.ktypes = frozenset(int(m) for m in ktypes)

    def eval(self, ell, m: int) -> complex:
        if int(m) not in self.ktypes:
            return 0.0 + 0.0j
        return complex(self._fn(ell_value(ell), int(m)))


# ---------------------------------------------------------------------------
# synthesize: the inversion series


def synthesize(provider: CoefficientProvider, grid: SphereGrid, lmax: int,
               n_boundary: int = DEFAULT_BOUNDARY_SAMPLES) -> GridFunction:
    """Partial inversion sum of a coefficient provider on a grid.

    Evaluates the provider at the reflected parameters -ell-1 for
    ell = 0..lmax and contracts against the kernel modes. Terms with
    |m| > ell vanish identically and are skipped. Summation order is
    fixed (ascending ell, then ascending m), so results are
    bit-reproducible.
    """
    require_resolution(grid, 0)
    log_pairing = boundary_log_pairing(grid.theta, n_boundary)
    phases = {}
    out = np.zeros((grid.n_theta, grid.n_phi), dtype=complex)
    ms = sorted(provider.ktypes)
    for m in ms:
        if 2 * abs(m) >= grid.n_phi:
            raise GridResolutionError(
                f"azimuthal grid {grid.n_phi} cannot represent K-type m={m}")
        phases[m] = np.exp(1j * m * grid.phi_nodes)
    for l in range(lmax + 1):
        active = [m for m in ms if abs(m) <= l]
        if not active:
            continue
        kernel = kernel_mode_profiles(float(l), log_pairing)
        accum = np.zeros((grid.n_theta, grid.n_phi), dtype=complex)
        for m in active:
            try:
                value = provider.eval(-l - 1.0, m)
            except Exception as exc:
                raise ProviderError(
                    f"provider failed at (ell={-l - 1}, m={m}): {exc}",
                    ell=-l - 1.0, m=m) from exc
            if value == 0.0:
                continue
            accum += value * np.outer(kernel[:, m % n_boundary], phases[m])
        out += (2 * l + 1) * accum
    return GridFunction(grid, out)


# ---------------------------------------------------------------------------
# K-type projection and rotation derivatives


def ktype_project(f: GridFunction, m: int) -> GridFunction:
    """Component of f transforming by exp(-i m c) under pole rotations.

    Averages f(theta, phi + c) against exp(-i m c) over the rotation
    angle; on the uniform azimuthal grid this is one FFT row. Summing
    the projections over all resolved m recovers band-limited f.
    """
    m = int(m)
    if 2 * abs(m) >= f.grid.n_phi:
        raise GridResolutionError(
            f"azimuthal grid {f.grid.n_phi} cannot resolve K-type m={m}")
    modes = np.fft.fft(f.values, axis=1) / f.grid.n_phi
    profile = modes[:, m % f.grid.n_phi]
    return GridFunction(f.grid, np.outer(profile, np.exp(1j * m * f.grid.phi_nodes)))


def ladder_components(handle, generator: str) -> dict:
    """Azimuthal components of a rotation derivative of a pure-type handle.

    The handle carries a single K-type m0 with radial profile h, i.e.
    f = exp(i m0 phi) h(theta). Output maps each resulting K-type m to
    a callable theta -> radial profile of that component:

        Z:  m0      -> i m0 h
        X:  m0 +- 1 -> -h'/2 +- (m0/2) cot(theta) h
        Y:  m0 + 1  ->  (i/2)(h' - m0 cot(theta) h)
            m0 - 1  -> -(i/2)(h' + m0 cot(theta) h)

    These are the vector fields -cos(phi) d_theta + cot(theta) sin(phi)
    d_phi (X), -sin(phi) d_theta - cot(theta) cos(phi) d_phi (Y), and
    d_phi (Z), split into azimuthal frequencies. The cot terms drop out
    for zonal input, and for |m0| >= 1 the profile h carries a
    sin(theta)^{|m0|} factor that keeps them bounded at the pole.
    """
    gen = str(generator).upper()
    m0 = int(handle.ktype)
    h = handle.profile
    hp = handle.profile_d1

    if gen == "Z":
        return {m0: (lambda th: 1j * m0 * h(th))}

    def cot_term(th):
        if m0 == 0:
            return np.zeros_like(np.asarray(th, dtype=float))
        return m0 * (np.cos(th) / np.sin(th)) * h(th)

    if gen == "X":
        return {
            m0 + 1: (lambda th: -0.5 * hp(th) + 0.5 * cot_term(th)),
            m0 - 1: (lambda th: -0.5 * hp(th) - 0.5 * cot_term(th)),
        }
    if gen == "Y":
        return {
            m0 + 1: (lambda th: 0.5j * (hp(th) - cot_term(th))),
            m0 - 1: (lambda th: -0.5j * (hp(th) + cot_term(th))),
        }
    raise SchemaError(f"unknown generator label {generator!r}; expected Z, X, or Y")


def rotation_derivative(f, generator: str, band_limit: int | None = None) -> GridFunction:
    """Rotation vector field applied to a test function.

    Preferred input is a closed-form handle (a testbed bump) carrying
    analytic radial derivatives; the result is sampled exactly and the
    support radius cannot grow. A plain GridFunction is accepted only
    with a declared band limit, in which case the derivative is taken
    spectrally (analyze, apply the boundary model of the generator at
    parameter -ell, synthesize back).
    """
    has_handle = (
        all(hasattr(f, name) for name in ("ktype", "profile", "profile_d1"))
        and getattr(f, "handle_ok", True)
    )
    if isinstance(f, GridFunction) and not has_handle:
        if band_limit is None:
            raise SchemaError(
                "grid data has no closed-form partials; declare band_limit "
                "for the spectral fallback")
        from .reduction import PrincipalSeriesFunction, sigma_action

        table = analyze(f, band_limit)
        entries = {}
        for l in range(band_limit + 1):
            psi = PrincipalSeriesFunction(
                components={m: table.get(l, m) for m in range(-l, l + 1)},
                lam=-l - 0.5)
            acted = sigma_action(psi, generator)
            for m, v in acted.components.items():
                if v != 0.0 and abs(m) <= band_limit:
                    entries[(l, m)] = entries.get((l, m), 0.0) + v
        out_table = CoefficientTable(band_limit, entries)
        return synthesize(TableProvider(out_table), f.grid, band_limit)

    components = ladder_components(f, generator)
    grid = f.grid
    out = np.zeros((grid.n_theta, grid.n_phi), dtype=complex)
    for m, profile in sorted(components.items()):
        out += np.outer(profile(grid.theta), np.exp(1j * m * grid.phi_nodes))
    return GridFunction(grid, out)
