"""Geometry of the two-sphere, its boundary circle, and the crown cap.

The sphere is parametrized by colatitude theta in [0, pi] and azimuth
phi in [0, 2*pi). The boundary circle (the orbit of the equatorial
direction under rotations about the pole) carries the angle phi_b. The
central object is the complexified pairing

    Q(x, b) = cos(theta) + i sin(theta) cos(phi_x - phi_b),

whose integer powers are the transform kernels and whose complex powers
are well defined exactly on the crown cap theta < pi/2, where
Re Q = cos(theta) > 0 keeps the principal logarithm holomorphic.

Grids are Gauss-Legendre in cos(theta) crossed with uniform azimuths,
with total weight normalized to 1 so that integrate(1) == 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import CrownDomainError, GridResolutionError, SchemaError
from .numerics import gauss_legendre

#: number of boundary samples used for kernel mode integrals; a power of
#: two keeps the FFT exact-length and resolves modes |m| < 256, far past
#: any K-type this library touches.
DEFAULT_BOUNDARY_SAMPLES = 512


# ---------------------------------------------------------------------------
# spectral bookkeeping


class RootDatum:
    """Spectral bookkeeping for the sphere in the ell-coordinate.

    The spectrum of the transform is the nonnegative integers, the half
    sum of roots is rho = 1/2, representation dimensions are 2*ell + 1,
    and the nontrivial reflection acts on the spectral coordinate as
    ell -> -ell (the rho-shifted version -ell-1 lives in the
    intertwining module).
    """

    rho: float = 0.5
    two_rho: float = 1.0

    @staticmethod
    def weyl_nontrivial(ell):
        return -ell

    @staticmethod
    def dimension(ell):
        return 2 * ell + 1

    @staticmethod
    def in_spectrum(ell) -> bool:
        ell = complex(ell)
        return ell.imag == 0.0 and ell.real >= 0 and ell.real == round(ell.real)


ROOT_DATUM = RootDatum()


@dataclass(frozen=True)
class SpectralParam:
    """A complex spectral coordinate ell."""

    ell: complex

    def __post_init__(self):
        ell = complex(self.ell)
        if not (math.isfinite(ell.real) and math.isfinite(ell.imag)):
            raise SchemaError("spectral parameter must be finite")
        object.__setattr__(self, "ell", ell)


def ell_value(ell) -> complex:
    """Accept either a SpectralParam or a plain number and return complex."""
    if isinstance(ell, SpectralParam):
        return ell.ell
    ell = complex(ell)
    if not (math.isfinite(ell.real) and math.isfinite(ell.imag)):
        raise SchemaError("spectral parameter must be finite")
    return ell


# ---------------------------------------------------------------------------
# points


@dataclass(frozen=True)
class SpherePoint:
    """Point on the sphere: colatitude theta in [0, pi], azimuth phi."""

    theta: float
    phi: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.theta <= math.pi:
            raise SchemaError(f"theta must lie in [0, pi], got {self.theta}")
        object.__setattr__(self, "phi", float(self.phi) % (2.0 * math.pi))


@dataclass(frozen=True)
class BoundaryPoint:
    """Point on the boundary circle, the angle phi_b in [0, 2*pi)."""

    phi_b: float

    def __post_init__(self):
        object.__setattr__(self, "phi_b", float(self.phi_b) % (2.0 * math.pi))


def poisson_pairing(x: SpherePoint, b: BoundaryPoint) -> complex:
    """The pairing Q(x, b) = cos(theta) + i sin(theta) cos(phi_x - phi_b).

    Defined on the whole sphere; |Q| <= 1 with Re Q = cos(theta), and on
    the crown cap the argument of Q is bounded by theta.
    """
    return complex(
        math.cos(x.theta),
        math.sin(x.theta) * math.cos(x.phi - b.phi_b),
    )


def iwasawa_log(x: SpherePoint, b: BoundaryPoint) -> complex:
    """Principal logarithm of the pairing, defined on the crown only.

    exp(ell * iwasawa_log(x, b)) equals the pairing raised to any
    complex power ell; the imaginary part stays in (-pi/2, pi/2).
    """
    if x.theta >= math.pi / 2.0:
        raise CrownDomainError(
            f"point with theta = {x.theta:.6g} is outside the crown cap theta < pi/2"
        )
    q = poisson_pairing(x, b)
    return complex(math.log(abs(q)), math.atan2(q.imag, q.real))


# ---------------------------------------------------------------------------
# grids


class SphereGrid:
    """Gauss-Legendre x uniform product grid with unit total weight.

    theta nodes ascend from the pole; each grid point carries weight
    theta_weights[i] / n_phi so the constant function integrates to 1.
    """

    def __init__(self, n_theta: int, n_phi: int):
        if n_theta < 1 or n_phi < 1:
            raise SchemaError("grid dimensions must be positive")
        self.n_theta = int(n_theta)
        self.n_phi = int(n_phi)
        self.theta_rule = gauss_legendre(self.n_theta)
        # nodes ascend in cos(theta); reverse so theta ascends instead
        self.theta = np.arccos(self.theta_rule.nodes[::-1]).copy()
        self.theta_weights = (self.theta_rule.weights[::-1] / 2.0).copy()
        self.phi_nodes = 2.0 * np.pi * np.arange(self.n_phi) / self.n_phi
        self.theta.flags.writeable = False
        self.theta_weights.flags.writeable = False
        self.phi_nodes.flags.writeable = False

    def __repr__(self):
        return f"SphereGrid(n_theta={self.n_theta}, n_phi={self.n_phi})"

    def __eq__(self, other):
        return (
            isinstance(other, SphereGrid)
            and other.n_theta == self.n_theta
            and other.n_phi == self.n_phi
        )

    def __hash__(self):
        return hash((self.n_theta, self.n_phi))

    def resolves(self, lmax: int) -> bool:
        """Whether analyze/synthesize at band limit lmax is alias-free."""
        return self.n_theta >= lmax + 2 and self.n_phi >= 2 * lmax + 2


class GridFunction:
    """Complex samples on a SphereGrid, indexed (theta index, phi index)."""

    def __init__(self, grid: SphereGrid, values):
        values = np.asarray(values, dtype=complex)
        if values.shape != (grid.n_theta, grid.n_phi):
            raise SchemaError(
                f"values shape {values.shape} does not match grid "
                f"({grid.n_theta}, {grid.n_phi})"
            )
        self.grid = grid
        self.values = values

    @classmethod
    def from_callable(cls, grid: SphereGrid, fn) -> "GridFunction":
        """Sample fn(theta, phi) on the grid (fn must broadcast arrays)."""
        th = grid.theta[:, None]
        ph = grid.phi_nodes[None, :]
        values = np.broadcast_to(np.asarray(fn(th, ph), dtype=complex),
                                 (grid.n_theta, grid.n_phi)).copy()
        return cls(grid, values)


def integrate(f: GridFunction) -> complex:
    """Quadrature value of the normalized sphere integral of f."""
    row_means = f.values.mean(axis=1)
    return complex(np.sum(f.grid.theta_weights * row_means))


def rotate(f: GridFunction, steps: int) -> GridFunction:
    """Rotate about the pole by c = 2*pi*steps/n_phi grid increments.

    The result samples f(theta, phi - c); restricting to whole grid
    steps keeps the rotation exact (no interpolation).
    """
    return GridFunction(f.grid, np.roll(f.values, int(steps), axis=1))


def support_radius(f: GridFunction, rel_threshold: float = 1e-12) -> float:
    """Colatitude of the last grid row carrying significant mass.

    Returns the smallest grid colatitude r such that every sample with
    theta > r has magnitude <= rel_threshold * max|f|. By convention an
    identically-zero function reports 0 and a function significant all
    the way to the antipode reports pi.
    """
    if not 0.0 < rel_threshold < 1.0:
        raise SchemaError("rel_threshold must lie in (0, 1)")
    mags = np.abs(f.values)
    peak = mags.max()
    if peak == 0.0:
        return 0.0
    significant = mags.max(axis=1) > rel_threshold * peak
    idx = np.nonzero(significant)[0]
    if idx.size == 0:
        return 0.0
    last = idx[-1]
    if last == f.grid.n_theta - 1:
        return math.pi
    return float(f.grid.theta[last])


def cap_quadrature(radius: float, n_theta: int):
    """Gauss-Legendre rule in cos(theta) fitted to the cap theta <= radius.

    Returns (theta, weights) with theta ascending and weights already
    carrying the normalized-measure factor, i.e. sum(w * h(theta))
    approximates the full normalized sphere integral of a zonal h
    supported inside the cap. Fitting the rule to the support instead
    of masking a whole-sphere grid is what keeps cap integrands of
    smooth bumps accurate to near machine precision at modest n.
    """
    if not 0.0 < radius <= math.pi:
        raise CrownDomainError("cap radius must lie in (0, pi]")
    rule = gauss_legendre(n_theta)
    a = math.cos(radius)
    u = 0.5 * (1.0 - a) * rule.nodes + 0.5 * (1.0 + a)
    w = rule.weights * (1.0 - a) / 4.0
    theta = np.arccos(u)[::-1].copy()
    weights = w[::-1].copy()
    return theta, weights


# ---------------------------------------------------------------------------
# kernel mode profiles


def boundary_log_pairing(theta, n_boundary: int = DEFAULT_BOUNDARY_SAMPLES) -> np.ndarray:
    """Principal log of Q((theta, 0), c) on a uniform boundary grid.

    Returns an array of shape (len(theta), n_boundary). The principal
    branch is holomorphic in theta on the crown; rows with theta >= pi/2
    are still well defined pointwise and may be exponentiated at
    integer powers only (integer powers are branch-free).
    """
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    c = 2.0 * np.pi * np.arange(n_boundary) / n_boundary
    q = np.cos(theta)[:, None] + 1j * np.sin(theta)[:, None] * np.cos(c)[None, :]
    return np.log(q)


def kernel_mode_profiles(ell, log_pairing: np.ndarray) -> np.ndarray:
    """All boundary Fourier modes of the pairing power Q^ell at once.

    Output column m % n_boundary holds

        (1/2*pi) * integral of Q((theta,0), c)^ell * exp(-i m c) dc,

    computed by an exact-length FFT of exp(ell * log Q) over the
    uniform boundary grid. The integrand is entire in ell, so these
    profiles inherit holomorphy in the spectral parameter.
    """
    ell = ell_value(ell)
    nb = log_pairing.shape[-1]
    return np.fft.fft(np.exp(ell * log_pairing), axis=-1) / nb


def kernel_mode(ell, m: int, theta, n_boundary: int = DEFAULT_BOUNDARY_SAMPLES) -> np.ndarray:
    """Single boundary mode of Q^ell along an array of colatitudes."""
    lq = boundary_log_pairing(theta, n_boundary)
    profiles = kernel_mode_profiles(ell, lq)
    out = profiles[:, int(m) % n_boundary]
    return out


def require_resolution(grid: SphereGrid, lmax: int):
    """Raise unless the grid is fine enough for band limit lmax."""
    if lmax < 0:
        raise SchemaError("lmax must be nonnegative")
    if not grid.resolves(lmax):
        raise GridResolutionError(
            f"grid {grid!r} cannot resolve lmax={lmax}; "
            f"need n_theta >= {lmax + 2} and n_phi >= {2 * lmax + 2}"
        )
