"""Normalized intertwining scalars on each K-type.

For K-type m and spectral parameter t define the probe integral

    F_m(t; theta) = (1/2*pi) * integral of Q((theta,0), c)^(-t-1/2)
                    * exp(-i m c) dc.

The normalized intertwining scalar is the ratio

    b_m(t) = F_m(-t; theta) / F_m(t; theta),

and the operative fact (tested, not assumed) is that the ratio does not
depend on the probe colatitude theta. The zonal scalar b_0 is
identically 1. A closed-form rational candidate is provided separately
and is validated against the quadrature ratio by the test suite before
any other module is allowed to lean on it.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import SchemaError, SingularParameterError
from .sphere import SpectralParam, boundary_log_pairing, ell_value, kernel_mode_profiles

#: probe colatitudes tried in order when the leading probe degenerates
_PROBE_LADDER = (0.5, 0.2, 1.0, 0.35, 0.8, 1.2)

#: a probe counts as degenerate when the denominator is this small
#: relative to the pair of integrals at that probe
_DEGENERATE_REL = 1e-12


def probe_integral(m: int, t, theta: float, n_boundary: int = 512) -> complex:
    """F_m(t; theta), the boundary mode of the pairing power -t-1/2."""
    t = complex(t)
    lq = boundary_log_pairing(np.array([theta]), n_boundary)
    profiles = kernel_mode_profiles(-t - 0.5, lq)
    return complex(profiles[0, int(m) % n_boundary])


def intertwiner_scalar(m: int, t, theta_probe: float = 0.5, n_boundary: int = 512) -> complex:
    """b_m(t) as the probe-integral ratio F_m(-t)/F_m(t).

    The probe colatitude must lie in the crown (0, pi/2). When the
    denominator integral degenerates at the requested probe the ratio
    is retried at alternates; if every probe degenerates the parameter
    is singular (the scalar is only meromorphic in t) and a
    SingularParameterError is raised.
    """
    if not 0.0 < theta_probe < np.pi / 2.0:
        raise SchemaError("theta_probe must lie in the crown (0, pi/2)")
    t = complex(t)
    probes = (theta_probe,) + tuple(p for p in _PROBE_LADDER if p != theta_probe)
    for theta in probes:
        num = probe_integral(m, -t, theta, n_boundary)
        den = probe_integral(m, t, theta, n_boundary)
        scale = max(abs(num), abs(den), 1.0)
        if abs(den) >= _DEGENERATE_REL * scale:
            return num / den
    raise SingularParameterError(
        f"intertwining scalar b_{m} is singular at t = {t} (all probes degenerate)"
    )


def intertwiner_rational(m: int, t) -> complex:
    """Closed-form rational candidate for b_m(t).

    b_m(t) = prod_{j=0}^{|m|-1} (1/2 - t + j) / (1/2 + t + j),

    equivalent to the gamma ratio
    [Gamma(t+1/2)/Gamma(t+1/2+|m|)] * [Gamma(1/2-t+|m|)/Gamma(1/2-t)].
    The test suite confirms this against intertwiner_scalar before the
    transform layer uses it for reflected evaluation. Poles at
    t = -1/2 - j for j < |m| raise SingularParameterError.
    """
    t = complex(t)
    value = complex(1.0)
    for j in range(abs(int(m))):
        den = 0.5 + t + j
        if abs(den) < 1e-14:
            raise SingularParameterError(
                f"closed-form b_{m} has a pole at t = {t}"
            )
        value *= (0.5 - t + j) / den
    return value


def singular_distance(m: int, t) -> float:
    """Distance from t to the nearest pole of b_m (inf for the zonal type).

    The pole set {-1/2 - j : j = 0..|m|-1} is the one exhibited by the
    validated closed form; symmetry checks skip samples that come
    within a small distance of it.
    """
    m = abs(int(m))
    if m == 0:
        return float("inf")
    t = complex(t)
    return min(abs(t + 0.5 + j) for j in range(m))


def weyl_reflected(ell):
    """The rho-shifted reflection ell -> -ell - 1 on spectral parameters.

    An involution whose fixed point is ell = -1/2; accepts and returns
    either SpectralParam or a plain complex number.
    """
    if isinstance(ell, SpectralParam):
        return SpectralParam(-ell.ell - 1.0)
    return -ell_value(ell) - 1.0


@dataclass
class IntertwinerScalar:
    """Sampled values of b_m(t) on a K-type."""

    m: int
    samples: dict = field(default_factory=dict)

    def add(self, t, value: complex):
        self.samples[complex(t)] = complex(value)


def sample_intertwiner(m: int, ts, theta_probe: float = 0.5) -> IntertwinerScalar:
    """Evaluate b_m over an iterable of parameters, skipping singular ones."""
    out = IntertwinerScalar(m=int(m))
    for t in ts:
        try:
            out.add(t, intertwiner_scalar(m, t, theta_probe))
        except SingularParameterError:
            continue
    return out
