"""Closed-form 1-D telegraph state law at time t.

The law of a speed-c, rate-a telegraph particle started at the origin is

    p(t, .) = e^{-at}/2 [delta_{-ct} + delta_{+ct}]  +  p_ac(t, .) on (-ct, ct),

    p_ac(t, x) = (a / 2c) e^{z - at} [ i0e(z) + a t r(z) ],
    z = (a/c) sqrt(c^2 t^2 - x^2),   r(z) = i1e(z) / z,

with the signed probability flux (the object entering the continuity
equation dt p + dx F = 0)

    F(t, x) = (a^2 x / 2c) e^{z - at} r(z),        |x| < ct,

and flux +-c e^{-at}/2 carried by the moving boundary atoms.  Everything is
written in exponentially scaled Bessel form so that a*t of a few thousand
stays finite.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad
from scipy.interpolate import PchipInterpolator

from .bessel import bessel_i_scaled, i1_scaled_over_x
from .errors import DegenerateLawError, DomainError, InternalConsistencyError, ParameterError
from .kac_core import KacParams, SeedSpec

_QUANTILE_KNOTS = 4096
_EDGE_RTOL = 1e-12


def atom_weight(a: float, t: float) -> float:
    """Probability mass at each of x = -ct and x = +ct."""
    return 0.5 * np.exp(-a * t)


def _cone_radius_arg(a, c, t, x):
    s2 = (c * t) ** 2 - np.asarray(x, dtype=float) ** 2
    s2 = np.maximum(s2, 0.0)
    return (a / c) * np.sqrt(s2)


def interior_density(a: float, c: float, t: float, x) -> np.ndarray:
    """Absolutely continuous density on (-ct, ct); vectorized in x."""
    z = _cone_radius_arg(a, c, t, x)
    return (a / (2.0 * c)) * np.exp(z - a * t) * (bessel_i_scaled(0, z) + a * t * i1_scaled_over_x(z))


def log_interior_density(a: float, c: float, t: float, x) -> np.ndarray:
    """log of interior_density, safe for a*t far beyond the overflow range."""
    z = _cone_radius_arg(a, c, t, x)
    return np.log(a / (2.0 * c)) + (z - a * t) + np.log(bessel_i_scaled(0, z) + a * t * i1_scaled_over_x(z))


def interior_flux(a: float, c: float, t: float, x) -> np.ndarray:
    """Signed probability flux on (-ct, ct); antisymmetric, sign(F) = sign(x)."""
    x = np.asarray(x, dtype=float)
    z = _cone_radius_arg(a, c, t, x)
    return (a * a / (2.0 * c)) * x * np.exp(z - a * t) * i1_scaled_over_x(z)


def base_velocity(a: float, c: float, s, x) -> np.ndarray:
    """Transport velocity F/p of the time-s telegraph law, vectorized over (s, x).

    Interior values are a x r(z) / (i0e(z) + a s r(z)) with |.| < c; points on
    the cone edge (within 1e-12 relative) return the atom velocity +-c.  At
    s = 0 only x = 0 is evaluable and the value is 0.
    """
    s = np.asarray(s, dtype=float)
    x = np.asarray(x, dtype=float)
    s, x = np.broadcast_arrays(s, x)
    edge = c * s
    ax = np.abs(x)
    outside = ax > edge * (1.0 + _EDGE_RTOL) + 1e-300
    if np.any(outside):
        raise DomainError("velocity query outside the closed cone |x| <= c s")
    on_edge = ax >= edge * (1.0 - _EDGE_RTOL)
    z = _cone_radius_arg(a, c, s, x)
    r = i1_scaled_over_x(z)
    denom = bessel_i_scaled(0, z) + a * s * r
    v = a * x * r / denom
    v = np.where(on_edge, np.sign(x) * c, v)
    v = np.where((s == 0.0) & (ax == 0.0), 0.0, v)
    return v


class StateDensity1D:
    """Immutable telegraph law at one (params, t); quantile table built lazily once."""

    def __init__(self, params: KacParams, t: float):
        if params.d != 1:
            raise ParameterError("StateDensity1D requires d = 1")
        if t <= 0:
            raise DegenerateLawError("the t = 0 law is a point mass; callers must special-case it")
        self.params = params
        self.t = float(t)
        self.edge = params.c * self.t
        self.atom_weight = atom_weight(params.a, self.t)
        self.ac_mass = 1.0 - 2.0 * self.atom_weight
        self._inverse_cdf = None

    def pdf_interior(self, x) -> np.ndarray:
        return interior_density(self.params.a, self.params.c, self.t, x)

    def logpdf_interior(self, x) -> np.ndarray:
        return log_interior_density(self.params.a, self.params.c, self.t, x)

    def flux_interior(self, x) -> np.ndarray:
        return interior_flux(self.params.a, self.params.c, self.t, x)

    def velocity(self, x) -> np.ndarray:
        return base_velocity(self.params.a, self.params.c, self.t, x)

    def total_mass(self, quad_limit: int = 200) -> float:
        """2 * atom_weight + adaptive quadrature of the interior part."""
        integral, _ = quad(
            lambda u: float(self.pdf_interior(u)), -self.edge, self.edge, limit=quad_limit
        )
        return 2.0 * self.atom_weight + integral

    def _build_inverse_cdf(self):
        xs = np.linspace(-self.edge, self.edge, _QUANTILE_KNOTS + 1)
        pdf = self.pdf_interior(xs)
        cum = np.concatenate(([0.0], np.cumsum(0.5 * (pdf[1:] + pdf[:-1]) * np.diff(xs))))
        if np.any(np.diff(cum) < 0):
            raise InternalConsistencyError("non-monotone interior CDF table")
        total = cum[-1]
        if not (total > 0 and np.isfinite(total)):
            raise InternalConsistencyError("degenerate interior CDF normalization")
        u = cum / total
        u, keep = np.unique(u, return_index=True)
        return PchipInterpolator(u, xs[keep])

    def sample(self, n: int, seed: SeedSpec) -> np.ndarray:
        """n i.i.d. draws: boundary atoms with their exact mass, interior by inverse CDF."""
        if self._inverse_cdf is None:
            self._inverse_cdf = self._build_inverse_cdf()
        rng = seed.generator()
        u = rng.random(n)
        signs = rng.integers(0, 2, size=n) * 2.0 - 1.0
        interior_u = rng.random(n)
        on_atom = u < 2.0 * self.atom_weight
        out = np.where(on_atom, signs * self.edge, self._inverse_cdf(interior_u))
        return out


@functools.lru_cache(maxsize=512)
def _cached_density(a: float, c: float, t: float) -> StateDensity1D:
    return StateDensity1D(KacParams(a=a, c=c, d=1), t)


def state_density(params: KacParams, t: float) -> StateDensity1D:
    """Shared immutable density object for (params, t)."""
    return _cached_density(params.a, params.c, float(t))


def density_at(params: KacParams, t: float, x: float) -> float:
    """Atom mass at |x| = ct, interior density for |x| < ct, exactly 0 outside."""
    if params.d != 1:
        raise ParameterError("density_at requires d = 1")
    if t <= 0:
        raise DegenerateLawError("the t = 0 law is a point mass; callers must special-case it")
    edge = params.c * t
    ax = abs(x)
    if ax > edge:
        return 0.0
    if ax == edge:
        return atom_weight(params.a, t)
    return float(interior_density(params.a, params.c, t, x))


def flux_at(params: KacParams, t: float, x: float) -> float:
    """Interior signed flux; the boundary atoms carry +-c * atom_weight instead."""
    if params.d != 1:
        raise ParameterError("flux_at requires d = 1")
    if t <= 0:
        raise DegenerateLawError("the t = 0 law is a point mass; callers must special-case it")
    if abs(x) >= params.c * t:
        raise DomainError("flux_at is defined on the open cone |x| < ct")
    return float(interior_flux(params.a, params.c, t, x))


def atom_flux(params: KacParams, t: float, sign: int) -> float:
    return sign * params.c * atom_weight(params.a, t)


def flux_numeric(params: KacParams, t: float, x: float, dt: float = 1e-4) -> float:
    """Independent flux estimate: -d/dt P(X(t) <= x) by centered differences.

    Mass-balance tie-breaker for the closed-form flux; the CDF below x
    includes the left boundary atom.
    """

    def cdf(tt):
        edge = params.c * tt
        xs = np.linspace(-edge, min(x, edge), 2001)
        pdf = interior_density(params.a, params.c, tt, xs)
        return atom_weight(params.a, tt) + np.trapezoid(pdf, xs)

    return -(cdf(t + dt) - cdf(t - dt)) / (2.0 * dt)


def sample_exact(params: KacParams, t: float, n: int, seed: SeedSpec) -> np.ndarray:
    """n exact draws from the time-t telegraph law, shape (n,)."""
    if n < 1:
        raise ParameterError(f"n must be >= 1, got {n}")
    return state_density(params, t).sample(n, seed)
