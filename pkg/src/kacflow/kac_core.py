"""Kac (telegraph) process simulation.

A 1-D Kac path moves at constant speed c and reverses direction at the
event times of a Poisson(a) process; d-dimensional paths are products of
independent 1-D coordinates.  The mean-reverting interpolation
``M_t = f(t) * x0 + K_{g(t)}`` bridges a data point at t=0 and pure Kac
noise at t=1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import DomainError, ParameterError

_MASK64 = (1 << 64) - 1
_GOLDEN64 = 0x9E3779B97F4A7C15


@dataclass(frozen=True)
class SeedSpec:
    """Counter-based RNG key: (master_seed, stream_id) -> independent stream."""

    master_seed: int
    stream_id: int = 0

    def generator(self) -> np.random.Generator:
        key = [self.master_seed & _MASK64, self.stream_id & _MASK64]
        return np.random.Generator(np.random.Philox(key=key))

    def substream(self, k: int) -> "SeedSpec":
        """Derive the k-th child stream (splitmix-style id mixing)."""
        child = (self.stream_id * _GOLDEN64 + k + 1) & _MASK64
        return SeedSpec(self.master_seed, child)


@dataclass(frozen=True)
class KacParams:
    """Jump rate a (= half the damping coefficient), front speed c, dimension d."""

    a: float
    c: float
    d: int = 1

    def __post_init__(self):
        if not (self.a > 0 and np.isfinite(self.a)):
            raise ParameterError(f"jump rate a must be positive, got {self.a}")
        if not (self.c > 0 and np.isfinite(self.c)):
            raise ParameterError(f"speed c must be positive, got {self.c}")
        if not (isinstance(self.d, (int, np.integer)) and self.d >= 1):
            raise ParameterError(f"dimension d must be a positive integer, got {self.d}")


@dataclass(frozen=True)
class Schedule:
    """Time warp of the mean-reverting construction.

    f scales the data term (f(0)=1, f(1)=0), g reclocks the noise term
    (g(0)=0, g(1)=1, nondecreasing).  All four maps are vectorized over t.
    """

    kind: str
    f: Callable[[np.ndarray], np.ndarray]
    g: Callable[[np.ndarray], np.ndarray]
    fp: Callable[[np.ndarray], np.ndarray]
    gp: Callable[[np.ndarray], np.ndarray]

    def __post_init__(self):
        f0, f1 = float(self.f(0.0)), float(self.f(1.0))
        g0, g1 = float(self.g(0.0)), float(self.g(1.0))
        if f0 != 1.0 or f1 != 0.0:
            raise ParameterError(f"schedule must satisfy f(0)=1, f(1)=0; got f(0)={f0}, f(1)={f1}")
        if g0 != 0.0 or g1 != 1.0:
            raise ParameterError(f"schedule must satisfy g(0)=0, g(1)=1; got g(0)={g0}, g(1)={g1}")
        ts = np.linspace(0.0, 1.0, 1001)
        gs = np.asarray(self.g(ts), dtype=float)
        if np.any(np.diff(gs) < -1e-15):
            raise ParameterError("schedule g must be nondecreasing on [0, 1]")


def linear_schedule() -> Schedule:
    """f(t)=1-t, g(t)=t."""
    return Schedule(
        kind="linear",
        f=lambda t: 1.0 - np.asarray(t, dtype=float),
        g=lambda t: np.asarray(t, dtype=float),
        fp=lambda t: np.full_like(np.asarray(t, dtype=float), -1.0),
        gp=lambda t: np.ones_like(np.asarray(t, dtype=float)),
    )


def quadratic_schedule() -> Schedule:
    """f(t)=1-t, g(t)=t^2."""
    return Schedule(
        kind="quadratic",
        f=lambda t: 1.0 - np.asarray(t, dtype=float),
        g=lambda t: np.asarray(t, dtype=float) ** 2,
        fp=lambda t: np.full_like(np.asarray(t, dtype=float), -1.0),
        gp=lambda t: 2.0 * np.asarray(t, dtype=float),
    )


def tabulated_schedule(
    ts: np.ndarray,
    fs: np.ndarray,
    gs: np.ndarray,
    fps: np.ndarray | None = None,
    gps: np.ndarray | None = None,
) -> Schedule:
    """Schedule from tables on a grid over [0,1]; derivatives default to centered differences.

    Supplied derivative tables must agree with centered differences of the
    value tables to relative 1e-6 at interior nodes.
    """
    ts = np.asarray(ts, dtype=float)
    fs = np.asarray(fs, dtype=float)
    gs = np.asarray(gs, dtype=float)
    if ts.ndim != 1 or ts.size < 3 or np.any(np.diff(ts) <= 0):
        raise ParameterError("tabulated schedule needs a strictly increasing grid of >= 3 nodes")
    if ts[0] != 0.0 or ts[-1] != 1.0:
        raise ParameterError("tabulated schedule grid must span [0, 1] exactly")

    fd_f = np.gradient(fs, ts)
    fd_g = np.gradient(gs, ts)
    if fps is None:
        fps = fd_f
    if gps is None:
        gps = fd_g
    fps = np.asarray(fps, dtype=float)
    gps = np.asarray(gps, dtype=float)
    for name, given, fd in (("f'", fps, fd_f), ("g'", gps, fd_g)):
        scale = np.maximum(np.abs(fd[1:-1]), 1e-12)
        if np.any(np.abs(given[1:-1] - fd[1:-1]) / scale > 1e-6):
            raise ParameterError(f"tabulated {name} disagrees with centered differences beyond 1e-6")

    def interp(table):
        return lambda t: np.interp(np.asarray(t, dtype=float), ts, table)

    return Schedule(kind="tabulated", f=interp(fs), g=interp(gs), fp=interp(fps), gp=interp(gps))


def make_schedule(kind: str) -> Schedule:
    if kind == "linear":
        return linear_schedule()
    if kind == "quadratic":
        return quadratic_schedule()
    raise ParameterError(f"unknown schedule kind {kind!r} (expected linear or quadratic)")


@dataclass(frozen=True)
class KacPath:
    """Lazy piecewise-linear Kac trajectory; one jump-time array per coordinate."""

    params: KacParams
    t_end: float
    jump_times: tuple  # tuple of 1-D float arrays, one per coordinate
    initial_signs: np.ndarray  # (d,) values in {-1, +1}

    def jump_count(self) -> int:
        return int(sum(j.size for j in self.jump_times))

    def directions(self, coord: int = 0) -> np.ndarray:
        """Per-segment directions for one coordinate (alternating from the initial sign)."""
        n = self.jump_times[coord].size
        return self.initial_signs[coord] * (-1.0) ** np.arange(n + 1)

    def position(self, t) -> np.ndarray:
        """Evaluate X(t); t scalar -> (d,), t array of shape (m,) -> (m, d)."""
        tq = np.asarray(t, dtype=float)
        scalar = tq.ndim == 0
        tq = np.atleast_1d(tq)
        if np.any(tq < 0) or np.any(tq > self.t_end + 1e-12):
            raise DomainError("query time outside [0, t_end]")
        out = np.empty((tq.size, self.params.d))
        c = self.params.c
        for i, jumps in enumerate(self.jump_times):
            gaps = np.diff(np.concatenate(([0.0], jumps)))
            alt = (-1.0) ** np.arange(jumps.size)
            prefix = np.concatenate(([0.0], np.cumsum(alt * gaps)))
            k = np.searchsorted(jumps, tq, side="right")
            last = np.where(k > 0, jumps[np.maximum(k - 1, 0)], 0.0)
            out[:, i] = c * self.initial_signs[i] * (prefix[k] + (-1.0) ** k * (tq - last))
        return out[0] if scalar else out


def _jump_times_1d(a: float, t_end: float, rng: np.random.Generator) -> np.ndarray:
    """Poisson(a) event times on [0, t_end] via exponential gaps."""
    if t_end == 0.0:
        return np.empty(0)
    times = []
    t = 0.0
    block = max(16, int(a * t_end * 1.5) + 16)
    while True:
        gaps = rng.exponential(1.0 / a, size=block)
        cum = t + np.cumsum(gaps)
        inside = cum[cum < t_end]
        times.append(inside)
        if inside.size < block:
            break
        t = cum[-1]
    return np.concatenate(times) if times else np.empty(0)


def sample_path(params: KacParams, t_end: float, seed: SeedSpec) -> KacPath:
    """One d-dimensional Kac path on [0, t_end] (independent coordinates).

    Each coordinate reverses direction at every Poisson(a) event, so the
    event rate equals the direction-flip rate and the t-law carries atoms
    exp(-a t)/2 at +-c t.
    """
    if t_end < 0:
        raise DomainError(f"t_end must be >= 0, got {t_end}")
    rng = seed.generator()
    signs = rng.integers(0, 2, size=params.d) * 2.0 - 1.0
    jumps = tuple(_jump_times_1d(params.a, t_end, rng) for _ in range(params.d))
    return KacPath(params=params, t_end=float(t_end), jump_times=jumps, initial_signs=signs)


def _state_1d(a: float, c: float, t: float, n: int, rng: np.random.Generator):
    """Vectorized endpoints and final directions of n independent 1-D paths at time t."""
    x = np.zeros(n)
    if t == 0.0:
        u = rng.integers(0, 2, size=n) * 2.0 - 1.0
        return x, u
    counts = rng.poisson(a * t, size=n)
    u0 = rng.integers(0, 2, size=n) * 2.0 - 1.0
    x[counts == 0] = t
    for m in np.unique(counts[counts > 0]):
        idx = np.flatnonzero(counts == m)
        jumps = np.sort(rng.random((idx.size, m)), axis=1) * t
        bounds = np.concatenate(
            [np.zeros((idx.size, 1)), jumps, np.full((idx.size, 1), t)], axis=1
        )
        gaps = np.diff(bounds, axis=1)
        alt = (-1.0) ** np.arange(m + 1)
        x[idx] = gaps @ alt
    u_final = u0 * (-1.0) ** counts
    return c * u0 * x, u_final


def sample_state(params: KacParams, t: float, n: int, seed: SeedSpec) -> np.ndarray:
    """n i.i.d. endpoints X(t), shape (n, d)."""
    states, _ = sample_state_with_direction(params, t, n, seed)
    return states


def sample_state_with_direction(params: KacParams, t: float, n: int, seed: SeedSpec):
    """Endpoints plus the current direction of travel, ((n, d), (n, d))."""
    if t < 0:
        raise DomainError(f"t must be >= 0, got {t}")
    if n < 1:
        raise ParameterError(f"n must be >= 1, got {n}")
    rng = seed.generator()
    states = np.empty((n, params.d))
    dirs = np.empty((n, params.d))
    for i in range(params.d):
        states[:, i], dirs[:, i] = _state_1d(params.a, params.c, float(t), n, rng)
    return states, dirs


def sample_mean_reverting(
    params: KacParams, sched: Schedule, x0: np.ndarray, t: float, seed: SeedSpec
) -> np.ndarray:
    """One draw of M_t = f(t) x0 + K_{g(t)}, shape (d,)."""
    if not (0.0 <= t <= 1.0):
        raise DomainError(f"t must lie in [0, 1], got {t}")
    x0 = np.asarray(x0, dtype=float).reshape(params.d)
    if not np.all(np.isfinite(x0)):
        raise ParameterError("x0 must be finite")
    ft = float(sched.f(t))
    gt = float(sched.g(t))
    noise = sample_state(params, gt, 1, seed)[0]
    return ft * x0 + noise


def sample_flight_path(params: KacParams, t_end: float, seed: SeedSpec) -> np.ndarray:
    """Reference random-flight endpoint: speed c, directions redrawn uniformly on the
    unit sphere at Poisson(a) event times (coupled coordinates).

    Used only for density cross-checks; the product construction everywhere
    else keeps coordinates independent.
    """
    if t_end < 0:
        raise DomainError(f"t_end must be >= 0, got {t_end}")
    rng = seed.generator()
    jumps = _jump_times_1d(params.a, t_end, rng)
    bounds = np.concatenate(([0.0], jumps, [t_end]))
    gaps = np.diff(bounds)
    if params.d == 1:
        dirs = rng.integers(0, 2, size=gaps.size) * 2.0 - 1.0
        dirs = dirs[:, None]
    else:
        raw = rng.standard_normal((gaps.size, params.d))
        dirs = raw / np.linalg.norm(raw, axis=1, keepdims=True)
    return params.c * gaps @ dirs
