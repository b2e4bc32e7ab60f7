"""Rounding kernels over a uniform grid of spacing delta.

A value is rounded by scaling it with theta = base**n, rounding the scaled
value to an integer, and scaling back.  Deterministic modes implement the
classic floor/ceiling and round-to-nearest tie rules; stochastic modes round
down or up at random, either with probability proportional to proximity or
according to a tabulated probability curve.

All kernels accept scalars or numpy arrays and are pure given an explicit
:class:`~srlab.streams.RandomStream`; stochastic kernels consume exactly one
uniform draw per rounded element, including elements already on the grid.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Union

import numpy as np

from .streams import RandomStream

__all__ = [
    "RoundingSpec",
    "DeterministicMode",
    "ProbabilityTable",
    "SR",
    "RoundingMode",
    "floor_to_grid",
    "grid_fraction",
    "round_deterministic",
    "sr_probabilities",
    "table_probability",
    "round_stochastic",
    "stochastic_round_with",
    "round_values",
]


@dataclass(frozen=True)
class RoundingSpec:
    """Grid description: ``n`` fractional digits in ``base`` (2 or 10).

    The grid step is ``delta = base**-n`` and the scaling factor is
    ``theta = base**n``; ``n = 0`` means rounding to integers.
    """

    n: int = 0
    base: int = 2

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 0:
            raise ValueError(f"fractional-digit count must be a non-negative integer, got {self.n!r}")
        if self.base not in (2, 10):
            raise ValueError(f"base must be 2 or 10, got {self.base!r}")

    @property
    def theta(self) -> float:
        return float(self.base ** self.n)

    @property
    def delta(self) -> float:
        return 1.0 / self.theta


class DeterministicMode(Enum):
    """Deterministic rounding rules."""

    FLOOR = "floor"
    CEILING = "ceil"
    HALF_UP = "half-up"
    HALF_DOWN = "half-down"
    HALF_EVEN = "half-even"
    HALF_ODD = "half-odd"


@dataclass(eq=False)
class ProbabilityTable:
    """Tabulated probability of rounding down versus grid fraction.

    ``grid`` holds fractions in [0, 1] with endpoints 0 and 1; ``p[j]`` is
    the probability of rounding down at fraction ``grid[j]``.  Between nodes
    the probability is interpolated linearly.
    """

    grid: np.ndarray
    p: np.ndarray
    label: str = "table"

    def __post_init__(self):
        grid = np.asarray(self.grid, dtype=np.float64)
        p = np.asarray(self.p, dtype=np.float64)
        if grid.ndim != 1 or p.ndim != 1 or grid.size != p.size or grid.size < 2:
            raise ValueError("grid and p must be 1-D arrays of equal length >= 2")
        if grid[0] != 0.0 or grid[-1] != 1.0 or np.any(np.diff(grid) <= 0):
            raise ValueError("grid must increase strictly from 0 to 1")
        if np.any(p < 0.0) or np.any(p > 1.0):
            raise ValueError("probabilities must lie in [0, 1]")
        self.grid = grid
        self.p = p

    def __eq__(self, other):
        if not isinstance(other, ProbabilityTable):
            return NotImplemented
        return (
            self.label == other.label
            and np.array_equal(self.grid, other.grid)
            and np.array_equal(self.p, other.p)
        )


class _StochasticSR:
    """Marker for proximity-proportional stochastic rounding."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "SR"


SR = _StochasticSR()

RoundingMode = Union[DeterministicMode, _StochasticSR, ProbabilityTable]


def _prepare(x):
    arr = np.asarray(x, dtype=np.float64)
    if not np.all(np.isfinite(arr)):
        raise ValueError("values to round must be finite")
    return arr, np.isscalar(x) or arr.ndim == 0


def _scaled(arr: np.ndarray, spec: RoundingSpec) -> np.ndarray:
    """theta*x with a one-ulp snap so grid values scale to exact integers."""
    xt = arr * spec.theta
    nearest = np.rint(xt)
    snap = np.abs(xt - nearest) <= np.spacing(np.abs(xt))
    return np.where(snap, nearest, xt)


def _ret(values: np.ndarray, scalar: bool):
    return float(values) if scalar else values


def floor_to_grid(x, spec: RoundingSpec):
    """Largest grid multiple <= x."""
    arr, scalar = _prepare(x)
    return _ret(np.floor(_scaled(arr, spec)) / spec.theta, scalar)


def grid_fraction(x, spec: RoundingSpec):
    """Fractional position of x within its grid interval, in [0, 1).

    Defined via the floor convention, so negative values use the grid point
    below them.
    """
    arr, scalar = _prepare(x)
    xt = _scaled(arr, spec)
    return _ret(xt - np.floor(xt), scalar)


def round_deterministic(x, mode: DeterministicMode, spec: RoundingSpec):
    """Round to the grid with one of the deterministic rules.

    Ties (scaled fraction exactly one half) follow the mode's rule; parity
    for the half-even/half-odd rules is judged on the scaled integer grid.
    """
    if not isinstance(mode, DeterministicMode):
        raise TypeError(f"expected a DeterministicMode, got {mode!r}")
    arr, scalar = _prepare(x)
    xt = _scaled(arr, spec)
    lower = np.floor(xt)
    if mode is DeterministicMode.FLOOR:
        return _ret(lower / spec.theta, scalar)
    if mode is DeterministicMode.CEILING:
        return _ret(np.ceil(xt) / spec.theta, scalar)
    frac = xt - lower
    up = frac > 0.5
    tie = frac == 0.5
    if mode is DeterministicMode.HALF_UP:
        up = up | tie
    elif mode is DeterministicMode.HALF_EVEN:
        up = up | (tie & (lower % 2.0 != 0.0))
    elif mode is DeterministicMode.HALF_ODD:
        up = up | (tie & (lower % 2.0 == 0.0))
    # HALF_DOWN keeps ties on the lower neighbour.
    return _ret((lower + up) / spec.theta, scalar)


def sr_probabilities(x, spec: RoundingSpec):
    """(p_down, p_up) for proximity-proportional stochastic rounding.

    p_up is the scaled grid fraction and p_down = 1 - p_up, so the pair sums
    to one exactly and grid points get p_down = 1.
    """
    arr, scalar = _prepare(x)
    p_up = grid_fraction(arr, spec)
    p_up = np.asarray(p_up, dtype=np.float64)
    p_down = 1.0 - p_up
    return _ret(p_down, scalar), _ret(p_up, scalar)


def table_probability(f, table: ProbabilityTable):
    """Probability of rounding down at fraction ``f``, interpolated linearly."""
    arr = np.asarray(f, dtype=np.float64)
    if np.any(arr < 0.0) or np.any(arr > 1.0) or not np.all(np.isfinite(arr)):
        raise ValueError("fraction must lie in [0, 1]")
    p = np.interp(arr, table.grid, table.p)
    p = np.clip(p, 0.0, 1.0)
    return float(p) if (np.isscalar(f) or arr.ndim == 0) else p


def stochastic_round_with(x, mode: RoundingMode, spec: RoundingSpec, uniforms):
    """Stochastic rounding driven by caller-supplied uniforms in [0, 1).

    ``uniforms`` must have one draw per element of ``x``.  An element rounds
    up exactly when its draw is >= its probability of rounding down; grid
    points never move.
    """
    arr, scalar = _prepare(x)
    u = np.asarray(uniforms, dtype=np.float64)
    if u.shape != arr.shape:
        raise ValueError(f"need one uniform per element: {u.shape} vs {arr.shape}")
    xt = _scaled(arr, spec)
    lower = np.floor(xt)
    frac = xt - lower
    if mode is SR:
        p_down = 1.0 - frac
    elif isinstance(mode, ProbabilityTable):
        p_down = table_probability(frac, mode)
    else:
        raise TypeError(f"expected a stochastic mode, got {mode!r}")
    up = (u >= p_down) & (frac > 0.0)
    return _ret((lower + up) / spec.theta, scalar)


def round_stochastic(x, mode: RoundingMode, spec: RoundingSpec, rng: RandomStream):
    """Round stochastically, consuming one draw from ``rng`` per element."""
    arr, _ = _prepare(x)
    u = rng.uniform(arr.shape)
    return stochastic_round_with(x, mode, spec, u)


def round_values(x, mode: RoundingMode, spec: RoundingSpec, rng: RandomStream | None = None):
    """Round with any mode; deterministic modes ignore ``rng`` and draw nothing."""
    if isinstance(mode, DeterministicMode):
        return round_deterministic(x, mode, spec)
    if rng is None:
        raise ValueError("stochastic modes need a RandomStream")
    return round_stochastic(x, mode, spec, rng)
