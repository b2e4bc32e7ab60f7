"""Monte-Carlo rounding studies: summation, Newton square roots, inner
products, and the variance-bound validation grid.

Every study is parameterized by a rounding mode and a seed.  Repetition r
of an experiment draws from substream ``16 + r`` of the root stream, so
repetitions can run in any order or in parallel with identical results;
input data comes from the low-numbered substreams and is generated once
per seed, independent of the rounding mode under test.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .rounding import (
    SR,
    DeterministicMode,
    ProbabilityTable,
    RoundingMode,
    RoundingSpec,
    round_stochastic,
    round_values,
    stochastic_round_with,
)
from .stats import StatsSummary, sr_variance_theoretical, summarize, variance_bound
from .streams import RandomStream, draws_at

__all__ = [
    "CaseId",
    "NewtonConfig",
    "ExperimentReport",
    "BreakdownError",
    "SQRT_TEST_VALUES",
    "DOT_SIZES",
    "mode_label",
    "gen_case_inputs",
    "rounded_sum",
    "run_summation_experiment",
    "newton_sqrt_rounded",
    "run_sqrt_experiment",
    "gen_sine_vectors",
    "rounded_inner_product",
    "run_inner_product_experiment",
    "VarianceBoundGrid",
    "validate_variance_bound",
]

_REP_STREAM_BASE = 16

SQRT_TEST_VALUES = (0.30146, 6.55501, 51.16904, 357.00272, 8133.27762)
DOT_SIZES = (50, 200, 400, 600, 800, 1000)


class BreakdownError(ArithmeticError):
    """A rounded operand or iterate became zero, so a quotient is undefined."""


class CaseId(Enum):
    """Summation input cases: repeated/non-repeated values over one or two
    unit intervals."""

    I = "I"
    II = "II"
    III = "III"
    IV = "IV"


# samples, upper range bound, quantize to one decimal digit (forces repeats)
_CASE_PARAMS = {
    CaseId.I: (10_000, 1.0, True),
    CaseId.II: (10_000, 2.0, True),
    CaseId.III: (10, 1.0, False),
    CaseId.IV: (20, 2.0, False),
}


@dataclass(frozen=True)
class NewtonConfig:
    """Square-root iteration settings; convergence is |x_{k+1} - x_k| <= tol."""

    x0: float = 1.0
    tol: float = 1e-5
    n_max: int = 100
    spec: RoundingSpec = RoundingSpec(3, 10)

    def __post_init__(self):
        if self.tol <= 0.0:
            raise ValueError("tol must be positive")
        if self.n_max < 1:
            raise ValueError("n_max must be at least 1")


@dataclass(frozen=True)
class ExperimentReport:
    """One table row: a rounding mode's statistics for one experiment subject."""

    label: str
    subject: str
    summary: StatsSummary | None
    seed: int
    n_reps: int
    digest: str
    n_breakdowns: int = 0
    n_nonconverged: int = 0
    not_solvable: bool = False


def mode_label(mode: RoundingMode) -> str:
    if isinstance(mode, DeterministicMode):
        return mode.value
    if mode is SR:
        return "sr"
    if isinstance(mode, ProbabilityTable):
        return mode.label
    raise TypeError(f"not a rounding mode: {mode!r}")


def _digest(arr: np.ndarray) -> str:
    return hashlib.sha256(np.ascontiguousarray(arr).tobytes()).hexdigest()[:16]


def _rep_stream(root: RandomStream, r: int) -> RandomStream:
    return root.substream(_REP_STREAM_BASE + r)


def gen_case_inputs(case: CaseId, seed: int) -> np.ndarray:
    """Uniform inputs for a summation case, fixed for a given seed.

    Repeated-value cases quantize the draws to one decimal digit, which
    yields roughly a thousand copies of each tenth (including the tie value
    one half); the small cases are redrawn until all values are distinct.
    """
    n, hi, quantize = _CASE_PARAMS[case]
    tag = list(CaseId).index(case) + 1
    rng = RandomStream(seed).substream(tag)
    x = rng.uniform(n) * hi
    if quantize:
        return np.round(x, 1)
    while np.unique(x).size < n:
        x = rng.uniform(n) * hi
    return x


def rounded_sum(xs, mode: RoundingMode, spec: RoundingSpec = RoundingSpec(), rng: RandomStream | None = None) -> float:
    """Sum of element-wise rounded values (one draw per element when stochastic)."""
    return float(np.sum(round_values(np.asarray(xs, dtype=np.float64), mode, spec, rng)))


def run_summation_experiment(case: CaseId, mode: RoundingMode, n_reps: int = 10_000, seed: int = 0) -> ExperimentReport:
    """Repeat the rounded summation of a case's inputs and summarize.

    Deterministic modes are evaluated once (their variance is identically
    zero); stochastic modes run ``n_reps`` repetitions on fresh substreams.
    """
    xs = gen_case_inputs(case, seed)
    exact = float(np.sum(xs))
    spec = RoundingSpec()
    if isinstance(mode, DeterministicMode):
        outcomes = np.asarray([rounded_sum(xs, mode, spec)])
    else:
        root = RandomStream(seed)
        outcomes = np.empty(n_reps)
        for r in range(n_reps):
            outcomes[r] = rounded_sum(xs, mode, spec, _rep_stream(root, r))
    return ExperimentReport(
        label=mode_label(mode),
        subject=case.value,
        summary=summarize(outcomes, exact),
        seed=seed,
        n_reps=outcomes.size,
        digest=_digest(xs),
    )


def newton_sqrt_rounded(a: float, mode: RoundingMode | None, cfg: NewtonConfig, rng: RandomStream | None = None):
    """One rounded Newton square-root run; returns (value, n_it, converged).

    The radicand is rounded once up front; each step rounds the quotient and
    then the halved sum.  ``mode=None`` runs the iteration in plain double
    precision.  Raises :class:`BreakdownError` when the rounded radicand or
    an iterate hits zero.
    """
    a = float(a)
    if a <= 0.0:
        raise ValueError("radicand must be positive")
    if mode is None:
        fl = lambda v: v
    else:
        fl = lambda v: round_values(v, mode, cfg.spec, rng)
    fa = fl(a)
    if fa == 0.0:
        raise BreakdownError(f"rounded radicand of {a} is zero")
    x = float(cfg.x0)
    for k in range(1, cfg.n_max + 1):
        if x == 0.0:
            raise BreakdownError("iterate rounded to zero")
        q = fl(fa / x)
        x_new = fl(0.5 * (x + q))
        if abs(x_new - x) <= cfg.tol:
            return x_new, k, True
        x = x_new
    return x, cfg.n_max, False


def _newton_many(a: float, mode: RoundingMode, cfg: NewtonConfig, phases: np.ndarray):
    """Lockstep vectorization of `newton_sqrt_rounded` over repetitions.

    Each repetition consumes draws from its own phase in the same order as
    the scalar routine, so results are bit-identical to a serial loop.
    """
    spec = cfg.spec
    n = phases.size
    counters = np.zeros(n, dtype=np.uint64)

    def fl(vals, idx):
        u = draws_at(phases[idx], counters[idx])
        counters[idx] += np.uint64(1)
        return stochastic_round_with(vals, mode, spec, u)

    fa = fl(np.full(n, float(a)), np.arange(n))
    breakdown = fa == 0.0
    x = np.full(n, float(cfg.x0))
    converged = np.zeros(n, dtype=bool)
    n_it = np.full(n, cfg.n_max, dtype=np.int64)
    active = ~breakdown
    for k in range(1, cfg.n_max + 1):
        idx = np.flatnonzero(active)
        if idx.size == 0:
            break
        zero = x[idx] == 0.0
        if zero.any():
            breakdown[idx[zero]] = True
            active[idx[zero]] = False
            idx = idx[~zero]
            if idx.size == 0:
                break
        q = fl(fa[idx] / x[idx], idx)
        x_new = fl(0.5 * (x[idx] + q), idx)
        conv = np.abs(x_new - x[idx]) <= cfg.tol
        x[idx] = x_new
        done = idx[conv]
        converged[done] = True
        n_it[done] = k
        active[done] = False
    value = np.where(breakdown, np.nan, x)
    return value, n_it, converged, breakdown


def run_sqrt_experiment(
    a: float,
    mode: RoundingMode,
    cfg: NewtonConfig | None = None,
    n_reps: int = 10_000,
    seed: int = 0,
) -> ExperimentReport:
    """Repeat the rounded square root of ``a`` and summarize against sqrt(a).

    Breakdown repetitions are counted and excluded from the value statistics;
    non-converged repetitions contribute their last iterate but not the mean
    iteration count.  A report where every repetition broke down is flagged
    not solvable.
    """
    cfg = cfg or NewtonConfig()
    exact = math.sqrt(a)
    if isinstance(mode, DeterministicMode):
        try:
            value, n_it, conv = newton_sqrt_rounded(a, mode, cfg)
            values = np.asarray([value])
            n_its = np.asarray([n_it])
            convs = np.asarray([conv])
            n_break = 0
        except BreakdownError:
            values = np.asarray([])
            n_its = np.asarray([], dtype=np.int64)
            convs = np.asarray([], dtype=bool)
            n_break = 1
        n_total = 1
    else:
        root = RandomStream(seed)
        phases = np.asarray([_rep_stream(root, r).phase for r in range(n_reps)], dtype=np.uint64)
        value, n_it, convs, breakdown = _newton_many(a, mode, cfg, phases)
        values = value[~breakdown]
        n_its = n_it[~breakdown]
        convs = convs[~breakdown]
        n_break = int(np.sum(breakdown))
        n_total = n_reps
    if values.size == 0:
        summary = None
    else:
        n_it_mean = float(np.mean(n_its[convs])) if convs.any() else None
        summary = summarize(values, exact, n_it_mean=n_it_mean)
    return ExperimentReport(
        label=mode_label(mode),
        subject=repr(float(a)),
        summary=summary,
        seed=seed,
        n_reps=n_total,
        digest=_digest(np.asarray([a])),
        n_breakdowns=n_break,
        n_nonconverged=int(values.size - np.sum(convs)),
        not_solvable=values.size == 0,
    )


def gen_sine_vectors(n: int):
    """(sin(y), y) with y equidistant over the closed interval [0, 2*pi]."""
    if n < 2:
        raise ValueError("need at least two points")
    y = (2.0 * np.pi) * np.arange(n) / (n - 1.0)
    return np.sin(y), y


def rounded_inner_product(x, y, mode: RoundingMode, spec: RoundingSpec = RoundingSpec(), rng: RandomStream | None = None) -> float:
    """Inner product of element-wise rounded vectors.

    With integer rounding the term products are already on the grid and are
    summed directly; with a finer grid each product is rounded again.  Draw
    order for stochastic modes: all of x, then all of y, then (if needed)
    the products.
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape:
        raise ValueError(f"length mismatch: {x.shape} vs {y.shape}")
    prod = round_values(x, mode, spec, rng) * round_values(y, mode, spec, rng)
    if spec.n == 0:
        return float(np.sum(prod))
    return float(np.sum(round_values(prod, mode, spec, rng)))


def run_inner_product_experiment(size: int, mode: RoundingMode, n_reps: int = 10_000, seed: int = 0) -> ExperimentReport:
    """Repeat the integer-rounded inner product of the sine vectors of ``size``."""
    x, y = gen_sine_vectors(size)
    exact = float(np.dot(x, y))
    spec = RoundingSpec()
    if isinstance(mode, DeterministicMode):
        outcomes = np.asarray([rounded_inner_product(x, y, mode, spec)])
    else:
        root = RandomStream(seed)
        outcomes = np.empty(n_reps)
        for r in range(n_reps):
            outcomes[r] = rounded_inner_product(x, y, mode, spec, _rep_stream(root, r))
    return ExperimentReport(
        label=mode_label(mode),
        subject=str(size),
        summary=summarize(outcomes, exact),
        seed=seed,
        n_reps=outcomes.size,
        digest=_digest(np.concatenate([x, y])),
    )


@dataclass(frozen=True)
class VarianceBoundGrid:
    """Per-x empirical and theoretical variances plus the uniform bound."""

    x: np.ndarray
    v_empirical: np.ndarray
    v_theoretical: np.ndarray
    bound: float


def validate_variance_bound(
    n_bits: int = 4,
    x_max: float = 2.0,
    step: float = 1e-4,
    draws: int = 10_000,
    seed: int = 0,
) -> VarianceBoundGrid:
    """Empirical vs. theoretical rounding variance over a fine x grid."""
    spec = RoundingSpec(n_bits, 2)
    n_pts = int(round(x_max / step)) + 1
    xs = np.arange(n_pts) * step
    root = RandomStream(seed)
    v_emp = np.empty(n_pts)
    for j in range(n_pts):
        outs = round_stochastic(np.full(draws, xs[j]), SR, spec, _rep_stream(root, j))
        v_emp[j] = np.var(outs)
    return VarianceBoundGrid(
        x=xs,
        v_empirical=v_emp,
        v_theoretical=np.asarray(sr_variance_theoretical(xs, spec)),
        bound=variance_bound(spec),
    )
