"""Monte Carlo axis sampling, coverage bounds and the adaptive stopping loop.

The estimator is the minimum single-axis MSE over a uniformly drawn subset
of axes (without replacement).  An axis is *good* when its MSE is at most
``tau = tau_ratio * Var(y)``.  The adaptive loop keeps drawing batches until
the Hoeffding lower bound on the good-axis fraction says the current sample
size already hits a good axis with probability at least ``1 - delta``.
"""
import json
import math
from dataclasses import asdict, dataclass, field
from enum import Enum
from typing import NamedTuple

import numpy as np

from . import backend
from .axis_bound import best_score, score_axes
from .errors import ArgumentError, DataError, NumericalError


class StopReason(str, Enum):
    CERTIFIED = "certified"
    FUTILITY = "futility"
    BUDGET_EXHAUSTED = "budget_exhausted"


@dataclass(frozen=True)
class CertifyParams:
    """Knobs of the adaptive loop.

    ``t_max=None`` means the full basis size.  Defaults follow the benchmark
    protocol (``delta_total=0.05``, ``tau_ratio=0.95``, pilot 50, batch 20);
    ``eps_min`` has no published value and defaults to 0.05.
    """

    tau_ratio: float = 0.95
    delta_total: float = 0.05
    t0: int = 50
    b: int = 20
    t_max: int | None = None
    eps_min: float = 0.05
    seed: int = 0

    def __post_init__(self):
        if not 0.0 < self.tau_ratio <= 1.0:
            raise ArgumentError(f"tau_ratio must lie in (0, 1], got {self.tau_ratio}")
        if not 0.0 < self.delta_total < 1.0:
            raise ArgumentError(f"delta_total must lie in (0, 1), got {self.delta_total}")
        if self.t0 < 1 or self.b < 1:
            raise ArgumentError("t0 and b must be at least 1")
        if self.t_max is not None and self.t_max < self.t0:
            raise ArgumentError(f"t_max={self.t_max} is below the pilot size t0={self.t0}")
        if self.eps_min < 0:
            raise ArgumentError("eps_min must be non-negative")

    @property
    def alpha(self):
        return self.delta_total / 2

    @property
    def delta(self):
        return self.delta_total / 2

    def resolved_t_max(self, d):
        t_max = d if self.t_max is None else self.t_max
        if t_max > d:
            raise ArgumentError(f"t_max={t_max} exceeds the number of axes d={d}")
        if self.t0 > t_max:
            raise ArgumentError(f"pilot size t0={self.t0} exceeds t_max={t_max}")
        return t_max


@dataclass
class CertificationResult:
    sampled_axes: list
    mse_hat: float
    best_axis: int
    t_used: int
    s: int
    p_hat: float
    p_lower: float
    t_req: float
    stop_reason: StopReason
    tau: float
    params: CertifyParams = field(default_factory=CertifyParams)

    def to_dict(self, config_name=None):
        out = asdict(self)
        out["stop_reason"] = self.stop_reason.value
        # JSON has no infinity; null stands for t_req = inf
        out["t_req"] = None if math.isinf(self.t_req) else self.t_req
        if config_name is not None:
            out["config"] = config_name
        return out

    def to_json(self, config_name=None, **kwargs):
        return json.dumps(self.to_dict(config_name), **kwargs)


class AxisSampler:
    """Seeded partial Fisher-Yates shuffle over ``range(d)``.

    Each call to :meth:`draw` extends the sample with fresh distinct axes, so
    successive draws form nested subsets.
    """

    def __init__(self, d, seed):
        if d < 1:
            raise ArgumentError("need at least one axis")
        self.d = d
        self.rng = np.random.default_rng(seed)
        self._perm = np.arange(d, dtype=np.int64)
        self._used = 0

    @property
    def drawn(self):
        return self._perm[: self._used].copy()

    def draw(self, k):
        if self._used + k > self.d:
            raise ArgumentError(f"cannot draw {k} more axes: {self.d - self._used} left")
        start = self._used
        picks = self.rng.integers(np.arange(start, start + k), self.d)
        backend.kernels().fisher_yates_swaps(self._perm, start, picks)
        self._used += k
        return self._perm[start:self._used].copy()


def sample_axes(d, t, seed):
    """``t`` distinct axes drawn uniformly from ``range(d)``."""
    return AxisSampler(d, seed).draw(t)


def mc_estimate(data, axes):
    """Minimum single-axis MSE over ``axes``."""
    axes = list(axes)
    if not axes:
        raise ArgumentError("the axis subset is empty")
    return best_score(score_axes(data, axes)).mse


def _log_comb(n, k):
    return math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)


class Coverage(NamedTuple):
    """Hypergeometric hit probability and its with-replacement lower bound."""

    exact: float
    lower: float


def coverage_probability(d, p, t):
    """Probability that ``t`` axes drawn without replacement include a good one.

    ``m = floor(p*d)`` of the ``d`` axes are good.  Returns ``Coverage(exact,
    lower)`` with ``lower = 1 - (1 - m/d)**t``; the bound is taken at the
    realised fraction so it stays valid when ``p*d`` is not an integer.
    """
    if not 0.0 <= p <= 1.0:
        raise ArgumentError(f"p must lie in [0, 1], got {p}")
    if not 1 <= t <= d:
        raise ArgumentError(f"t must lie in [1, d={d}], got {t}")
    m = math.floor(p * d + 1e-9)
    if m == 0:
        exact = 0.0
    elif t > d - m:
        exact = 1.0
    else:
        miss = math.exp(_log_comb(d - m, t) - _log_comb(d, t))
        exact = min(1.0, max(0.0, 1.0 - miss))
    lower = 1.0 - (1.0 - m / d) ** t
    if exact < lower - 1e-12:
        raise NumericalError(f"coverage {exact} below its bound {lower} (d={d}, p={p}, t={t})")
    return Coverage(exact, lower)


def required_sample_size(p, delta):
    """Sufficient sample sizes ``(exact, simple)`` to hit a good axis w.p. 1-delta."""
    if not 0.0 < delta < 1.0:
        raise ArgumentError(f"delta must lie in (0, 1), got {delta}")
    if not 0.0 <= p <= 1.0:
        raise ArgumentError(f"p must lie in [0, 1], got {p}")
    if p == 0.0:
        return math.inf, math.inf
    log_inv_delta = math.log(1.0 / delta)
    if p == 1.0:
        return 0.0, log_inv_delta
    return log_inv_delta / -math.log1p(-p), log_inv_delta / p


def hoeffding_width(t, alpha):
    return math.sqrt(math.log(1.0 / alpha) / (2.0 * t))


def hoeffding_lower(p_hat, t, alpha):
    """One-sided lower confidence bound ``max(0, p_hat - sqrt(log(1/alpha)/(2t)))``."""
    if t < 1:
        raise ArgumentError("t must be at least 1")
    if not 0.0 < alpha < 1.0:
        raise ArgumentError(f"alpha must lie in (0, 1), got {alpha}")
    return max(0.0, p_hat - hoeffding_width(t, alpha))


def _t_required(p_lower, delta):
    if p_lower <= 0.0:
        return math.inf
    if p_lower >= 1.0:
        return 0.0
    return math.log(1.0 / delta) / -math.log1p(-p_lower)


def adaptive_certify(data, params=None):
    """Adaptive Monte Carlo calibration of the axis-aligned bound.

    Draws a pilot of ``t0`` axes, then batches of ``b`` until ``t >= t_req``
    (certified), ``p_hat == 0`` with Hoeffding width below ``eps_min``
    (futility), or ``t`` reaches ``t_max`` (budget exhausted).  The last
    batch is truncated so ``t`` never exceeds ``t_max``.
    """
    params = params or CertifyParams()
    d = data.n_axes
    t_max = params.resolved_t_max(d)
    var_y = data.var_y
    if var_y <= 0.0:
        raise DataError("labels have zero variance; the threshold tau would be 0")
    tau = params.tau_ratio * var_y
    alpha, delta = params.alpha, params.delta

    sampler = AxisSampler(d, params.seed)
    scores = score_axes(data, sampler.draw(params.t0))
    t = params.t0
    s = sum(sc.mse <= tau for sc in scores)

    def stats():
        p_hat = s / t
        eps = hoeffding_width(t, alpha)
        p_lower = max(0.0, p_hat - eps)
        return p_hat, eps, p_lower, _t_required(p_lower, delta)

    reason = StopReason.BUDGET_EXHAUSTED
    while t < t_max:
        p_hat, eps, p_lower, t_req = stats()
        # t is an integer, so t >= t_req is the same test as t >= ceil(t_req)
        if t >= t_req:
            reason = StopReason.CERTIFIED
            break
        if s == 0 and eps < params.eps_min:
            reason = StopReason.FUTILITY
            break
        k = min(params.b, t_max - t)
        new = score_axes(data, sampler.draw(k))
        s += sum(sc.mse <= tau for sc in new)
        scores.extend(new)
        t += k

    p_hat, _, p_lower, t_req = stats()
    best = best_score(scores)
    return CertificationResult(
        sampled_axes=[int(a) for a in sampler.drawn],
        mse_hat=best.mse,
        best_axis=best.axis,
        t_used=t,
        s=int(s),
        p_hat=p_hat,
        p_lower=p_lower,
        t_req=t_req,
        stop_reason=reason,
        tau=tau,
        params=params,
    )
