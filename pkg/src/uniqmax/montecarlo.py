"""Seeded Monte Carlo estimators for regimes beyond exact reach.

Replication i draws its games from substream (seed, i) of the counter-based
generator, so estimates depend only on (model, n, config) -- never on
chunking or scheduling.  Intervals are Wilson score intervals, which stay
sensible for success counts near 0 or reps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from statistics import NormalDist

from . import pmf as pmf_mod
from ._backend import mc_tally
from ._rng import check_stream_bounds, cumulative_weights, unit
from .errors import DomainError
from .models import PayoffModel, TournamentOutcome, num_games


@dataclass(frozen=True)
class McConfig:
    seed: int
    reps: int
    confidence: float = 0.95

    def __post_init__(self):
        if not (0 <= self.seed < 1 << 64):
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if self.reps < 1:
            raise ValueError(f"reps must be >= 1, got {self.reps}")
        if not (0.0 < self.confidence < 1.0):
            raise ValueError(f"confidence must lie in (0,1), got {self.confidence}")


@dataclass(frozen=True)
class EstimateCI:
    estimate: float
    successes: int
    reps: int
    ci_low: float
    ci_high: float
    seed: int


def wilson_interval(successes: int, reps: int,
                    confidence: float = 0.95) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    z = NormalDist().inv_cdf(0.5 * (1.0 + confidence))
    p_hat = successes / reps
    denom = 1.0 + z * z / reps
    center = (p_hat + z * z / (2.0 * reps)) / denom
    half = z * math.sqrt(p_hat * (1.0 - p_hat) / reps
                         + z * z / (4.0 * reps * reps)) / denom
    return max(0.0, center - half), min(1.0, center + half)


def wilson_sigma(successes: int, reps: int, confidence: float = 0.95) -> float:
    """Half-width of the Wilson interval expressed per standard normal unit."""
    z = NormalDist().inv_cdf(0.5 * (1.0 + confidence))
    low, high = wilson_interval(successes, reps, confidence)
    return (high - low) / (2.0 * z)


@dataclass(frozen=True)
class GameStream:
    """Substream of the counter-based generator for one replication."""

    seed: int
    rep: int = 0

    def uniform(self, game: int) -> float:
        return unit(self.seed, self.rep, game)


def _draw_payoff(cum, u: float) -> int:
    a = 0
    k = len(cum) - 1
    while a < k and u >= cum[a]:
        a += 1
    return a


def sample_tournament(model: PayoffModel, n: int,
                      stream: GameStream) -> TournamentOutcome:
    """Draw one full tournament outcome from the given substream."""
    if n < 2:
        raise DomainError(f"sample_tournament requires n >= 2, got {n}")
    m = num_games(n)
    check_stream_bounds(stream.rep + 1, m)
    cum = cumulative_weights(model.probs_float)
    games = tuple(_draw_payoff(cum, stream.uniform(g)) for g in range(m))
    return TournamentOutcome(n=n, k=model.k, games=games)


def _tally(model: PayoffModel, n: int, cfg: McConfig,
           y_threshold: float) -> tuple[int, int, int]:
    check_stream_bounds(cfg.reps, max(num_games(n), 1))
    cum = cumulative_weights(model.probs_float)
    return mc_tally(model.k, n, cum, cfg.seed, 0, cfg.reps, y_threshold)


def _wrap(successes: int, cfg: McConfig) -> EstimateCI:
    low, high = wilson_interval(successes, cfg.reps, cfg.confidence)
    return EstimateCI(estimate=successes / cfg.reps, successes=successes,
                      reps=cfg.reps, ci_low=low, ci_high=high, seed=cfg.seed)


def estimate_unique_max(model: PayoffModel, n: int, cfg: McConfig) -> EstimateCI:
    """Fraction of replications whose maximum score is attained once."""
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    unique, _, _ = _tally(model, n, cfg, math.inf)
    return _wrap(unique, cfg)


def _resolve_threshold(model: PayoffModel, n: int, epsilon: float,
                       y_threshold: float | None) -> float:
    if y_threshold is not None:
        return float(y_threshold)
    return pmf_mod.threshold(model, n, epsilon).t_n_lattice


def estimate_exceed_threshold(model: PayoffModel, n: int, epsilon: float,
                              cfg: McConfig,
                              y_threshold: float | None = None) -> EstimateCI:
    """Fraction of replications with max score strictly above the threshold."""
    yt = _resolve_threshold(model, n, epsilon, y_threshold)
    _, exceed, _ = _tally(model, n, cfg, yt)
    return _wrap(exceed, cfg)


def estimate_collision_free(model: PayoffModel, n: int, epsilon: float,
                            cfg: McConfig,
                            y_threshold: float | None = None) -> EstimateCI:
    """Fraction of replications with no pair tied above the threshold."""
    yt = _resolve_threshold(model, n, epsilon, y_threshold)
    _, _, collision_free = _tally(model, n, cfg, yt)
    return _wrap(collision_free, cfg)
