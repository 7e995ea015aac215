"""Score distributions on the integer Y-lattice.

A player's score over g games is a sum of g i.i.d. payoffs; its PMF is the
g-th convolution power of the single-game PMF, computed by binary
exponentiation with direct schoolbook multiplication.  Exact mode keeps
integer numerators over a common power-of-Q denominator (no rounding at
all); float mode uses binary64 with renormalization after every product,
recording the cumulative drift.

Also here: the score threshold used throughout (mean plus a slowly growing
multiple of the standard deviation), exact tie-collision expectations above
a threshold, and the closed-form pairwise upper bound on them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import numpy as np

from .errors import DomainError, FeasibilityError
from .models import PayoffModel, common_denominator, moments

DEFAULT_SUPPORT_CAP = 10_000_000

#: float-mode renormalization drift above which output metadata flags quality
DRIFT_WARN = 1e-9


@dataclass(frozen=True)
class LatticePMF:
    """PMF of a Y-lattice score over ``n_games`` games.

    ``mass`` has length ``k*n_games + 1``: a tuple of exact rationals in
    exact mode, a float64 array in float mode.  ``renorm_drift`` is the
    accumulated |sum - 1| absorbed by float-mode renormalization.
    """

    k: int
    n_games: int
    mode: str
    mass: Union[tuple[Fraction, ...], np.ndarray]
    renorm_drift: float = 0.0

    @property
    def support_len(self) -> int:
        return self.k * self.n_games + 1

    @property
    def max_y(self) -> int:
        return self.k * self.n_games

    @property
    def quality_warning(self) -> bool:
        return self.renorm_drift > DRIFT_WARN

    def point(self, y: int) -> Union[Fraction, float]:
        """Mass at lattice point y (zero outside the support)."""
        if 0 <= y <= self.max_y:
            return self.mass[y]
        return Fraction(0) if self.mode == "exact" else 0.0

    def mass_floats(self) -> np.ndarray:
        if self.mode == "float":
            return self.mass
        return np.array([float(p) for p in self.mass], dtype=np.float64)


def _poly_mul_int(a: list[int], b: list[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if not ai:
            continue
        for j, bj in enumerate(b):
            out[i + j] += ai * bj
    return out


def score_pmf(model: PayoffModel, n_games: int, mode: str = "exact",
              support_cap: int = DEFAULT_SUPPORT_CAP) -> LatticePMF:
    """PMF of the sum of ``n_games`` independent payoffs, in Y-units."""
    if n_games < 0:
        raise DomainError(f"n_games must be >= 0, got {n_games}")
    if mode not in ("exact", "float"):
        raise ValueError(f"mode must be 'exact' or 'float', got {mode!r}")
    support = model.k * n_games + 1
    if support > support_cap:
        raise FeasibilityError(
            f"PMF support length {support} exceeds cap {support_cap}",
            required=support)

    if n_games == 0:
        mass = (Fraction(1),) if mode == "exact" else np.ones(1)
        return LatticePMF(model.k, 0, mode, mass)

    if mode == "exact":
        c, q = common_denominator(model)
        coeffs = _int_power(c, n_games)
        den = q ** n_games
        mass = tuple(Fraction(v, den) for v in coeffs)
        return LatticePMF(model.k, n_games, "exact", mass)

    base = np.asarray(model.probs_float, dtype=np.float64)
    result, drift = _float_power(base, n_games)
    return LatticePMF(model.k, n_games, "float", result, renorm_drift=drift)


def _int_power(base: list[int], n: int) -> list[int]:
    result = None
    b = list(base)
    while True:
        if n & 1:
            result = b if result is None else _poly_mul_int(result, b)
        n >>= 1
        if not n:
            return result
        b = _poly_mul_int(b, b)


def _float_power(base: np.ndarray, n: int) -> tuple[np.ndarray, float]:
    drift = 0.0

    def mul(x, y):
        nonlocal drift
        out = np.convolve(x, y)
        s = out.sum()
        drift += abs(s - 1.0)
        return out / s

    result = None
    b = base
    while True:
        if n & 1:
            result = b.copy() if result is None else mul(result, b)
        n >>= 1
        if not n:
            return result, drift
        b = mul(b, b)


def first_lattice_above(y_threshold: float) -> int:
    """Smallest integer y with y > y_threshold (exact int/float comparison)."""
    if math.isinf(y_threshold):
        raise DomainError("threshold must be finite")
    return math.floor(y_threshold) + 1


def tail_prob(pmf: LatticePMF, y_threshold: float) -> Union[Fraction, float]:
    """P(score > y_threshold), strict, with the threshold in Y-units."""
    y0 = max(first_lattice_above(y_threshold), 0)
    if y0 > pmf.max_y:
        return Fraction(0) if pmf.mode == "exact" else 0.0
    if pmf.mode == "exact":
        return sum(pmf.mass[y0:], Fraction(0))
    return math.fsum(pmf.mass[y0:])


@dataclass(frozen=True)
class Threshold:
    """Score threshold (n-1)*mu + x_n*sqrt(n-1)*sigma and its Y-image."""

    n: int
    epsilon: float
    x_n: float
    t_n: float
    t_n_lattice: float


def threshold(model: PayoffModel, n: int, epsilon: float = 1.0) -> Threshold:
    """Threshold for tournament size n; domain error when undefined."""
    if n <= 2:
        raise DomainError(f"threshold requires n >= 3, got n={n}")
    if epsilon <= 0:
        raise DomainError(f"epsilon must be > 0, got {epsilon}")
    log_n1 = math.log(n - 1)
    radicand = 2.0 * log_n1 - (1.0 + epsilon) * math.log(log_n1)
    if radicand < 0:
        raise DomainError(
            f"x_n radicand is negative ({radicand:.6g}) at n={n}, "
            f"epsilon={epsilon}; the threshold is undefined there")
    x_n = math.sqrt(radicand)
    mo = moments(model)
    t_n = (n - 1) * float(mo.mu) + x_n * math.sqrt(n - 1) * mo.sigma
    return Threshold(n=n, epsilon=epsilon, x_n=x_n, t_n=t_n,
                     t_n_lattice=model.k * t_n)


ThresholdLike = Union[Threshold, float, int]


def _as_y_threshold(thr: ThresholdLike) -> float:
    if isinstance(thr, Threshold):
        return thr.t_n_lattice
    return float(thr)


def expected_wn_exact(model: PayoffModel, n: int, thr: ThresholdLike,
                      mode: str = "exact",
                      support_cap: int = DEFAULT_SUPPORT_CAP
                      ) -> Union[Fraction, float]:
    """E[number of player pairs tied at a common score above the threshold].

    Decomposes over the shared game of a pair: with S the score over the
    n-2 games against third parties and A the pair's own game,

        E = C(n,2) * sum_{H > yt} sum_A P(A) P(S = H-A) P(S = H-(k-A))

    on the Y-lattice.  ``thr`` is a Threshold or an explicit Y-unit value.
    """
    if n < 2:
        raise DomainError(f"expected_wn_exact requires n >= 2, got {n}")
    yt = _as_y_threshold(thr)
    k = model.k
    pmf = score_pmf(model, n - 2, mode, support_cap=support_cap)
    h_lo = max(first_lattice_above(yt), 0)
    h_hi = k * (n - 1)
    pairs = n * (n - 1) // 2

    if mode == "exact":
        total = Fraction(0)
        for a, p_a in enumerate(model.probs):
            acc = Fraction(0)
            for h in range(h_lo, h_hi + 1):
                acc += pmf.point(h - a) * pmf.point(h - (k - a))
            total += p_a * acc
        return pairs * total

    terms = []
    for a, p_a in enumerate(model.probs_float):
        inner = math.fsum(
            pmf.point(h - a) * pmf.point(h - (k - a))
            for h in range(h_lo, h_hi + 1))
        terms.append(p_a * inner)
    return pairs * math.fsum(terms)


def expected_wn_upper(model: PayoffModel, n: int, epsilon: float = 1.0,
                      mode: str = "exact",
                      support_cap: int = DEFAULT_SUPPORT_CAP
                      ) -> Union[Fraction, float]:
    """Closed-form upper bound on expected_wn_exact at the size-n threshold.

    C(n,2) * sum over the lattice window h > t_{n-1} - 1 (score units) of
    the squared point mass of the (n-2)-game score.
    """
    if n < 4:
        raise DomainError(f"expected_wn_upper requires n >= 4, got {n}")
    thr = threshold(model, n - 1, epsilon)
    k = model.k
    yt = k * (thr.t_n - 1.0)
    pmf = score_pmf(model, n - 2, mode, support_cap=support_cap)
    h_lo = max(first_lattice_above(yt), 0)
    pairs = n * (n - 1) // 2
    if h_lo > pmf.max_y:
        return Fraction(0) if mode == "exact" else 0.0
    if mode == "exact":
        return pairs * sum((pmf.mass[h] ** 2 for h in range(h_lo, pmf.max_y + 1)),
                           Fraction(0))
    return pairs * math.fsum(v * v for v in pmf.mass[h_lo:])


def prop1_lower_bound(model: PayoffModel, n: int, epsilon: float = 1.0,
                      mode: str = "exact",
                      support_cap: int = DEFAULT_SUPPORT_CAP) -> float:
    """Lower bound 1 - (1-p)^n on P(max score > t_n), p the marginal tail.

    Valid because the joint CDF of the scores at a common point is at most
    the product of the marginals.  Exact mode evaluates the bound in
    rational arithmetic before a single final rounding.
    """
    thr = threshold(model, n, epsilon)
    pmf = score_pmf(model, n - 1, mode, support_cap=support_cap)
    p = tail_prob(pmf, thr.t_n_lattice)
    if mode == "exact":
        return float(1 - (1 - p) ** n)
    if p >= 1.0:
        return 1.0
    return -math.expm1(n * math.log1p(-p))


def pmf_metadata(model: PayoffModel, pmf: LatticePMF) -> list[tuple[str, str]]:
    """Metadata pairs for PMF exports."""
    meta = [("model", model.label), ("n_games", str(pmf.n_games)),
            ("mode", pmf.mode)]
    if pmf.mode == "float":
        meta.append(("renorm_drift", repr(pmf.renorm_drift)))
        meta.append(("quality_warning", str(pmf.quality_warning).lower()))
    return meta


def pmf_rows(pmf: LatticePMF) -> tuple[list[str], list[list[str]]]:
    """CSV header and rows for a PMF export."""
    if pmf.mode == "exact":
        header = ["y", "mass_num", "mass_den"]
        rows = [[str(y), str(m.numerator), str(m.denominator)]
                for y, m in enumerate(pmf.mass)]
    else:
        header = ["y", "mass"]
        rows = [[str(y), repr(float(m))] for y, m in enumerate(pmf.mass)]
    return header, rows
