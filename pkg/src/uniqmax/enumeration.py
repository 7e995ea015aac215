"""Ground-truth enumeration over all tournament outcomes at small n.

Everything here is exact.  The hot combinatorial pass (kernel backends)
counts outcomes by (sorted score vector, payoff composition); model
probabilities are applied afterwards in rational arithmetic, so one pass per
(k, n) serves every model on the same lattice.  A streaming per-outcome
visitor is kept as the independent reference path; it is also the fallback
when the composition table would be too wide (very fine lattices).
"""

from __future__ import annotations

import itertools
import math
import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterator

import numpy as np

from . import pmf as pmf_mod
from ._backend import census_pass
from .errors import FeasibilityError
from .models import PayoffModel, common_denominator, num_games

DEFAULT_OUTCOME_CAP = 100_000_000
#: widest composition table the aggregated pass will allocate
COLUMN_CAP = 1 << 22


def outcome_cap() -> int:
    """Enumeration cap; UNIQMAX_MAX_OUTCOMES overrides the default."""
    raw = os.environ.get("UNIQMAX_MAX_OUTCOMES")
    if raw is None:
        return DEFAULT_OUTCOME_CAP
    try:
        value = int(raw)
    except ValueError:
        raise FeasibilityError(
            f"UNIQMAX_MAX_OUTCOMES={raw!r} is not an integer")
    if value < 1:
        raise FeasibilityError(
            f"UNIQMAX_MAX_OUTCOMES must be positive, got {value}")
    return value


def outcome_count(k: int, n: int) -> int:
    return (k + 1) ** num_games(n)


def check_feasible(k: int, n: int, cap: int | None = None) -> int:
    """Return the outcome count, or raise naming it when over the cap."""
    cap = outcome_cap() if cap is None else cap
    m = num_games(n)
    count = (k + 1) ** m
    if count > cap:
        raise FeasibilityError(
            f"enumeration at n={n} requires {k + 1}^{m} = {count} outcomes, "
            f"exceeding the cap of {cap}", required=count)
    return count


def iter_outcomes(model: PayoffModel, n: int,
                  cap: int | None = None
                  ) -> Iterator[tuple[tuple[int, ...], Fraction]]:
    """Yield (games, exact probability) for every outcome.

    Order is mixed-radix lexicographic over the canonical game list (first
    game most significant, payoff indices ascending).
    """
    check_feasible(model.k, n, cap)
    m = num_games(n)
    c, q = common_denominator(model)
    den = q ** m
    for games in itertools.product(range(model.k + 1), repeat=m):
        yield games, Fraction(math.prod((c[a] for a in games), start=1), den)


def enumerate_outcomes(model: PayoffModel, n: int,
                       visitor: Callable[[tuple[int, ...], Fraction], None],
                       cap: int | None = None) -> None:
    """Call ``visitor(games, probability)`` for every outcome, in order."""
    for games, prob in iter_outcomes(model, n, cap):
        visitor(games, prob)


@dataclass(frozen=True)
class CensusEntry:
    count: int
    prob: Fraction


@dataclass(frozen=True)
class CensusTable:
    """Distribution of nondecreasing score vectors (Y-units)."""

    n: int
    k: int
    entries: dict[tuple[int, ...], CensusEntry]

    def total_count(self) -> int:
        return sum(e.count for e in self.entries.values())

    def total_prob(self) -> Fraction:
        return sum((e.prob for e in self.entries.values()), Fraction(0))

    def max_score_cdf(self) -> list[Fraction]:
        """P(all scores <= x) for x = 0..k(n-1)."""
        hist = [Fraction(0)] * (self.k * (self.n - 1) + 1)
        for key, entry in self.entries.items():
            hist[key[-1]] += entry.prob
        out = []
        acc = Fraction(0)
        for mass in hist:
            acc += mass
            out.append(acc)
        return out


@dataclass(frozen=True)
class UniqueMaxReport:
    n: int
    r_n: Fraction

    @property
    def p_tie_at_max(self) -> Fraction:
        return 1 - self.r_n


@dataclass(frozen=True)
class NdReport:
    """Joint-vs-product CDF comparison at every lattice point.

    rows are (x, P(all scores <= x), P(one score <= x)^n); the model is
    negatively dependent at the diagonal iff max_gap <= 0.
    """

    n: int
    k: int
    rows: list[tuple[int, Fraction, Fraction]]
    max_gap: Fraction

    @property
    def ok(self) -> bool:
        return self.max_gap <= 0


@lru_cache(maxsize=16)
def _census_counts(k: int, n: int):
    return census_pass(k, n)


def _composition_weights(model: PayoffModel, m: int,
                         realized: np.ndarray) -> dict[int, Fraction]:
    """Exact outcome probability for each realized composition column."""
    c, q = common_denominator(model)
    den = q ** m
    weights: dict[int, Fraction] = {}
    for col in realized.tolist():
        tmp = col
        used = 0
        num = 1
        for a in range(1, model.k + 1):
            m_a = tmp % (m + 1)
            tmp //= m + 1
            used += m_a
            num *= c[a] ** m_a
        num *= c[0] ** (m - used)
        weights[col] = Fraction(num, den)
    return weights


def _aggregated_pass_ok(k: int, n: int) -> bool:
    m = num_games(n)
    if (m + 1) ** k > COLUMN_CAP:
        return False
    bits = max(1, (k * (n - 1)).bit_length())
    return n * bits <= 63


def _census_exact(model: PayoffModel, n: int, cap: int | None):
    """(census dict, player-0 PMF) via the aggregated pass or the visitor."""
    check_feasible(model.k, n, cap)
    k = model.k
    m = num_games(n)
    if _aggregated_pass_ok(k, n):
        keys, rows, marg = _census_counts(k, n)
        realized = np.nonzero(rows.any(axis=0) | marg.any(axis=0))[0]
        weights = _composition_weights(model, m, realized)
        entries: dict[tuple[int, ...], CensusEntry] = {}
        for idx in range(keys.shape[0]):
            key = tuple(int(v) for v in keys[idx])
            prob = Fraction(0)
            count = 0
            for col, w in weights.items():
                cnt = int(rows[idx, col])
                if cnt:
                    prob += cnt * w
                    count += cnt
            entries[key] = CensusEntry(count=count, prob=prob)
        marg_pmf = []
        for y in range(k * (n - 1) + 1):
            acc = Fraction(0)
            for col, w in weights.items():
                cnt = int(marg[y, col])
                if cnt:
                    acc += cnt * w
            marg_pmf.append(acc)
        return entries, marg_pmf

    # fine-lattice fallback: stream outcomes and accumulate directly
    acc: dict[tuple[int, ...], list] = {}
    marg_pmf = [Fraction(0)] * (k * (n - 1) + 1)
    pairs_y = [0] * n
    from .models import game_pairs
    pairs = game_pairs(n)
    for games, prob in iter_outcomes(model, n, cap):
        for p in range(n):
            pairs_y[p] = 0
        for (i, j), a in zip(pairs, games):
            pairs_y[i] += a
            pairs_y[j] += k - a
        key = tuple(sorted(pairs_y))
        slot = acc.get(key)
        if slot is None:
            acc[key] = [1, prob]
        else:
            slot[0] += 1
            slot[1] += prob
        marg_pmf[pairs_y[0]] += prob
    entries = {key: CensusEntry(count=v[0], prob=v[1])
               for key, v in sorted(acc.items())}
    return entries, marg_pmf


def score_census(model: PayoffModel, n: int, cap: int | None = None) -> CensusTable:
    """Exact distribution of the sorted score vector."""
    entries, _ = _census_exact(model, n, cap)
    return CensusTable(n=n, k=model.k, entries=entries)


def enumerated_score_pmf(model: PayoffModel, n: int,
                         cap: int | None = None) -> pmf_mod.LatticePMF:
    """Single labeled player's score PMF, rebuilt by full enumeration.

    An independent oracle for pmf.score_pmf(model, n-1, "exact").
    """
    _, marg = _census_exact(model, n, cap)
    return pmf_mod.LatticePMF(k=model.k, n_games=n - 1, mode="exact",
                              mass=tuple(marg))


def exact_unique_max(model: PayoffModel, n: int,
                     cap: int | None = None) -> UniqueMaxReport:
    """Probability that exactly one player attains the maximum score."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if n == 1:
        # a single player is trivially the unique maximum
        return UniqueMaxReport(n=1, r_n=Fraction(1))
    census = score_census(model, n, cap)
    r = Fraction(0)
    for key, entry in census.entries.items():
        if key[-1] > key[-2]:
            r += entry.prob
    return UniqueMaxReport(n=n, r_n=r)


def pair_ties_above(sorted_scores: tuple[int, ...], y_threshold: float) -> int:
    """Number of unordered pairs tied at a common score above the threshold."""
    w = 0
    run = 1
    for p in range(1, len(sorted_scores) + 1):
        if p < len(sorted_scores) and sorted_scores[p] == sorted_scores[p - 1]:
            run += 1
            continue
        if run > 1 and sorted_scores[p - 1] > y_threshold:
            w += run * (run - 1) // 2
        run = 1
    return w


def wn_distribution_exact(model: PayoffModel, n: int, y_threshold: float,
                          cap: int | None = None) -> dict[int, Fraction]:
    """Exact distribution of the tie-collision count above a Y-threshold."""
    census = score_census(model, n, cap)
    dist: dict[int, Fraction] = {}
    for key, entry in census.entries.items():
        w = pair_ties_above(key, y_threshold)
        dist[w] = dist.get(w, Fraction(0)) + entry.prob
    return dict(sorted(dist.items()))


def wn_mean(dist: dict[int, Fraction]) -> Fraction:
    return sum((w * p for w, p in dist.items()), Fraction(0))


def nd_inequality_check(model: PayoffModel, n: int,
                        cap: int | None = None) -> NdReport:
    """Compare the joint score CDF at the diagonal to the marginal product.

    LHS comes from enumeration, RHS from the convolution marginal; both
    exact.  A nonpositive max gap confirms the product is an upper bound.
    """
    census = score_census(model, n, cap)
    joint = census.max_score_cdf()
    marginal = pmf_mod.score_pmf(model, n - 1, "exact")
    rows: list[tuple[int, Fraction, Fraction]] = []
    max_gap: Fraction | None = None
    acc = Fraction(0)
    mass = list(marginal.mass) + [Fraction(0)] * (
        len(joint) - marginal.support_len)
    for x in range(len(joint)):
        acc += mass[x]
        lhs = joint[x]
        rhs = acc ** n
        rows.append((x, lhs, rhs))
        gap = lhs - rhs
        if max_gap is None or gap > max_gap:
            max_gap = gap
    return NdReport(n=n, k=model.k, rows=rows, max_gap=max_gap)


# --- CSV export -------------------------------------------------------------

def census_rows(table: CensusTable) -> tuple[list[str], list[list[str]]]:
    header = ["score_vector", "count", "prob_num", "prob_den"]
    rows = []
    for key, entry in table.entries.items():
        rows.append([",".join(str(v) for v in key), str(entry.count),
                     str(entry.prob.numerator), str(entry.prob.denominator)])
    return header, rows
