"""Closed-form large-n approximations and their comparison to exact values.

Each "compare" helper pairs an exact quantity (from the distribution
engine) with its closed-form counterpart over a grid of sizes, so the
approach of the ratio toward 1 (or toward a stable correction factor) is
directly observable.  All formulas are binary64: they are approximations by
nature and have no exact mode.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import pmf as pmf_mod
from .errors import DomainError
from .models import PayoffModel, moments

SQRT_2PI = math.sqrt(2.0 * math.pi)
SQRT_4PI = math.sqrt(4.0 * math.pi)


def std_normal_pdf(x: float) -> float:
    return math.exp(-0.5 * x * x) / SQRT_2PI


def std_normal_cdf(x: float) -> float:
    # complementary-error-function form keeps relative error ~1e-15 on [-8, 8]
    return 0.5 * math.erfc(-x / math.sqrt(2.0))


def mills_ratio_check(x: float) -> float:
    """(1 - Phi(x)) / (phi(x)/x): tends to 1 as x grows."""
    return (0.5 * math.erfc(x / math.sqrt(2.0))) / (std_normal_pdf(x) / x)


def tail_asymptotic(n: int, epsilon: float = 1.0) -> float:
    """Closed-form limit of the marginal tail P(score > t_n)."""
    if n <= 2:
        raise DomainError(f"tail_asymptotic requires n >= 3, got {n}")
    return math.log(n - 1) ** (epsilon / 2.0) / (SQRT_4PI * (n - 1))


def feller_ratio(n: int, epsilon: float = 1.0) -> float:
    """Diagnostic x_n / (n-1)^(1/6); the tail expansion needs this -> 0."""
    if n <= 2:
        raise DomainError(f"feller_ratio requires n >= 3, got {n}")
    log_n1 = math.log(n - 1)
    radicand = 2.0 * log_n1 - (1.0 + epsilon) * math.log(log_n1)
    if radicand < 0:
        raise DomainError(f"x_n undefined at n={n}, epsilon={epsilon}")
    return math.sqrt(radicand) / (n - 1) ** (1.0 / 6.0)


def llt_gaussian(model: PayoffModel, n_games: int, y: int) -> float:
    """Gaussian local approximation to P(score = y/k) on the Y-lattice.

    The 1/k factor is the Jacobian of the lattice spacing in score units.
    """
    if n_games < 1:
        raise DomainError(f"n_games must be >= 1, got {n_games}")
    mo = moments(model)
    sd = mo.sigma * math.sqrt(n_games)
    z = (y / model.k - n_games * float(mo.mu)) / sd
    return std_normal_pdf(z) / (model.k * sd)


def llt_sup_error(model: PayoffModel, n_games: int, mode: str = "float") -> float:
    """sup over the lattice of |sigma_Y*sqrt(m)*P(S=y) - phi(z_y)|.

    sigma_Y = k*sigma is the standard deviation of one Y-payoff; the local
    limit theorem makes this sup O(1/sqrt(m)).
    """
    mo = moments(model)
    sigma_y = model.k * mo.sigma
    mu_y = model.k * float(mo.mu)
    sd = sigma_y * math.sqrt(n_games)
    dist = pmf_mod.score_pmf(model, n_games, mode)
    worst = 0.0
    for y in range(dist.support_len):
        z = (y - n_games * mu_y) / sd
        err = abs(sd * float(dist.mass[y]) - std_normal_pdf(z))
        if err > worst:
            worst = err
    return worst


def lattice_ceil(k: int, score_value: float) -> int:
    """Smallest Y-lattice point >= a score-unit value."""
    return math.ceil(k * score_value)


@dataclass(frozen=True)
class Claim2Row:
    x: float
    y_lattice: int
    y_lattice_next: int
    p_x: float
    p_x_next: float
    ratio: float | None
    gaussian_ratio: float
    violated: bool


@dataclass(frozen=True)
class Claim2Report:
    n: int
    model_label: str
    rows: list[Claim2Row]

    @property
    def violations(self) -> list[float]:
        return [row.x for row in self.rows if row.violated]


def claim2_check(model: PayoffModel, n: int,
                 x_grid: Sequence[float]) -> Claim2Report:
    """Check point-mass monotonicity P(x-shift) >= P((x+1)-shift).

    Evaluates the exact (n-2)-game PMF at the lattice ceilings of
    (n-2)*mu + x*sigma*sqrt(n-2) for x and x+1; also reports the observed
    ratio next to the Gaussian prediction e^(x+1/2) (raw values, no
    assertion).
    """
    if n < 3:
        raise DomainError(f"claim2_check requires n >= 3, got {n}")
    mo = moments(model)
    dist = pmf_mod.score_pmf(model, n - 2, "exact")
    mu_f = float(mo.mu)
    sd = mo.sigma * math.sqrt(n - 2)
    rows = []
    for x in x_grid:
        if x <= 0:
            raise DomainError(f"x_grid values must be positive, got {x}")
        y_a = lattice_ceil(model.k, (n - 2) * mu_f + x * sd)
        y_b = lattice_ceil(model.k, (n - 2) * mu_f + (x + 1.0) * sd)
        p_a = dist.point(y_a)
        p_b = dist.point(y_b)
        violated = p_a < p_b  # exact rational comparison
        ratio = float(p_a / p_b) if p_b > 0 else None
        rows.append(Claim2Row(
            x=float(x), y_lattice=y_a, y_lattice_next=y_b,
            p_x=float(p_a), p_x_next=float(p_b), ratio=ratio,
            gaussian_ratio=math.exp(x + 0.5), violated=violated))
    return Claim2Report(n=n, model_label=model.label, rows=rows)


def claim3_asymptotic(model: PayoffModel, n: int, epsilon: float = 1.0) -> float:
    """Closed-form point mass at the shifted threshold lattice cell."""
    if n <= 3:
        raise DomainError(f"claim3_asymptotic requires n >= 4, got {n}")
    sigma = moments(model).sigma
    log_n2 = math.log(n - 2)
    return (log_n2 ** (epsilon / 2.0)
            / (sigma * math.sqrt(n - 2) * SQRT_2PI * (n - 2)))


def claim3_exact(model: PayoffModel, n: int, epsilon: float = 1.0,
                 mode: str = "float") -> float:
    """Exact P(score over n-2 games = ceil of t_{n-1} - 1 on the Y-lattice)."""
    thr = pmf_mod.threshold(model, n - 1, epsilon)
    y_star = lattice_ceil(model.k, thr.t_n - 1.0)
    dist = pmf_mod.score_pmf(model, n - 2, mode)
    return float(dist.point(y_star))


def rhs_asymptotic(model: PayoffModel, n: int, epsilon: float = 1.0) -> float:
    """Closed-form limit of the pairwise-tie upper bound; tends to 0."""
    if n <= 3:
        raise DomainError(f"rhs_asymptotic requires n >= 4, got {n}")
    sigma = moments(model).sigma
    log_n2 = math.log(n - 2)
    pairs = n * (n - 1) / 2.0
    return (pairs
            / (sigma * math.sqrt(n - 2))
            * (log_n2 ** (epsilon / 2.0) / (SQRT_2PI * (n - 2)))
            * (log_n2 ** (epsilon / 2.0) / (SQRT_4PI * (n - 2))))


@dataclass(frozen=True)
class RatioDiagnostic:
    """Exact vs asymptotic values over a grid, with their ratios."""

    quantity: str
    model_label: str
    epsilon: float
    n_grid: list[int]
    exact_values: list[float]
    asymptotic_values: list[float]
    ratios: list[float] = field(init=False)

    def __post_init__(self):
        if not (len(self.n_grid) == len(self.exact_values)
                == len(self.asymptotic_values)):
            raise ValueError("grid and value vectors must have equal length")
        object.__setattr__(self, "ratios", [
            e / a if a != 0 else math.nan
            for e, a in zip(self.exact_values, self.asymptotic_values)])


def tail_compare(model: PayoffModel, n_grid: Sequence[int],
                 epsilon: float = 1.0, mode: str = "float") -> RatioDiagnostic:
    """Exact marginal tail beyond t_n vs its closed form, over n."""
    exact, asym = [], []
    for n in n_grid:
        thr = pmf_mod.threshold(model, n, epsilon)
        dist = pmf_mod.score_pmf(model, n - 1, mode)
        exact.append(float(pmf_mod.tail_prob(dist, thr.t_n_lattice)))
        asym.append(tail_asymptotic(n, epsilon))
    return RatioDiagnostic("tail", model.label, epsilon, list(n_grid), exact, asym)


def claim3_compare(model: PayoffModel, n_grid: Sequence[int],
                   epsilon: float = 1.0, mode: str = "float") -> RatioDiagnostic:
    exact = [claim3_exact(model, n, epsilon, mode) for n in n_grid]
    asym = [claim3_asymptotic(model, n, epsilon) for n in n_grid]
    return RatioDiagnostic("claim3", model.label, epsilon, list(n_grid), exact, asym)


def rhs_compare(model: PayoffModel, n_grid: Sequence[int],
                epsilon: float = 1.0, mode: str = "float") -> RatioDiagnostic:
    exact = [float(pmf_mod.expected_wn_upper(model, n, epsilon, mode))
             for n in n_grid]
    asym = [rhs_asymptotic(model, n, epsilon) for n in n_grid]
    return RatioDiagnostic("rhs_bound", model.label, epsilon, list(n_grid), exact, asym)


def llt_compare(model: PayoffModel, games_grid: Sequence[int],
                mode: str = "float") -> RatioDiagnostic:
    """Sup lattice error vs the 1/sqrt(m) reference; ratio = scaled error."""
    exact = [llt_sup_error(model, m, mode) for m in games_grid]
    asym = [1.0 / math.sqrt(m) for m in games_grid]
    return RatioDiagnostic("llt_sup_error", model.label, math.nan,
                           list(games_grid), exact, asym)


def ratio_rows(diag: RatioDiagnostic) -> tuple[list[str], list[list[str]]]:
    header = ["n", "exact", "asymptotic", "ratio"]
    rows = [[str(n), repr(e), repr(a), repr(r)]
            for n, e, a, r in zip(diag.n_grid, diag.exact_values,
                                  diag.asymptotic_values, diag.ratios)]
    return header, rows


def claim2_rows(report: Claim2Report) -> tuple[list[str], list[list[str]]]:
    header = ["x", "y_lattice", "y_lattice_next", "p_x", "p_x_next",
              "ratio", "gaussian_ratio", "violated"]
    rows = []
    for row in report.rows:
        rows.append([repr(row.x), str(row.y_lattice), str(row.y_lattice_next),
                     repr(row.p_x), repr(row.p_x_next),
                     "" if row.ratio is None else repr(row.ratio),
                     repr(row.gaussian_ratio), str(int(row.violated))])
    return header, rows
