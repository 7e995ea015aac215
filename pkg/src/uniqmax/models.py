"""Payoff models for round-robin tournaments between equally strong players.

A model assigns each game a payoff in {0, 1/k, ..., 1} (the two opponents'
payoffs always sum to 1), with a probability vector that is symmetric under
a -> k-a and strictly positive everywhere.  All probabilities are stored as
exact rationals with a binary64 mirror; scores are handled in integer
Y-units (Y = k * score) so that every downstream quantity lives on an
integer lattice.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

from .errors import ModelSpecError

RationalLike = Fraction | int | str


def _as_fraction(value) -> Fraction:
    if isinstance(value, float):
        # floats are exact binary rationals; accept them verbatim
        return Fraction(value)
    return Fraction(value)


@dataclass(frozen=True)
class PayoffModel:
    """A payoff lattice denominator ``k`` plus the atom probabilities.

    ``probs[a]`` is the probability that the first-listed player of a pair
    receives ``a/k`` (the opponent then receives ``(k-a)/k``).
    """

    k: int
    probs: tuple[Fraction, ...]
    label: str = field(default="", compare=False)

    def __init__(self, k: int, probs: Sequence[RationalLike], label: str = ""):
        if not isinstance(k, int) or k < 1:
            raise ModelSpecError(f"k must be a positive integer, got {k!r}")
        probs = tuple(_as_fraction(p) for p in probs)
        if len(probs) != k + 1:
            raise ModelSpecError(
                f"probs must have k+1 = {k + 1} entries, got {len(probs)}")
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "probs", probs)
        object.__setattr__(self, "label", label or _describe(k, probs))

    @property
    def probs_float(self) -> tuple[float, ...]:
        return tuple(float(p) for p in self.probs)

    def moments(self) -> "Moments":
        return moments(self)

    def __repr__(self) -> str:
        return f"PayoffModel({self.label})"


def _describe(k: int, probs: tuple[Fraction, ...]) -> str:
    return f"k={k};probs=" + ",".join(str(p) for p in probs)


@dataclass(frozen=True)
class Moments:
    """Mean and variance of a single payoff, in score units."""

    mu: Fraction
    sigma_sq: Fraction

    @property
    def sigma(self) -> float:
        return math.sqrt(float(self.sigma_sq))


@dataclass(frozen=True)
class Validation:
    ok: bool
    violation: str = ""

    def __bool__(self) -> bool:
        return self.ok


def make_classic() -> PayoffModel:
    """Win/lose model: payoffs 0 or 1 with equal probability."""
    return PayoffModel(1, (Fraction(1, 2), Fraction(1, 2)), label="classic")


def make_chess(p_draw: RationalLike) -> PayoffModel:
    """Win/draw/lose model: half a point for a draw, free draw probability."""
    p = _as_fraction(p_draw)
    if not (0 < p < 1):
        raise ModelSpecError(
            f"p_draw must lie strictly in (0,1), got {p} "
            "(win/lose probabilities would not be positive)")
    half = (1 - p) / 2
    return PayoffModel(2, (half, p, half), label=f"chess:{p}")


def make_uniform(k: int) -> PayoffModel:
    """All k+1 payoff values equally likely."""
    if not isinstance(k, int) or k < 1:
        raise ModelSpecError(f"k must be a positive integer, got {k!r}")
    p = Fraction(1, k + 1)
    return PayoffModel(k, (p,) * (k + 1), label=f"uniform:{k}")


def validate(model: PayoffModel) -> Validation:
    """Check positivity, normalization and symmetry; report the first failure."""
    k = model.k
    for a, p in enumerate(model.probs):
        if p <= 0:
            return Validation(False, f"positivity: probs[{a}] = {p} is not > 0")
    total = sum(model.probs)
    if total != 1:
        return Validation(False, f"normalization: probs sum to {total}, not 1")
    for a in range(k + 1):
        if model.probs[a] != model.probs[k - a]:
            return Validation(
                False,
                f"symmetry: probs[{a}] = {model.probs[a]} != "
                f"probs[{k - a}] = {model.probs[k - a]}")
    return Validation(True)


def moments(model: PayoffModel) -> Moments:
    """Exact mean and variance of one payoff (score units)."""
    k = model.k
    mu = sum((Fraction(a, k) * p for a, p in enumerate(model.probs)), Fraction(0))
    ex2 = sum((Fraction(a, k) ** 2 * p for a, p in enumerate(model.probs)), Fraction(0))
    return Moments(mu=mu, sigma_sq=ex2 - mu * mu)


def game_pairs(n: int) -> list[tuple[int, int]]:
    """Canonical game list: unordered pairs (i, j), i < j, lexicographic."""
    return [(i, j) for i in range(n) for j in range(i + 1, n)]


def num_games(n: int) -> int:
    return n * (n - 1) // 2


@dataclass(frozen=True)
class TournamentOutcome:
    """One payoff index per game of the canonical game list.

    Game g between players i < j with index ``a`` gives i a Y-payoff of
    ``a`` and j a Y-payoff of ``k - a``.
    """

    n: int
    k: int
    games: tuple[int, ...]

    def __post_init__(self):
        m = num_games(self.n)
        if len(self.games) != m:
            raise ValueError(
                f"games must have n(n-1)/2 = {m} entries, got {len(self.games)}")
        if any(not (0 <= a <= self.k) for a in self.games):
            raise ValueError(f"game payoff indices must lie in 0..{self.k}")


@dataclass(frozen=True)
class ScoreVector:
    """Per-player scores in Y-units (player scores are y/k)."""

    y_scores: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.y_scores)

    def total(self) -> int:
        return sum(self.y_scores)

    def sorted(self) -> tuple[int, ...]:
        return tuple(sorted(self.y_scores))


def score_vector(outcome: TournamentOutcome) -> ScoreVector:
    """Accumulate each player's Y-score over the canonical game list."""
    y = [0] * outcome.n
    for (i, j), a in zip(game_pairs(outcome.n), outcome.games):
        y[i] += a
        y[j] += outcome.k - a
    return ScoreVector(tuple(y))


def flip_outcome(outcome: TournamentOutcome) -> TournamentOutcome:
    """Reverse every game (a -> k-a); scores map to k(n-1) - s entrywise."""
    return TournamentOutcome(
        outcome.n, outcome.k, tuple(outcome.k - a for a in outcome.games))


# --- model-spec documents (JSON) -------------------------------------------

def parse_model_json(text: str) -> PayoffModel:
    """Parse a model-spec document ``{"k": .., "probs": ["num/den", ..]}``.

    Rejects malformed, non-normalized or asymmetric vectors with a
    diagnostic naming the offending field.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelSpecError(
            f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}")
    if not isinstance(doc, dict):
        raise ModelSpecError("model spec must be a JSON object")
    for key in ("k", "probs"):
        if key not in doc:
            raise ModelSpecError(f"model spec is missing field '{key}'")
    k = doc["k"]
    if not isinstance(k, int) or isinstance(k, bool) or k < 1:
        raise ModelSpecError(f"field 'k': expected a positive integer, got {k!r}")
    raw = doc["probs"]
    if not isinstance(raw, list):
        raise ModelSpecError("field 'probs': expected a list of rational strings")
    if len(raw) != k + 1:
        raise ModelSpecError(
            f"field 'probs': expected k+1 = {k + 1} entries, got {len(raw)}")
    probs = []
    for idx, entry in enumerate(raw):
        try:
            probs.append(Fraction(entry) if isinstance(entry, str)
                         else Fraction(int(entry)))
        except (ValueError, ZeroDivisionError, TypeError):
            raise ModelSpecError(
                f"field 'probs[{idx}]': {entry!r} is not a valid rational")
    model = PayoffModel(k, probs)
    report = validate(model)
    if not report.ok:
        raise ModelSpecError(f"field 'probs': {report.violation}")
    return model


def model_to_json(model: PayoffModel) -> str:
    """Serialize a model as a model-spec document."""
    doc = {
        "k": model.k,
        "probs": [f"{p.numerator}/{p.denominator}" for p in model.probs],
    }
    return json.dumps(doc)


def common_denominator(model: PayoffModel) -> tuple[list[int], int]:
    """Integer atom weights c and denominator Q with probs[a] = c[a]/Q."""
    q = 1
    for p in model.probs:
        q = q * p.denominator // math.gcd(q, p.denominator)
    c = [int(p * q) for p in model.probs]
    return c, q


def iter_atoms(model: PayoffModel) -> Iterator[tuple[int, Fraction]]:
    """Yield (Y-payoff index a, probability) in fixed order a = 0..k."""
    return iter(enumerate(model.probs))
