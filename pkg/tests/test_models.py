import json
import random
from fractions import Fraction

import pytest

from uniqmax.errors import ModelSpecError
from uniqmax.models import (PayoffModel, TournamentOutcome, flip_outcome,
                            game_pairs, make_chess, make_classic, make_uniform,
                            model_to_json, moments, num_games,
                            parse_model_json, score_vector, validate)


def test_make_classic():
    m = make_classic()
    assert m.k == 1
    assert m.probs == (Fraction(1, 2), Fraction(1, 2))
    mo = moments(m)
    assert mo.mu == Fraction(1, 2)
    assert mo.sigma_sq == Fraction(1, 4)


def test_make_chess_probs():
    m = make_chess(Fraction(1, 2))
    assert m.k == 2
    assert m.probs == (Fraction(1, 4), Fraction(1, 2), Fraction(1, 4))
    # oracle: direct moment sum over the three atoms
    ex2 = sum(Fraction(a, 2) ** 2 * p for a, p in enumerate(m.probs))
    assert moments(m).sigma_sq == ex2 - Fraction(1, 4) == Fraction(1, 8)


@pytest.mark.parametrize("p_draw", [0, 1, Fraction(3, 2), -1])
def test_make_chess_rejects_degenerate(p_draw):
    with pytest.raises(ModelSpecError):
        make_chess(p_draw)


def test_uniform3_moments():
    m = make_uniform(3)
    mo = moments(m)
    assert mo.mu == Fraction(1, 2)
    # oracle: E[X^2] = (0+1+4+9)/(9*4) = 14/36
    assert mo.sigma_sq == Fraction(14, 36) - Fraction(1, 4) == Fraction(5, 36)


def test_validate_good_models():
    assert validate(make_classic()).ok
    assert validate(PayoffModel(2, ["1/3", "1/3", "1/3"])).ok


def test_validate_reports_first_violation():
    rep = validate(PayoffModel(1, [Fraction(3, 5), Fraction(2, 5)]))
    assert not rep.ok
    assert "symmetry" in rep.violation

    rep = validate(PayoffModel(2, ["1/4", "1/4", "1/4"]))
    assert not rep.ok
    assert "normalization" in rep.violation

    rep = validate(PayoffModel(2, ["1/2", "0", "1/2"]))
    assert not rep.ok
    assert "positivity" in rep.violation


def test_mu_is_half_for_every_valid_model():
    rng = random.Random(7)
    for _ in range(25):
        k = rng.randint(1, 6)
        half = [Fraction(rng.randint(1, 9), 10) for _ in range((k + 1) // 2)]
        probs = half + ([Fraction(rng.randint(1, 9), 10)] if k % 2 == 0 else [])
        probs = probs + half[::-1]
        total = sum(probs)
        probs = [p / total for p in probs]
        m = PayoffModel(k, probs)
        assert validate(m).ok
        assert moments(m).mu == Fraction(1, 2)
        assert moments(m).sigma_sq > 0


def test_score_vector_examples():
    assert score_vector(TournamentOutcome(2, 1, (1,))).y_scores == (1, 0)
    assert score_vector(TournamentOutcome(3, 1, (1, 1, 1))).y_scores == (2, 1, 0)
    # 3-cycle: 1 beats 2, 3 beats 1, 2 beats 3
    assert score_vector(TournamentOutcome(3, 1, (1, 0, 1))).y_scores == (1, 1, 1)


def test_outcome_validation():
    with pytest.raises(ValueError):
        TournamentOutcome(3, 1, (1, 1))
    with pytest.raises(ValueError):
        TournamentOutcome(3, 1, (2, 0, 0))


def _random_outcome(rng, n, k):
    return TournamentOutcome(
        n, k, tuple(rng.randint(0, k) for _ in range(num_games(n))))


def test_score_sum_invariant():
    rng = random.Random(11)
    for _ in range(50):
        n, k = rng.randint(2, 7), rng.randint(1, 4)
        out = _random_outcome(rng, n, k)
        sv = score_vector(out)
        assert sv.total() == k * num_games(n)
        assert all(0 <= y <= k * (n - 1) for y in sv.y_scores)


def _relabeled(outcome, perm):
    """Outcome after renaming player i -> perm[i]."""
    k, n = outcome.k, outcome.n
    idx = {pair: g for g, pair in enumerate(game_pairs(n))}
    games = [0] * num_games(n)
    for (i, j), a in zip(game_pairs(n), outcome.games):
        pi, pj = perm[i], perm[j]
        if pi < pj:
            games[idx[(pi, pj)]] = a
        else:
            games[idx[(pj, pi)]] = k - a
    return TournamentOutcome(n, k, tuple(games))


def test_score_vector_permutation_equivariance():
    rng = random.Random(13)
    for _ in range(30):
        n, k = rng.randint(2, 6), rng.randint(1, 3)
        out = _random_outcome(rng, n, k)
        perm = list(range(n))
        rng.shuffle(perm)
        base = score_vector(out).y_scores
        moved = score_vector(_relabeled(out, perm)).y_scores
        assert all(moved[perm[i]] == base[i] for i in range(n))


def test_flip_outcome_mirrors_scores():
    rng = random.Random(17)
    for _ in range(30):
        n, k = rng.randint(2, 6), rng.randint(1, 4)
        out = _random_outcome(rng, n, k)
        base = score_vector(out).y_scores
        flipped = score_vector(flip_outcome(out)).y_scores
        assert all(f == k * (n - 1) - b for f, b in zip(flipped, base))


def test_model_json_round_trip():
    m = make_chess(Fraction(1, 4))
    again = parse_model_json(model_to_json(m))
    assert again.k == m.k and again.probs == m.probs


def test_model_json_diagnostics():
    with pytest.raises(ModelSpecError, match="line 1"):
        parse_model_json("{not json")
    with pytest.raises(ModelSpecError, match="missing field 'probs'"):
        parse_model_json('{"k": 1}')
    with pytest.raises(ModelSpecError, match="'k'"):
        parse_model_json('{"k": 0, "probs": ["1"]}')
    with pytest.raises(ModelSpecError, match=r"probs\[1\]"):
        parse_model_json('{"k": 1, "probs": ["1/2", "nope"]}')
    with pytest.raises(ModelSpecError, match="normalization"):
        parse_model_json('{"k": 1, "probs": ["1/2", "1/3"]}')
    with pytest.raises(ModelSpecError, match="symmetry"):
        parse_model_json('{"k": 1, "probs": ["3/5", "2/5"]}')
    with pytest.raises(ModelSpecError, match="expected k\\+1 = 3"):
        parse_model_json(json.dumps({"k": 2, "probs": ["1/2", "1/2"]}))
