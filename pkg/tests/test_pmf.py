import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest

from conftest import model_zoo
from uniqmax.errors import DomainError, FeasibilityError
from uniqmax.models import make_chess, make_classic, make_uniform
from uniqmax.pmf import (expected_wn_exact, expected_wn_upper,
                         first_lattice_above, pmf_rows, prop1_lower_bound,
                         score_pmf, tail_prob, threshold)


def test_score_pmf_classic_two_games():
    dist = score_pmf(make_classic(), 2)
    assert dist.mass == (Fraction(1, 4), Fraction(1, 2), Fraction(1, 4))


def test_score_pmf_chess_hand_convolution():
    # oracle: (1/4, 1/2, 1/4) convolved with itself by hand
    dist = score_pmf(make_chess(Fraction(1, 2)), 2)
    assert dist.mass == (Fraction(1, 16), Fraction(1, 4), Fraction(3, 8),
                         Fraction(1, 4), Fraction(1, 16))


def test_score_pmf_zero_games():
    for mode in ("exact", "float"):
        dist = score_pmf(make_uniform(3), 0, mode)
        assert dist.support_len == 1
        assert float(dist.mass[0]) == 1.0


@pytest.mark.parametrize("label,model", model_zoo())
@pytest.mark.parametrize("n_games", [1, 2, 3, 5, 8])
def test_exact_pmf_sums_to_one_and_symmetric(label, model, n_games):
    dist = score_pmf(model, n_games)
    assert sum(dist.mass) == 1
    top = model.k * n_games
    assert all(dist.mass[y] == dist.mass[top - y] for y in range(top + 1))


@pytest.mark.parametrize("n_games", [1, 2, 7, 64])
def test_float_pmf_matches_exact(n_games):
    for _, model in model_zoo():
        exact = score_pmf(model, n_games).mass_floats()
        flt = score_pmf(model, n_games, "float").mass
        assert np.allclose(flt, exact, rtol=1e-12, atol=0)
        assert abs(flt.sum() - 1.0) < 1e-12


@pytest.mark.parametrize("model,games", [
    (make_classic(), 512),
    (make_chess(Fraction(1, 2)), 512),
    (make_chess(Fraction(1, 4)), 317),
    (make_uniform(4), 512),
])
def test_float_pmf_relative_error_large(model, games):
    # binary64 agreement with exact rationals over the representable range
    exact = score_pmf(model, games).mass_floats()
    flt = score_pmf(model, games, "float").mass
    normal = exact >= 1e-300
    rel = np.abs(flt[normal] - exact[normal]) / exact[normal]
    assert rel.max() < 1e-10


def test_float_pmf_drift_recorded():
    dist = score_pmf(make_uniform(4), 64, "float")
    assert dist.renorm_drift > 0
    assert not dist.quality_warning
    assert dist.renorm_drift < 1e-12


def test_support_cap():
    with pytest.raises(FeasibilityError):
        score_pmf(make_classic(), 10, support_cap=5)


def test_first_lattice_above():
    assert first_lattice_above(1.0) == 2
    assert first_lattice_above(0.5) == 1
    assert first_lattice_above(-0.5) == 0
    assert first_lattice_above(-3.0) == -2


def test_tail_prob_examples():
    dist = score_pmf(make_classic(), 2)
    assert tail_prob(dist, 1.0) == Fraction(1, 4)
    assert tail_prob(dist, -1.0) == 1
    assert tail_prob(dist, 2.0) == 0


def test_tail_prob_monotone_in_threshold():
    dist = score_pmf(make_chess(Fraction(1, 3)), 6)
    grid = [x / 4 for x in range(-4, 55)]
    tails = [tail_prob(dist, t) for t in grid]
    assert all(a >= b for a, b in zip(tails, tails[1:]))


def test_threshold_against_high_precision_oracle():
    mpmath.mp.dps = 50
    for n, eps in [(101, 1.0), (3, 1.0), (50, 0.5), (1000, 2.0)]:
        thr = threshold(make_classic(), n, eps)
        x = mpmath.sqrt(2 * mpmath.log(n - 1)
                        - (1 + eps) * mpmath.log(mpmath.log(n - 1)))
        t = (n - 1) * mpmath.mpf("0.5") + x * mpmath.sqrt(n - 1) * mpmath.mpf("0.5")
        assert abs(thr.x_n - float(x)) <= 1e-12 * float(x)
        assert abs(thr.t_n - float(t)) <= 1e-12 * float(t)


def test_threshold_spec_values():
    thr = threshold(make_classic(), 101, 1.0)
    assert thr.x_n == pytest.approx(2.481125, abs=5e-7)
    assert thr.t_n == pytest.approx(62.40562, abs=5e-6)
    assert thr.t_n_lattice == thr.t_n  # k = 1


def test_threshold_n3_exceeds_support():
    thr = threshold(make_classic(), 3, 1.0)
    assert thr.t_n == pytest.approx(2.0294, abs=5e-5)
    assert thr.t_n > 2  # above the maximum score, so the tail is empty
    assert tail_prob(score_pmf(make_classic(), 2), thr.t_n_lattice) == 0


def test_threshold_domain_errors():
    with pytest.raises(DomainError):
        threshold(make_classic(), 2, 1.0)
    with pytest.raises(DomainError):
        threshold(make_classic(), 3, -1.0)
    # huge epsilon turns the radicand negative once log(log(n-1)) > 0
    with pytest.raises(DomainError):
        threshold(make_classic(), 4, 30.0)


def test_expected_wn_exact_n3_against_enumeration():
    m1 = make_classic()
    assert expected_wn_exact(m1, 3, 0.5) == Fraction(3, 4)
    assert expected_wn_exact(m1, 3, 1.5) == 0


def test_expected_wn_empty_tail():
    m = make_chess(Fraction(1, 2))
    assert expected_wn_exact(m, 5, float(m.k * 4)) == 0


def test_expected_wn_upper_dominates_exact():
    for label, model in model_zoo():
        for n in (5, 8, 12):
            thr = threshold(model, n, 1.0)
            exact = expected_wn_exact(model, n, thr)
            upper = expected_wn_upper(model, n, 1.0)
            assert exact <= upper, (label, n)


def test_expected_wn_upper_empty_window():
    # threshold far above the support once n is tiny and epsilon large-ish
    m1 = make_classic()
    thr = threshold(m1, 4, 1.0)
    assert thr.t_n - 1.0 < 3
    value = expected_wn_upper(m1, 4, 1.0)
    assert value > 0
    # shrink the support cap to make sure errors propagate
    with pytest.raises(FeasibilityError):
        expected_wn_upper(m1, 2000, 1.0, support_cap=100)


def test_expected_wn_requires_n2():
    with pytest.raises(DomainError):
        expected_wn_exact(make_classic(), 1, 0.5)
    with pytest.raises(DomainError):
        expected_wn_upper(make_classic(), 3, 1.0)


def test_prop1_lower_bound_edges():
    m1 = make_classic()
    # n=3: threshold above the whole support, p = 0, bound = 0
    assert prop1_lower_bound(m1, 3, 1.0) == 0.0
    value = prop1_lower_bound(m1, 101, 1.0)
    assert 0 < value < 1
    # float mode agrees closely with the exact evaluation
    assert prop1_lower_bound(m1, 101, 1.0, "float") == pytest.approx(value, rel=1e-9)


def test_prop1_lower_bound_formula():
    m1 = make_classic()
    thr = threshold(m1, 10, 1.0)
    p = tail_prob(score_pmf(m1, 9), thr.t_n_lattice)
    assert prop1_lower_bound(m1, 10, 1.0) == float(1 - (1 - p) ** 10)


def test_pmf_rows_formats():
    header, rows = pmf_rows(score_pmf(make_classic(), 2))
    assert header == ["y", "mass_num", "mass_den"]
    assert rows[0] == ["0", "1", "4"]
    header, rows = pmf_rows(score_pmf(make_classic(), 2, "float"))
    assert header == ["y", "mass"]
    assert rows[1] == ["1", "0.5"]
