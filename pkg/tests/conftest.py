from fractions import Fraction

import pytest

from uniqmax.models import make_chess, make_classic, make_uniform


@pytest.fixture
def classic():
    return make_classic()


@pytest.fixture
def chess_half():
    return make_chess(Fraction(1, 2))


@pytest.fixture
def chess_quarter():
    return make_chess(Fraction(1, 4))


@pytest.fixture
def uniform3():
    return make_uniform(3)


def model_zoo():
    """Models exercised across the exact-arithmetic tests."""
    return [
        ("classic", make_classic()),
        ("chess_quarter", make_chess(Fraction(1, 4))),
        ("chess_half", make_chess(Fraction(1, 2))),
        ("uniform3", make_uniform(3)),
    ]
