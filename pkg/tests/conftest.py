from fractions import Fraction

import pytest

from plausilearn import make_alphabet, mass_function, simplex_grid


@pytest.fixture
def coin():
    return make_alphabet(["H", "T"])


@pytest.fixture
def urn():
    return make_alphabet(["R", "B", "G"])


@pytest.fixture
def coin_grid(coin):
    return simplex_grid(coin, 10)


@pytest.fixture
def fair_coin(coin):
    return mass_function(coin, [Fraction(1, 2), Fraction(1, 2)])
