import random
from fractions import Fraction

import pytest

from rzcert.poly import Polynomial, UnivariatePolynomial


def rand_fraction(rng, lo=-5, hi=5, den_max=4):
    return Fraction(rng.randint(lo, hi), rng.randint(1, den_max))


def random_poly(rng, nvars, deg, terms=6):
    """Random exact polynomial with a guaranteed nonzero term of full degree."""
    data = {}
    for _ in range(terms):
        e = [0] * nvars
        total = rng.randint(0, deg)
        for _ in range(total):
            e[rng.randrange(nvars)] += 1
        data[tuple(e)] = data.get(tuple(e), Fraction(0)) + rand_fraction(rng)
    top = [0] * nvars
    top[rng.randrange(nvars)] = deg
    data[tuple(top)] = rand_fraction(rng, 1, 5)
    return Polynomial(nvars, {e: c for e, c in data.items() if c != 0})


def random_real_rooted(rng, deg, mode="rational"):
    """Product of random linear factors: (t - r1)...(t - rdeg)."""
    f = UnivariatePolynomial([1], mode)
    for _ in range(deg):
        r = rand_fraction(rng) if mode == "rational" else rng.uniform(-3, 3)
        f = f * UnivariatePolynomial([-r, 1], mode)
    return f


@pytest.fixture
def rng():
    return random.Random(20240817)
