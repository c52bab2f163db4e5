import math
from fractions import Fraction

import pytest

from lpadic.errors import DomainError
from lpadic.helpers import (
    bernoulli,
    content,
    convergents,
    continued_fraction,
    gcdex,
    is_prime,
    primes_up_to,
    require_odd_prime,
    stirling2,
    to_fraction,
    vp,
)


def test_bernoulli_numbers():
    assert [bernoulli(n) for n in range(7)] == [
        1,
        Fraction(-1, 2),
        Fraction(1, 6),
        0,
        Fraction(-1, 30),
        0,
        Fraction(1, 42),
    ]
    assert bernoulli(12) == Fraction(-691, 2730)
    assert isinstance(bernoulli(10), Fraction)


def test_bernoulli_recursion():
    # sum_{j<=n} C(n+1, j) B_j = 0
    for n in range(1, 20):
        assert sum(math.comb(n + 1, j) * bernoulli(j) for j in range(n + 1)) == 0


def test_stirling2():
    assert [stirling2(4, n) for n in range(6)] == [0, 1, 7, 6, 1, 0]
    assert stirling2(0, 0) == 1
    # k^m = sum_n S(m, n) k!/(k-n)!
    for m in range(6):
        assert sum(stirling2(m, n) * math.perm(5, n) for n in range(m + 1)) == 5**m


def test_primes():
    assert primes_up_to(30) == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert primes_up_to(1) == []
    assert all(isinstance(q, int) for q in primes_up_to(10))
    assert is_prime(7919)
    assert not is_prime(7917)
    assert not is_prime(1)
    assert not is_prime(-3)


@pytest.mark.parametrize("p", [2, 1, 0, 9, -5])
def test_require_odd_prime(p):
    with pytest.raises(DomainError):
        require_odd_prime(p)


def test_valuation():
    assert vp(250, 5) == 3
    assert vp(Fraction(3, 50), 5) == -2
    assert vp(0, 3) == math.inf


def test_gcdex():
    for a, b in [(240, 46), (-7, 3), (0, 5), (12, 0)]:
        x, y, g = gcdex(a, b)
        assert g == math.gcd(a, b)
        assert a * x + b * y == g


def test_continued_fractions():
    assert continued_fraction(Fraction(43, 19)) == [2, 3, 1, 4]
    assert convergents(Fraction(43, 19))[-1] == (43, 19)
    assert continued_fraction(Fraction(-3, 2)) == [-2, 2]


def test_content_and_conversion():
    assert content([Fraction(2, 3), 4, Fraction(-6, 5)]) == Fraction(2, 15)
    assert content([0, 0]) == 0
    assert to_fraction("5/7") == Fraction(5, 7)
    assert to_fraction(Fraction(-1, 3)) == Fraction(-1, 3)
