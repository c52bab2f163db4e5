import operator
import random
from fractions import Fraction

import pytest

from lpadic.errors import DomainError, PrecisionError
from lpadic.padic import PadicNumber, padic_add, padic_div, padic_exp, padic_log, padic_mul, teichmuller


def test_from_rational():
    x = PadicNumber.from_rational(5, Fraction(3, 25), 6)
    assert x.val == -2
    assert x.prec == 6
    assert x.unit == 3

    y = PadicNumber.from_rational(3, Fraction(1, 2), 4)
    assert (y * 2).lift() == 1
    assert y.digits() == [2, 1, 1, 1]


def test_zero_tracks_absolute_precision():
    z = PadicNumber.from_rational(7, 0, 5)
    assert z.is_zero()
    assert z.absprec == 5
    assert repr(z) == "O(7^5)"

    x = PadicNumber.from_residue(7, 49, 2)
    assert x.is_zero()
    assert x.absprec == 2


def test_arithmetic_matches_rationals():
    p = 7
    a, b = Fraction(5, 3), Fraction(-14, 11)
    x, y = PadicNumber.from_rational(p, a, 10), PadicNumber.from_rational(p, b, 10)
    assert x + y == PadicNumber.from_rational(p, a + b, 10)
    assert x - y == PadicNumber.from_rational(p, a - b, 10)
    assert x * y == PadicNumber.from_rational(p, a * b, 10)
    assert x / y == PadicNumber.from_rational(p, a / b, 9)
    assert x**3 == PadicNumber.from_rational(p, a**3, 10)
    assert 2 * x == PadicNumber.from_rational(p, 2 * a, 10)
    assert padic_add(x, y) == x + y
    assert padic_mul(x, y) == x * y
    assert padic_div(x, y) == x / y
    assert 1 / x == PadicNumber.from_rational(p, 1 / a, 10)


def test_cancellation_loses_relative_precision():
    p = 3
    x = PadicNumber.from_rational(p, 1, 5)
    y = PadicNumber.from_rational(p, 1 + 3**3, 5)
    d = y - x
    assert d.val == 3
    assert d.absprec == 5


def test_equality_at_common_precision():
    p = 5
    assert PadicNumber.from_rational(p, 1, 2) == PadicNumber.from_rational(p, 1 + 5**3, 10)
    assert PadicNumber.from_rational(p, 1, 10) != PadicNumber.from_rational(p, 1 + 5**3, 10)
    assert PadicNumber.from_rational(p, 1, 3) != PadicNumber.from_rational(3, 1, 3)


def test_prime_mismatch():
    with pytest.raises(DomainError):
        PadicNumber.from_rational(5, 1, 3) + PadicNumber.from_rational(7, 1, 3)


def test_division_by_zero_at_precision():
    with pytest.raises(PrecisionError):
        PadicNumber.from_rational(5, 1, 3) / PadicNumber.zero(5, 4)


def test_residue_and_precision():
    x = PadicNumber.from_rational(3, 10, 4)
    assert x.residue() == 10
    assert x.residue(2) == 1
    with pytest.raises(PrecisionError):
        x.residue(5)
    with pytest.raises(DomainError):
        PadicNumber.from_rational(3, Fraction(1, 3), 4).residue()


@pytest.mark.parametrize("p", [3, 5, 7, 11])
def test_teichmuller(p):
    for a in range(1, p):
        w = teichmuller(p, a, 8)
        assert w.residue(1) == a
        assert w ** (p - 1) == PadicNumber.from_rational(p, 1, 8)


def test_teichmuller_rejects_multiples_of_p():
    with pytest.raises(DomainError):
        teichmuller(5, 10, 4)


def test_log_is_additive():
    p = 5
    x = PadicNumber.from_rational(p, 6, 12)
    y = PadicNumber.from_rational(p, 11, 12)
    assert padic_log(x * y) == padic_log(x) + padic_log(y)


def test_exp_inverts_log():
    p = 3
    x = PadicNumber.from_rational(p, 4, 15)
    assert padic_exp(padic_log(x)) == x


def test_log_domain():
    with pytest.raises(DomainError):
        padic_log(PadicNumber.from_rational(5, 2, 5))
    with pytest.raises(DomainError):
        padic_exp(PadicNumber.from_rational(5, 2, 5))


def random_rational(rng: random.Random, p: int, nonzero: bool = False) -> Fraction:
    x = Fraction(rng.randint(-(10**6), 10**6), rng.randint(1, 10**4)) * Fraction(p) ** rng.randint(-3, 3)
    if nonzero and x == 0:
        return Fraction(p + 1)
    return x


OPS = [operator.add, operator.sub, operator.mul, operator.truediv]


@pytest.mark.parametrize("p", [3, 5, 7])
@pytest.mark.parametrize("op", OPS, ids=lambda op: op.__name__)
def test_precision_is_sound(p, op):
    rng = random.Random(p * 31 + OPS.index(op))
    N = 12
    for _ in range(60):
        a, b = random_rational(rng, p), random_rational(rng, p, nonzero=op is operator.truediv)
        exact = PadicNumber.from_rational(p, op(a, b), 80)
        coarse = op(PadicNumber.from_rational(p, a, N), PadicNumber.from_rational(p, b, N))
        fine = op(PadicNumber.from_rational(p, a, N + 5), PadicNumber.from_rational(p, b, N + 5))
        # every digit claimed at N is a digit of the exact answer and survives at N + 5
        assert coarse == exact, (a, b)
        assert fine == exact, (a, b)
        assert fine.absprec >= coarse.absprec
        assert fine.with_prec(coarse.absprec) == coarse


@pytest.mark.parametrize("p", [3, 5, 11])
def test_ring_laws(p):
    rng = random.Random(1000 + p)
    for _ in range(100):
        a, b, c = (PadicNumber.from_rational(p, random_rational(rng, p), 15) for _ in range(3))
        assert (a + b) + c == a + (b + c)
        assert a + b == b + a
        assert (a * b) * c == a * (b * c)
        assert a * b == b * a
        assert a * (b + c) == a * b + a * c
        assert (a - a).is_zero()
        if not b.is_zero():
            assert (a * b) / b == a
