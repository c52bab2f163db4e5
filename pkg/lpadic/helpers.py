import math
from fractions import Fraction

import sympy
from sympy.functions.combinatorial.numbers import stirling

from lpadic.errors import DomainError


def vp(n: int | Fraction, p: int) -> int | float:
    """
    p-adic valuation of an integer or rational, math.inf for zero.
    """
    if n == 0:
        return math.inf
    if isinstance(n, Fraction):
        return vp(n.numerator, p) - vp(n.denominator, p)
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def require_odd_prime(p: int):
    if p == 2:
        raise DomainError("p must be odd")
    if p < 2 or not is_prime(p):
        raise DomainError(f"{p} is not a prime")


def to_fraction(x) -> Fraction:
    x = sympy.Rational(x)
    return Fraction(int(x.p), int(x.q))


def is_prime(n: int) -> bool:
    return bool(sympy.isprime(n))


def primes_up_to(bound: int) -> list[int]:
    return [int(q) for q in sympy.primerange(2, bound + 1)]


def gcdex(a: int, b: int) -> tuple[int, int, int]:
    """Return a tuple (x, y, g) where g = gcd(a, b) and a*x + b*y == g."""
    if b == 0:
        if a < 0:
            return -1, 0, -a
        return 1, 0, a
    q, r = divmod(a, b)
    x, y, g = gcdex(b, r)
    return y, x - y * q, g


def continued_fraction(r: Fraction) -> list[int]:
    """
    Partial quotients of r, using floor division so negative rationals work too.
    """
    num, den = r.numerator, r.denominator
    quotients = []
    while den != 0:
        q, rem = divmod(num, den)
        quotients.append(q)
        num, den = den, rem
    return quotients


def convergents(r: Fraction) -> list[tuple[int, int]]:
    """
    Convergents p_j/q_j of r, starting with the (p_{-2}, q_{-2}) = (0, 1) and (p_{-1}, q_{-1}) = (1, 0) seeds.
    """
    result = [(0, 1), (1, 0)]
    for a in continued_fraction(r):
        (p2, q2), (p1, q1) = result[-2], result[-1]
        result.append((a * p1 + p2, a * q1 + q2))
    return result


def stirling2(k: int, n: int) -> int:
    return int(stirling(k, n, kind=2))


def bernoulli(n: int) -> Fraction:
    """
    Bernoulli numbers with B_1 = -1/2.
    """
    # sympy switched to B_1 = +1/2 in 1.12
    if n == 1:
        return Fraction(-1, 2)
    return to_fraction(sympy.bernoulli(n))


def floor_log(n: int, p: int) -> int:
    # largest e with p^e <= n
    e = 0
    while n >= p:
        n //= p
        e += 1
    return e


def content(values) -> Fraction:
    """
    Positive generator of the Z-module spanned by the given rationals (0 if all are zero).
    """
    num = 0
    den = 1
    for v in values:
        v = Fraction(v)
        if v == 0:
            continue
        num = math.gcd(num, v.numerator)
        den = den * v.denominator // math.gcd(den, v.denominator)
    if num == 0:
        return Fraction(0)
    return Fraction(num, den)
