"""
Truncated p-adic numbers.

A nonzero element is stored as p^val * unit with unit an integer in [1, p^prec) coprime to p,
known modulo p^(val + prec). An element that is zero at the tracked precision is stored with
unit = 0, prec = 0 and val the absolute precision, i.e. it stands for O(p^val).
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction

from lpadic.errors import DomainError, PrecisionError
from lpadic.helpers import floor_log, require_odd_prime, vp

log = logging.getLogger(__name__)

Exact = int | Fraction


@dataclass(frozen=True, eq=False)
class PadicNumber:
    p: int
    val: int
    unit: int
    prec: int

    def __post_init__(self):
        if self.unit and self.unit % self.p == 0:
            raise ValueError("unit part must be coprime to p")

    # --- construction -------------------------------------------------

    @staticmethod
    def from_rational(p: int, x: Exact, prec: int) -> "PadicNumber":
        """
        Embed an exact rational with `prec` digits of relative precision. Zero becomes O(p^prec).
        """
        x = Fraction(x)
        if x == 0:
            return PadicNumber.zero(p, prec)
        v = vp(x, p)
        num = x.numerator // p ** max(v, 0)
        den = x.denominator // p ** max(-v, 0)
        mod = p**prec
        return PadicNumber(p, v, num * pow(den, -1, mod) % mod, prec)

    @staticmethod
    def zero(p: int, absprec: int) -> "PadicNumber":
        return PadicNumber(p, absprec, 0, 0)

    @staticmethod
    def from_residue(p: int, residue: int, absprec: int) -> "PadicNumber":
        """
        The element known modulo p^absprec whose representative is `residue`.
        """
        residue %= p**absprec
        if residue == 0:
            return PadicNumber.zero(p, absprec)
        v = vp(residue, p)
        return PadicNumber(p, v, residue // p**v, absprec - v)

    # --- inspection ---------------------------------------------------

    @property
    def absprec(self) -> int:
        return self.val + self.prec

    def is_zero(self) -> bool:
        return self.unit == 0

    def valuation(self) -> int | float:
        return math.inf if self.is_zero() else self.val

    def is_unit(self) -> bool:
        return not self.is_zero() and self.val == 0

    def lift(self) -> Fraction:
        """
        The rational p^val * unit (an integer when val >= 0).
        """
        if self.is_zero():
            return Fraction(0)
        return Fraction(self.unit) * Fraction(self.p) ** self.val

    def residue(self, k: int | None = None) -> int:
        """
        Representative in [0, p^k) of an integral element, k defaults to the absolute precision.
        """
        if k is None:
            k = self.absprec
        if k > self.absprec:
            raise PrecisionError(f"asked for {k} digits, only {self.absprec} known")
        if self.is_zero():
            return 0
        if self.val < 0:
            raise DomainError("element is not integral")
        return (self.unit * self.p**self.val) % self.p**k

    def digits(self) -> list[int]:
        """
        Base-p digits of the unit part, least significant first.
        """
        u = self.unit
        out = []
        for _ in range(self.prec):
            u, d = divmod(u, self.p)
            out.append(d)
        return out

    def with_prec(self, absprec: int) -> "PadicNumber":
        """
        Forget digits beyond the absolute precision `absprec` (never adds precision).
        """
        absprec = min(absprec, self.absprec)
        if self.is_zero() or absprec <= self.val:
            return PadicNumber.zero(self.p, absprec)
        prec = absprec - self.val
        return PadicNumber(self.p, self.val, self.unit % self.p**prec, prec)

    # --- arithmetic ---------------------------------------------------

    def _coerce(self, other) -> "PadicNumber":
        if isinstance(other, PadicNumber):
            if other.p != self.p:
                raise DomainError(f"Prime mismatch: {self.p} vs {other.p}")
            return other
        if isinstance(other, (int, Fraction)):
            # exact operands carry as many digits as self can use
            if other == 0:
                return PadicNumber.zero(self.p, self.absprec + max(self.prec, 1))
            v = vp(Fraction(other), self.p)
            return PadicNumber.from_rational(self.p, other, max(self.absprec - v, self.prec, 1))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        absprec = min(self.absprec, other.absprec)
        if self.is_zero() and other.is_zero():
            return PadicNumber.zero(self.p, absprec)
        m = min(self.val if not self.is_zero() else absprec, other.val if not other.is_zero() else absprec)
        s = 0
        for x in (self, other):
            if not x.is_zero():
                s += x.unit * self.p ** (x.val - m)
        return _normalize(self.p, m, s, absprec)

    __radd__ = __add__

    def __neg__(self):
        if self.is_zero():
            return self
        return PadicNumber(self.p, self.val, (-self.unit) % self.p**self.prec, self.prec)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.is_zero() or other.is_zero():
            return PadicNumber.zero(self.p, _zero_product_prec(self, other))
        prec = min(self.prec, other.prec)
        return PadicNumber(self.p, self.val + other.val, (self.unit * other.unit) % self.p**prec, prec)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other.is_zero():
            raise PrecisionError(f"division by O({self.p}^{other.val})")
        if self.is_zero():
            return PadicNumber.zero(self.p, self.val - other.val)
        prec = min(self.prec, other.prec)
        mod = self.p**prec
        return PadicNumber(self.p, self.val - other.val, self.unit * pow(other.unit, -1, mod) % mod, prec)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other / self

    def __pow__(self, n: int):
        if n == 0:
            return PadicNumber.from_rational(self.p, 1, max(self.prec, 1))
        if n < 0:
            return (PadicNumber.from_rational(self.p, 1, self.prec) / self) ** (-n)
        if self.is_zero():
            return PadicNumber.zero(self.p, self.val * n)
        mod = self.p**self.prec
        return PadicNumber(self.p, self.val * n, pow(self.unit, n, mod), self.prec)

    def __eq__(self, other):
        """
        Equality modulo the smaller of the two absolute precisions.
        """
        try:
            other = self._coerce(other)
        except DomainError:
            return False
        if other is NotImplemented:
            return NotImplemented
        return (self - other).is_zero()

    def __repr__(self):
        if self.is_zero():
            return f"O({self.p}^{self.val})"
        return f"{self.p}^{self.val}*{self.unit} + O({self.p}^{self.absprec})"


def _normalize(p: int, m: int, s: int, absprec: int) -> PadicNumber:
    # s * p^m known modulo p^absprec
    if absprec <= m:
        return PadicNumber.zero(p, absprec)
    s %= p ** (absprec - m)
    if s == 0:
        return PadicNumber.zero(p, absprec)
    v = vp(s, p)
    return PadicNumber(p, m + v, s // p**v, absprec - m - v)


def _zero_product_prec(x: PadicNumber, y: PadicNumber) -> int:
    if x.is_zero() and y.is_zero():
        return x.val + y.val
    z, nz = (x, y) if x.is_zero() else (y, x)
    return z.val + nz.val


def padic_add(x: PadicNumber, y: PadicNumber) -> PadicNumber:
    return x + y


def padic_mul(x: PadicNumber, y: PadicNumber) -> PadicNumber:
    return x * y


def padic_div(x: PadicNumber, y: PadicNumber) -> PadicNumber:
    return x / y


def teichmuller(p: int, a: int, prec: int) -> PadicNumber:
    """
    The (p-1)-st root of unity congruent to a mod p, to `prec` digits.
    """
    require_odd_prime(p)
    if a % p == 0:
        raise DomainError(f"{a} is divisible by {p}")
    mod = p**prec
    x = a % mod
    while True:
        nxt = pow(x, p, mod)
        if nxt == x:
            break
        x = nxt
    return PadicNumber(p, 0, x, prec)


def log_terms_needed(p: int, v: int, absprec: int) -> int:
    """
    Number of terms of sum (-1)^(n+1) z^n / n with v(z) = v after which every term vanishes mod p^absprec.
    n*v - floor(log_p n) is increasing in n, and bounds the valuation of z^n/n from below.
    """
    n = 1
    while n * v - floor_log(n, p) < absprec:
        n += 1
    return n


def exp_terms_needed(p: int, v: int, absprec: int) -> int:
    """
    Same for sum z^n/n!, using v_p(n!) <= (n-1)/(p-1).
    """
    n = 1
    while n * v - Fraction(n - 1, p - 1) < absprec:
        n += 1
    return n


def padic_log(x: PadicNumber) -> PadicNumber:
    """
    Logarithm on 1 + pZ_p: log(1+z) = sum (-1)^(n+1) z^n / n.
    """
    require_odd_prime(x.p)
    z = x - 1
    if x.is_zero() or x.val != 0 or (not z.is_zero() and z.val < 1):
        raise DomainError(f"log needs an argument congruent to 1 mod {x.p}, got {x}")
    absprec = x.absprec
    if z.is_zero():
        return PadicNumber.zero(x.p, absprec)
    total = PadicNumber.zero(x.p, absprec)
    power = z
    for n in range(1, log_terms_needed(x.p, z.val, absprec)):
        term = power / n
        total = total + (term if n % 2 else -term)
        power = power * z
    return total.with_prec(absprec)


def padic_exp(x: PadicNumber) -> PadicNumber:
    require_odd_prime(x.p)
    if not x.is_zero() and x.val < 1:
        raise DomainError(f"exp needs an argument of positive valuation, got {x}")
    absprec = x.absprec
    one = PadicNumber.from_rational(x.p, 1, absprec)
    if x.is_zero():
        return one
    total = one
    term = one
    for n in range(1, exp_terms_needed(x.p, x.val, absprec)):
        term = term * x / n
        total = total + term
    return total.with_prec(absprec)
