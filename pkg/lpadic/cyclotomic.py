"""
Values of Dirichlet characters of p-power conductor and their Gauss sums live in Q_p(zeta) for
zeta a primitive p^n-th root of unity. Elements are polynomials in zeta of degree < phi(p^n) with
PadicNumber coefficients, reduced modulo the p^n-th cyclotomic polynomial.
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from lpadic.errors import DomainError
from lpadic.helpers import require_odd_prime, vp
from lpadic.padic import Exact, PadicNumber, teichmuller

log = logging.getLogger(__name__)


def phi(p: int, n: int) -> int:
    return 1 if n == 0 else (p - 1) * p ** (n - 1)


@dataclass(frozen=True, eq=False)
class CyclotomicPadic:
    p: int
    n: int
    coeffs: tuple[PadicNumber, ...]

    def __post_init__(self):
        if len(self.coeffs) != phi(self.p, self.n):
            raise ValueError(f"level {self.n} needs {phi(self.p, self.n)} coefficients, got {len(self.coeffs)}")

    @property
    def e(self) -> int:
        return phi(self.p, self.n)

    @property
    def absprec(self) -> int:
        return min(c.absprec for c in self.coeffs)

    # --- construction -------------------------------------------------

    @staticmethod
    def from_padic(x: PadicNumber, n: int = 0, absprec: int | None = None) -> "CyclotomicPadic":
        if absprec is None:
            absprec = x.absprec
        zero = PadicNumber.zero(x.p, absprec)
        return CyclotomicPadic(x.p, n, (x,) + (zero,) * (phi(x.p, n) - 1))

    @staticmethod
    def from_rational(p: int, n: int, x: Exact, prec: int) -> "CyclotomicPadic":
        return CyclotomicPadic.from_padic(PadicNumber.from_rational(p, x, prec), n, prec)

    @staticmethod
    def monomial(c: PadicNumber, n: int, k: int) -> "CyclotomicPadic":
        """
        c * zeta^k.
        """
        return CyclotomicPadic.from_dict(c.p, n, {k: c}, c.absprec)

    @staticmethod
    def from_dict(p: int, n: int, terms: dict[int, PadicNumber], absprec: int) -> "CyclotomicPadic":
        """
        Reduce sum terms[k] * zeta^k for arbitrary integer exponents k.
        """
        coeffs = [PadicNumber.zero(p, absprec)] * phi(p, n)
        for k, c in terms.items():
            for i, sign in _reduce_exponent(p, n, k):
                coeffs[i] = coeffs[i] + c if sign > 0 else coeffs[i] - c
        return CyclotomicPadic(p, n, tuple(coeffs))

    # --- inspection ---------------------------------------------------

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def is_rational(self) -> bool:
        return all(c.is_zero() for c in self.coeffs[1:])

    def to_padic(self) -> PadicNumber:
        """
        Level-0 (or degenerate) elements come back to Q_p; anything else is a DomainError.
        """
        if not self.is_rational():
            raise DomainError(f"{self} does not lie in Q_{self.p}")
        return self.coeffs[0]

    def valuation(self) -> Fraction | float:
        """
        Exact valuation, with v(zeta - 1) = 1/e. Writes the element in the basis (zeta-1)^j, j < e,
        whose members have pairwise distinct valuations modulo 1.
        """
        best = math.inf
        for j in range(self.e):
            d = sum((c * math.comb(i, j) for i, c in enumerate(self.coeffs) if i >= j), PadicNumber.zero(self.p, self.absprec))
            if not d.is_zero():
                best = min(best, d.val + Fraction(j, self.e))
        return best

    def to_level(self, m: int) -> "CyclotomicPadic":
        """
        Embed into the level-m ring through zeta_{p^n} = zeta_{p^m}^(p^(m-n)).
        """
        if m < self.n:
            raise DomainError(f"cannot lower level {self.n} to {m}")
        if m == self.n:
            return self
        if self.n == 0:
            return CyclotomicPadic.from_padic(self.coeffs[0], m, self.absprec)
        step = self.p ** (m - self.n)
        coeffs = [PadicNumber.zero(self.p, self.absprec)] * phi(self.p, m)
        for i, c in enumerate(self.coeffs):
            coeffs[i * step] = c
        return CyclotomicPadic(self.p, m, tuple(coeffs))

    # --- arithmetic ---------------------------------------------------

    def _coerce(self, other) -> "CyclotomicPadic":
        if isinstance(other, CyclotomicPadic):
            if other.p != self.p:
                raise DomainError(f"Prime mismatch: {self.p} vs {other.p}")
            return other
        if isinstance(other, PadicNumber):
            return CyclotomicPadic.from_padic(other, 0)
        if isinstance(other, (int, Fraction)):
            v = vp(Fraction(other), self.p)
            prec = self.absprec - (0 if v == math.inf else v)
            return CyclotomicPadic.from_rational(self.p, 0, other, max(prec, 1))
        return NotImplemented

    def _align(self, other) -> tuple["CyclotomicPadic", "CyclotomicPadic"]:
        n = max(self.n, other.n)
        return self.to_level(n), other.to_level(n)

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        x, y = self._align(other)
        return CyclotomicPadic(x.p, x.n, tuple(a + b for a, b in zip(x.coeffs, y.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicPadic(self.p, self.n, tuple(-c for c in self.coeffs))

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
        if other.n == 0:
            c = other.coeffs[0]
            return CyclotomicPadic(self.p, self.n, tuple(a * c for a in self.coeffs))
        if self.n == 0:
            return other * self
        x, y = self._align(other)
        terms: dict[int, PadicNumber] = {}
        for i, a in enumerate(x.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(y.coeffs):
                if b.is_zero():
                    continue
                terms[i + j] = terms[i + j] + a * b if i + j in terms else a * b
        return CyclotomicPadic.from_dict(x.p, x.n, terms, min(x.absprec + _floor_val(y), y.absprec + _floor_val(x)))

    __rmul__ = __mul__

    def galois(self, a: int) -> "CyclotomicPadic":
        """
        Image under the automorphism zeta -> zeta^a.
        """
        if a % self.p == 0:
            raise DomainError(f"{a} is not a unit mod {self.p}")
        if self.n == 0:
            return self
        return CyclotomicPadic.from_dict(self.p, self.n, {i * a: c for i, c in enumerate(self.coeffs) if not c.is_zero()}, self.absprec)

    def conjugates(self) -> list["CyclotomicPadic"]:
        if self.n == 0:
            return [self]
        return [self.galois(a) for a in range(1, self.p**self.n) if a % self.p]

    def norm(self) -> PadicNumber:
        """
        Product of all Galois conjugates, an element of Q_p.
        """
        result = self._coerce(1)
        for c in self.conjugates():
            result = result * c
        return result.to_padic()

    def inverse(self) -> "CyclotomicPadic":
        others = self._coerce(1)
        for c in self.conjugates()[1:]:
            others = others * c
        return others * (1 / (others * self).to_padic())

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other.is_rational():
            c = other.coeffs[0]
            return CyclotomicPadic(self.p, self.n, tuple(a / c for a in self.coeffs)).to_level(max(self.n, other.n))
        return self * other.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = self._coerce(1).to_level(self.n)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        try:
            other = self._coerce(other)
        except DomainError:
            return False
        if other is NotImplemented:
            return NotImplemented
        return (self - other).is_zero()

    def __repr__(self):
        if self.n == 0:
            return repr(self.coeffs[0])
        terms = [f"({c!r})*z^{i}" for i, c in enumerate(self.coeffs) if not c.is_zero()]
        return " + ".join(terms) or f"O({self.p}^{self.absprec})"


def _floor_val(x: CyclotomicPadic) -> int:
    vals = [c.val for c in x.coeffs if not c.is_zero()]
    return min(vals) if vals else x.absprec


@lru_cache(maxsize=None)
def _reduction_table(p: int, n: int) -> tuple[tuple[tuple[int, int], ...], ...]:
    # zeta^k for 0 <= k < p^n as signed basis indices
    e = phi(p, n)
    step = p ** (n - 1)
    table = []
    for k in range(p**n):
        if k < e:
            table.append(((k, 1),))
        else:
            r = k - e
            table.append(tuple((r + i * step, -1) for i in range(p - 1)))
    return tuple(table)


def _reduce_exponent(p: int, n: int, k: int) -> tuple[tuple[int, int], ...]:
    if n == 0:
        return ((0, 1),)
    return _reduction_table(p, n)[k % p**n]


# --- Dirichlet characters ---------------------------------------------------


@lru_cache(maxsize=None)
def _wild_log_table(p: int, n: int) -> dict[int, int]:
    # <a> mod p^n -> l with (1+p)^l = <a> mod p^n, l mod p^(n-1)
    mod = p**n
    table = {}
    x = 1
    for ell in range(p ** (n - 1)):
        table[x] = ell
        x = x * (1 + p) % mod
    return table


def wild_log(p: int, n: int, a: int) -> int:
    """
    Exponent l mod p^(n-1) with <a> = (1+p)^l modulo p^n.
    """
    if n <= 1:
        return 0
    mod = p**n
    omega = teichmuller(p, a, n).residue()
    return _wild_log_table(p, n)[a * pow(omega, -1, mod) % mod]


@dataclass(frozen=True)
class DirichletCharacter:
    """
    Character modulo p^n sending the generator g = omega(r)*(1+p) (r the least primitive root mod p)
    to xi^exponent, xi = omega(r)*zeta^p a primitive phi(p^n)-th root of unity. Values are computed
    with `prec` digits for the Teichmuller parts.
    """

    p: int
    n: int
    exponent: int
    prec: int = 20

    def __post_init__(self):
        require_odd_prime(self.p)
        if self.n < 0:
            raise DomainError("negative level")
        object.__setattr__(self, "exponent", self.exponent % phi(self.p, self.n))

    @staticmethod
    def trivial(p: int, n: int = 1, prec: int = 20) -> "DirichletCharacter":
        return DirichletCharacter(p, n, 0, prec)

    @staticmethod
    def from_parts(p: int, n: int, tame: int, wild: int, prec: int = 20) -> "DirichletCharacter":
        """
        The character omega^tame times the wild character sending 1+p to zeta_{p^n}^(p*wild).
        """
        if n == 0:
            return DirichletCharacter(p, 0, 0, prec)
        mod_w = p ** (n - 1)
        # CRT: E = tame mod (p-1), E = wild mod p^(n-1)
        e = tame % (p - 1)
        while e % mod_w != wild % mod_w:
            e += p - 1
        return DirichletCharacter(p, n, e, prec)

    @property
    def modulus(self) -> int:
        return self.p**self.n

    @property
    def tame(self) -> int:
        return self.exponent % (self.p - 1) if self.n else 0

    @property
    def wild(self) -> int:
        return self.exponent % self.p ** (self.n - 1) if self.n else 0

    @property
    def parity(self) -> int:
        return self.tame % 2

    def sign(self) -> int:
        """
        chi(-1).
        """
        return -1 if self.parity else 1

    def conductor_exponent(self) -> int:
        if self.exponent == 0:
            return 0
        if self.wild == 0:
            return 1
        return self.n - vp(self.wild, self.p)

    @property
    def conductor(self) -> int:
        return self.p ** self.conductor_exponent()

    def is_primitive(self) -> bool:
        return self.conductor_exponent() == self.n

    def primitive(self) -> "DirichletCharacter":
        c = self.conductor_exponent()
        return DirichletCharacter.from_parts(self.p, c, self.tame, self.wild // self.p ** (self.n - c) if c else 0, self.prec)

    def lift(self, m: int) -> "DirichletCharacter":
        """
        The same character viewed modulo p^m, m >= n.
        """
        if m < self.n:
            raise DomainError(f"cannot view a character mod {self.modulus} modulo {self.p ** m}")
        if self.n == 0:
            return DirichletCharacter.trivial(self.p, m, self.prec) if m else self
        return DirichletCharacter.from_parts(self.p, m, self.tame, self.wild * self.p ** (m - self.n), self.prec)

    def conjugate(self) -> "DirichletCharacter":
        return DirichletCharacter(self.p, self.n, -self.exponent, self.prec)

    def __mul__(self, other: "DirichletCharacter") -> "DirichletCharacter":
        m = max(self.n, other.n)
        x, y = self.lift(m), other.lift(m)
        return DirichletCharacter(self.p, m, x.exponent + y.exponent, min(self.prec, other.prec))

    def zeta_exponent(self, a: int) -> int:
        """
        k with chi(a) = omega(a)^tame * zeta_{p^n}^k.
        """
        return self.p * self.wild * wild_log(self.p, self.n, a) % self.p**self.n if self.n else 0

    def value(self, a: int) -> CyclotomicPadic:
        """
        chi(a) as an element of the level-n cyclotomic ring; 0 when p divides a (n >= 1).
        """
        if self.n == 0:
            return CyclotomicPadic.from_rational(self.p, 0, 1, self.prec)
        if a % self.p == 0:
            return CyclotomicPadic.from_rational(self.p, self.n, 0, self.prec)
        omega = teichmuller(self.p, a, self.prec) ** self.tame
        return CyclotomicPadic.monomial(omega, self.n, self.zeta_exponent(a))

    def __call__(self, a: int) -> CyclotomicPadic:
        return self.value(a)

    def __repr__(self):
        return f"DirichletCharacter(p={self.p}, n={self.n}, tame={self.tame}, wild={self.wild})"


def characters(p: int, n: int, prec: int = 20) -> list[DirichletCharacter]:
    """
    All characters modulo p^n.
    """
    return [DirichletCharacter(p, n, e, prec) for e in range(phi(p, n))]


def gauss_sum(chi: DirichletCharacter) -> CyclotomicPadic:
    """
    G(chi) = sum over units a mod p^n of chi(a) zeta^a.
    """
    if chi.n < 1:
        raise DomainError("Gauss sums need modulus p^n with n >= 1")
    p, n = chi.p, chi.n
    terms: dict[int, PadicNumber] = {}
    for a in range(1, p**n):
        if a % p == 0:
            continue
        k = (a + chi.zeta_exponent(a)) % p**n
        w = teichmuller(p, a, chi.prec) ** chi.tame
        terms[k] = terms[k] + w if k in terms else w
    return CyclotomicPadic.from_dict(p, n, terms, chi.prec)
