"""
Power series in T over Q_p standing for measures on Z_p^x, one series per tame branch:
the branch-t series g satisfies g(chi_w(1+p) - 1) = int omega^t chi_w dmu for wild characters chi_w.
"""

import logging
import math
from collections.abc import Iterable
from dataclasses import dataclass, field
from fractions import Fraction

from lpadic.cyclotomic import CyclotomicPadic, wild_log
from lpadic.errors import DomainError, IndeterminateError, LevelError, PrecisionError
from lpadic.measures import FiniteLevelDistribution, is_zero, residues
from lpadic.padic import PadicNumber, teichmuller
from lpadic.reports import padic_json
from lpadic.weight import WeightChar

log = logging.getLogger(__name__)


def to_padic(p: int, x, prec: int) -> PadicNumber:
    if isinstance(x, PadicNumber):
        return x
    if isinstance(x, CyclotomicPadic):
        return x.to_padic()
    return PadicNumber.from_rational(p, Fraction(x), prec)


@dataclass(frozen=True)
class IwasawaSeries:
    p: int
    tame: int
    coeffs: tuple[PadicNumber, ...]
    prec: int = 20

    @staticmethod
    def of(p: int, coeffs: Iterable, tame: int = 0, prec: int = 20) -> "IwasawaSeries":
        return IwasawaSeries(p, tame % (p - 1), tuple(to_padic(p, c, prec) for c in coeffs), prec)

    @property
    def terms(self) -> int:
        return len(self.coeffs)

    @property
    def gamma(self) -> int:
        return 1 + self.p

    def _check(self, other: "IwasawaSeries"):
        if (self.p, self.tame) != (other.p, other.tame):
            raise DomainError("series live on different branches")

    def __add__(self, other: "IwasawaSeries") -> "IwasawaSeries":
        self._check(other)
        n = min(self.terms, other.terms)
        return IwasawaSeries(self.p, self.tame, tuple(a + b for a, b in zip(self.coeffs[:n], other.coeffs[:n])), self.prec)

    def __neg__(self) -> "IwasawaSeries":
        return IwasawaSeries(self.p, self.tame, tuple(-a for a in self.coeffs), self.prec)

    def __sub__(self, other: "IwasawaSeries") -> "IwasawaSeries":
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, IwasawaSeries):
            return self.scale(other)
        self._check(other)
        n = min(self.terms, other.terms)
        out = []
        for k in range(n):
            acc = PadicNumber.zero(self.p, self.prec + 2 * n)
            for i in range(k + 1):
                acc = acc + self.coeffs[i] * other.coeffs[k - i]
            out.append(acc)
        return IwasawaSeries(self.p, self.tame, tuple(out), self.prec)

    def scale(self, c) -> "IwasawaSeries":
        return IwasawaSeries(self.p, self.tame, tuple(a * c for a in self.coeffs), self.prec)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def order(self) -> int:
        """
        ord_T: index of the first coefficient that is nonzero at precision.
        """
        for i, c in enumerate(self.coeffs):
            if not c.is_zero():
                return i
        raise IndeterminateError("series is zero at working precision")

    def evaluate(self, t: PadicNumber) -> PadicNumber:
        """
        Horner evaluation at a point of the open unit disc.
        """
        if not t.is_zero() and t.val < 1:
            raise DomainError(f"{t} is not in the open unit disc")
        acc = PadicNumber.zero(self.p, self.prec)
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc

    def evaluate_at_root(self, level: int, wild: int) -> CyclotomicPadic:
        """
        Value at T = u - 1 for u = zeta_{p^level}^(p*wild). Re-expands in powers of u so that only
        monomials in zeta are ever formed.
        """
        in_u: dict[int, PadicNumber] = {}
        for n, b in enumerate(self.coeffs):
            if b.is_zero():
                continue
            for i in range(n + 1):
                term = b * ((-1) ** (n - i) * math.comb(n, i))
                k = self.p * wild * i
                in_u[k] = in_u[k] + term if k in in_u else term
        return CyclotomicPadic.from_dict(self.p, level, in_u, self.prec)

    def evaluate_char(self, chi: WeightChar) -> CyclotomicPadic:
        if chi.tame != self.tame:
            raise DomainError(f"character has tame index {chi.tame}, series is on branch {self.tame}")
        if not chi.is_finite():
            return CyclotomicPadic.from_padic(self.evaluate(chi.wild - 1))
        return self.evaluate_at_root(chi.level, chi.wild)

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "t": self.tame,
            "gamma": self.gamma,
            "coeffs": [padic_json(c) for c in self.coeffs],
            "M": self.terms,
            "N": self.prec,
        }


def measure_to_series(mu: FiniteLevelDistribution, tame: int, level: int | None = None, prec: int = 20) -> IwasawaSeries:
    """
    g = sum_a omega(a)^tame mu(a + p^L Z_p) (1+T)^l(a), with <a> = (1+p)^l(a) mod p^L. The result has
    p^(L-1) terms and is exact at every wild character of conductor dividing p^L.
    """
    if mu.domain != "Zpx":
        mu = mu.restrict_to_units()
    p = mu.p
    if level is None:
        level = mu.max_level
    if level < 1 or level not in mu.levels:
        raise LevelError(f"level {level} not stored (max level {mu.max_level})")
    terms = p ** (level - 1)
    in_gamma = [PadicNumber.zero(p, prec)] * terms
    for a in residues(p, level, "Zpx"):
        v = mu.value(a, level)
        if is_zero(v):
            continue
        w = teichmuller(p, a, prec) ** tame * to_padic(p, v, prec)
        ell = wild_log(p, level, a)
        in_gamma[ell] = in_gamma[ell] + w
    # (1+T)^l expanded binomially
    coeffs = [PadicNumber.zero(p, prec)] * terms
    for ell, w in enumerate(in_gamma):
        if w.is_zero():
            continue
        for n in range(ell + 1):
            coeffs[n] = coeffs[n] + w * math.comb(ell, n)
    log.debug(f"branch {tame}: series with {terms} terms from level {level}")
    return IwasawaSeries(p, tame % (p - 1), tuple(coeffs), prec)


def branch_family(mu: FiniteLevelDistribution, level: int | None = None, prec: int = 20) -> dict[int, IwasawaSeries]:
    return {t: measure_to_series(mu, t, level, prec) for t in range(mu.p - 1)}


@dataclass
class WeierstrassData:
    mu: int
    lam: int
    unit: bool


def weierstrass_invariants(g: IwasawaSeries) -> WeierstrassData:
    vals = [c.valuation() for c in g.coeffs]
    mu = min(vals)
    if mu == math.inf:
        raise IndeterminateError("all coefficients vanish at working precision")
    lam = vals.index(mu)
    return WeierstrassData(int(mu), lam, mu == 0 and lam == 0)


@dataclass
class QuotientResult:
    """
    F/G = T^-pole * quotient. `shift` is ord_T(G); the pole is what F fails to cancel of it.
    """

    quotient: IwasawaSeries
    remainder: bool
    shift: int = 0
    reasons: list[str] = field(default_factory=list)
    pole: int = 0

    def evaluate_at_root(self, level: int, wild: int) -> CyclotomicPadic:
        """
        F/G at T = u - 1, defined wherever u != 1 or there is no pole.
        """
        value = self.quotient.evaluate_at_root(level, wild)
        if not self.pole:
            return value
        t = IwasawaSeries.of(self.quotient.p, [0, 1], self.quotient.tame, self.quotient.prec).evaluate_at_root(level, wild)
        if t.is_zero():
            raise DomainError(f"F/G has a pole of order {self.pole} at the trivial wild character")
        return value / t**self.pole


def series_quotient(f: IwasawaSeries, g: IwasawaSeries) -> QuotientResult:
    """
    F/G in K((T)). With d = ord_T(G) and e = min(d, ord_T(F)), quotient = (F/T^e) / (G/T^d) and
    F/G = T^(e-d) * quotient. The remainder flag is raised when that leaves a pole or when the quotient
    has a non-integral coefficient.
    """
    f._check(g)
    if g.is_zero():
        raise PrecisionError("division by a series that is zero at working precision")
    d = g.order()
    e = d if f.is_zero() else min(d, f.order())
    reasons = []
    if e < d:
        reasons.append(f"F does not vanish to order {d} at T=0: pole of order {d - e}")
    fs, gs = f.coeffs[e:], g.coeffs[d:]
    n = min(len(fs), len(gs))
    q: list[PadicNumber] = []
    for k in range(n):
        acc = fs[k]
        for i in range(k):
            acc = acc - q[i] * gs[k - i]
        q.append(acc / gs[0])
    if any(not c.is_zero() and c.val < 0 for c in q):
        reasons.append("quotient has non-integral coefficients")
    return QuotientResult(IwasawaSeries(f.p, f.tame, tuple(q), f.prec), bool(reasons), d, reasons, d - e)


@dataclass(frozen=True)
class ZeroPoint:
    """
    Wild character sending 1+p to u = zeta_{p^level}^(p*wild), u of exact order p^(level-1).
    """

    wild: int
    level: int


def wild_points(p: int, n: int) -> list[ZeroPoint]:
    """
    Every u with u^(p^(n-1)) = 1, each at the smallest level where it lives.
    """
    out = [ZeroPoint(0, 1)]
    for level in range(2, n + 1):
        out += [ZeroPoint(s, level) for s in range(p ** (level - 1)) if s % p]
    return out


def zero_set(g: IwasawaSeries, n: int) -> list[ZeroPoint]:
    """
    Wild characters of conductor dividing p^n (so u^(p^(n-1)) = 1) at which g vanishes to precision.
    """
    zeros = [pt for pt in wild_points(g.p, n) if g.evaluate_at_root(pt.level, pt.wild).is_zero()]
    log.debug(f"zero_set: {len(zeros)} zeros among conductors up to {g.p}^{n}")
    return zeros


def nonzero_witness(g: IwasawaSeries, n: int) -> ZeroPoint | None:
    for pt in wild_points(g.p, n):
        if not g.evaluate_at_root(pt.level, pt.wild).is_zero():
            return pt
    return None
