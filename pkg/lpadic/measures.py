"""
Distributions and measures on Z_p and Z_p^x.

A distribution is stored level by level: levels[m][a] = mu(a + p^m Z_p) for residues a mod p^m
(units only on Z_p^x). Level 0 holds the total mass under key 0. Values may be exact rationals,
PadicNumbers or CyclotomicPadics; nothing here depends on which.
"""

import logging
import math
from collections.abc import Callable, Iterable
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from lpadic.errors import DomainError, LevelError
from lpadic.helpers import bernoulli, require_odd_prime, stirling2, vp

log = logging.getLogger(__name__)

DOMAINS = ("Zp", "Zpx")


def is_zero(x) -> bool:
    if hasattr(x, "is_zero"):
        return x.is_zero()
    return x == 0


def valuation(x, p: int) -> int | Fraction | float:
    if hasattr(x, "valuation"):
        return x.valuation()
    return vp(Fraction(x), p)


def total(values: Iterable) -> Any:
    result = None
    for v in values:
        result = v if result is None else result + v
    return 0 if result is None else result


def residues(p: int, m: int, domain: str) -> list[int]:
    if m == 0:
        return [0]
    return [a for a in range(p**m) if domain == "Zp" or a % p]


def children(p: int, a: int, m: int) -> list[int]:
    """
    Residues mod p^(m+1) of the subintervals of a + p^m Z_p.
    """
    if m == 0:
        return list(range(p))
    return [a + b * p**m for b in range(p)]


@dataclass
class FiniteLevelDistribution:
    p: int
    domain: str
    levels: dict[int, dict[int, Any]] = field(default_factory=dict)
    meta: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        require_odd_prime(self.p)
        if self.domain not in DOMAINS:
            raise DomainError(f"domain must be one of {DOMAINS}, got {self.domain!r}")

    @property
    def max_level(self) -> int:
        return max(self.levels) if self.levels else -1

    def __call__(self, a: int, m: int):
        return self.value(a, m)

    def value(self, a: int, m: int):
        if m not in self.levels:
            raise LevelError(f"level {m} not stored (max level {self.max_level})")
        a %= self.p**m
        if self.domain == "Zpx" and m > 0 and a % self.p == 0:
            raise DomainError(f"{a} + {self.p}^{m}Z_p is not contained in Z_p^x")
        return self.levels[m].get(a, 0)

    def scale(self, c) -> "FiniteLevelDistribution":
        return FiniteLevelDistribution(
            self.p, self.domain, {m: {a: v * c for a, v in table.items()} for m, table in self.levels.items()}, dict(self.meta)
        )

    def __add__(self, other: "FiniteLevelDistribution") -> "FiniteLevelDistribution":
        if (self.p, self.domain) != (other.p, other.domain):
            raise DomainError("cannot add distributions on different spaces")
        common = set(self.levels) & set(other.levels)
        return FiniteLevelDistribution(
            self.p,
            self.domain,
            {m: {a: self.value(a, m) + other.value(a, m) for a in residues(self.p, m, self.domain)} for m in sorted(common)},
        )

    def restrict_to_units(self) -> "FiniteLevelDistribution":
        if self.domain == "Zpx":
            return self
        levels = {m: {a: v for a, v in table.items() if a % self.p} for m, table in self.levels.items() if m > 0}
        if 1 in levels:
            levels[0] = {0: total(levels[1].values())}
        return FiniteLevelDistribution(self.p, "Zpx", levels, dict(self.meta))


@dataclass
class Violation:
    level: int
    residue: int
    parent: Any
    children_sum: Any


@dataclass
class AdditivityReport:
    checked: int
    violations: list[Violation]

    @property
    def ok(self) -> bool:
        return not self.violations


def check_additivity(mu: FiniteLevelDistribution) -> AdditivityReport:
    """
    Compare each stored interval with the sum over its p children, wherever both levels are stored.
    """
    if len(mu.levels) < 2:
        raise LevelError("additivity needs at least two stored levels")
    checked = 0
    violations = []
    for m in sorted(mu.levels):
        if m + 1 not in mu.levels:
            continue
        for a in residues(mu.p, m, mu.domain):
            kids = [b for b in children(mu.p, a, m) if mu.domain == "Zp" or b % mu.p]
            s = total(mu.value(b, m + 1) for b in kids)
            parent = mu.value(a, m)
            checked += 1
            if not is_zero(parent - s):
                violations.append(Violation(m, a, parent, s))
    log.debug(f"additivity: {checked} intervals, {len(violations)} violations")
    return AdditivityReport(checked, violations)


# --- boundedness -----------------------------------------------------------


@dataclass
class BoundednessCertificate:
    """
    |mu(U)|_p <= p^bound_exponent on every stored interval, observed up to `level`.
    """

    bound_exponent: int | Fraction | float
    level: int
    min_valuations: dict[int, int | Fraction | float]
    bounded: bool


def level_min_valuation(mu: FiniteLevelDistribution, m: int):
    return min((valuation(v, mu.p) for v in mu.levels[m].values()), default=math.inf)


def certify_bounded(mu: FiniteLevelDistribution) -> BoundednessCertificate:
    """
    The bound is exact on stored data. The verdict is a finite-window one: a distribution whose
    smallest valuation keeps dropping over the last two level transitions is reported unbounded.
    """
    mins = {m: level_min_valuation(mu, m) for m in sorted(mu.levels)}
    worst = min(mins.values(), default=math.inf)
    tail = list(mins.values())[-3:]
    bounded = not (len(tail) == 3 and tail[0] > tail[1] > tail[2])
    return BoundednessCertificate(-worst, mu.max_level, mins, bounded)


# --- Riemann sums ----------------------------------------------------------


def representatives(p: int, m: int, domain: str, shift: int = 0) -> list[int]:
    """
    Least positive residues b in [1, p^m], moved by shift * p^m.
    """
    return [(a if a else p**m) + shift * p**m for a in residues(p, m, domain)]


def riemann_sum(mu: FiniteLevelDistribution, f: Callable[[int], Any], m: int, shift: int = 0):
    if m not in mu.levels:
        raise LevelError(f"level {m} exceeds stored data (max level {mu.max_level})")
    return total(f(b) * mu.value(b, m) for b in representatives(mu.p, m, mu.domain, shift))


@dataclass
class RiemannReport:
    sums: dict[int, Any]
    epsilon_exponents: dict[int, int | Fraction | float]
    shifted: Any = None

    @property
    def value(self):
        return self.sums[max(self.sums)]

    def stabilized_from(self) -> int | None:
        """
        First level after which every reported sum agrees with the deepest one.
        """
        last = self.value
        level = None
        for m in sorted(self.sums, reverse=True):
            if not is_zero(self.sums[m] - last):
                break
            level = m
        return level


def riemann_integrate(mu: FiniteLevelDistribution, f: Callable[[int], Any], m: int, shift: int | None = None) -> RiemannReport:
    """
    Sums S(f, R_l) for every stored level l <= m, together with log_p of
    eps_l = max_b |mu(b + p^l Z_p)| p^-l. With `shift` the level-m sum is recomputed on shifted
    representatives.
    """
    if m > mu.max_level or m not in mu.levels:
        raise LevelError(f"level {m} exceeds stored data (max level {mu.max_level})")
    sums = {}
    eps = {}
    for level in sorted(mu.levels):
        if level == 0 or level > m:
            continue
        sums[level] = riemann_sum(mu, f, level)
        eps[level] = -level_min_valuation(mu, level) - level
    shifted = riemann_sum(mu, f, m, shift) if shift else None
    return RiemannReport(sums, eps, shifted)


# --- measures as finite combinations of Dirac masses ------------------------


@dataclass(frozen=True)
class DiracMeasure:
    """
    sum of masses[a] * delta_a over integer points a of Z_p.
    """

    p: int
    masses: tuple[tuple[int, Any], ...]

    @staticmethod
    def of(p: int, masses: dict[int, Any]) -> "DiracMeasure":
        if any(a < 0 for a in masses):
            raise DomainError("Dirac points must be nonnegative integers")
        return DiracMeasure(p, tuple(sorted((a, c) for a, c in masses.items() if not is_zero(c))))

    @staticmethod
    def delta(p: int, a: int, mass=1) -> "DiracMeasure":
        return DiracMeasure.of(p, {a: Fraction(mass)})

    def as_dict(self) -> dict[int, Any]:
        return dict(self.masses)

    def __add__(self, other: "DiracMeasure") -> "DiracMeasure":
        d = self.as_dict()
        for a, c in other.masses:
            d[a] = d[a] + c if a in d else c
        return DiracMeasure.of(self.p, d)

    def scale(self, c) -> "DiracMeasure":
        return DiracMeasure.of(self.p, {a: m * c for a, m in self.masses})

    def integrate(self, f: Callable[[int], Any]):
        return total(f(a) * c for a, c in self.masses)

    def bound_exponent(self):
        """
        log_p of sup |mu(U)|, attained once the support points sit in distinct intervals.
        """
        return -min((valuation(c, self.p) for _, c in self.masses), default=math.inf)

    def table(self, levels: int, domain: str = "Zp") -> FiniteLevelDistribution:
        out = {}
        for m in range(levels + 1):
            row: dict[int, Any] = {}
            for a, c in self.masses:
                r = a % self.p**m
                if domain == "Zpx" and a % self.p == 0:
                    continue
                row[r] = row[r] + c if r in row else c
            out[m] = row
        return FiniteLevelDistribution(self.p, domain, out)

    def __eq__(self, other):
        if not isinstance(other, DiracMeasure):
            return NotImplemented
        diff = self + other.scale(-1)
        return self.p == other.p and not diff.masses


def amice_transform(mu: DiracMeasure | FiniteLevelDistribution, terms: int) -> list:
    """
    Coefficients int binom(x, n) dmu for n < terms. Tables are integrated with Riemann sums at their
    deepest level, so their coefficients are only as good as that level.
    """
    if isinstance(mu, DiracMeasure):
        return [total(c * math.comb(a, n) for a, c in mu.masses) for n in range(terms)]
    if mu.domain != "Zp":
        raise DomainError("the Amice transform is defined for measures on Z_p")
    cert = certify_bounded(mu)
    if not cert.bounded:
        raise DomainError(f"unbounded distribution (valuations {cert.min_valuations})")
    m = mu.max_level
    return [riemann_sum(mu, lambda x, n=n: math.comb(x, n), m) for n in range(terms)]


def inverse_amice(p: int, coeffs: list) -> DiracMeasure:
    """
    The measure whose binomial moments are the given coefficients, using T^n = sum_i (-1)^(n-i) C(n,i) (1+T)^i.
    """
    masses: dict[int, Any] = {}
    for n, c in enumerate(coeffs):
        if is_zero(c):
            continue
        if valuation(c, p) < 0:
            raise DomainError(f"coefficient {n} has negative valuation, not a measure")
        for i in range(n + 1):
            term = c * ((-1) ** (n - i) * math.comb(n, i))
            masses[i] = masses[i] + term if i in masses else term
    return DiracMeasure.of(p, masses)


def convolve(lam, mu):
    """
    Additive convolution, for Dirac combinations or for level tables on Z_p (level by level).
    """
    if isinstance(lam, DiracMeasure) and isinstance(mu, DiracMeasure):
        masses: dict[int, Any] = {}
        for a, c in lam.masses:
            for b, d in mu.masses:
                masses[a + b] = masses[a + b] + c * d if a + b in masses else c * d
        return DiracMeasure.of(lam.p, masses)
    if lam.domain != "Zp" or mu.domain != "Zp":
        raise DomainError("convolution is defined on the additive group Z_p only")
    levels = {}
    for m in sorted(set(lam.levels) & set(mu.levels)):
        q = lam.p**m
        row: dict[int, Any] = {}
        for a, x in lam.levels[m].items():
            for b, y in mu.levels[m].items():
                r = (a + b) % q
                row[r] = row[r] + x * y if r in row else x * y
        levels[m] = row
    return FiniteLevelDistribution(lam.p, "Zp", levels)


def series_mul(f: list, g: list, terms: int | None = None) -> list:
    if terms is None:
        terms = min(len(f), len(g))
    return [total(f[i] * g[n - i] for i in range(n + 1) if i < len(f) and n - i < len(g)) for n in range(terms)]


# --- admissible measures ---------------------------------------------------


@dataclass
class AdmissibleMeasure:
    """
    moments[n][a][i] = mu((x - a)^i 1_{a + p^n Z_p}) for 0 <= i <= h, a a unit residue mod p^n.
    """

    p: int
    h: int
    moments: dict[int, dict[int, list]]
    meta: dict[str, Any] = field(default_factory=dict)

    def distribution(self) -> FiniteLevelDistribution:
        levels = {n: {a: ms[0] for a, ms in row.items()} for n, row in self.moments.items()}
        if 1 in levels and 0 not in levels:
            levels[0] = {0: total(levels[1].values())}
        return FiniteLevelDistribution(self.p, "Zpx", levels, dict(self.meta))

    def moment(self, i: int, a: int, n: int):
        if n not in self.moments:
            raise LevelError(f"level {n} not stored")
        return self.moments[n][a % self.p**n][i]


@dataclass
class AdmissibilityReport:
    h: int
    constant: int | Fraction
    exponents: dict[int, Fraction | float]
    failures: list[tuple[int, int]]

    @property
    def passes(self) -> bool:
        return not self.failures


def _deficit(measure: AdmissibleMeasure, i: int, n: int):
    # log_p max_a |moment_i(a, n)|
    vals = [valuation(ms[i], measure.p) for ms in measure.moments[n].values()]
    return -min(vals, default=math.inf)


def check_admissible(measure: AdmissibleMeasure) -> AdmissibilityReport:
    """
    Fits |mu((x-a)^i 1_{a+p^n})| <= p^(c + n(h-i)): c is taken from the first half of the stored
    levels and checked on the rest. exponents[i] is the largest observed deficit per level.
    """
    levels = sorted(n for n in measure.moments if n >= 1)
    if not levels:
        raise LevelError("no moment levels stored")
    split = math.ceil(levels[-1] / 2)
    c = 0
    for n in levels:
        if n > split:
            continue
        for i in range(measure.h + 1):
            d = _deficit(measure, i, n)
            if d != -math.inf:
                c = max(c, d - n * (measure.h - i))
    exponents = {}
    failures = []
    for i in range(measure.h + 1):
        best = -math.inf
        for n in levels:
            d = _deficit(measure, i, n)
            if d != -math.inf:
                best = max(best, Fraction(d) / n)
            if n > split and d > c + n * (measure.h - i):
                failures.append((i, n))
        exponents[i] = best
    return AdmissibilityReport(measure.h, c, exponents, failures)


def check_moment_additivity(measure: AdmissibleMeasure) -> AdditivityReport:
    """
    mu((x-a)^i 1_{a+p^n}) against the sum over children b of the moments re-centred from b to a:
    (x-a)^i = sum_l C(i,l) (b-a)^(i-l) (x-b)^l.
    """
    p = measure.p
    checked = 0
    violations = []
    for n in sorted(measure.moments):
        if n == 0 or n + 1 not in measure.moments:
            continue
        for a, ms in measure.moments[n].items():
            for i in range(measure.h + 1):
                s = total(
                    measure.moment(l, b, n + 1) * (math.comb(i, l) * (b - a) ** (i - l))
                    for b in children(p, a, n)
                    for l in range(i + 1)
                )
                checked += 1
                if not is_zero(ms[i] - s):
                    violations.append(Violation(n, a, ms[i], s))
    return AdditivityReport(checked, violations)


# --- growth of power series --------------------------------------------------


def modulus_function(p: int, coeffs: list, c: Fraction | int) -> Fraction | float:
    """
    log_p M_f(r) for r = p^-c, i.e. max_n (-v(b_n) - c n) over the stored coefficients.
    """
    return max((-valuation(b, p) - c * n for n, b in enumerate(coeffs) if not is_zero(b)), default=-math.inf)


def log_power_series(k: int, terms: int) -> list[Fraction]:
    """
    Coefficients of log(1+T)^k.
    """
    base = [Fraction(0)] + [Fraction((-1) ** (n + 1), n) for n in range(1, terms)]
    out = [Fraction(1)] + [Fraction(0)] * (terms - 1)
    for _ in range(k):
        out = series_mul(out, base, terms)
    return out


def growth_compare(p: int, f: list, g: list) -> str:
    """
    Finite-window verdict "o", "O" or "neither" for f against g, from the running maxima of
    |b_n(f)| / |b_n(g)|: the ratio shrinking between the two halves of the window reads as o(g),
    staying level reads as O(g).
    """
    if len(f) != len(g):
        raise DomainError("truncations must have equal length")

    def running(coeffs):
        best = -math.inf
        out = []
        for b in coeffs:
            if not is_zero(b):
                best = max(best, -valuation(b, p))
            out.append(best)
        return out

    rf, rg = running(f), running(g)
    ratio = [x - y for x, y in zip(rf, rg) if y != -math.inf and x != -math.inf]
    if not ratio:
        return "neither"
    half = max(len(ratio) // 2, 1)
    first, second = max(ratio[:half]), max(ratio[half:] or ratio[-1:])
    if second < first:
        return "o"
    if second == first:
        return "O"
    return "neither"


# --- the regularized Bernoulli measure ----------------------------------------


def bernoulli_distribution(p: int, c: int, levels: int) -> FiniteLevelDistribution:
    """
    mu_c(a + p^m Z_p) = B1(a/p^m) - c B1(((c^-1 a) mod p^m) / p^m), B1(x) = x - 1/2.
    """
    require_odd_prime(p)
    if c % p == 0 or c == 1:
        raise DomainError(f"regularizer c={c} must be a unit different from 1")
    half = Fraction(1, 2)
    out = {}
    for m in range(levels + 1):
        q = p**m
        cinv = pow(c, -1, q) if m else 0
        out[m] = {a: (Fraction(a, q) - half) - c * (Fraction(cinv * a % q, q) - half) for a in range(q)}
    return FiniteLevelDistribution(p, "Zp", out, {"regularizer": c})


def bernoulli_amice(c: int, terms: int) -> list[Fraction]:
    """
    Amice transform of mu_c: 1/T - c/((1+T)^c - 1) = E/D with D = sum C(c, n+1) T^n and
    E = sum C(c, n+2) T^n.
    """
    d = [Fraction(math.comb(c, n + 1)) for n in range(terms)]
    e = [Fraction(math.comb(c, n + 2)) for n in range(terms)]
    q: list[Fraction] = []
    for n in range(terms):
        q.append((e[n] - sum(q[i] * d[n - i] for i in range(n))) / d[0])
    return q


def bernoulli_moment(c: int, k: int) -> Fraction:
    """
    int_{Z_p} x^k dmu_c, from x^k = sum_n S(k,n) n! binom(x, n) against the Amice coefficients.
    """
    amice = bernoulli_amice(c, k + 1)
    return sum((stirling2(k, n) * math.factorial(n) * amice[n] for n in range(k + 1)), Fraction(0))


def bernoulli_moment_closed_form(c: int, k: int) -> Fraction:
    return (1 - Fraction(c) ** (k + 1)) * bernoulli(k + 1) / (k + 1)
