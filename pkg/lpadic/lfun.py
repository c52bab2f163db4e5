"""
Concrete p-adic L-functions: the Kubota-Leopoldt zeta function through the regularized Bernoulli
measure, and the measure mu_{f,alpha} of a rational newform built from its modular symbol.
"""

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from lpadic.cyclotomic import CyclotomicPadic, DirichletCharacter, gauss_sum
from lpadic.errors import DomainError, LevelError, NonOrdinaryError, SupersingularError
from lpadic.helpers import bernoulli, require_odd_prime, vp
from lpadic.iwasawa import IwasawaSeries, branch_family
from lpadic.measures import (
    AdmissibilityReport,
    AdmissibleMeasure,
    FiniteLevelDistribution,
    bernoulli_distribution,
    bernoulli_moment,
    check_admissible,
    total,
)
from lpadic.modsym import EigenSymbol
from lpadic.padic import PadicNumber
from lpadic.weight import WeightChar

log = logging.getLogger(__name__)


# --- roots of the Hecke polynomial ------------------------------------------


@dataclass
class HeckeRootChoice:
    """
    A root alpha of X^2 - a_p X + eps p^(k-1), with beta = eps p^(k-1) / alpha.
    """

    p: int
    a_p: int
    eps: int
    k: int
    alpha: PadicNumber
    beta: PadicNumber
    N: int = 1

    @property
    def slope(self) -> int:
        return self.alpha.valuation()

    @property
    def ordinary(self) -> bool:
        return self.slope == 0

    @property
    def allowable(self) -> bool:
        return self.slope < self.k - 1

    def residual(self) -> PadicNumber:
        """
        alpha^2 - a_p alpha + eps p^(k-1), zero to precision.
        """
        return self.alpha * self.alpha - self.alpha * self.a_p + self.eps * self.p ** (self.k - 1)


def hensel_root(a_p: int, eps: int, k: int, p: int, N: int = 1, prec: int = 20, which: str = "small") -> HeckeRootChoice:
    """
    Solve X^2 - a_p X + eps p^(k-1) by iterating alpha <- a_p - q/alpha, which converges to the root
    of valuation v_p(a_p) whenever v_p(a_p) < (k-1)/2. `which="large"` returns the other root, of
    slope k-1-v_p(a_p).
    """
    require_odd_prime(p)
    if N % p == 0:
        raise DomainError(f"{p} divides the level {N}")
    if which not in ("small", "large"):
        raise DomainError(f"root choice must be 'small' or 'large', got {which!r}")
    if a_p == 0:
        raise SupersingularError(f"a_{p} = 0: both roots have slope {Fraction(k - 1, 2)}")
    v = vp(a_p, p)
    if 2 * v >= k - 1:
        raise NonOrdinaryError(f"v_{p}(a_{p}) = {v} >= (k-1)/2: the roots do not separate over Q_{p}")
    work = prec + k
    q = PadicNumber.from_rational(p, eps * p ** (k - 1), work)
    a = PadicNumber.from_rational(p, a_p, work)
    alpha = a
    for _ in range(work + 1):
        alpha = a - q / alpha
    alpha = alpha.with_prec(alpha.val + prec)
    beta = q / alpha
    if which == "large":
        alpha, beta = beta, alpha
    root = HeckeRootChoice(p, a_p, eps, k, alpha, beta, N)
    log.debug(f"Hecke root at p={p}: alpha = {alpha}, slope {root.slope}")
    return root


# --- Euler factors -----------------------------------------------------------


@dataclass
class EulerFactor:
    value: Any
    exceptional: bool


def _char_at_p(chi: DirichletCharacter) -> CyclotomicPadic:
    # chi(p) for the primitive character: 1 for trivial chi, 0 otherwise
    return chi.primitive().value(chi.p)


def euler_factor_mtt(chi: DirichletCharacter, j: int, root: HeckeRootChoice) -> EulerFactor:
    """
    (1 - conj(chi)(p) eps p^(k-2-j) / alpha) (1 - chi(p) p^j / alpha).
    """
    p = root.p
    first = 1 - _char_at_p(chi.conjugate()) * (Fraction(root.eps * p ** (root.k - 2)) / p**j) / root.alpha
    second = 1 - _char_at_p(chi) * p**j / root.alpha
    value = first * second
    return EulerFactor(value, value.is_zero())


@dataclass(frozen=True)
class LocalCharacter:
    """
    A character of Q_p^x through the data the interpolation formula needs: v_p of its conductor and
    its value at p (meaningful when unramified).
    """

    conductor_exponent: int
    value_at_p: Any = 1


def euler_factor_auto(chi: LocalCharacter, alpha) -> EulerFactor:
    if not isinstance(alpha, PadicNumber) or alpha.is_zero() or alpha.val != 0:
        raise DomainError(f"alpha must be a p-adic unit, got {alpha}")
    if chi.conductor_exponent > 0:
        value = alpha ** (-chi.conductor_exponent)
    elif alpha == 1 or alpha == -1:
        value = 1 - alpha / chi.value_at_p
    else:
        value = (1 - chi.value_at_p / alpha) * (1 - 1 / (alpha * chi.value_at_p))
    zero = value.is_zero() if hasattr(value, "is_zero") else value == 0
    return EulerFactor(value, zero)


# --- Kubota-Leopoldt ----------------------------------------------------------


@dataclass
class ZetaValue:
    p: int
    k: int
    c: int
    value: PadicNumber
    exact: Fraction
    pole_branch: bool


def kubota_leopoldt(p: int, k: int, prec: int = 20, c: int | None = None) -> ZetaValue:
    """
    (1 - p^k) zeta(-k) = -int_{Z_p^x} x^k dE_c / (1 - c^(k+1)), where E_c is the c-regularized
    Bernoulli measure and int_{pZ_p} x^k dE_c = p^k int_{Z_p} x^k dE_c.
    """
    require_odd_prime(p)
    if k < 1:
        raise DomainError(f"k must be at least 1, got {k}")
    if c is None:
        c = 1 + p
    if c % p == 0 or c == 1:
        raise DomainError(f"regularizer c={c} must be a unit different from 1")
    unit_moment = (1 - p**k) * bernoulli_moment(c, k)
    exact = -unit_moment / (1 - c ** (k + 1))
    pole = (k + 1) % (p - 1) == 0
    if pole:
        log.warning(f"k+1 = {k + 1} is divisible by p-1 = {p - 1}: this branch carries the pole of zeta_p")
    return ZetaValue(p, k, c, PadicNumber.from_rational(p, exact, prec), exact, pole)


def zeta_closed_form(p: int, k: int) -> Fraction:
    return -(1 - p**k) * bernoulli(k + 1) / (k + 1)


def zeta_measure(p: int, levels: int, c: int | None = None) -> FiniteLevelDistribution:
    """
    E_c restricted to Z_p^x as a level table.
    """
    if c is None:
        c = 1 + p
    return bernoulli_distribution(p, c, levels).restrict_to_units()


# --- the measure of a modular form -----------------------------------------------


@dataclass
class PadicLFunction:
    """
    mu_{f,alpha} for each sign of the modular symbol, stored through its polynomial moments.
    """

    p: int
    root: HeckeRootChoice
    measures: dict[int, AdmissibleMeasure]
    provenance: dict[str, Any] = field(default_factory=dict)

    @property
    def levels(self) -> int:
        return max(max(m.moments) for m in self.measures.values())

    def measure(self, sign: int) -> AdmissibleMeasure:
        if sign not in self.measures:
            raise DomainError(f"no measure of sign {sign} was built")
        return self.measures[sign]

    def branches(self, sign: int, prec: int = 20) -> dict[int, IwasawaSeries]:
        return branch_family(self.measure(sign).distribution(), prec=prec)

    def check_growth(self) -> dict[int, AdmissibilityReport]:
        return {sign: check_admissible(m) for sign, m in self.measures.items()}


def _monomial(i: int, w: int) -> list[int]:
    # z^i homogenized to X^i Y^(w-i)
    q = [0] * (w + 1)
    q[i] = 1
    return q


def build_modform_measure(phi: EigenSymbol, root: HeckeRootChoice, levels: int) -> AdmissibleMeasure:
    """
    mu((x-a)^i 1_{a+p^n}) = alpha^-n p^(ni) phi(z^i{oo, -a/p^n}) - eps p^(k-2) alpha^(-n-1) p^((n-1)i) phi(z^i{oo, -a/p^(n-1)}).
    """
    p, k = root.p, phi.k
    if phi.N % p == 0:
        raise DomainError(f"{p} divides the level {phi.N}")
    if not root.allowable:
        raise NonOrdinaryError(f"alpha of slope {root.slope} is not allowable for weight {k}")
    if levels < 1:
        raise LevelError("need at least one level")
    w = k - 2
    mono = [_monomial(i, w) for i in range(w + 1)]
    inv_alpha = 1 / root.alpha
    twist = root.eps * p ** (k - 2)
    moments: dict[int, dict[int, list]] = {}
    for n in range(1, levels + 1):
        scale_n = inv_alpha**n
        row = {}
        for a in range(1, p**n):
            if a % p == 0:
                continue
            ms = []
            for i in range(w + 1):
                here = phi.value(mono[i], None, Fraction(-a, p**n)) * p ** (n * i)
                there = phi.value(mono[i], None, Fraction(-a, p ** (n - 1))) * p ** ((n - 1) * i)
                ms.append(scale_n * here - scale_n * inv_alpha * (twist * there))
            row[a] = ms
        moments[n] = row
    moments[0] = {0: [total(ms[i] for ms in moments[1].values()) for i in range(w + 1)]}
    log.debug(f"mu_(f,alpha): {levels} levels at p={p}, sign {phi.sign}")
    return AdmissibleMeasure(p, int(root.slope), moments, {"N": phi.N, "k": k, "sign": phi.sign, "alpha": repr(root.alpha)})


def padic_l_function(symbols: dict[int, EigenSymbol], root: HeckeRootChoice, levels: int) -> PadicLFunction:
    """
    Measures for every supplied sign of the eigen-symbol.
    """
    measures = {sign: build_modform_measure(phi, root, levels) for sign, phi in symbols.items()}
    any_phi = next(iter(symbols.values()))
    provenance = {
        "N": any_phi.N,
        "k": any_phi.k,
        "eps": any_phi.eps,
        "a_q": {q: str(v) for q, v in sorted(any_phi.eigenvalues.items())},
        "alpha": repr(root.alpha),
        "normalization": "content 1 on the integral cuspidal sign-part",
    }
    return PadicLFunction(root.p, root, measures, provenance)


def _as_dirichlet(chi: DirichletCharacter | WeightChar, j: int) -> tuple[DirichletCharacter, int]:
    # omega^t chi_u <x>^j = (omega^(t-j) chi_u) x^j
    if isinstance(chi, DirichletCharacter):
        return chi, j
    if not chi.is_finite():
        raise DomainError("only characters of finite order times x^j can be evaluated")
    return DirichletCharacter.from_parts(chi.p, chi.level, chi.tame - chi.j, chi.wild), chi.j + j


def integrand_sign(chi: DirichletCharacter, j: int) -> int:
    """
    chi(-1) (-1)^j: even integrands pair with the + symbol.
    """
    return chi.sign() * (-1) ** j


def lp_evaluate(L: PadicLFunction, chi: DirichletCharacter | WeightChar, j: int = 0) -> CyclotomicPadic:
    """
    int chi(x) x^j dmu_{f,alpha} over Z_p^x, summed at the conductor level (at least 1) with x^j expanded
    about each interval's centre in the stored moments.
    """
    chi, j = _as_dirichlet(chi, j)
    k = L.root.k
    if not 0 <= j <= k - 2:
        raise DomainError(f"j={j} is outside the critical range 0..{k - 2}")
    sign = integrand_sign(chi, j)
    mu = L.measure(sign)
    prim = chi.primitive()
    n = max(1, prim.n)
    if n not in mu.moments:
        raise LevelError(f"conductor {chi.p}^{prim.n} needs level {n}, measure has {L.levels}")
    chi_n = prim.lift(n)
    terms = []
    for a in range(1, L.p**n):
        if a % L.p == 0:
            continue
        inner = total(mu.moment(i, a, n) * (math.comb(j, i) * a ** (j - i)) for i in range(j + 1))
        terms.append(chi_n.value(a) * inner)
    return total(terms)


# --- Birch sums and the interpolation check ------------------------------------


def birch_twisted_value(phi: EigenSymbol, chi: DirichletCharacter) -> CyclotomicPadic:
    """
    (1/G(conj chi)) sum_a conj(chi)(a) lambda(f, 1, a, m) with m the conductor of chi, computed as
    chi(-1) G(chi) / m * sum_a conj(chi)(a) lambda(a, m).
    """
    if phi.k != 2:
        raise DomainError("twisted values are only formed in weight 2")
    prim = chi.primitive()
    if prim.n == 0:
        return CyclotomicPadic.from_rational(chi.p, 0, phi.lambda_value([1], 0, 1), prim.prec)
    m = prim.modulus
    bar = prim.conjugate()
    s = total(bar.value(a) * phi.lambda_value([1], a, m) for a in range(1, m) if a % prim.p)
    return gauss_sum(prim) * s * Fraction(prim.sign(), m)


@dataclass
class InterpolationCheck:
    measure_side: CyclotomicPadic
    period_side: CyclotomicPadic
    euler: EulerFactor

    @property
    def agree(self) -> bool:
        return (self.measure_side - self.period_side).is_zero()


def interpolation_check(L: PadicLFunction, phi: EigenSymbol, chi: DirichletCharacter) -> InterpolationCheck:
    """
    j = 0: the Riemann sum of chi against mu_{f,alpha} next to e(chi, 0) G(chi) L(f, conj chi) / alpha^n
    from Birch sums (for trivial chi, e(1, 0) lambda(f, 1, 0, 1)).

    The period side is normalized by G(chi), not by p^n / G(conj chi). Since G(chi) G(conj chi) = chi(-1) p^n
    the two conventions differ by the sign chi(-1), so an odd chi compared against the other normalization
    flips sign.
    """
    prim = chi.primitive()
    lhs = lp_evaluate(L, prim, 0)
    euler = euler_factor_mtt(prim, 0, L.root)
    if prim.n == 0:
        rhs = euler.value * phi.lambda_value([1], 0, 1)
    else:
        rhs = gauss_sum(prim) * birch_twisted_value(phi, prim.conjugate()) * euler.value / L.root.alpha**prim.n
    return InterpolationCheck(lhs, rhs, euler)
