"""
Points of weight space Hom(Z_p^x, C_p^x), written as omega^tame * chi_u * <x>^j where chi_u sends
the topological generator gamma = 1+p to u. The twist j only enters through <x>, so the classical
character x^k is (tame = k mod p-1, u = 1, j = k).
"""

import logging
from dataclasses import dataclass

from lpadic.cyclotomic import CyclotomicPadic, DirichletCharacter, wild_log
from lpadic.errors import DomainError
from lpadic.helpers import require_odd_prime
from lpadic.padic import PadicNumber, padic_exp, padic_log, teichmuller

log = logging.getLogger(__name__)


def gamma(p: int) -> int:
    return 1 + p


def split_unit(x: PadicNumber) -> tuple[PadicNumber, PadicNumber]:
    """
    x = omega(x) * <x> with omega(x) the Teichmuller lift of x mod p and <x> = 1 mod p.
    """
    if not x.is_unit():
        raise DomainError(f"{x} is not a unit")
    omega = teichmuller(x.p, x.residue(1), x.absprec)
    return omega, x / omega


def log_gamma_coordinate(x: PadicNumber) -> PadicNumber:
    """
    s(x) = log<x> / log(1+p), so that <x> = (1+p)^s(x).
    """
    _, bracket = split_unit(x)
    g = PadicNumber.from_rational(x.p, gamma(x.p), x.absprec)
    return padic_log(bracket) / padic_log(g)


@dataclass(frozen=True)
class WeightChar:
    """
    The wild part is either finite, u = zeta_{p^level}^(p*wild) stored as an exponent, or a general
    PadicNumber u with v_p(u-1) >= 1 (then `level` is ignored).
    """

    p: int
    tame: int
    wild: int | PadicNumber = 0
    level: int = 1
    j: int = 0

    def __post_init__(self):
        require_odd_prime(self.p)
        object.__setattr__(self, "tame", self.tame % (self.p - 1))
        if isinstance(self.wild, PadicNumber):
            u_minus_1 = self.wild - 1
            if not self.wild.is_unit() or (not u_minus_1.is_zero() and u_minus_1.val < 1):
                raise DomainError(f"wild parameter {self.wild} is not in 1 + {self.p}Z_{self.p}")
        elif self.level < 1:
            raise DomainError("finite wild parts need level >= 1")
        else:
            object.__setattr__(self, "wild", self.wild % self.p ** (self.level - 1))

    def is_finite(self) -> bool:
        return not isinstance(self.wild, PadicNumber)

    def u(self, prec: int = 20) -> CyclotomicPadic:
        """
        chi_w(gamma).
        """
        if isinstance(self.wild, PadicNumber):
            return CyclotomicPadic.from_padic(self.wild)
        one = PadicNumber.from_rational(self.p, 1, prec)
        return CyclotomicPadic.monomial(one, self.level, self.p * self.wild)

    def eval(self, x: PadicNumber | int, prec: int = 20) -> CyclotomicPadic:
        """
        omega(x)^tame * u^s(x) * <x>^j.
        """
        if isinstance(x, int):
            x = PadicNumber.from_rational(self.p, x, prec)
        omega, bracket = split_unit(x)
        value = omega**self.tame
        if self.j:
            value = value * bracket**self.j
        if isinstance(self.wild, PadicNumber):
            s = log_gamma_coordinate(x)
            return CyclotomicPadic.from_padic(value * padic_exp(s * padic_log(self.wild)))
        if self.level > 1 and x.absprec < self.level:
            raise DomainError(f"need {self.level} digits of {x} to evaluate a character of level {self.level}")
        k = self.p * self.wild * wild_log(self.p, self.level, x.residue(self.level)) if self.level > 1 else 0
        return CyclotomicPadic.monomial(value, self.level, k)

    def __call__(self, x: PadicNumber | int, prec: int = 20) -> CyclotomicPadic:
        return self.eval(x, prec)

    def to_json(self) -> dict:
        wild = self.wild
        if isinstance(wild, PadicNumber):
            wild = {"valuation": wild.val, "unit": wild.unit, "precision": wild.prec}
        return {"p": self.p, "n": self.level, "tame_index": self.tame, "wild": wild, "j": self.j, "gamma": gamma(self.p)}


def char_s(s: PadicNumber, x: PadicNumber | int) -> PadicNumber:
    """
    <x>^s = exp(s * log<x>).
    """
    if isinstance(x, int):
        x = PadicNumber.from_rational(s.p, x, max(s.absprec, 1))
    _, bracket = split_unit(x)
    return padic_exp(s * padic_log(bracket))


def decompose(chi: DirichletCharacter) -> WeightChar:
    return WeightChar(chi.p, chi.tame, chi.wild, max(chi.n, 1))


def recompose(w: WeightChar, prec: int = 20) -> DirichletCharacter:
    if not w.is_finite() or w.j:
        raise DomainError("only finite order points come from Dirichlet characters")
    return DirichletCharacter.from_parts(w.p, w.level, w.tame, w.wild, prec)
