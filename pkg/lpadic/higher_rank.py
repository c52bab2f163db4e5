"""
Distributions on Z_p^x built from period providers for GL(4) and GL(3) x GL(2), the distribution
relation checker for GL(3) x GL(2) partial periods, and the quotient that defines the symmetric cube
series.

A provider is a deterministic function of integers; it is never asked for an automorphic period, only
for whatever values it was built from (a measure, a data file, a formula).
"""

import logging
from collections.abc import Callable
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

import yaml

from lpadic.cyclotomic import CyclotomicPadic
from lpadic.errors import DomainError, IndeterminateError, ProviderError
from lpadic.helpers import require_odd_prime, vp
from lpadic.iwasawa import IwasawaSeries, QuotientResult, ZeroPoint, nonzero_witness, series_quotient, zero_set
from lpadic.measures import FiniteLevelDistribution, check_additivity, is_zero, residues, total

log = logging.getLogger(__name__)


def _call(fn: Callable, args: tuple):
    try:
        return fn(*args)
    except ProviderError:
        raise
    except Exception as e:
        raise ProviderError(f"provider failed at {args}: {e}") from e


@dataclass
class GL4PeriodProvider:
    """
    P(diag(a, 1), f) for f a power of p, with the Hecke data nu_1(p), nu_2(p).
    """

    p: int
    evaluate: Callable[[int, int], Any]
    nu: tuple[Any, Any] = (1, 1)
    meta: dict[str, Any] = field(default_factory=dict)

    def __call__(self, a: int, f: int):
        return _call(self.evaluate, (a, f))

    @property
    def lam(self):
        return self.p**2 * self.nu[0] * self.nu[1]

    @property
    def kappa(self):
        if "kappa" in self.meta:
            return self.meta["kappa"]
        return Fraction(1, self.p**2) * self.nu[0] * self.nu[1]

    def lambda_is_unit(self) -> bool:
        return vp(Fraction(self.lam), self.p) == 0


@dataclass
class GL32PeriodProvider:
    """
    Partial periods P(i, j, y, f) of a p-ordinary pair, with lam, mu the Hecke roots at p on the GL(3)
    side, alpha on the GL(2) side and the unit eta(p).
    """

    p: int
    evaluate: Callable[[int, int, int, int], Any]
    lam: Any = 1
    mu: Any = 1
    alpha: Any = 1
    eta: Any = 1
    meta: dict[str, Any] = field(default_factory=dict)

    def __call__(self, i: int, j: int, y: int, f: int):
        return _call(self.evaluate, (i, j, y, f))

    @property
    def relation_constant(self):
        """
        lam^2 mu alpha eta(p) p^-3, the factor in the distribution relation.
        """
        return Fraction(1, self.p**3) * self.lam**2 * self.mu * self.alpha * self.eta

    @property
    def kappa(self):
        # summing over the p values of the j-slot contributes a factor p
        if "kappa" in self.meta:
            return self.meta["kappa"]
        return self.relation_constant / self.p

    def is_ordinary(self) -> bool:
        return all(vp(Fraction(x), self.p) == 0 for x in (self.lam, self.alpha, self.eta))


# --- provider factories ------------------------------------------------------------


def gl4_provider_from_measure(nu: FiniteLevelDistribution, kappa) -> GL4PeriodProvider:
    """
    P(diag(a, 1), p^m) = kappa^m nu(a + p^m Z_p), so that the GL(4) distribution returns nu.
    """
    p = nu.p

    def evaluate(a: int, f: int):
        m = vp(f, p)
        return nu.value(a, m) * kappa**m

    return GL4PeriodProvider(p, evaluate, meta={"kappa": kappa, "source": "measure"})


def gl32_provider_from_measure(nu: FiniteLevelDistribution, kappa) -> GL32PeriodProvider:
    """
    P(i, j, y, p^m) = kappa^m nu(i + p^m Z_p) / p^m, independent of j and y.
    """
    p = nu.p

    def evaluate(i: int, j: int, y: int, f: int):
        m = vp(f, p)
        return nu.value(i, m) * kappa**m / f

    return GL32PeriodProvider(p, evaluate, meta={"kappa": kappa, "source": "measure"})


def constant_gl32_provider(p: int, lam=1, mu=1, alpha=1, eta=1) -> GL32PeriodProvider:
    """
    P(i, j, y, f) = (K p^-3)^(v_p(f)) with K the relation constant; this satisfies the distribution
    relation exactly.
    """
    base = Fraction(1, p**6) * lam**2 * mu * alpha * eta
    return GL32PeriodProvider(p, lambda i, j, y, f: base ** vp(f, p), lam, mu, alpha, eta, {"source": "constant"})


def _parse_value(x):
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    return Fraction(str(x))


def load_provider(path: str) -> GL4PeriodProvider | GL32PeriodProvider:
    """
    A provider backed by a YAML file of precomputed values:

        kind: gl4 | gl32
        p: 5
        nu: [nu1, nu2]          # gl4
        hecke: {lam, mu, alpha, eta}  # gl32
        kappa: optional override
        values:
          - {args: [a, f], value: "3/7"}

    Values are exact rationals given as strings; missing arguments raise ProviderError.
    """
    with open(path) as f:
        doc = yaml.safe_load(f)
    if not isinstance(doc, dict) or "kind" not in doc or "p" not in doc:
        raise ProviderError(f"{path}: expected a mapping with 'kind' and 'p'")
    p = int(doc["p"])
    table = {tuple(entry["args"]): _parse_value(entry["value"]) for entry in doc.get("values", [])}
    meta: dict[str, Any] = {"source": path}
    if "kappa" in doc:
        meta["kappa"] = _parse_value(doc["kappa"])

    def evaluate(*args):
        if args not in table:
            raise ProviderError(f"{path}: no value stored for {args}")
        return table[args]

    log.debug(f"loaded {len(table)} provider values from {path}")
    if doc["kind"] == "gl4":
        nu = tuple(_parse_value(x) for x in doc.get("nu", [1, 1]))
        return GL4PeriodProvider(p, evaluate, nu, meta)
    if doc["kind"] == "gl32":
        hecke = {k: _parse_value(v) for k, v in doc.get("hecke", {}).items()}
        return GL32PeriodProvider(p, evaluate, meta=meta, **hecke)
    raise ProviderError(f"{path}: unknown provider kind {doc['kind']!r}")


# --- distributions -------------------------------------------------------------------


def _finish(p: int, levels: dict[int, dict[int, Any]], meta: dict) -> FiniteLevelDistribution:
    levels[0] = {0: total(levels[1].values())}
    mu = FiniteLevelDistribution(p, "Zpx", levels, meta)
    report = check_additivity(mu)
    mu.meta["additivity"] = {"checked": report.checked, "violations": len(report.violations)}
    if not report.ok:
        log.warning(f"provider distribution is not additive at {len(report.violations)} intervals")
    return mu


def gl4_distribution(provider: GL4PeriodProvider, levels: int) -> FiniteLevelDistribution:
    """
    mu(a + p^m Z_p) = kappa^-m P(diag(a, 1), p^m); the total is the sum over level 1.
    """
    require_odd_prime(provider.p)
    if levels < 1:
        raise DomainError("need at least one level")
    p, kappa = provider.p, provider.kappa
    table = {m: {a: provider(a, p**m) / kappa**m for a in residues(p, m, "Zpx")} for m in range(1, levels + 1)}
    return _finish(p, table, {"kappa": str(kappa), "kind": "gl4"})


def gl32_measure(provider: GL32PeriodProvider, levels: int) -> FiniteLevelDistribution:
    """
    mu(i + p^m Z_p) = kappa^-m sum_{y mod p^m} P(i, 1, y, p^m).
    """
    require_odd_prime(provider.p)
    if levels < 1:
        raise DomainError("need at least one level")
    if not provider.is_ordinary():
        log.warning("provider Hecke data is not p-ordinary")
    p, kappa = provider.p, provider.kappa
    table = {
        m: {i: total(provider(i, 1, y, p**m) for y in range(p**m)) / kappa**m for i in residues(p, m, "Zpx")}
        for m in range(1, levels + 1)
    }
    return _finish(p, table, {"kappa": str(kappa), "kind": "gl32"})


@dataclass
class RelationResidual:
    lhs: Any
    rhs: Any

    @property
    def residual(self):
        return self.lhs - self.rhs

    @property
    def ok(self) -> bool:
        return is_zero(self.residual)


def gl32_distribution_relation_check(provider: GL32PeriodProvider, i: int, j: int, y: int, f: int, slot: str = "b") -> RelationResidual:
    """
    sum_{a,b,c < p} P(i + af, j + bf, y + cf, fp) against lam^2 mu alpha eta(p) p^-3 P(i, j, y, f).
    slot="a" shifts the second argument by af instead of bf.
    """
    p = provider.p
    if slot not in ("a", "b"):
        raise DomainError(f"slot must be 'a' or 'b', got {slot!r}")
    if f < 1 or f != p ** vp(f, p):
        raise DomainError(f"{f} is not a power of {p}")
    lhs = total(
        provider(i + a * f, j + (b if slot == "b" else a) * f, y + c * f, f * p)
        for a in range(p)
        for b in range(p)
        for c in range(p)
    )
    return RelationResidual(lhs, provider(i, j, y, f) * provider.relation_constant)


# --- symmetric cube quotient ------------------------------------------------------------


@dataclass
class SymCubeReport:
    quotients: dict[int, QuotientResult]
    zeros: dict[int, list[ZeroPoint]]
    witnesses: dict[int, ZeroPoint | None]
    trivial_values: dict[int, CyclotomicPadic | None]
    conductor_bound: int
    assumptions: list[str] = field(default_factory=list)

    @property
    def integral(self) -> bool:
        return not any(q.remainder for q in self.quotients.values())


def symcube_quotient(F: dict[int, IwasawaSeries], G: dict[int, IwasawaSeries], conductor_bound: int = 2) -> SymCubeReport:
    """
    Branchwise F/G with the zero set of G among wild characters of conductor dividing p^conductor_bound,
    a character where G does not vanish, and F/G at the trivial wild character as a pointwise ratio.
    """
    if set(F) != set(G):
        raise DomainError(f"branches differ: {sorted(F)} vs {sorted(G)}")
    quotients, zeros, witnesses, trivial = {}, {}, {}, {}
    for t in sorted(G):
        g = G[t]
        if g.is_zero():
            raise IndeterminateError(f"branch {t}: G vanishes identically at working precision")
        quotients[t] = series_quotient(F[t], g)
        zeros[t] = zero_set(g, conductor_bound)
        witnesses[t] = nonzero_witness(g, conductor_bound)
        g0 = g.evaluate_at_root(1, 0)
        trivial[t] = None if g0.is_zero() else F[t].evaluate_at_root(1, 0) / g0
        log.debug(f"branch {t}: {len(zeros[t])} zeros, remainder={quotients[t].remainder}")
    assumptions = ["nonvanishing of twisted central values is assumed, not verified"]
    return SymCubeReport(quotients, zeros, witnesses, trivial, conductor_bound, assumptions)
