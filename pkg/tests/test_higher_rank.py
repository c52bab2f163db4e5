import random
from fractions import Fraction

import pytest

from lpadic.errors import DomainError, IndeterminateError, ProviderError
from lpadic.higher_rank import (
    GL4PeriodProvider,
    GL32PeriodProvider,
    constant_gl32_provider,
    gl4_distribution,
    gl4_provider_from_measure,
    gl32_distribution_relation_check,
    gl32_measure,
    gl32_provider_from_measure,
    load_provider,
    symcube_quotient,
)
from lpadic.iwasawa import IwasawaSeries, ZeroPoint, wild_points
from lpadic.measures import bernoulli_distribution, check_additivity, residues
from lpadic.padic import PadicNumber


@pytest.fixture
def nu():
    return bernoulli_distribution(3, 4, 3).restrict_to_units()


def test_gl4_distribution_returns_the_measure(nu):
    provider = gl4_provider_from_measure(nu, Fraction(2, 9))
    mu = gl4_distribution(provider, 3)
    for m in range(4):
        for a in residues(3, m, "Zpx"):
            assert mu(a, m) == nu(a, m)
    assert mu.meta["additivity"]["violations"] == 0


def test_gl4_kappa_from_hecke_data():
    provider = GL4PeriodProvider(5, lambda a, f: 1, nu=(Fraction(1, 5), 3))
    assert provider.lam == 15
    assert provider.kappa == Fraction(3, 125)
    assert not provider.lambda_is_unit()


def test_constant_provider_satisfies_the_relation():
    provider = constant_gl32_provider(3, lam=2, mu=5, alpha=7, eta=-1)
    assert provider.is_ordinary()
    for f in (1, 3, 9):
        for slot in ("a", "b"):
            check = gl32_distribution_relation_check(provider, 1, 2, 0, f, slot)
            assert check.ok
            assert check.residual == 0
    assert check_additivity(gl32_measure(provider, 2)).ok


def test_relation_check_rejects_bad_input():
    provider = constant_gl32_provider(3)
    with pytest.raises(DomainError):
        gl32_distribution_relation_check(provider, 1, 0, 0, 6)
    with pytest.raises(DomainError):
        gl32_distribution_relation_check(provider, 1, 0, 0, 3, slot="c")


def test_gl32_measure_round_trip(nu):
    # the relation holds exactly when kappa is the relation constant over p
    provider = gl32_provider_from_measure(nu, Fraction(1, 81))
    assert gl32_distribution_relation_check(provider, 1, 1, 0, 3).ok
    mu = gl32_measure(provider, 2)
    for m in (1, 2):
        for i in residues(3, m, "Zpx"):
            assert mu(i, m) == nu(i, m)


def test_relation_residual_is_reported(nu):
    provider = gl32_provider_from_measure(nu, Fraction(1, 3))
    check = gl32_distribution_relation_check(provider, 1, 1, 0, 3)
    assert not check.ok
    assert check.residual != 0


def test_provider_errors_are_wrapped():
    provider = GL32PeriodProvider(5, lambda i, j, y, f: 1 // 0)
    with pytest.raises(ProviderError):
        provider(1, 1, 0, 5)


def test_load_gl4_provider(tmp_path):
    path = tmp_path / "gl4.yaml"
    path.write_text(
        """
kind: gl4
p: 3
nu: ["1/3", 1]
values:
  - {args: [1, 3], value: "2/9"}
  - {args: [2, 3], value: "-1/9"}
"""
    )
    provider = load_provider(str(path))
    assert isinstance(provider, GL4PeriodProvider)
    assert provider.kappa == Fraction(1, 27)
    mu = gl4_distribution(provider, 1)
    assert mu(1, 1) == 6
    assert mu(2, 1) == -3
    assert mu(0, 0) == 3
    with pytest.raises(ProviderError):
        provider(1, 9)


def test_load_gl32_provider_with_kappa(tmp_path):
    path = tmp_path / "gl32.yaml"
    path.write_text(
        """
kind: gl32
p: 3
kappa: "1/2"
hecke: {lam: 2, mu: 1, alpha: 1, eta: 1}
values:
  - {args: [1, 1, 0, 1], value: 3}
"""
    )
    provider = load_provider(str(path))
    assert isinstance(provider, GL32PeriodProvider)
    assert provider.kappa == Fraction(1, 2)
    assert provider.relation_constant == Fraction(4, 27)
    assert provider(1, 1, 0, 1) == 3


def test_load_provider_rejects_unknown_kinds(tmp_path):
    path = tmp_path / "bad.yaml"
    path.write_text("kind: gl5\np: 3\n")
    with pytest.raises(ProviderError):
        load_provider(str(path))
    path.write_text("- 1\n- 2\n")
    with pytest.raises(ProviderError):
        load_provider(str(path))


def test_symcube_quotient_recovers_the_factor():
    p = 5
    G = {0: IwasawaSeries.of(p, [2, 5, 1, 0])}
    H = {0: IwasawaSeries.of(p, [3, 1, 0, 7])}
    report = symcube_quotient({0: G[0] * H[0]}, G)
    assert report.integral
    assert report.quotients[0].quotient == H[0]
    assert report.zeros[0] == []
    assert report.witnesses[0] == ZeroPoint(0, 1)
    assert report.trivial_values[0].to_padic() == PadicNumber.from_rational(p, 3, 20)
    assert report.assumptions


def test_symcube_quotient_with_trivial_zero():
    p = 3
    G = {0: IwasawaSeries.of(p, [0, 1, 0])}
    F = {0: IwasawaSeries.of(p, [0, 4, 1])}
    report = symcube_quotient(F, G)
    assert report.integral
    assert report.zeros[0] == [ZeroPoint(0, 1)]
    assert report.witnesses[0] == ZeroPoint(1, 2)
    assert report.trivial_values[0] is None


def test_symcube_quotient_errors():
    p = 3
    g = IwasawaSeries.of(p, [1, 1])
    with pytest.raises(DomainError):
        symcube_quotient({0: g}, {1: IwasawaSeries.of(p, [1, 1], tame=1)})
    with pytest.raises(IndeterminateError):
        symcube_quotient({0: g}, {0: IwasawaSeries.of(p, [0, 0])})


@pytest.mark.parametrize("polar", [False, True])
def test_symcube_quotient_is_pointwise_consistent(polar):
    p = 5
    h = IwasawaSeries.of(p, [1, 1, 1, 0, 0, 0, 0, 0])
    if polar:
        g = IwasawaSeries.of(p, [0, 2, 0, 0, 0, 0, 0, 0])
        f = h
    else:
        g = IwasawaSeries.of(p, [0, 2, 1, 0, 0, 0, 0, 0])
        f = g * h
    report = symcube_quotient({0: f}, {0: g}, conductor_bound=3)
    q = report.quotients[0]
    assert q.pole == (1 if polar else 0)
    assert report.integral != polar
    outside = [pt for pt in wild_points(p, 3) if pt not in report.zeros[0]]
    assert len(outside) >= 20
    for pt in outside:
        lhs = q.evaluate_at_root(pt.level, pt.wild) * g.evaluate_at_root(pt.level, pt.wild)
        assert lhs == f.evaluate_at_root(pt.level, pt.wild), pt


@pytest.mark.parametrize("seed", range(5))
def test_symcube_multiply_then_divide(seed):
    rng = random.Random(seed)
    p, terms = 5, 8
    for _ in range(4):
        g = [rng.choice([1, 2, 3, 4, 6, 7]), rng.randint(-20, 20), rng.randint(-20, 20)]
        h = [rng.randint(-50, 50) for _ in range(4)]
        G = IwasawaSeries.of(p, g + [0] * (terms - 3))
        H = IwasawaSeries.of(p, h + [0] * (terms - 4))
        F = G * H
        report = symcube_quotient({0: F}, {0: G}, conductor_bound=3)
        q = report.quotients[0]
        assert report.integral
        assert q.quotient == H
        assert report.zeros[0] == []
        for pt in wild_points(p, 3):
            assert q.evaluate_at_root(pt.level, pt.wild) * G.evaluate_at_root(pt.level, pt.wild) == F.evaluate_at_root(
                pt.level, pt.wild
            )
