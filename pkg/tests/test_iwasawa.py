import pytest

from lpadic.cyclotomic import CyclotomicPadic
from lpadic.errors import DomainError, IndeterminateError, PrecisionError
from lpadic.iwasawa import (
    IwasawaSeries,
    ZeroPoint,
    branch_family,
    measure_to_series,
    nonzero_witness,
    series_quotient,
    weierstrass_invariants,
    wild_points,
    zero_set,
)
from lpadic.measures import DiracMeasure, bernoulli_distribution
from lpadic.padic import PadicNumber
from lpadic.weight import WeightChar


def test_dirac_at_gamma_powers():
    p = 3
    mu = DiracMeasure.delta(p, (1 + p) ** 2 % p**3).table(3, "Zpx")
    g = measure_to_series(mu, 0)
    assert g.terms == 9
    assert g == IwasawaSeries.of(p, [1, 2, 1, 0, 0, 0, 0, 0, 0])


@pytest.mark.parametrize("p", [3, 5])
def test_series_interpolates_the_measure(p):
    mu = bernoulli_distribution(p, 1 + p, 2).restrict_to_units()
    family = branch_family(mu)
    assert sorted(family) == list(range(p - 1))
    for t, g in family.items():
        for wild in range(p):
            chi = WeightChar(p, t, wild, 2)
            direct = sum(
                (chi(a) * mu(a, 2) for a in range(1, p**2) if a % p),
                CyclotomicPadic.from_rational(p, 2, 0, 20),
            )
            assert g.evaluate_at_root(2, wild) == direct
            assert g.evaluate_char(chi) == direct


def test_evaluate_char_checks_branch():
    g = IwasawaSeries.of(5, [1, 1], tame=1)
    with pytest.raises(DomainError):
        g.evaluate_char(WeightChar(5, 2))


def test_evaluate_in_the_disc():
    p = 5
    g = IwasawaSeries.of(p, [1, 1, 1])
    t = PadicNumber.from_rational(p, 5, 10)
    assert g.evaluate(t) == PadicNumber.from_rational(p, 31, 10)
    with pytest.raises(DomainError):
        g.evaluate(PadicNumber.from_rational(p, 2, 10))
    u = PadicNumber.from_rational(p, 6, 10)
    assert g.evaluate_char(WeightChar(p, 0, u)).to_padic() == PadicNumber.from_rational(p, 31, 10)


def test_arithmetic():
    p = 3
    f = IwasawaSeries.of(p, [1, 2, 0])
    g = IwasawaSeries.of(p, [1, 1, 1])
    assert f + g == IwasawaSeries.of(p, [2, 3, 1])
    assert f * g == IwasawaSeries.of(p, [1, 3, 3])
    assert f * 3 == IwasawaSeries.of(p, [3, 6, 0])
    with pytest.raises(DomainError):
        f + IwasawaSeries.of(p, [1, 1, 1], tame=1)


def test_quotient_of_product():
    p = 5
    g = IwasawaSeries.of(p, [1, 5, 2, 7])
    h = IwasawaSeries.of(p, [3, 0, 1, 4])
    result = series_quotient(g * h, g)
    assert not result.remainder
    assert result.quotient == h


def test_quotient_with_shift():
    p = 3
    f = IwasawaSeries.of(p, [0, 2, 2])
    g = IwasawaSeries.of(p, [0, 1, 1])
    result = series_quotient(f, g)
    assert result.shift == 1
    assert not result.remainder
    assert result.quotient == IwasawaSeries.of(p, [2, 0])


def test_quotient_remainders():
    p = 3
    bad = series_quotient(IwasawaSeries.of(p, [1, 0]), IwasawaSeries.of(p, [3, 1]))
    assert bad.remainder
    assert "non-integral" in bad.reasons[0]
    order = series_quotient(IwasawaSeries.of(p, [1, 1]), IwasawaSeries.of(p, [0, 1]))
    assert order.remainder
    with pytest.raises(PrecisionError):
        series_quotient(IwasawaSeries.of(p, [1]), IwasawaSeries.of(p, [0]))


def test_weierstrass_invariants():
    inv = weierstrass_invariants(IwasawaSeries.of(3, [3, 9, 1, 5]))
    assert (inv.mu, inv.lam, inv.unit) == (0, 2, False)
    assert weierstrass_invariants(IwasawaSeries.of(3, [2, 3])).unit
    assert weierstrass_invariants(IwasawaSeries.of(3, [9, 3])).mu == 1
    with pytest.raises(IndeterminateError):
        weierstrass_invariants(IwasawaSeries.of(3, [0, 0]))


def test_wild_points():
    assert wild_points(3, 1) == [ZeroPoint(0, 1)]
    assert wild_points(3, 2) == [ZeroPoint(0, 1), ZeroPoint(1, 2), ZeroPoint(2, 2)]
    assert len(wild_points(5, 3)) == 25


def test_zero_set_of_t():
    t = IwasawaSeries.of(3, [0, 1])
    assert zero_set(t, 2) == [ZeroPoint(0, 1)]
    assert nonzero_witness(t, 2) == ZeroPoint(1, 2)


def test_zero_set_of_cyclotomic_polynomial():
    # (1+T)^3 - 1 vanishes at every u with u^3 = 1
    g = IwasawaSeries.of(3, [0, 3, 3, 1])
    assert zero_set(g, 2) == wild_points(3, 2)
    assert nonzero_witness(g, 2) is None
    assert len(zero_set(g, 3)) == 3


def test_to_json():
    doc = IwasawaSeries.of(7, [1, 7], tame=3).to_json()
    assert doc["t"] == 3
    assert doc["gamma"] == 8
    assert doc["M"] == 2
    assert doc["coeffs"][1]["valuation"] == 1


def test_quotient_keeps_the_polar_part():
    p = 3
    f = IwasawaSeries.of(p, [1, 1, 0, 0])
    g = IwasawaSeries.of(p, [0, 1, 0, 0])
    result = series_quotient(f, g)
    assert result.remainder
    assert (result.shift, result.pole) == (1, 1)
    assert result.quotient == IwasawaSeries.of(p, [1, 1, 0])
    outside = [pt for pt in wild_points(p, 3) if pt not in zero_set(g, 3)]
    assert len(outside) == 8
    for pt in outside:
        value = result.evaluate_at_root(pt.level, pt.wild)
        assert value * g.evaluate_at_root(pt.level, pt.wild) == f.evaluate_at_root(pt.level, pt.wild), pt
    with pytest.raises(DomainError):
        result.evaluate_at_root(1, 0)


def test_quotient_cancels_common_powers_of_t():
    p = 5
    f = IwasawaSeries.of(p, [0, 0, 3, 1, 0])
    g = IwasawaSeries.of(p, [0, 1, 0, 0, 0])
    result = series_quotient(f, g)
    assert not result.remainder
    assert (result.shift, result.pole) == (1, 0)
    assert result.quotient == IwasawaSeries.of(p, [0, 3, 1, 0])
