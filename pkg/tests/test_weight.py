import random

import pytest

from lpadic.cyclotomic import DirichletCharacter, characters
from lpadic.errors import DomainError
from lpadic.padic import PadicNumber
from lpadic.weight import WeightChar, char_s, decompose, log_gamma_coordinate, recompose, split_unit


def test_split_unit():
    x = PadicNumber.from_rational(5, 7, 10)
    omega, bracket = split_unit(x)
    assert omega * bracket == x
    assert omega ** 4 == 1
    assert (bracket - 1).val >= 1
    with pytest.raises(DomainError):
        split_unit(PadicNumber.from_rational(5, 10, 10))


def test_gamma_coordinate_of_gamma_is_one():
    assert log_gamma_coordinate(PadicNumber.from_rational(7, 8, 12)) == 1
    assert log_gamma_coordinate(PadicNumber.from_rational(7, 64, 12)) == 2


def test_classical_character_is_x_to_the_k():
    p, k = 5, 3
    chi = WeightChar(p, k, 0, 1, k)
    for a in (2, 3, 7, 13):
        assert chi(a).to_padic() == PadicNumber.from_rational(p, a**k, 20)


def test_dirichlet_round_trip():
    for chi in characters(3, 2):
        w = decompose(chi)
        assert recompose(w) == chi
        for a in (1, 2, 4, 5, 7, 8):
            assert w(a) == chi(a)


def test_recompose_needs_finite_order():
    with pytest.raises(DomainError):
        recompose(WeightChar(5, 1, 0, 1, j=2))
    with pytest.raises(DomainError):
        recompose(WeightChar(5, 1, PadicNumber.from_rational(5, 6, 10)))


def test_padic_wild_parameter():
    p = 5
    u = PadicNumber.from_rational(p, 6, 12)
    chi = WeightChar(p, 0, u)
    assert not chi.is_finite()
    assert chi(6).to_padic() == u
    assert chi(36).to_padic() == u * u
    with pytest.raises(DomainError):
        WeightChar(p, 0, PadicNumber.from_rational(p, 2, 12))


def test_char_s_at_integers():
    p = 7
    s = PadicNumber.from_rational(p, 2, 12)
    assert char_s(s, 8) == PadicNumber.from_rational(p, 64, 12)


def test_level_one_wild_is_trivial():
    chi = WeightChar(3, 1, 5, 1)
    assert chi.wild == 0
    assert chi.to_json()["gamma"] == 4
    with pytest.raises(DomainError):
        WeightChar(3, 1, 1, 0)


def test_tame_reduced_mod_p_minus_one():
    assert WeightChar(7, 8).tame == 2
    assert decompose(DirichletCharacter.trivial(7, 0)).level == 1


def random_weight_char(rng: random.Random) -> WeightChar:
    p = rng.choice([3, 5, 7])
    tame, j = rng.randrange(p - 1), rng.randrange(3)
    if rng.random() < 0.3:
        u = PadicNumber.from_rational(p, 1 + p * rng.randrange(1, p**3), 12)
        return WeightChar(p, tame, u, j=j)
    level = rng.randint(1, 3)
    return WeightChar(p, tame, rng.randrange(p ** (level - 1)), level, j)


@pytest.mark.parametrize("seed", range(10))
def test_characters_are_multiplicative(seed):
    rng = random.Random(seed)
    chi = random_weight_char(rng)
    units = [a for a in range(1, chi.p**4) if a % chi.p]
    for _ in range(200):
        x, y = rng.choice(units), rng.choice(units)
        assert chi(x * y) == chi(x) * chi(y), (chi, x, y)
