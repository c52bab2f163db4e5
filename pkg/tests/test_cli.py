import json
from fractions import Fraction

import pytest

from lpadic import db
from lpadic.cli import CLI, EXIT_ERROR, EXIT_FAILED, EXIT_OK, EXIT_POLE, describe
from lpadic.config import RunConfig
from lpadic.cyclotomic import DirichletCharacter
from lpadic.iwasawa import IwasawaSeries
from lpadic.models import SymbolKey
from lpadic.padic import PadicNumber
from lpadic.reports import document, dumps, padic_from_json


@pytest.fixture
def cli(lpadic_home):
    return CLI("lpadic", RunConfig())


def test_zeta(cli, capsys):
    assert cli.run("zeta", "-p", "5", "-k", "1") == EXIT_OK
    assert "= 1/3" in capsys.readouterr().out


def test_zeta_pole_branch(cli, capsys):
    assert cli.run("zeta", "-p", "5", "-k", "3") == EXIT_POLE
    assert "-31/30" in capsys.readouterr().out


def test_zeta_riemann_check(cli, capsys):
    assert cli.run("zeta", "-p", "5", "-k", "2", "--check", "--levels", "2", "--format", "json") == EXIT_OK
    doc = json.loads(capsys.readouterr().out)
    assert doc["kind"] == "zeta"
    assert doc["riemann"]["agrees"]


def test_zeta_json(cli, capsys):
    assert cli.run("zeta", "-p", "5", "-k", "1", "--format", "json") == EXIT_OK
    doc = json.loads(capsys.readouterr().out)
    assert doc["schema"] == "lpadic/1"
    assert doc["exact"] == "1/3"
    assert not doc["pole_branch"]


def test_bad_prime(cli):
    assert cli.run("zeta", "-p", "4", "-k", "1") == EXIT_ERROR
    assert cli.run("zeta", "-p", "5", "-k", "0") == EXIT_ERROR


def test_unknown_command(cli):
    assert cli.run("frobnicate") == EXIT_FAILED


def test_help(cli, capsys):
    assert cli.run("help") == EXIT_OK
    out = capsys.readouterr().out
    for cmd in ("zeta", "modform", "polygon", "symcube", "cache"):
        assert cmd in out


def test_polygon_sym(cli, capsys):
    assert cli.run("polygon", "sym", "-p", "3", "-a", "-1", "-k", "2", "-m", "3") == EXIT_OK
    assert "e_4 = 729" in capsys.readouterr().out
    assert cli.run("polygon", "sym", "-p", "3", "-a", "3", "-k", "2") == EXIT_FAILED


def test_polygon_gl4(cli, capsys):
    assert cli.run("polygon", "gl4", "--nu-vals=-3/2,-1/2", "--format", "json") == EXIT_OK
    doc = json.loads(capsys.readouterr().out)
    assert doc["nearly_ordinary"]
    assert cli.run("polygon", "gl4", "--nu-vals=-1/2,-1/2") == EXIT_FAILED


def test_polygon_newton(cli, capsys):
    assert cli.run("polygon", "newton", "-p", "3", "--coeffs", "1,1,3") == EXIT_OK
    assert "(0,0) (1,0) (2,1)" in capsys.readouterr().out


def test_modform_lp_and_cache(cli, capsys):
    assert cli.run("modform", "lp", "-p", "3", "-N", "11", "--char", "t:1,n:1") == EXIT_OK
    assert "t:1,n:1" in capsys.readouterr().out
    assert db.cached_symbol(SymbolKey(11, 2, 1, 13)) is not None
    assert db.cached_symbol(SymbolKey(11, 2, -1, 13)) is not None
    # second run reads the cache
    assert cli.run("modform", "lp", "-p", "3", "-N", "11") == EXIT_OK


def test_modform_birch(cli, capsys):
    assert cli.run("modform", "birch", "-p", "3", "-N", "11", "--no-cache", "--format", "json") == EXIT_OK
    doc = json.loads(capsys.readouterr().out)
    assert doc["character"] == "trivial"
    assert padic_from_json(doc["value"]) == PadicNumber.from_rational(3, Fraction(1, 5), 20)
    assert db.cached_symbol(SymbolKey(11, 2, 1, 13)) is None


def test_modform_prime_dividing_level(cli):
    assert cli.run("modform", "lp", "-p", "11", "-N", "11", "--no-cache") == EXIT_ERROR


def test_modform_without_newform(cli):
    assert cli.run("modform", "lp", "-p", "3", "-N", "1", "-k", "2", "--no-cache") == EXIT_ERROR


def test_symcube(cli, capsys, tmp_path):
    p = 5
    g = IwasawaSeries.of(p, [2, 5, 1, 0])
    h = IwasawaSeries.of(p, [3, 1, 0, 7])
    F, G = tmp_path / "F.json", tmp_path / "G.json"
    F.write_text(dumps(document("series", {"branches": [(g * h).to_json()]})))
    G.write_text(dumps(document("series", {"branches": [g.to_json()]})))
    assert cli.run("symcube", "quotient", str(F), str(G), "-p", "5", "--format", "json") == EXIT_OK
    doc = json.loads(capsys.readouterr().out)
    assert not doc["branches"][0]["remainder"]
    assert cli.run("symcube", "quotient", str(F), str(F), "-p", "5") == EXIT_OK
    assert cli.run("symcube", "quotient", str(tmp_path / "F.json"), str(tmp_path / "missing.json"), "-p", "5") != EXIT_OK


def test_cache_command(cli, capsys):
    assert cli.run("cache", "migrate") == EXIT_OK
    db.store_symbol(SymbolKey(11, 2, 1, 13), "{}")
    assert cli.run("cache", "clear", "11") == EXIT_OK
    assert "removed 1" in capsys.readouterr().out
    assert cli.run("cache", "frobnicate") == EXIT_ERROR


def test_describe():
    assert describe(DirichletCharacter.trivial(5, 2)) == "trivial"
    assert describe(DirichletCharacter.from_parts(5, 1, 3, 0)) == "t:3,n:1"
    assert describe(DirichletCharacter.from_parts(5, 2, 0, 1)) == "t:0,n:2,w:1"
