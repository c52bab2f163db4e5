import pytest

from lpadic.modsym import build_space, eigen_symbol

X0_11 = {2: -2, 3: -1, 5: 1, 7: -2, 13: 4}


@pytest.fixture(scope="session")
def space11():
    return build_space(11, 2)


@pytest.fixture(scope="session")
def phi11(space11):
    """
    Both signs of the eigen-symbol of the newform of level 11.
    """
    return {sign: eigen_symbol(space11, sign, X0_11) for sign in (1, -1)}


@pytest.fixture(scope="session")
def space_delta():
    return build_space(1, 12)


@pytest.fixture
def lpadic_home(tmp_path, monkeypatch):
    """
    Point the config and the symbol cache at a temporary directory.
    """
    monkeypatch.setenv("XDG_DATA_HOME", str(tmp_path / "data"))
    monkeypatch.setenv("XDG_CONFIG_HOME", str(tmp_path / "config"))
    monkeypatch.delenv("LPADIC_CONFIG", raising=False)
    from lpadic import db

    db.close_all()
    yield tmp_path
    db.close_all()
