import pytest

from multimorse.core.complex import build_complex, extend_filtration

A, B, C = (0,), (1,), (2,)
AB, AC, BC, ABC = (0, 1), (0, 2), (1, 2), (0, 1, 2)

T1_GENERIC = "# triangle T1\n3 1 2\n0 5\n1 4\n2 3\n0 1 2\n"
E1_GENERIC = "2 1 2\n0 0\n1 1\n0 1\n"


@pytest.fixture
def t1():
    c = build_complex(3, [(0, 1, 2)])
    return c, extend_filtration(c, [(0, 5), (1, 4), (2, 3)])


@pytest.fixture
def e1():
    c = build_complex(2, [(0, 1)])
    return c, extend_filtration(c, [(0, 0), (1, 1)])


@pytest.fixture
def circle():
    c = build_complex(3, [(0, 1), (1, 2), (0, 2)])
    return c, extend_filtration(c, [(0, 0), (1, 1), (2, 2)])


@pytest.fixture
def t1_file(tmp_path):
    path = tmp_path / "t1.txt"
    path.write_text(T1_GENERIC, encoding="utf-8")
    return path


@pytest.fixture
def e1_file(tmp_path):
    path = tmp_path / "e1.txt"
    path.write_text(E1_GENERIC, encoding="utf-8")
    return path


@pytest.fixture
def lake(tmp_path, monkeypatch):
    root = tmp_path / "lake"
    monkeypatch.setenv("MULTIMORSE_LAKE_ROOT", str(root))
    return root
