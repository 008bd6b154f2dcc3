import pytest

import _qflag as q


def test_root_system_basics():
    a2 = q.root_system("A", 2)
    assert a2.rank == 2
    assert a2.type == "A"
    assert a2.positive_root_count == 3
    assert repr(a2) == "A2"


def test_root_system_validation():
    with pytest.raises(ValueError):
        q.root_system("Z", 2)
    with pytest.raises(ValueError):
        q.root_system("E", 9)
