from functools import lru_cache

import pytest

from twistver import Field, Twist, build_code, build_variety


@lru_cache(maxsize=None)
def get_field(p, m, e=1):
    return Field(p, m, e=e)


@lru_cache(maxsize=None)
def get_variety(p, m, n, exps, e=1):
    field = get_field(p, m, e)
    twist = Twist(p, m, exps)
    return build_variety(field, n, twist)


def get_code(p, m, n, exps, e=1):
    return build_code(get_variety(p, m, n, exps, e))


@pytest.fixture
def gf27():
    return get_field(3, 3)


@pytest.fixture
def gf16():
    return get_field(2, 4)
