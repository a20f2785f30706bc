"""
Shared pytest fixtures for the multmaps suite.

Fields, scalar pools and a few hand-built matrices used across modules.
Sweeps that loop over a hundred seeded samples are marked `slow`; run the
quick subset with `pytest -m "not slow"`.
"""
from pathlib import Path

import pytest

from multmaps.field import QQ, FieldDescriptor
from multmaps.matrix import Matrix
from multmaps.slword import default_pool

GOLDEN_DIR = Path(__file__).parent / 'golden'


@pytest.fixture
def qq():
    return QQ


@pytest.fixture
def q2():
    """Q(√2)"""
    return FieldDescriptor.quadratic(2)


@pytest.fixture(params=['rational', 'quadratic'])
def any_field(request):
    return QQ if request.param == 'rational' else FieldDescriptor.quadratic(2)


@pytest.fixture
def pool(any_field):
    return default_pool(any_field)


@pytest.fixture
def golden():
    def read(name):
        return (GOLDEN_DIR / name).read_text(encoding='utf-8')
    return read


def mat(rows, fd=QQ):
    return Matrix.from_rows(rows, fd)
