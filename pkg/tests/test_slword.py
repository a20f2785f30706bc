"""
Tests for multmaps.slword: transvection decompositions and the seeded random
generators.
"""
import pytest

from multmaps.errors import NotSpecialLinear, SingularMatrix
from multmaps.field import QQ, FieldDescriptor
from multmaps.matrix import GenTag, det, identity, rank, swap, transvection
from multmaps.slword import (
    TransvectionWord,
    decompose_gl,
    decompose_sl,
    default_pool,
    random_gl,
    random_singular,
    random_sl,
    random_unitriangular,
)
from tests.conftest import mat


def test_identity_decomposes_to_empty_word():
    assert len(decompose_sl(identity(3, QQ))) == 0


def test_single_transvection_round_trip():
    p = transvection(3, 1, 2, 5, QQ)
    word = decompose_sl(p)
    assert word.product(3, QQ) == p


def test_zero_pivot_needs_row_addition():
    a = mat([[0, 1], [-1, 0]])
    word = decompose_sl(a)
    assert word.product(2, QQ) == a
    assert all(g.tag is GenTag.TRANSVECTION for g in word.gens)


def test_not_special_linear():
    with pytest.raises(NotSpecialLinear):
        decompose_sl(swap(3, 1, 2, QQ))


def test_decompose_gl():
    a = mat([[2, 1, 0], [0, 1, 0], [1, 1, 3]])
    factorization = decompose_gl(a)
    assert factorization.det_scalar == det(a)
    assert factorization.product(3, QQ) == a


def test_decompose_gl_singular():
    with pytest.raises(SingularMatrix):
        decompose_gl(mat([[1, 2], [2, 4]]))


def test_word_rejects_non_transvections():
    from multmaps.matrix import ElementaryGen
    with pytest.raises(ValueError):
        TransvectionWord([ElementaryGen.swap(1, 2)])


def test_random_sl_is_special_linear(any_field, pool):
    a = random_sl(3, 20, pool, 7, any_field)
    assert det(a) == 1
    assert a == random_sl(3, 20, pool, 7, any_field)


def test_random_gl_is_invertible(any_field, pool):
    assert det(random_gl(4, 10, pool, 3, any_field)) != 0


def test_random_unitriangular(any_field, pool):
    u = random_unitriangular(4, pool, 11, any_field)
    assert all(u[i, i] == 1 for i in range(4))
    assert all(u[i, j] == 0 for i in range(4) for j in range(i))


@pytest.mark.parametrize('r', [0, 1, 2])
def test_random_singular_rank(r):
    a = random_singular(3, default_pool(QQ), 4, QQ, rank=r)
    assert rank(a) == r


def test_quadratic_round_trip():
    q2 = FieldDescriptor.quadratic(2)
    a = random_sl(3, 15, default_pool(q2), 2, q2)
    assert decompose_sl(a).product(3, q2) == a


@pytest.mark.slow
def test_sl4_round_trip_sweep():
    pool = default_pool(QQ)
    for seed in range(100):
        a = random_sl(4, 25, pool, seed, QQ)
        word = decompose_sl(a)
        assert word.product(4, QQ) == a
        assert len(word) <= 4 * 4 + 4 - 2
