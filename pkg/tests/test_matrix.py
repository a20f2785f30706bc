"""
Tests for multmaps.matrix: elimination, cofactors, generators, matrix-unit
recovery and idempotent splitting.
"""
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from multmaps.errors import (
    DimensionMismatch,
    IndexOutOfRange,
    NotCommutingIdempotents,
    NotMatrixUnits,
    SingularMatrix,
)
from multmaps.field import CONJUGATION, QQ, FieldDescriptor
from multmaps.matrix import (
    Matrix,
    adjugate,
    block_diag,
    cofactor,
    coidempotent,
    commutator,
    conjugator_from_units,
    det,
    diag_unit,
    diagonal,
    hom_matrix,
    identity,
    image_basis,
    inverse,
    is_idempotent,
    is_scalar,
    is_semisimple,
    is_unipotent,
    kernel_basis,
    mat_eq,
    minimal_polynomial,
    normalize_projective,
    rank,
    rank_idempotent,
    scalar_mul,
    split_idempotent_pair,
    swap,
    transpose,
    transvection,
    unit,
    zero,
)
from multmaps.slword import default_pool, random_gl, random_singular
from tests.conftest import mat

pytestmark = pytest.mark.unit

Q2 = FieldDescriptor.quadratic(2)

small_ints = st.integers(min_value=-4, max_value=4)


def square(n):
    return st.lists(st.lists(small_ints, min_size=n, max_size=n), min_size=n, max_size=n)


def test_det_examples():
    assert det(mat([[1, 2], [3, 4]])) == -2
    assert det(mat([[2, 0, 0], [0, 3, 0], [0, 0, 5]])) == 30
    assert det(Matrix.from_rows([['0+1*s', 0], [0, '0+1*s']], Q2)) == 2


def test_det_multiplicative_on_random_pair():
    a, b = mat([[1, 2, 0], [0, 1, 3], [4, 0, 1]]), mat([[2, 1, 1], [0, -1, 2], [1, 0, 3]])
    assert det(a @ b) == det(a) * det(b)


def test_inverse_and_singular():
    a = mat([[2, 1], [7, 4]])
    assert a @ inverse(a) == identity(2, QQ)
    with pytest.raises(SingularMatrix):
        inverse(mat([[1, 2], [2, 4]]))


def test_matrix_power_and_negative_power():
    p = transvection(3, 1, 2, 1, QQ)
    assert p ** 3 == transvection(3, 1, 2, 3, QQ)
    assert p ** -1 == transvection(3, 1, 2, -1, QQ)


def test_rank_kernel_image():
    a = mat([[1, 2, 3], [2, 4, 6], [0, 0, 1]])
    assert rank(a) == 2
    kernel = kernel_basis(a)
    assert len(kernel) == 1
    v = kernel[0]
    assert all(sum((x * y for x, y in zip(row, v)), QQ.zero) == 0 for row in a.rows)
    assert len(image_basis(a)) == 2


def test_mat_eq():
    assert mat_eq(mat([[1, 0], [0, 1]]), identity(2, QQ))
    assert not mat_eq(identity(2, QQ), identity(2, FieldDescriptor.quadratic(2)))
    assert not mat_eq(identity(2, QQ), zero(2, QQ))


def test_dimension_and_field_mismatch():
    with pytest.raises(DimensionMismatch):
        identity(2, QQ) @ identity(3, QQ)
    with pytest.raises(DimensionMismatch):
        Matrix.from_rows([[1, 2], [3]], QQ)


class TestCofactor:

    def test_cofactor_of_coidempotent_is_matrix_unit(self):
        assert cofactor(coidempotent(3, 1, QQ)) == unit(3, 1, 1, QQ)

    def test_cofactor_of_rank_one_is_zero_for_n3(self):
        assert cofactor(unit(3, 1, 1, QQ)).is_zero

    def test_two_by_two_is_inner(self):
        a = mat([[1, 2], [3, 4]])
        j = mat([[0, 1], [-1, 0]])
        assert cofactor(a) == mat([[4, -3], [-2, 1]])
        assert cofactor(a) == j @ a @ inverse(j)

    def test_needs_n_at_least_two(self):
        with pytest.raises(DimensionMismatch):
            cofactor(mat([[5]]))

    @settings(max_examples=60)
    @given(st.integers(min_value=2, max_value=4).flatmap(lambda n: st.tuples(square(n), square(n))))
    def test_cofactor_multiplicative(self, pair):
        a, b = mat(pair[0]), mat(pair[1])
        assert cofactor(a @ b) == cofactor(a) @ cofactor(b)

    @settings(max_examples=60)
    @given(st.integers(min_value=2, max_value=4).flatmap(square))
    def test_adjugate_identity(self, rows):
        a = mat(rows)
        assert a @ transpose(cofactor(a)) == scalar_mul(det(a), identity(a.n, QQ))

    @settings(max_examples=60)
    @given(st.integers(min_value=2, max_value=4).flatmap(square))
    def test_cofactor_determinant(self, rows):
        a = mat(rows)
        assert det(cofactor(a)) == det(a) ** (a.n - 1)

    def test_adjugate_is_anti_multiplicative(self):
        a, b = mat([[1, 1], [0, 1]]), mat([[1, 0], [1, 1]])
        assert adjugate(a @ b) == adjugate(b) @ adjugate(a)
        assert adjugate(a @ b) != adjugate(a) @ adjugate(b)

    @pytest.mark.slow
    @pytest.mark.parametrize('n', [2, 3, 4, 5])
    def test_cofactor_multiplicative_sweep(self, n):
        pool = default_pool(QQ)
        rng = random.Random(n)
        for index in range(200):
            draw = random_singular if index % 4 == 3 else (lambda n, p, s, f: random_gl(n, 2 * n, p, s, f))
            a = draw(n, pool, rng.getrandbits(32), QQ)
            b = random_gl(n, 2 * n, pool, rng.getrandbits(32), QQ)
            assert cofactor(a @ b) == cofactor(a) @ cofactor(b)
            assert a @ transpose(cofactor(a)) == scalar_mul(det(a), identity(n, QQ))

    @pytest.mark.slow
    @pytest.mark.parametrize('n', [2, 3, 4])
    def test_double_cofactor(self, n):
        pool = default_pool(QQ)
        rng = random.Random(10 + n)
        for _ in range(100):
            a = random_gl(n, 2 * n, pool, rng.getrandbits(32), QQ)
            assert cofactor(cofactor(a)) == scalar_mul(det(a) ** (n - 2), a)


class TestGenerators:

    def test_transvection_and_units(self):
        assert transvection(3, 1, 2, 5, QQ) == identity(3, QQ) + scalar_mul(5, unit(3, 1, 2, QQ))
        assert det(transvection(3, 3, 1, 7, QQ)) == 1

    def test_swap_and_diag_unit(self):
        assert det(swap(3, 1, 2, QQ)) == -1
        assert diag_unit(3, 2, 4, QQ) == diagonal([1, 4, 1], QQ)

    def test_index_checks(self):
        with pytest.raises(IndexOutOfRange):
            unit(3, 0, 1, QQ)
        with pytest.raises(IndexOutOfRange):
            rank_idempotent(3, 4, QQ)
        with pytest.raises(ValueError):
            transvection(3, 2, 2, 1, QQ)

    def test_predicates(self):
        assert is_idempotent(rank_idempotent(4, 2, QQ))
        assert is_unipotent(transvection(3, 1, 3, 9, QQ))
        assert not is_unipotent(diag_unit(3, 1, 2, QQ))
        assert is_scalar(scalar_mul(3, identity(3, QQ)))

    def test_commutator_of_adjacent_transvections(self):
        x, y = transvection(3, 1, 2, 2, QQ), transvection(3, 2, 3, 5, QQ)
        assert commutator(x, y) == transvection(3, 1, 3, 10, QQ)

    def test_hom_matrix(self):
        a = Matrix.from_rows([['1+1*s', 2], [0, '0-1*s']], Q2)
        assert hom_matrix(CONJUGATION, a) == Matrix.from_rows([['1-1*s', 2], [0, '0+1*s']], Q2)

    def test_normalize_projective(self):
        a = mat([[0, 3], [6, 9]])
        assert normalize_projective(a) == mat([[0, 1], [2, 3]])
        assert normalize_projective(scalar_mul(-7, a)) == normalize_projective(a)


class TestConjugatorFromUnits:

    def test_standard_units_give_identity(self):
        family = [[unit(3, i, j, QQ) for j in range(1, 4)] for i in range(1, 4)]
        assert conjugator_from_units(family) == identity(3, QQ)

    def test_recovers_conjugator(self):
        s = mat([[1, 2, 0], [0, 1, 1], [1, 0, 3]])
        s_inv = inverse(s)
        family = [[s_inv @ unit(3, i, j, QQ) @ s for j in range(1, 4)] for i in range(1, 4)]
        r = conjugator_from_units(family)
        for i in range(3):
            for j in range(3):
                assert r @ family[i][j] @ inverse(r) == unit(3, i + 1, j + 1, QQ)
        assert is_scalar(r @ s_inv)

    def test_broken_relation_is_named(self):
        family = [[unit(2, i, j, QQ) for j in (1, 2)] for i in (1, 2)]
        family[0][1] = scalar_mul(2, family[0][1])
        with pytest.raises(NotMatrixUnits, match='F_ij F_kl'):
            conjugator_from_units(family)

    def test_zero_f11(self):
        family = [[zero(2, QQ)] * 2 for _ in range(2)]
        with pytest.raises(NotMatrixUnits):
            conjugator_from_units(family)

    @pytest.mark.slow
    def test_random_conjugators(self):
        pool = default_pool(QQ)
        rng = random.Random(5)
        for _ in range(100):
            s = random_gl(3, 6, pool, rng.getrandbits(32), QQ)
            s_inv = inverse(s)
            family = [[s_inv @ unit(3, i, j, QQ) @ s for j in range(1, 4)] for i in range(1, 4)]
            r = conjugator_from_units(family)
            assert all(
                r @ family[i][j] @ inverse(r) == unit(3, i + 1, j + 1, QQ)
                for i in range(3) for j in range(3)
            )
            assert is_scalar(r @ s_inv)


class TestSplitIdempotentPair:

    def test_zero_and_identity(self):
        s, zero_count, l = split_idempotent_pair(zero(3, QQ), identity(3, QQ))
        assert (s, zero_count, l) == (identity(3, QQ), 0, 3)

    def test_padding_recovered(self):
        p0 = diagonal([0, 0, 1], QQ)
        p1 = diagonal([1, 0, 1], QQ)
        s_mat, s, l = split_idempotent_pair(p0, p1)
        assert (s, l) == (1, 1)
        s_inv = inverse(s_mat)
        assert s_inv @ p0 @ s_mat == diagonal([0, 0, 1], QQ)
        assert s_inv @ p1 @ s_mat == diagonal([1, 0, 1], QQ)

    def test_conjugated_pair(self):
        c = mat([[1, 1, 0], [0, 1, 2], [1, 0, 1]])
        c_inv = inverse(c)
        p0 = c_inv @ diagonal([0, 1, 0], QQ) @ c
        p1 = c_inv @ diagonal([1, 1, 0], QQ) @ c
        s_mat, s, l = split_idempotent_pair(p0, p1)
        assert (s, l) == (1, 1)
        s_inv = inverse(s_mat)
        assert s_inv @ p0 @ s_mat == block_diag(zero(1, QQ), zero(1, QQ), identity(1, QQ))
        assert s_inv @ p1 @ s_mat == diagonal([1, 0, 1], QQ)

    def test_absorption_violation(self):
        with pytest.raises(NotCommutingIdempotents):
            split_idempotent_pair(diagonal([1, 0], QQ), diagonal([0, 1], QQ))


class TestMinimalPolynomial:

    def test_scalar_matrix(self):
        assert minimal_polynomial(scalar_mul(3, identity(3, QQ))) == [QQ(-3), QQ(1)]

    def test_jordan_block(self):
        # (x − 1)²
        assert minimal_polynomial(mat([[1, 1], [0, 1]])) == [QQ(1), QQ(-2), QQ(1)]

    def test_degree_below_size(self):
        assert len(minimal_polynomial(diagonal([2, 2, 5], QQ))) == 3

    @pytest.mark.parametrize('rows, expected', [
        ([[2, 0], [0, 3]], True),
        ([[0, -1], [1, 0]], True),
        ([[0, 0], [0, 0]], True),
        ([[1, 1], [0, 1]], False),
        ([[0, 1], [0, 0]], False),
        ([[2, 1, 0], [0, 2, 0], [0, 0, 5]], False),
    ])
    def test_is_semisimple(self, rows, expected):
        assert is_semisimple(mat(rows)) is expected

    def test_conjugate_of_diagonal_is_semisimple(self):
        p = mat([[1, 2, 0], [0, 1, 1], [1, 0, 3]])
        assert is_semisimple(inverse(p) @ diagonal([1, 1, 4], QQ) @ p)
