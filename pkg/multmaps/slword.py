"""
Transvection words: writing SL(n) matrices as products of P_ij(k), GL(n)
matrices as D_1(det)·(word), and drawing seeded random group elements for
probing and fuzzing.

Decomposition reduces A to I with row and column transvections. Each pivot
is first made exactly 1 by adding a lower row (never a swap, since swaps are
not transvections), so when the last column is reached the remaining entry is
det(A) = 1 and there is no leftover diagonal to clear. That keeps words at
most n² + n − 2 long.
"""
from __future__ import annotations

import logging
import random
from dataclasses import dataclass
from fractions import Fraction

from .errors import NotSpecialLinear, SingularMatrix
from .field import FieldElem
from .matrix import (
    ElementaryGen,
    GenTag,
    Matrix,
    det,
    diag_unit,
    elementary,
    identity,
    rank_idempotent,
    transvection,
)

logger = logging.getLogger(__name__)


def default_pool(fd):
    """{±1, ±2, ±1/2, 3}, plus √d and 1+√d over a quadratic field."""
    pool = [fd(1), fd(-1), fd(2), fd(-2), fd(Fraction(1, 2)), fd(Fraction(-1, 2)), fd(3)]
    if fd.is_quadratic:
        pool += [fd(0, 1), fd(1, 1)]
    return pool


@dataclass(frozen=True)
class TransvectionWord:
    gens: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, 'gens', tuple(self.gens))
        if any(g.tag is not GenTag.TRANSVECTION for g in self.gens):
            raise ValueError("a transvection word holds only P_ij(k) generators")

    def __len__(self):
        return len(self.gens)

    def product(self, n, fd):
        result = identity(n, fd)
        for g in self.gens:
            result = result @ elementary(g, n, fd)
        return result


@dataclass(frozen=True)
class GlFactorization:
    det_scalar: FieldElem
    word: TransvectionWord

    def product(self, n, fd):
        return diag_unit(n, 1, self.det_scalar, fd) @ self.word.product(n, fd)


def decompose_sl(a):
    """Word w with product(w) = A, for det(A) = 1."""
    if det(a) != 1:
        raise NotSpecialLinear(f"det = {det(a)}, expected 1")
    n, fd = a.n, a.fd
    m = [list(row) for row in a.rows]
    left = []   # row ops, in the order applied: A ← P·A
    right = []  # column ops, in the order applied: A ← A·P

    def add_row(target, source, k):
        m[target] = [x + k * y for x, y in zip(m[target], m[source])]
        left.append(ElementaryGen.transvection(target + 1, source + 1, k))

    def add_col(target, source, k):
        for row in m:
            row[target] = row[target] + k * row[source]
        right.append(ElementaryGen.transvection(source + 1, target + 1, k))

    for c in range(n - 1):
        if m[c][c] != 1:
            r = next((i for i in range(c + 1, n) if m[i][c]), None)
            if r is None:
                add_row(c + 1, c, fd.one)
                r = c + 1
            add_row(c, r, (1 - m[c][c]) / m[r][c])
        for r in range(c + 1, n):
            if m[r][c]:
                add_row(r, c, -m[r][c])
        for j in range(c + 1, n):
            if m[c][j]:
                add_col(j, c, -m[c][j])

    # L_m…L_1·A·R_1…R_p = I  ⇒  A = L_1⁻¹…L_m⁻¹·R_p⁻¹…R_1⁻¹
    gens = [g.inverse() for g in left] + [g.inverse() for g in reversed(right)]
    logger.debug("decomposed %dx%d SL matrix into %d transvections", n, n, len(gens))
    return TransvectionWord(gens)


def decompose_gl(a):
    k = det(a)
    if k.is_zero:
        raise SingularMatrix("cannot factor a singular matrix through GL(n)")
    a0 = diag_unit(a.n, 1, k.inv(), a.fd) @ a
    return GlFactorization(k, decompose_sl(a0))


def _random_transvection(n, pool, rng, fd):
    i, j = rng.sample(range(1, n + 1), 2)
    return transvection(n, i, j, rng.choice(pool), fd)


def random_sl(n, length, pool, seed, fd):
    rng = random.Random(seed)
    result = identity(n, fd)
    if n < 2:
        return result
    for _ in range(length):
        result = result @ _random_transvection(n, pool, rng, fd)
    return result


def random_gl(n, length, pool, seed, fd):
    """D_1(k)·(random SL word) with k drawn from the pool."""
    rng = random.Random(seed)
    k = rng.choice(pool)
    return diag_unit(n, 1, k, fd) @ random_sl(n, length, pool, rng.getrandbits(32), fd)


def random_unitriangular(n, pool, seed, fd):
    rng = random.Random(seed)
    choices = list(pool) + [fd.zero]
    return Matrix(fd, [
        [fd.one if i == j else (rng.choice(choices) if j > i else fd.zero) for j in range(n)]
        for i in range(n)
    ])


def random_singular(n, pool, seed, fd, rank=None, length=None):
    """random_gl · diag(I_r, 0) · random_gl, r uniform in 0..n−1 unless given."""
    rng = random.Random(seed)
    r = rng.randrange(n) if rank is None else rank
    length = 3 * n if length is None else length
    left = random_gl(n, length, pool, rng.getrandbits(32), fd)
    right = random_gl(n, length, pool, rng.getrandbits(32), fd)
    return left @ rank_idempotent(n, r, fd) @ right
