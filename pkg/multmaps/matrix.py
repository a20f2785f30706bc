"""
Exact dense square matrices over a FieldDescriptor.

Entries are FieldElem, stored row-major as a tuple of tuples; a Matrix is
never mutated after construction. `A[i, j]` is 0-based like any Python
sequence, while the generators below (E_ij, F_j, D_j(k), S_ij, P_ij(k))
take 1-based indices so they read the same as the algebra they come from.

Determinants, ranks, kernels and inverses all go through plain Gaussian
elimination over the field. Division is exact, and desk-scale sizes
(n up to about 8) do not need a fraction-free variant.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .errors import (
    DimensionMismatch,
    FieldMismatch,
    IndexOutOfRange,
    NotCommutingIdempotents,
    NotMatrixUnits,
    SingularMatrix,
    SingularRecovery,
)
from .field import FieldElem, coerce_scalar, hom_apply


class Matrix:
    __slots__ = ('fd', 'n', 'rows')

    def __init__(self, fd, rows):
        rows = tuple(tuple(row) for row in rows)
        n = len(rows)
        if n < 1:
            raise DimensionMismatch("a matrix needs at least one row")
        for row in rows:
            if len(row) != n:
                raise DimensionMismatch(f"matrix must be square, got a row of length {len(row)} in a {n}-row matrix")
            for x in row:
                if x.fd != fd:
                    raise FieldMismatch(f"entry {x} is not in {fd}")
        self.fd = fd
        self.n = n
        self.rows = rows

    @classmethod
    def from_rows(cls, rows, fd):
        """Build from ints, Fractions, scalar strings or FieldElems."""
        return cls(fd, [[coerce_scalar(x, fd) for x in row] for row in rows])

    @classmethod
    def from_columns(cls, columns, fd):
        columns = list(columns)
        return cls(fd, [[col[i] for col in columns] for i in range(len(columns))])

    def __getitem__(self, index):
        i, j = index
        return self.rows[i][j]

    def column(self, j):
        return tuple(row[j] for row in self.rows)

    def _check(self, other):
        if not isinstance(other, Matrix):
            raise TypeError(f"expected Matrix, got {type(other).__name__}")
        if other.fd != self.fd:
            raise FieldMismatch(f"cannot mix {self.fd} and {other.fd}")
        if other.n != self.n:
            raise DimensionMismatch(f"{self.n}x{self.n} vs {other.n}x{other.n}")

    def __matmul__(self, other):
        self._check(other)
        cols = [other.column(j) for j in range(other.n)]
        zero = self.fd.zero
        return Matrix(self.fd, [
            [sum((x * y for x, y in zip(row, col) if x and y), zero) for col in cols]
            for row in self.rows
        ])

    def __add__(self, other):
        self._check(other)
        return Matrix(self.fd, [[x + y for x, y in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __sub__(self, other):
        self._check(other)
        return Matrix(self.fd, [[x - y for x, y in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __neg__(self):
        return Matrix(self.fd, [[-x for x in row] for row in self.rows])

    def __pow__(self, exponent):
        if not isinstance(exponent, int):
            return NotImplemented
        if exponent < 0:
            return inverse(self) ** -exponent
        result = identity(self.n, self.fd)
        base = self
        while exponent:
            if exponent & 1:
                result = result @ base
            base = base @ base
            exponent >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.fd == other.fd and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    @property
    def is_zero(self):
        return all(x.is_zero for row in self.rows for x in row)

    def __repr__(self):
        body = '; '.join(' '.join(str(x) for x in row) for row in self.rows)
        return f"Matrix([{body}], {self.fd})"


def mat_eq(a, b):
    """Entrywise equality; matrices over different fields are never equal."""
    return a == b


def identity(n, fd):
    return Matrix(fd, [[fd.one if i == j else fd.zero for j in range(n)] for i in range(n)])


def zero(n, fd):
    return Matrix(fd, [[fd.zero] * n for _ in range(n)])


def diagonal(values, fd):
    values = [coerce_scalar(v, fd) for v in values]
    n = len(values)
    return Matrix(fd, [[values[i] if i == j else fd.zero for j in range(n)] for i in range(n)])


def scalar_mul(c, a):
    c = coerce_scalar(c, a.fd)
    return Matrix(a.fd, [[c * x for x in row] for row in a.rows])


def transpose(a):
    return Matrix(a.fd, [a.column(j) for j in range(a.n)])


def hom_matrix(h, a):
    """Apply a ring homomorphism entrywise: (φ(a_ij))."""
    return Matrix(a.fd, [[hom_apply(h, x) for x in row] for row in a.rows])


def block_diag(*blocks):
    blocks = [b for b in blocks if b is not None]
    fd = blocks[0].fd
    n = sum(b.n for b in blocks)
    rows = []
    offset = 0
    for b in blocks:
        for row in b.rows:
            rows.append([fd.zero] * offset + list(row) + [fd.zero] * (n - offset - b.n))
        offset += b.n
    return Matrix(fd, rows)


def leading_block(a, size):
    """Top-left size x size block."""
    return Matrix(a.fd, [row[:size] for row in a.rows[:size]])


def _echelon(rows, ncols):
    """Reduced row echelon form of a list of rows; returns (rows, pivot columns)."""
    m = [list(r) for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        if r == len(m):
            break
        p = next((i for i in range(r, len(m)) if m[i][c]), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = m[r][c].inv()
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    return m, pivots


def nullspace(rows, ncols, fd):
    """Basis of {v : row·v = 0 for every row}; rows may come from several stacked matrices."""
    reduced, pivots = _echelon(rows, ncols)
    basis = []
    for f in (c for c in range(ncols) if c not in pivots):
        v = [fd.zero] * ncols
        v[f] = fd.one
        for i, c in enumerate(pivots):
            v[c] = -reduced[i][f]
        basis.append(tuple(v))
    return basis


def _det_rows(rows, fd):
    m = [list(r) for r in rows]
    n = len(m)
    result = fd.one
    for c in range(n):
        p = next((i for i in range(c, n) if m[i][c]), None)
        if p is None:
            return fd.zero
        if p != c:
            m[c], m[p] = m[p], m[c]
            result = -result
        pivot = m[c][c]
        result = result * pivot
        inv = pivot.inv()
        for i in range(c + 1, n):
            if m[i][c]:
                f = m[i][c] * inv
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return result


def det(a):
    return _det_rows(a.rows, a.fd)


def rank(a):
    return len(_echelon(a.rows, a.n)[1])


def inverse(a):
    n, fd = a.n, a.fd
    augmented = [list(row) + [fd.one if i == j else fd.zero for j in range(n)] for i, row in enumerate(a.rows)]
    reduced, pivots = _echelon(augmented, n)
    if pivots != list(range(n)):
        raise SingularMatrix("matrix is singular")
    return Matrix(fd, [row[n:] for row in reduced])


def kernel_basis(a):
    return nullspace(a.rows, a.n, a.fd)


def image_basis(a):
    """Pivot columns of a, which span its column space."""
    _, pivots = _echelon(a.rows, a.n)
    return [a.column(c) for c in pivots]


def minor(a, i, j):
    """Determinant of a with row i and column j (0-based) deleted."""
    rows = [row[:j] + row[j + 1:] for k, row in enumerate(a.rows) if k != i]
    return _det_rows(rows, a.fd)


def cofactor(a):
    """Cofactor matrix C(A)_ij = (−1)^(i+j)·minor(i, j).

    This is transpose(adjugate) = det(A)·(A⁻¹)ᵗ on invertibles and is
    multiplicative on all of M_n: C(AB) = C(A)·C(B).
    """
    if a.n < 2:
        raise DimensionMismatch("cofactor needs n >= 2")
    return Matrix(a.fd, [
        [minor(a, i, j) if (i + j) % 2 == 0 else -minor(a, i, j) for j in range(a.n)]
        for i in range(a.n)
    ])


def adjugate(a):
    return transpose(cofactor(a))


def commutator(x, y):
    """x·y·x⁻¹·y⁻¹"""
    return x @ y @ inverse(x) @ inverse(y)


class GenTag(Enum):
    DIAG_UNIT = 'D'
    SWAP = 'S'
    TRANSVECTION = 'P'


@dataclass(frozen=True)
class ElementaryGen:
    tag: GenTag
    i: int
    j: int | None = None
    k: FieldElem | None = None

    def __post_init__(self):
        if self.tag is GenTag.DIAG_UNIT:
            if self.k is None or self.k == 0:
                raise ValueError("D_i(k) needs k != 0")
        elif self.j is None or self.i == self.j:
            raise ValueError(f"{self.tag.value}_ij needs i != j")
        if self.tag is GenTag.TRANSVECTION and self.k is None:
            raise ValueError("P_ij(k) needs a scalar k")

    @classmethod
    def transvection(cls, i, j, k):
        return cls(GenTag.TRANSVECTION, i, j, k)

    @classmethod
    def diag_unit(cls, i, k):
        return cls(GenTag.DIAG_UNIT, i, None, k)

    @classmethod
    def swap(cls, i, j):
        return cls(GenTag.SWAP, i, j)

    def inverse(self):
        if self.tag is GenTag.TRANSVECTION:
            return ElementaryGen.transvection(self.i, self.j, -self.k)
        if self.tag is GenTag.DIAG_UNIT:
            return ElementaryGen.diag_unit(self.i, self.k.inv())
        return self

    def __str__(self):
        if self.tag is GenTag.TRANSVECTION:
            return f"P_{self.i}{self.j}({self.k})"
        if self.tag is GenTag.DIAG_UNIT:
            return f"D_{self.i}({self.k})"
        return f"S_{self.i}{self.j}"


def _check_index(n, *indices):
    for idx in indices:
        if idx is not None and not 1 <= idx <= n:
            raise IndexOutOfRange(f"index {idx} outside 1..{n}")


def elementary(g, n, fd):
    _check_index(n, g.i, g.j)
    rows = [[fd.one if r == c else fd.zero for c in range(n)] for r in range(n)]
    i = g.i - 1
    if g.tag is GenTag.DIAG_UNIT:
        rows[i][i] = coerce_scalar(g.k, fd)
    elif g.tag is GenTag.TRANSVECTION:
        rows[i][g.j - 1] = coerce_scalar(g.k, fd)
    else:
        j = g.j - 1
        rows[i], rows[j] = rows[j], rows[i]
    return Matrix(fd, rows)


def transvection(n, i, j, k, fd):
    """P_ij(k) = I + k·E_ij"""
    return elementary(ElementaryGen.transvection(i, j, coerce_scalar(k, fd)), n, fd)


def diag_unit(n, i, k, fd):
    """D_i(k)"""
    return elementary(ElementaryGen.diag_unit(i, coerce_scalar(k, fd)), n, fd)


def swap(n, i, j, fd):
    """S_ij"""
    return elementary(ElementaryGen.swap(i, j), n, fd)


def unit(n, i, j, fd):
    """Matrix unit E_ij."""
    _check_index(n, i, j)
    return Matrix(fd, [[fd.one if (r, c) == (i - 1, j - 1) else fd.zero for c in range(n)] for r in range(n)])


def rank_idempotent(n, r, fd):
    """diag(I_r, 0)"""
    if not 0 <= r <= n:
        raise IndexOutOfRange(f"rank {r} outside 0..{n}")
    return diagonal([1] * r + [0] * (n - r), fd)


def coidempotent(n, j, fd):
    """F_j = I − E_jj"""
    _check_index(n, j)
    return diagonal([0 if c == j - 1 else 1 for c in range(n)], fd)


def is_scalar(a):
    c = a[0, 0]
    return all(a[i, j] == (c if i == j else 0) for i in range(a.n) for j in range(a.n))


def normalize_projective(a):
    """Scale so the first nonzero entry in row-major order is 1."""
    for row in a.rows:
        for x in row:
            if x:
                return scalar_mul(x.inv(), a) if x != 1 else a
    raise SingularMatrix("zero matrix has no projective normal form")


def is_idempotent(a):
    return a @ a == a


def is_unipotent(a):
    """(A − I)^n = 0"""
    return ((a - identity(a.n, a.fd)) ** a.n).is_zero


def minimal_polynomial(a):
    """Monic minimal polynomial of a as coefficients, lowest degree first.

    Powers I, A, A², ... are stacked as vectors until the first linear
    dependency; its null vector is the polynomial.
    """
    fd, n = a.fd, a.n
    powers = [identity(n, fd)]
    while True:
        columns = [[x for row in p.rows for x in row] for p in powers]
        rows = [[col[e] for col in columns] for e in range(n * n)]
        basis = nullspace(rows, len(powers), fd)
        if basis:
            return list(basis[0])
        powers.append(powers[-1] @ a)


def _poly_trim(p):
    p = list(p)
    while p and p[-1].is_zero:
        p.pop()
    return p


def _poly_mod(p, q):
    p = _poly_trim(p)
    while len(p) >= len(q):
        factor = p[-1] / q[-1]
        shift = len(p) - len(q)
        for i, c in enumerate(q):
            p[shift + i] = p[shift + i] - factor * c
        p = _poly_trim(p)
    return p


def _poly_gcd(p, q):
    p, q = _poly_trim(p), _poly_trim(q)
    while q:
        p, q = q, _poly_mod(p, q)
    return p


def is_semisimple(a):
    """Diagonalisable over the algebraic closure: the minimal polynomial is squarefree."""
    p = minimal_polynomial(a)
    derivative = [c * i for i, c in enumerate(p)][1:]
    return len(_poly_gcd(p, derivative)) == 1


def conjugator_from_units(family):
    """R with R·F_ij·R⁻¹ = E_ij for a family satisfying F_ij F_kl = δ_jk F_il.

    `family[i][j]` holds F_(i+1)(j+1). Columns of R⁻¹ are F_j1·v where v is
    the first nonzero column of F_11; R is returned projectively normalised.
    """
    n = len(family)
    if any(len(row) != n for row in family):
        raise DimensionMismatch("unit family must be n x n")
    if any(f.n != n for row in family for f in row):
        raise DimensionMismatch("units must be n x n matrices for an n x n family")
    f11 = family[0][0]
    if f11.is_zero:
        raise NotMatrixUnits("F_11 is zero")
    zero_n = zero(n, f11.fd)
    for i in range(n):
        for j in range(n):
            for k in range(n):
                for l in range(n):
                    expected = family[i][l] if j == k else zero_n
                    if family[i][j] @ family[k][l] != expected:
                        raise NotMatrixUnits(
                            f"unit relations F_ij F_kl = δ_jk F_il violated at "
                            f"(i,j,k,l)=({i + 1},{j + 1},{k + 1},{l + 1})"
                        )
    v = next(f11.column(c) for c in range(n) if any(f11.column(c)))
    columns = []
    for j in range(n):
        fj1 = family[j][0]
        columns.append(tuple(sum((x * y for x, y in zip(row, v)), f11.fd.zero) for row in fj1.rows))
    r_inv = Matrix.from_columns(columns, f11.fd)
    try:
        r = inverse(r_inv)
    except SingularMatrix:
        raise SingularRecovery("assembled conjugator is singular")
    return normalize_projective(r)


def split_idempotent_pair(p0, p1):
    """S, s, l with S⁻¹P0S = diag(0_l, 0, I_s) and S⁻¹P1S = diag(I_l, 0, I_s).

    Basis order: im(P1 − P0) (= im P1 ∩ ker P0), then ker P1, then im P0.
    """
    if not (is_idempotent(p0) and is_idempotent(p1)):
        raise NotCommutingIdempotents("Φ(0) and Φ(I) must both be idempotent")
    if p0 @ p1 != p0 or p1 @ p0 != p0:
        raise NotCommutingIdempotents("Φ(0)Φ(I) = Φ(I)Φ(0) = Φ(0) violated")
    eye = identity(p0.n, p0.fd)
    columns = image_basis(p1 - p0) + image_basis(eye - p1) + image_basis(p0)
    s = rank(p0)
    l = rank(p1) - s
    return Matrix.from_columns(columns, p0.fd), s, l
