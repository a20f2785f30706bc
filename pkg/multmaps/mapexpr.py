"""
Multiplicative maps as composition ASTs over five canonical atoms, their
evaluation, and the rewrite to canonical form.

Atoms
-----
- Conj(R):        A ↦ R⁻¹AR
- Cof:            A ↦ C(A), the cofactor matrix (multiplicative, see matrix.cofactor)
- Hom(φ):         A ↦ (φ(a_ij))
- DetScale(λ):    A ↦ λ(det A)·A, and 0 on singular A
- TrivialDet(…):  A ↦ blockdiag(diag(λ_1(det A), …, λ_l(det A)), 0_zeroPad, I_onePad);
                  on singular A the character block is 0 and the padding stays

A MapExpr applies its atoms right to left: atoms[0] is applied last.

Canonical form
--------------
Every composition collapses to

    A ↦ [0 if det A = 0 and the map is degenerate]  λ(det A) · R⁻¹ φ(C^ε(A)) R

with ε ∈ {Plain, Cofactor}, or to a trivial block form when a TrivialDet is
outermost. simplify() folds atoms from the innermost outwards into that shape,
one exact identity per atom. For n = 2 the cofactor map is inner,
C(A) = J A J⁻¹ with J = [[0, 1], [−1, 0]], so 2×2 forms always use ε = Plain.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from functools import cached_property

from .errors import (
    DimensionMismatch,
    DivisionByZero,
    FieldMismatch,
    ProbeMiss,
    SingularConjugator,
    SingularMatrix,
    UnregisteredHom,
)
from .field import CONJUGATION, IDENTITY, FieldDescriptor, HomTag, RingHom, compose_homs, hom_apply
from .matrix import (
    Matrix,
    block_diag,
    cofactor,
    det,
    diagonal,
    hom_matrix,
    identity,
    inverse,
    normalize_projective,
    scalar_mul,
    zero,
)


@dataclass(frozen=True)
class ScalarCharacter:
    """x ↦ ∏ hom_i(x)^p_i on F*; the empty product is the constant 1."""
    factors: tuple = ()

    def __post_init__(self):
        powers = {}
        for hom, power in self.factors:
            powers[hom] = powers.get(hom, 0) + power
        canonical = tuple(sorted(
            ((h, p) for h, p in powers.items() if p),
            key=lambda hp: hp[0].sort_key,
        ))
        object.__setattr__(self, 'factors', canonical)

    @classmethod
    def power(cls, p, hom=IDENTITY):
        return cls(((hom, p),))

    @property
    def is_trivial(self):
        return not self.factors

    @property
    def is_registered(self):
        return all(h.is_registered for h, _ in self.factors)

    @property
    def max_power(self):
        return max((abs(p) for _, p in self.factors), default=0)

    @property
    def sort_key(self):
        return tuple((h.sort_key, p) for h, p in self.factors)

    def __call__(self, x):
        if x.is_zero:
            raise DivisionByZero("a scalar character is only defined on nonzero scalars")
        result = x.fd.one
        for hom, p in self.factors:
            result = result * hom_apply(hom, x) ** p
        return result

    def __mul__(self, other):
        return ScalarCharacter(self.factors + other.factors)

    def __pow__(self, m):
        return ScalarCharacter(tuple((h, p * m) for h, p in self.factors))

    def after(self, hom):
        """hom∘self"""
        return ScalarCharacter(tuple((compose_homs(hom, h), p) for h, p in self.factors))

    def precompose_hom(self, hom):
        """self∘hom"""
        return ScalarCharacter(tuple((compose_homs(h, hom), p) for h, p in self.factors))

    def compose(self, inner):
        """self∘inner, itself a character since every factor hom is multiplicative."""
        return ScalarCharacter(tuple(
            (compose_homs(g, h), q * p)
            for g, q in self.factors
            for h, p in inner.factors
        ))

    def __str__(self):
        if not self.factors:
            return '1'
        return '·'.join(f"{h}^{p}" for h, p in self.factors)


TRIVIAL_CHARACTER = ScalarCharacter()


def candidate_characters(fd, max_power):
    """Every id^p·conj^q with |p|, |q| ≤ max_power, simplest first."""
    powers = range(-max_power, max_power + 1)
    if not fd.is_quadratic:
        for p in sorted(powers, key=lambda p: (abs(p), p)):
            yield ScalarCharacter.power(p)
        return
    for p, q in sorted(itertools.product(powers, powers), key=lambda pq: (abs(pq[0]) + abs(pq[1]), pq)):
        yield ScalarCharacter(((IDENTITY, p), (CONJUGATION, q)))


def _check_registered(hom, fd):
    if not hom.is_registered:
        raise UnregisteredHom("map expressions only carry registered homs")
    if hom.tag is HomTag.QUAD_CONJUGATION and not fd.is_quadratic:
        raise FieldMismatch("Galois conjugation needs a quadratic field")


@dataclass(frozen=True)
class Conj:
    R: Matrix

    def __post_init__(self):
        if det(self.R).is_zero:
            raise SingularConjugator("Conj needs an invertible R")

    @cached_property
    def r_inv(self):
        return inverse(self.R)

    def evaluate(self, a):
        return self.r_inv @ a @ self.R


@dataclass(frozen=True)
class Cof:
    def evaluate(self, a):
        return cofactor(a)


@dataclass(frozen=True)
class Hom:
    phi: RingHom

    def evaluate(self, a):
        return hom_matrix(self.phi, a)


@dataclass(frozen=True)
class DetScale:
    lam: ScalarCharacter

    def evaluate(self, a):
        d = det(a)
        if d.is_zero:
            return zero(a.n, a.fd)
        return scalar_mul(self.lam(d), a)


@dataclass(frozen=True)
class TrivialDet:
    chars: tuple = ()
    zero_pad: int = 0
    one_pad: int = 0

    def __post_init__(self):
        object.__setattr__(self, 'chars', tuple(self.chars))
        if self.zero_pad < 0 or self.one_pad < 0:
            raise ValueError("padding sizes must be non-negative")
        if self.target_dim < 1:
            raise DimensionMismatch("TrivialDet must target at least a 1x1 matrix")

    @property
    def target_dim(self):
        return len(self.chars) + self.zero_pad + self.one_pad

    def evaluate(self, a):
        d = det(a)
        fd = a.fd
        core = [fd.zero] * len(self.chars) if d.is_zero else [c(d) for c in self.chars]
        return diagonal(core + [0] * self.zero_pad + [1] * self.one_pad, fd)


MapAtom = Conj | Cof | Hom | DetScale | TrivialDet


@dataclass(frozen=True)
class MapExpr:
    n: int
    fd: FieldDescriptor
    atoms: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, 'atoms', tuple(self.atoms))
        if self.n < 1:
            raise DimensionMismatch("domain dimension must be at least 1")
        for index, atom in enumerate(self.atoms):
            if isinstance(atom, TrivialDet):
                if index != 0:
                    raise DimensionMismatch("TrivialDet can only be the last applied atom")
                if atom.target_dim != self.n and len(self.atoms) != 1:
                    raise DimensionMismatch("a TrivialDet changing dimension must stand alone")
                for c in atom.chars:
                    for h, _ in c.factors:
                        _check_registered(h, self.fd)
            elif isinstance(atom, Conj):
                if atom.R.n != self.n or atom.R.fd != self.fd:
                    raise DimensionMismatch(f"Conj matrix must be {self.n}x{self.n} over {self.fd}")
            elif isinstance(atom, Cof):
                if self.n < 2:
                    raise DimensionMismatch("cofactor needs n >= 2")
            elif isinstance(atom, Hom):
                _check_registered(atom.phi, self.fd)
            elif isinstance(atom, DetScale):
                for h, _ in atom.lam.factors:
                    _check_registered(h, self.fd)

    @classmethod
    def identity(cls, n, fd):
        return cls(n, fd, ())

    @property
    def k(self):
        if self.atoms and isinstance(self.atoms[0], TrivialDet):
            return self.atoms[0].target_dim
        return self.n

    def evaluate(self, a):
        if a.n != self.n:
            raise DimensionMismatch(f"expression takes {self.n}x{self.n} input, got {a.n}x{a.n}")
        if a.fd != self.fd:
            raise FieldMismatch(f"expression is over {self.fd}, input over {a.fd}")
        for atom in reversed(self.atoms):
            a = atom.evaluate(a)
        return a


def eval_expr(e, a):
    return e.evaluate(a)


def compose(f, g):
    """f∘g: apply g first."""
    if g.k != f.n:
        raise DimensionMismatch(f"cannot feed a {g.k}-dimensional result into a {f.n}-dimensional map")
    if f.fd != g.fd:
        raise FieldMismatch(f"cannot compose maps over {f.fd} and {g.fd}")
    return MapExpr(g.n, g.fd, f.atoms + g.atoms)


class FormClass(Enum):
    TRIVIAL = 'trivial'
    DEGENERATE = 'degenerate'
    NONDEGENERATE = 'nondegenerate'


class Eps(Enum):
    PLAIN = 'plain'
    COFACTOR = 'cofactor'


def j_inverse(fd):
    """J⁻¹ for J = [[0, 1], [−1, 0]]; C(A) = R⁻¹AR with R = J⁻¹ on 2×2 matrices."""
    return Matrix.from_rows([[0, -1], [1, 0]], fd)


@dataclass(frozen=True)
class CanonicalForm:
    form_class: FormClass
    n: int
    k: int
    fd: FieldDescriptor
    R: Matrix
    phi: RingHom = IDENTITY
    eps: Eps = Eps.PLAIN
    lam: ScalarCharacter | None = TRIVIAL_CHARACTER
    lambda_table: tuple = ()
    # trivial class only
    chars: tuple | None = ()
    block_table: tuple = ()
    l: int = 0
    zero_pad: int = 0
    one_pad: int = 0

    @property
    def is_sampled(self):
        if self.form_class is FormClass.TRIVIAL:
            return self.chars is None
        return self.lam is None or not self.phi.is_registered

    @cached_property
    def r_inv(self):
        return inverse(self.R)

    def _lambda_at(self, d):
        if self.lam is not None:
            return self.lam(d)
        for x, value in self.lambda_table:
            if x == d:
                return value
        raise ProbeMiss(f"no sampled λ value at {d}")

    def _trivial_block(self, d):
        if d.is_zero:
            return zero(self.l, self.fd)
        if self.chars is not None:
            return diagonal([c(d) for c in self.chars], self.fd)
        for x, block in self.block_table:
            if x == d:
                return block
        raise ProbeMiss(f"no sampled trivial block at {d}")

    def evaluate(self, a):
        if a.n != self.n:
            raise DimensionMismatch(f"form takes {self.n}x{self.n} input, got {a.n}x{a.n}")
        d = det(a)
        if self.form_class is FormClass.TRIVIAL:
            pads = self.zero_pad + self.one_pad
            blocks = []
            if self.l:
                blocks.append(self._trivial_block(d))
            if pads:
                blocks.append(diagonal([0] * self.zero_pad + [1] * self.one_pad, self.fd))
            full = block_diag(*blocks)
        else:
            if self.form_class is FormClass.DEGENERATE and d.is_zero:
                return zero(self.k, self.fd)
            full = cofactor(a) if self.eps is Eps.COFACTOR else a
            full = hom_matrix(self.phi, full)
            if self.form_class is FormClass.DEGENERATE:
                full = scalar_mul(self._lambda_at(d), full)
        return self.r_inv @ full @ self.R

    def describe(self):
        if self.form_class is FormClass.TRIVIAL:
            chars = 'sampled' if self.chars is None else ', '.join(str(c) for c in self.chars)
            return f"trivial [{chars}] zeroPad={self.zero_pad} onePad={self.one_pad}"
        lam = 'sampled' if self.lam is None else str(self.lam)
        return f"{self.form_class.value} λ={lam} φ={self.phi} ε={self.eps.value}"


def canonicalize_form(form):
    """Normalise R and rewrite 2×2 cofactor forms to ε = Plain."""
    if form.form_class is FormClass.TRIVIAL:
        return form
    r = form.R
    eps = form.eps
    if form.n == 2 and eps is Eps.COFACTOR:
        # R⁻¹φ(JAJ⁻¹)R = (J⁻¹R)⁻¹ φ(A) (J⁻¹R)
        r = j_inverse(form.fd) @ r
        eps = Eps.PLAIN
    return CanonicalForm(
        form.form_class, form.n, form.k, form.fd, normalize_projective(r),
        phi=form.phi, eps=eps, lam=form.lam, lambda_table=form.lambda_table,
    )


def simplify(e):
    n, fd = e.n, e.fd
    degenerate = False
    lam = TRIVIAL_CHARACTER
    phi = IDENTITY
    eps = Eps.PLAIN
    r = identity(n, fd)
    atoms = list(e.atoms)
    trivial = atoms.pop(0) if atoms and isinstance(atoms[0], TrivialDet) else None

    for atom in reversed(atoms):
        if isinstance(atom, Conj):
            # Conj(S)∘(R-conjugated state) = (RS)-conjugated state
            r = r @ atom.R
        elif isinstance(atom, Hom):
            # Hom(ψ)∘Conj(R)→Conj(ψ(R))∘Hom(ψ);  Hom(ψ)∘DetScale(λ)→DetScale(ψ∘λ)∘Hom(ψ)
            lam = lam.after(atom.phi)
            phi = compose_homs(atom.phi, phi)
            r = hom_matrix(atom.phi, r)
        elif isinstance(atom, Cof):
            if n == 2:
                r = r @ j_inverse(fd)
            else:
                # Cof∘Conj(R)→Conj(C(R))∘Cof;  Cof∘DetScale(λ)→DetScale(λ^(n−1))∘Cof
                lam = lam ** (n - 1)
                r = cofactor(r)
                if eps is Eps.PLAIN:
                    eps = Eps.COFACTOR
                else:
                    # Cof∘Cof → DetScale(x^(n−2)), pulled through φ
                    eps = Eps.PLAIN
                    degenerate = True
                    lam = lam * ScalarCharacter.power(n - 2, phi)
        elif isinstance(atom, DetScale):
            # det of the current value is λ(d)^n·φ(d)^e with e = 1 or n−1
            e_power = n - 1 if eps is Eps.COFACTOR else 1
            mu = atom.lam
            lam = lam * mu.compose(lam) ** n * mu.precompose_hom(phi) ** e_power
            degenerate = True
        r = normalize_projective(r)

    if trivial is not None:
        e_power = n - 1 if eps is Eps.COFACTOR else 1
        chars = tuple(c.compose(lam) ** n * c.precompose_hom(phi) ** e_power for c in trivial.chars)
        k = trivial.target_dim
        return CanonicalForm(
            FormClass.TRIVIAL, n, k, fd, identity(k, fd),
            chars=chars, l=len(chars), zero_pad=trivial.zero_pad, one_pad=trivial.one_pad,
        )
    form_class = FormClass.DEGENERATE if degenerate else FormClass.NONDEGENERATE
    return CanonicalForm(form_class, n, n, fd, r, phi=phi, eps=eps, lam=lam)


def canonical_eq(c1, c2):
    if (c1.form_class, c1.n, c1.k, c1.fd) != (c2.form_class, c2.n, c2.k, c2.fd):
        return False
    if c1.form_class is FormClass.TRIVIAL:
        if (c1.l, c1.zero_pad, c1.one_pad) != (c2.l, c2.zero_pad, c2.one_pad):
            return False
        if c1.chars is None or c2.chars is None:
            return c1.chars is None and c2.chars is None and c1.block_table == c2.block_table
        key = lambda c: c.sort_key
        return sorted(c1.chars, key=key) == sorted(c2.chars, key=key)
    if c1.phi != c2.phi or c1.eps is not c2.eps:
        return False
    if c1.lam != c2.lam or (c1.lam is None and c1.lambda_table != c2.lambda_table):
        return False
    try:
        return normalize_projective(c1.R) == normalize_projective(c2.R)
    except SingularMatrix:
        return False
