"""
Black-box classification of multiplicative maps Φ: M_n(F) → M_k(F).

The classifier only ever calls `oracle.evaluate`; it never inspects how the
map was built. It replays the constructive structure theory step by step:

1. Split Φ(0) and Φ(I) into a block normal form and keep the working block.
2. If every probed transvection maps to I the map factors through det
   (trivial); maps into a smaller algebra must land here.
3. Otherwise either Φ kills every rank n−1 matrix (degenerate: a group
   homomorphism GL(n) → GL(n)) or it does not (non-degenerate).
4. Recover the conjugator, the ring hom and the determinant character from
   targeted probes, then check the result against the whole probe log and
   against fresh random samples.

Every consistency check that fails raises NotMultiplicative (or a subclass)
with a message naming the violated identity, after logging it at WARNING.
"""
from __future__ import annotations

import itertools
import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from config import settings

from .errors import (
    DimensionMismatch,
    FieldMismatch,
    NonDiagonalizableTrivial,
    NotCommutingIdempotents,
    NotMatrixUnits,
    NotMultiplicative,
    OracleBudgetExceeded,
    ProbeMiss,
    RankLadderViolation,
    SingularMatrix,
    SingularRecovery,
    UnsupportedDimension,
    VerificationFailed,
)
from .field import CONJUGATION, FieldDescriptor, hom_apply, recognize_hom
from .mapexpr import (
    CanonicalForm,
    Eps,
    FormClass,
    MapExpr,
    ScalarCharacter,
    TrivialDet,
    candidate_characters,
    canonicalize_form,
)
from .matrix import (
    Matrix,
    adjugate,
    block_diag,
    coidempotent,
    cofactor,
    conjugator_from_units,
    det,
    diag_unit,
    diagonal,
    hom_matrix,
    identity,
    inverse,
    is_semisimple,
    kernel_basis,
    leading_block,
    normalize_projective,
    nullspace,
    rank,
    rank_idempotent,
    scalar_mul,
    split_idempotent_pair,
    swap,
    transvection,
    unit,
    zero,
)
from .slword import default_pool, random_gl, random_singular

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class MapOracle:
    n: int
    k: int
    fd: FieldDescriptor
    evaluate: Callable[[Matrix], Matrix]
    name: str = 'oracle'


def expr_oracle(e, name='expr'):
    """Wrap a MapExpr; the classifier still only sees evaluate()."""
    return MapOracle(e.n, e.k, e.fd, e.evaluate, name)


def form_oracle(form, name='form'):
    return MapOracle(form.n, form.k, form.fd, form.evaluate, name)


def phi_pool(fd):
    pool = [fd(1), fd(2), fd(3), fd(Fraction(1, 2)), fd(-1)]
    if fd.is_quadratic:
        pool += [fd(0, 1), fd(1, 1)]
    return pool


def lambda_pool(fd):
    pool = [fd(2), fd(3), fd(5), fd(-1), fd(Fraction(1, 2))]
    if fd.is_quadratic:
        pool += [fd(1, 1), fd(2, 1)]
    return pool


def probe_budget(n):
    return 10 * n * n + 200


class ProbeSession:
    """Budgeted, logged and memoised access to one oracle."""

    def __init__(self, oracle, budget=None):
        self.oracle = oracle
        self.budget = probe_budget(oracle.n) if budget is None else budget
        self.log = []
        self._cache = {}

    @property
    def calls(self):
        return len(self.log)

    def __call__(self, a):
        cached = self._cache.get(a)
        if cached is not None:
            return cached
        if len(self.log) >= self.budget:
            raise OracleBudgetExceeded(f"oracle budget of {self.budget} evaluations exhausted")
        out = self.oracle.evaluate(a)
        if not isinstance(out, Matrix) or out.n != self.oracle.k:
            raise DimensionMismatch(f"oracle must return {self.oracle.k}x{self.oracle.k} matrices")
        self._cache[a] = out
        self.log.append((a, out))
        return out

    def as_oracle(self):
        o = self.oracle
        return MapOracle(o.n, o.k, o.fd, self, o.name)


@dataclass
class ProbeTrace:
    hom_table: list = field(default_factory=list)
    lambda_table: list = field(default_factory=list)
    unrecognized_hom: bool = False


@dataclass(frozen=True)
class ClassifyReport:
    pre_conjugator: Matrix
    s: int
    l: int
    form: CanonicalForm
    hom_table: tuple = ()
    lambda_table: tuple = ()
    probe_log: tuple = ()
    unrecognized_hom: bool = False

    @property
    def form_class(self):
        return self.form.form_class


def _inconsistent(message, exc=NotMultiplicative):
    logger.warning("consistency check failed: %s", message)
    return exc(message)


def _fit_character(table, fd, max_power):
    for candidate in candidate_characters(fd, max_power):
        if all(candidate(x) == value for x, value in table):
            return candidate
    logger.warning("no character with |power| <= %d fits %d samples, keeping the table", max_power, len(table))
    return None


def _recognize(values, fd, trace):
    trace.hom_table = list(values.items())
    phi = recognize_hom(trace.hom_table, fd)
    if not phi.is_registered:
        trace.unrecognized_hom = True
        logger.warning("ring hom is consistent on probes but neither id nor conj, reporting it sampled")
    return phi


def _check_hom_axioms(phi_at, fd):
    if phi_at(fd.one) != 1:
        raise _inconsistent("φ(1) = 1 violated")
    small = phi_pool(fd)[:3]
    for x, y in itertools.product(small, repeat=2):
        if phi_at(x + y) != phi_at(x) + phi_at(y):
            raise _inconsistent(f"φ(k+l) = φ(k)+φ(l) violated at k={x}, l={y}")
        if phi_at(x * y) != phi_at(x) * phi_at(y):
            raise _inconsistent(f"φ(kl) = φ(k)φ(l) violated at k={x}, l={y}")


def normalize_idempotents(o):
    """(S, s, l) splitting Φ(0) and Φ(I) into diag(0_l, 0, I_s) and diag(I_l, 0, I_s)."""
    p0 = o.evaluate(zero(o.n, o.fd))
    p1 = o.evaluate(identity(o.n, o.fd))
    try:
        return split_idempotent_pair(p0, p1)
    except NotCommutingIdempotents as exc:
        raise _inconsistent(str(exc)) from exc


def restrict_to_block(o, pre, s, l):
    """The l×l working block of S⁻¹Φ(A)S, checking the rest is diag(0, I_s)."""
    pre_inv = inverse(pre)
    k, fd = o.k, o.fd
    pad = diagonal([0] * (k - l - s) + [1] * s, fd) if k > l else None

    def evaluate(a):
        full = pre_inv @ o.evaluate(a) @ pre
        block = leading_block(full, l)
        if block_diag(block, pad) != full:
            raise _inconsistent("Φ(A) = S·diag(Ψ(A), 0, I_s)·S⁻¹ violated")
        return block

    return MapOracle(o.n, l, fd, evaluate, o.name)


def is_trivial(o, pool=None):
    n, fd = o.n, o.fd
    pool = phi_pool(fd) if pool is None else pool
    eye = identity(o.k, fd)
    pairs = [(i, i + 1) for i in range(1, n)] + [(i + 1, i) for i in range(1, n)]
    if n >= 3:
        pairs.append((1, 3))
    trivial = all(
        o.evaluate(transvection(n, i, j, x, fd)) == eye
        for i, j in pairs
        for x in pool
    )
    # S_12 and D_1(−1) share a determinant
    if trivial and o.evaluate(swap(n, 1, 2, fd)) != o.evaluate(diag_unit(n, 1, -1, fd)):
        trivial = False
    if not trivial and o.k < n:
        raise _inconsistent(f"a multiplicative map M_{n} → M_{o.k} must send SL(n) to I")
    return trivial


def _trivial_form(o_n, k, fd, pre, s, l, chars, block_table, basis):
    if l:
        pre = pre @ (block_diag(basis, identity(k - l, fd)) if k > l else basis)
    return CanonicalForm(
        FormClass.TRIVIAL, o_n, k, fd, normalize_projective(inverse(pre)),
        chars=chars, block_table=tuple(block_table), l=l, zero_pad=k - l - s, one_pad=s,
    )


def classify_trivial(o, pre=None, s=0, k=None, trace=None, max_power=None):
    """Trivial form for a working block o (k = l) that sends SL(n) to I."""
    n, l, fd = o.n, o.k, o.fd
    k = l if k is None else k
    pre = identity(k, fd) if pre is None else pre
    trace = ProbeTrace() if trace is None else trace
    max_power = settings.MAX_CHAR_POWER if max_power is None else max_power

    images = [(x, o.evaluate(diag_unit(n, 1, x, fd))) for x in lambda_pool(fd)]
    trace.lambda_table = images
    for (x, a), (y, b) in itertools.combinations(images, 2):
        if a @ b != b @ a:
            logger.warning("trivial images at %s and %s do not commute", x, y)
            raise NonDiagonalizableTrivial("images of the determinant factor do not commute", probes=images)
    for x, m in images:
        if not is_semisimple(m):
            logger.warning("trivial image at %s is not diagonalisable", x)
            raise NonDiagonalizableTrivial(f"image of D_1({x}) has a repeated factor in its minimal polynomial", probes=images)

    eye = identity(l, fd)
    seen = set()
    found = []
    covered = 0
    for candidate in candidate_characters(fd, max_power):
        values = tuple(candidate(x) for x, _ in images)
        if values in seen:
            continue
        seen.add(values)
        rows = [row for (_, m), v in zip(images, values) for row in (m - scalar_mul(v, eye)).rows]
        basis = nullspace(rows, l, fd)
        if basis:
            found.append((candidate, basis))
            covered += len(basis)
        if covered >= l:
            break

    if covered == l:
        chars = tuple(c for c, basis in found for _ in basis)
        columns = [v for _, basis in found for v in basis]
        logger.debug("trivial block diagonalised with characters %s", ', '.join(map(str, chars)))
        return _trivial_form(n, k, fd, pre, s, l, chars, (), Matrix.from_columns(columns, fd))
    logger.warning("trivial block not fitted by characters (%d of %d dimensions), keeping the table", covered, l)
    return _trivial_form(n, k, fd, pre, s, l, None, images, eye)


def _scaled_swap(n, i, b, fd):
    rows = [[fd.one if r == c else fd.zero for c in range(n)] for r in range(n)]
    rows[i - 1][i - 1] = rows[i][i] = fd.zero
    rows[i - 1][i] = b
    rows[i][i - 1] = b.inv()
    return Matrix(fd, rows)


def classify_gl(o, trace=None, max_power=None):
    """Degenerate form of a nontrivial normalised oracle, probing only GL(n)."""
    n, fd = o.n, o.fd
    if o.k != n:
        raise DimensionMismatch("classify_gl needs k = n")
    trace = ProbeTrace() if trace is None else trace
    max_power = settings.MAX_CHAR_POWER if max_power is None else max_power
    eye = identity(n, fd)

    logger.debug("step 1: diagonalising the images of D_i(−1)")
    invols = [o.evaluate(diag_unit(n, i, -1, fd)) for i in range(1, n + 1)]
    for i, m in enumerate(invols, start=1):
        if m @ m != eye:
            raise _inconsistent(f"Φ(D_{i}(−1))² = I violated")
    for a, b in itertools.combinations(invols, 2):
        if a @ b != b @ a:
            raise _inconsistent("Φ(D_i(−1)) do not commute")
    block = len(kernel_basis(invols[0] + eye))
    shift = 0
    if block != 1:
        if n < 3 or block != n - 1:
            raise _inconsistent(f"block size m = {block} is neither 1 nor n−1")
        # multiplying by det(A) turns the m = n−1 case into m = 1
        shift = 1
        invols = [-m for m in invols]

    def shifted(a):
        out = o.evaluate(a)
        return scalar_mul(det(a) ** shift, out) if shift else out

    vectors = []
    for i, m in enumerate(invols, start=1):
        basis = kernel_basis(m + eye)
        if len(basis) != 1:
            raise _inconsistent(f"Φ(D_{i}(−1)) has a {len(basis)}-dimensional −1 eigenspace, expected 1")
        vectors.append(basis[0])
    try:
        r = inverse(Matrix.from_columns(vectors, fd))
    except SingularMatrix:
        raise _inconsistent("−1 eigenvectors of the Φ(D_i(−1)) are linearly dependent") from None
    r_inv = inverse(r)
    for i, m in enumerate(invols, start=1):
        if r @ m @ r_inv != diag_unit(n, i, -1, fd):
            raise _inconsistent(f"Φ(D_{i}(−1)) = D_{i}(−1) fails in the common eigenbasis")

    logger.debug("step 2: fixing the diagonal scaling from the images of S_i,i+1")
    scales = [fd.one]
    for i in range(1, n):
        w = r @ shifted(swap(n, i, i + 1, fd)) @ r_inv
        b = w[i - 1, i]
        if b.is_zero or w != _scaled_swap(n, i, b, fd):
            raise _inconsistent(f"Φ(S_{i}{i + 1}) is not a scaled swap of coordinates {i} and {i + 1}")
        scales.append(scales[-1] * b)
    r = diagonal(scales, fd) @ r
    r_inv = inverse(r)

    def work(a):
        return r @ shifted(a) @ r_inv

    logger.debug("step 3: reading ε and φ from the images of P_12(x)")
    u = work(transvection(n, 1, 2, 1, fd))
    if u[0, 1] and u == transvection(n, 1, 2, u[0, 1], fd):
        eps = Eps.PLAIN
    elif u[1, 0] and u == transvection(n, 2, 1, u[1, 0], fd):
        eps = Eps.COFACTOR
    else:
        raise _inconsistent("Φ(P_12(1)) is neither an upper nor a lower transvection")

    values = {}

    def phi_at(x):
        if x not in values:
            image = work(transvection(n, 1, 2, x, fd))
            if eps is Eps.PLAIN:
                value, expected = image[0, 1], transvection(n, 1, 2, image[0, 1], fd)
            else:
                value, expected = -image[1, 0], transvection(n, 2, 1, image[1, 0], fd)
            if image != expected:
                raise _inconsistent(f"Φ(P_12({x})) = P_12(φ({x})) violated")
            values[x] = value
        return values[x]

    for x in phi_pool(fd):
        phi_at(x)
    _check_hom_axioms(phi_at, fd)
    if n >= 3:
        small = phi_pool(fd)[:3]
        for x, y in itertools.product(small, repeat=2):
            a = work(transvection(n, 1, 2, x, fd))
            b = work(transvection(n, 2, 3, y, fd))
            if work(transvection(n, 1, 3, x * y, fd)) != inverse(a) @ inverse(b) @ a @ b:
                raise _inconsistent(f"P_13(kl) = P_12(k)⁻¹P_23(l)⁻¹P_12(k)P_23(l) violated at k={x}, l={y}")
    phi = _recognize(values, fd, trace)

    logger.debug("step 4: reading λ from the images of D_1(x)")
    rest = [1] * (n - 2)
    table = []
    for x in lambda_pool(fd):
        w = work(diag_unit(n, 1, x, fd))
        scale = w[n - 1, n - 1]
        if scale.is_zero:
            raise _inconsistent(f"Φ(D_1({x})) is singular")
        t = w[0, 0] / scale
        if w != scalar_mul(scale, diag_unit(n, 1, t, fd)):
            raise _inconsistent(f"Φ(D_1({x})) = s·diag(t, 1, …, 1) violated")
        if work(diagonal([x, x.inv()] + rest, fd)) != diagonal([t, t.inv()] + rest, fd):
            raise _inconsistent(f"Φ(D_1({x})D_2(1/{x})) = diag(t, 1/t, 1, …) violated")
        if phi.is_registered:
            expected = hom_apply(phi, x)
            if t != (expected if eps is Eps.PLAIN else expected.inv()):
                raise _inconsistent(f"t = φ({x}) violated for Φ(D_1({x}))")
        lam_prime = scale if eps is Eps.PLAIN else scale * t
        table.append((x, lam_prime / x ** shift))
    trace.lambda_table = table
    lam = _fit_character(table, fd, max_power)

    return canonicalize_form(CanonicalForm(
        FormClass.DEGENERATE, n, n, fd, r, phi=phi, eps=eps, lam=lam,
        lambda_table=tuple(table) if lam is None else (),
    ))


def _recover_corank_one(o, trace, max_power):
    n, fd = o.n, o.fd
    for r in range(1, n - 1):
        if not o.evaluate(rank_idempotent(n, r, fd)).is_zero:
            raise _inconsistent(
                f"Φ vanishes on rank 1 but not on the rank-{r} idempotent", exc=RankLadderViolation,
            )
    corank_one = [coidempotent(n, j, fd) for j in range(1, n + 1)]
    for j, f in enumerate(corank_one, start=1):
        if rank(o.evaluate(f)) != 1:
            raise _inconsistent(f"rank(Φ(F_{j})) = 1 violated", exc=RankLadderViolation)
    gl = classify_gl(o, trace, max_power)
    if gl.eps is not Eps.COFACTOR or gl.lam is None or not gl.lam.is_trivial:
        raise _inconsistent("a map killing rank 1 but not rank n−1 must be a plain cofactor form")
    form = CanonicalForm(FormClass.NONDEGENERATE, n, n, fd, gl.R, phi=gl.phi, eps=Eps.COFACTOR)
    for j, f in enumerate(corank_one, start=1):
        if form.evaluate(f) != o.evaluate(f):
            raise _inconsistent(f"Φ(F_{j}) disagrees with the recovered cofactor form")
    return form


def recover_nondegenerate(o, trace=None, max_power=None):
    n, fd = o.n, o.fd
    if o.k != n:
        raise DimensionMismatch("recover_nondegenerate needs k = n")
    trace = ProbeTrace() if trace is None else trace
    max_power = settings.MAX_CHAR_POWER if max_power is None else max_power
    if o.evaluate(unit(n, 1, 1, fd)).is_zero:
        logger.debug("Φ(E_11) = 0, recovering through the rank ladder")
        return _recover_corank_one(o, trace, max_power)

    logger.debug("recovering the conjugator from the images of the matrix units")
    units = [[o.evaluate(unit(n, i, j, fd)) for j in range(1, n + 1)] for i in range(1, n + 1)]
    try:
        r = conjugator_from_units(units)
    except (NotMatrixUnits, SingularRecovery) as exc:
        raise _inconsistent(str(exc)) from exc
    r_inv = inverse(r)
    e12 = unit(n, 1, 2, fd)
    values = {}

    def phi_at(b):
        if b not in values:
            image = r @ o.evaluate(scalar_mul(b, e12)) @ r_inv
            value = image[0, 1]
            if image != scalar_mul(value, e12):
                raise _inconsistent(f"Φ({b}·E_12) = φ({b})·E_12 violated")
            values[b] = value
        return values[b]

    for b in phi_pool(fd):
        phi_at(b)
    _check_hom_axioms(phi_at, fd)
    phi = _recognize(values, fd, trace)
    return canonicalize_form(CanonicalForm(FormClass.NONDEGENERATE, n, n, fd, r, phi=phi))


def _agree(form, a, out):
    try:
        expected = form.evaluate(a)
    except ProbeMiss:
        return
    if expected != out:
        logger.warning("recovered form disagrees with the oracle at %r", a)
        raise VerificationFailed("recovered form disagrees with the oracle", counterexample=a)


def verify_form(form, session, seed, invertible, singular):
    """Replay every logged probe, then compare on fresh random samples."""
    for a, out in list(session.log):
        _agree(form, a, out)
    n, fd = form.n, form.fd
    rng = random.Random(seed)
    pool = default_pool(fd)
    for _ in range(invertible):
        a = random_gl(n, 2 * n, pool, rng.getrandbits(32), fd)
        _agree(form, a, session(a))
    for _ in range(singular):
        a = random_singular(n, pool, rng.getrandbits(32), fd)
        _agree(form, a, session(a))


def classify(o, seed=None, verify_invertible=None, verify_singular=None, max_power=None):
    n, k, fd = o.n, o.k, o.fd
    if n < 2:
        raise UnsupportedDimension("classification needs n >= 2")
    if k > n:
        raise UnsupportedDimension(f"no structure theory for k = {k} > n = {n}")
    seed = settings.SEED if seed is None else seed
    verify_invertible = settings.VERIFY_INVERTIBLE if verify_invertible is None else verify_invertible
    verify_singular = settings.VERIFY_SINGULAR if verify_singular is None else verify_singular
    max_power = settings.MAX_CHAR_POWER if max_power is None else max_power

    session = ProbeSession(o)
    probed = session.as_oracle()
    trace = ProbeTrace()
    pre, s, l = normalize_idempotents(probed)
    logger.debug("block normal form: s=%d l=%d", s, l)

    if l == 0:
        form = _trivial_form(n, k, fd, pre, s, 0, (), (), None)
    else:
        working = restrict_to_block(probed, pre, s, l)
        if is_trivial(working):
            form = classify_trivial(working, pre, s, k, trace, max_power)
        else:
            vanishing = [working.evaluate(coidempotent(n, j, fd)).is_zero for j in range(1, n + 1)]
            if all(vanishing):
                form = classify_gl(working, trace, max_power)
            elif any(vanishing):
                raise _inconsistent(
                    "Φ(B) = 0 whenever Φ(A) = 0 and rank(A) = rank(B) violated on the F_j",
                    exc=RankLadderViolation,
                )
            else:
                form = recover_nondegenerate(working, trace, max_power)

    verify_form(form, session, seed, verify_invertible, verify_singular)
    logger.info("%s classified as %s after %d probes", o.name, form.describe(), session.calls)
    return ClassifyReport(
        pre_conjugator=pre,
        s=s,
        l=l,
        form=form,
        hom_table=tuple(trace.hom_table),
        lambda_table=tuple(trace.lambda_table),
        probe_log=tuple(session.log),
        unrecognized_hom=trace.unrecognized_hom,
    )


BUILTINS = ('identity', 'cofactor', 'adjugate', 'det-cubed', 'shift', 'conjugation')


def builtin_oracle(name, n, fd):
    if name == 'identity':
        return MapOracle(n, n, fd, lambda a: a, name)
    if name == 'cofactor':
        return MapOracle(n, n, fd, cofactor, name)
    if name == 'adjugate':
        # anti-multiplicative: adj(AB) = adj(B)·adj(A)
        return MapOracle(n, n, fd, adjugate, name)
    if name == 'det-cubed':
        k = max(n - 1, 1)
        cube = ScalarCharacter.power(3)
        return expr_oracle(MapExpr(n, fd, (TrivialDet((cube,) * k),)), name)
    if name == 'shift':
        return MapOracle(n, n, fd, lambda a: a + identity(n, fd), name)
    if name == 'conjugation':
        if not fd.is_quadratic:
            raise FieldMismatch("the conjugation oracle needs a quadratic field")
        return MapOracle(n, n, fd, lambda a: hom_matrix(CONJUGATION, a), name)
    raise KeyError(f"unknown builtin oracle {name!r}; choose from {', '.join(BUILTINS)}")
