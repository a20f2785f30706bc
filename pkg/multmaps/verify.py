"""
Fuzz harness: multiplicativity, pointwise map equality, and the nilpotency
of commutator nests in the unitriangular group.

Verdicts are data. A failing check returns a Verdict carrying a (greedily
minimised) counterexample instead of raising.
"""
from __future__ import annotations

import logging
import random
from dataclasses import dataclass

from config import settings

from .classify import expr_oracle
from .errors import DimensionMismatch, MultMapError
from .field import CONJUGATION, IDENTITY, QQ
from .mapexpr import Cof, Conj, DetScale, Hom, MapExpr, ScalarCharacter, TrivialDet, simplify
from .matrix import Matrix, coidempotent, commutator, identity, unit, zero
from .slword import default_pool, random_gl, random_singular, random_unitriangular

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FuzzConfig:
    seed: int = 0
    pair_count: int = 50
    dims: tuple = (2, 3, 4)
    scalar_pool: tuple | None = None
    include_singular: bool = True

    def __post_init__(self):
        object.__setattr__(self, 'dims', tuple(self.dims))
        if self.pair_count < 1:
            raise ValueError("pair_count must be at least 1")
        if not self.dims:
            raise ValueError("dims must name at least one dimension")

    @classmethod
    def from_settings(cls, **overrides):
        values = {'seed': settings.SEED, 'pair_count': settings.FUZZ_PAIRS}
        values.update(overrides)
        return cls(**values)

    def pool(self, fd):
        return list(self.scalar_pool) if self.scalar_pool else default_pool(fd)


@dataclass(frozen=True)
class Verdict:
    passed: bool
    samples: int
    seed: int
    counterexample: tuple | None = None


def _sample(n, fd, cfg, rng, index):
    pool = cfg.pool(fd)
    if cfg.include_singular and index % 3 == 2:
        return random_singular(n, pool, rng.getrandbits(32), fd)
    return random_gl(n, 2 * n, pool, rng.getrandbits(32), fd)


def _with_entry_zeroed(a, i, j):
    rows = [list(row) for row in a.rows]
    rows[i][j] = a.fd.zero
    return Matrix(a.fd, rows)


def _minimise(matrices, fails):
    """One greedy pass: zero entries one at a time while the failure persists."""
    matrices = list(matrices)
    for slot, a in enumerate(matrices):
        for i in range(a.n):
            for j in range(a.n):
                if matrices[slot][i, j].is_zero:
                    continue
                trial = list(matrices)
                trial[slot] = _with_entry_zeroed(matrices[slot], i, j)
                if fails(*trial):
                    matrices = trial
    return tuple(matrices)


def _safe(check):
    def wrapped(*args):
        try:
            return check(*args)
        except MultMapError:
            return False
    return wrapped


def check_multiplicative(o, cfg):
    n, fd = o.n, o.fd
    rng = random.Random(cfg.seed)

    def fails(a, b):
        return o.evaluate(a @ b) != o.evaluate(a) @ o.evaluate(b)

    pairs = [(identity(n, fd), identity(n, fd)), (zero(n, fd), identity(n, fd))]
    for index in range(cfg.pair_count):
        if index >= len(pairs):
            pairs.append((_sample(n, fd, cfg, rng, index), _sample(n, fd, cfg, rng, index + 1)))
        a, b = pairs[index]
        if fails(a, b):
            logger.info("%s is not multiplicative on sample %d", o.name, index)
            return Verdict(False, index + 1, cfg.seed, _minimise((a, b), _safe(fails)))
    return Verdict(True, cfg.pair_count, cfg.seed)


def check_equal(o1, o2, cfg):
    if (o1.n, o1.k, o1.fd) != (o2.n, o2.k, o2.fd):
        raise DimensionMismatch(f"cannot compare M_{o1.n} → M_{o1.k} with M_{o2.n} → M_{o2.k}")
    n, fd = o1.n, o1.fd
    rng = random.Random(cfg.seed)

    def fails(a):
        return o1.evaluate(a) != o2.evaluate(a)

    samples = [identity(n, fd), zero(n, fd), unit(n, 1, 1, fd), coidempotent(n, 1, fd)]
    for index in range(cfg.pair_count):
        if index >= len(samples):
            samples.append(_sample(n, fd, cfg, rng, index))
        a = samples[index]
        if fails(a):
            logger.info("%s and %s differ on sample %d", o1.name, o2.name, index)
            return Verdict(False, index + 1, cfg.seed, _minimise((a,), _safe(fails)) + (None,))
    return Verdict(True, cfg.pair_count, cfg.seed)


def lcs_depth_check(n, depth, cfg, fd=None):
    """Depth-d commutator nests of unitriangular matrices vanish on the first d superdiagonals."""
    if depth < 0:
        raise ValueError("depth must be non-negative")
    fd = QQ if fd is None else fd
    pool = cfg.pool(fd)
    rng = random.Random(cfg.seed)
    eye = identity(n, fd)
    for index in range(cfg.pair_count):
        nest = random_unitriangular(n, pool, rng.getrandbits(32), fd)
        for _ in range(depth):
            nest = commutator(random_unitriangular(n, pool, rng.getrandbits(32), fd), nest)
        lower_ok = all(nest[i, j] == (1 if i == j else 0) for i in range(n) for j in range(i + 1))
        upper_ok = all(nest[i, i + m].is_zero for m in range(1, depth + 1) for i in range(n - m))
        if not (lower_ok and upper_ok) or (depth >= n and nest != eye):
            logger.info("commutator nest of depth %d failed on sample %d", depth, index)
            return Verdict(False, index + 1, cfg.seed, (nest, None))
    return Verdict(True, cfg.pair_count, cfg.seed)


def canonical_atoms(n, fd):
    """One instance of every atom kind, for multiplicativity sweeps."""
    pool = default_pool(fd)
    atoms = [
        Conj(random_gl(n, 2 * n, pool, 1, fd)),
        Hom(IDENTITY),
        DetScale(ScalarCharacter.power(2)),
        TrivialDet((ScalarCharacter.power(1),), 0, n - 1),
    ]
    if n >= 2:
        atoms.append(Cof())
    if fd.is_quadratic:
        atoms += [Hom(CONJUGATION), DetScale(ScalarCharacter.power(1, CONJUGATION))]
    return [MapExpr(n, fd, (atom,)) for atom in atoms]


def random_expr(n, fd, depth, seed, max_power=None):
    """Seeded random composition whose canonical characters stay within max_power."""
    max_power = settings.MAX_CHAR_POWER if max_power is None else max_power
    rng = random.Random(seed)
    pool = default_pool(fd)
    homs = [IDENTITY, CONJUGATION] if fd.is_quadratic else [IDENTITY]
    while True:
        atoms = []
        for _ in range(rng.randint(1, depth)):
            kind = rng.choice(('conj', 'cof', 'hom', 'detscale'))
            if kind == 'conj':
                atoms.append(Conj(random_gl(n, n, pool, rng.getrandbits(32), fd)))
            elif kind == 'cof':
                atoms.append(Cof())
            elif kind == 'hom':
                atoms.append(Hom(rng.choice(homs)))
            else:
                atoms.append(DetScale(ScalarCharacter.power(rng.choice((-1, 1)), rng.choice(homs))))
        if rng.random() < 0.15:
            l = rng.randint(1, n)
            chars = tuple(ScalarCharacter.power(rng.choice((-1, 1, 2)), rng.choice(homs)) for _ in range(l))
            zero_pad = rng.randint(0, n - l)
            atoms[0] = TrivialDet(chars, zero_pad, n - l - zero_pad)
        e = MapExpr(n, fd, tuple(atoms))
        form = simplify(e)
        chars = form.chars if form.chars else (form.lam,) if form.lam is not None else ()
        if all(c.max_power <= max_power for c in chars):
            return e


def fuzz_atoms(cfg, fd):
    """check_multiplicative over every canonical atom for each n in cfg.dims."""
    verdicts = []
    for n in cfg.dims:
        for e in canonical_atoms(n, fd):
            verdicts.append(check_multiplicative(expr_oracle(e), cfg))
    return verdicts
