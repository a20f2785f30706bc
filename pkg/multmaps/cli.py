"""
Command-line front end.

    python main.py eval EXPR MATRIX
    python main.py simplify EXPR
    python main.py classify (EXPR | --builtin NAME)
    python main.py decompose MATRIX
    python main.py verify (EXPR | --builtin NAME) [EXPR2]
    python main.py gen KIND [--length L] [--rank R]

Global flags (before or after the subcommand): --seed, --samples, --field,
--n, --log-level. Documents go to stdout as canonical JSON; diagnostics go
to stderr. Exit codes: 0 ok, 2 parse error, 3 dimension or field mismatch,
4 not multiplicative, 5 verification failed, 6 unsupported dimension,
1 anything else. Verdicts are data, so a failing `verify` still exits 0.
"""
import argparse
import logging
import sys
from dataclasses import dataclass
from pathlib import Path

from config import configure_logging, settings

from .classify import BUILTINS, builtin_oracle, classify, expr_oracle
from .errors import MultMapError, ParseError
from .field import FieldDescriptor
from .mapexpr import simplify
from .matrix import det, rank_idempotent
from .serializers import (
    ExprSerializer,
    FormSerializer,
    MatrixSerializer,
    ReportSerializer,
    VerdictSerializer,
    WordSerializer,
    dumps,
    loads,
    parse_field_option,
    read,
)
from .slword import decompose_gl, decompose_sl, default_pool, random_gl, random_singular, random_sl, random_unitriangular
from .verify import FuzzConfig, check_equal, check_multiplicative

logger = logging.getLogger(__name__)

GEN_KINDS = ('sl', 'gl', 'unitriangular', 'singular', 'idempotent')


@dataclass(frozen=True)
class CliConfig:
    seed: int = settings.SEED
    samples: int | None = None
    field: FieldDescriptor = FieldDescriptor.rational()
    n: int = 3
    log_level: str = settings.LOG_LEVEL

    @classmethod
    def from_args(cls, args):
        return cls(
            seed=args.seed,
            samples=args.samples,
            field=parse_field_option(args.field),
            n=args.n,
            log_level=args.log_level,
        )


def _read(path):
    try:
        return loads(Path(path).read_text(encoding='utf-8'))
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from exc


def _load_expr(path):
    return read(ExprSerializer, _read(path))


def _emit(doc):
    sys.stdout.write(dumps(doc))


def cmd_eval(args, cfg):
    e = _load_expr(args.expr)
    a = read(MatrixSerializer, _read(args.matrix), context={'field': e.fd})
    _emit(MatrixSerializer(e.evaluate(a)).data)


def cmd_simplify(args, cfg):
    _emit(FormSerializer(simplify(_load_expr(args.expr))).data)


def _oracle(args, cfg):
    if args.builtin:
        return builtin_oracle(args.builtin, cfg.n, cfg.field)
    if not args.expr:
        raise ParseError("give an expression file or --builtin NAME")
    # only evaluate() is handed over; the AST stays out of the classifier's reach
    return expr_oracle(_load_expr(args.expr), name=Path(args.expr).name)


def cmd_classify(args, cfg):
    report = classify(_oracle(args, cfg), seed=cfg.seed, verify_invertible=cfg.samples)
    _emit(ReportSerializer(report).data)


def cmd_decompose(args, cfg):
    a = read(MatrixSerializer, _read(args.matrix))
    result = decompose_sl(a) if det(a) == 1 else decompose_gl(a)
    _emit(WordSerializer(result).data)


def cmd_verify(args, cfg):
    fuzz = FuzzConfig.from_settings(seed=cfg.seed)
    if cfg.samples is not None:
        fuzz = FuzzConfig(seed=cfg.seed, pair_count=cfg.samples)
    first = _oracle(args, cfg)
    if args.builtin and args.expr:
        second = expr_oracle(_load_expr(args.expr), name=Path(args.expr).name)
    elif args.expr2:
        second = expr_oracle(_load_expr(args.expr2), name=Path(args.expr2).name)
    else:
        second = None
    verdict = check_multiplicative(first, fuzz) if second is None else check_equal(first, second, fuzz)
    _emit(VerdictSerializer(verdict).data)


def cmd_gen(args, cfg):
    n, fd, seed = cfg.n, cfg.field, cfg.seed
    pool = default_pool(fd)
    length = settings.SLWORD_LENGTH if args.length is None else args.length
    if args.kind == 'sl':
        a = random_sl(n, length, pool, seed, fd)
    elif args.kind == 'gl':
        a = random_gl(n, length, pool, seed, fd)
    elif args.kind == 'unitriangular':
        a = random_unitriangular(n, pool, seed, fd)
    elif args.kind == 'singular':
        a = random_singular(n, pool, seed, fd, rank=args.rank)
    else:
        a = rank_idempotent(n, n - 1 if args.rank is None else args.rank, fd)
    _emit(MatrixSerializer(a).data)


GLOBAL_DEFAULTS = {
    'seed': settings.SEED,
    'samples': None,
    'field': 'rational',
    'n': 3,
    'log_level': settings.LOG_LEVEL,
}


def _global_flags(defaults):
    """Flags accepted both before and after the subcommand; a copy after it wins."""
    flags = argparse.ArgumentParser(add_help=False)

    def default(name):
        return defaults.get(name, argparse.SUPPRESS)

    flags.add_argument('--seed', type=int, default=default('seed'), help='seed for every random draw')
    flags.add_argument('--samples', type=int, default=default('samples'), help='fresh verification samples or fuzz pairs')
    flags.add_argument('--field', default=default('field'), help="'rational' or 'quadratic:<d>'")
    flags.add_argument('--n', type=int, default=default('n'), help='dimension for builtins and gen')
    flags.add_argument('--log-level', default=default('log_level'), help='DEBUG, INFO, WARNING or ERROR')
    return flags


def build_parser():
    # no defaults after the subcommand, so an unset flag keeps the value given before it
    common = _global_flags({})

    parser = argparse.ArgumentParser(
        prog='multmaps', description='Multiplicative maps on matrix algebras.', parents=[_global_flags(GLOBAL_DEFAULTS)],
    )
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('eval', parents=[common], help='evaluate an expression on a matrix')
    p.add_argument('expr')
    p.add_argument('matrix')
    p.set_defaults(handler=cmd_eval)

    p = sub.add_parser('simplify', parents=[common], help='rewrite an expression to canonical form')
    p.add_argument('expr')
    p.set_defaults(handler=cmd_simplify)

    p = sub.add_parser('classify', parents=[common], help='classify a map from evaluation access alone')
    p.add_argument('expr', nargs='?')
    p.add_argument('--builtin', choices=BUILTINS)
    p.set_defaults(handler=cmd_classify)

    p = sub.add_parser('decompose', parents=[common], help='factor a matrix into transvections')
    p.add_argument('matrix')
    p.set_defaults(handler=cmd_decompose)

    p = sub.add_parser('verify', parents=[common], help='fuzz multiplicativity, or compare two maps')
    p.add_argument('expr', nargs='?')
    p.add_argument('expr2', nargs='?')
    p.add_argument('--builtin', choices=BUILTINS)
    p.set_defaults(handler=cmd_verify)

    p = sub.add_parser('gen', parents=[common], help='draw a seeded random matrix')
    p.add_argument('kind', choices=GEN_KINDS)
    p.add_argument('--length', type=int, default=None)
    p.add_argument('--rank', type=int, default=None)
    p.set_defaults(handler=cmd_gen)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.log_level.upper())
    try:
        cfg = CliConfig.from_args(args)
        args.handler(args, cfg)
    except MultMapError as exc:
        logger.debug("command %s failed", args.command, exc_info=True)
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    return 0
