"""
JSON document codecs on top of rest_framework serializers.

Input documents (matrices and expressions) are checked field by field by
declared serializer fields; `validate()` then builds the domain object, so
`validated_data` is a Matrix or a MapExpr rather than a dict. `read()` turns
the nested ValidationError detail into a ParseError naming the JSON path of
the first bad value. Everything else (forms, reports, words, verdicts) is
output only and subclasses BaseSerializer with just `to_representation`.
"""
import json

from config import configure_django

configure_django()

from rest_framework import serializers  # noqa: E402
from rest_framework.settings import api_settings  # noqa: E402

from .errors import DimensionMismatch, FieldMismatch, ParseError  # noqa: E402
from .field import CONJUGATION, IDENTITY, FieldDescriptor, FieldKind, format_scalar, parse_scalar  # noqa: E402
from .mapexpr import (  # noqa: E402
    Cof,
    Conj,
    DetScale,
    Eps,
    FormClass,
    Hom,
    MapExpr,
    ScalarCharacter,
    TrivialDet,
)
from .matrix import ElementaryGen, Matrix  # noqa: E402
from .slword import GlFactorization  # noqa: E402

EXPR_ORDER = 'apply-last-first'

HOMS = {str(IDENTITY): IDENTITY, str(CONJUGATION): CONJUGATION}


def dumps(doc):
    """Canonical output: sorted keys, two-space indent, trailing newline."""
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + '\n'


def loads(text):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", exc.pos, text) from exc


def error_path(detail, path='$'):
    """First (path, message) in a nested ValidationError detail, or None."""
    if isinstance(detail, dict):
        for key, value in detail.items():
            if key == api_settings.NON_FIELD_ERRORS_KEY:
                where = path
            elif isinstance(key, int):
                where = f"{path}[{key}]"
            else:
                where = f"{path}.{key}"
            found = error_path(value, where)
            if found:
                return found
        return None
    if isinstance(detail, list):
        for index, value in enumerate(detail):
            if isinstance(value, str):
                return path, str(value)
            # many=True details hold one entry per item, empty for valid ones
            found = error_path(value, f"{path}[{index}]")
            if found:
                return found
        return None
    return path, str(detail)


def read(serializer_class, data, context=None):
    """Validate a decoded JSON document and return the object it describes."""
    serializer = serializer_class(data=data, context=context or {})
    if not serializer.is_valid():
        path, message = error_path(serializer.errors) or ('$', 'invalid document')
        raise ParseError(f"{path}: {message}")
    return serializer.validated_data


def parse_field_option(text):
    """'rational' or 'quadratic:<d>' as given on the command line."""
    if text == 'rational':
        return FieldDescriptor.rational()
    kind, _, d = text.partition(':')
    if kind != 'quadratic' or not d.lstrip('-').isdigit():
        raise ParseError(f"field must be 'rational' or 'quadratic:<d>', got {text!r}")
    return FieldDescriptor.quadratic(int(d))


def _pairs(table):
    return [[format_scalar(x), format_scalar(y)] for x, y in table]


class HomField(serializers.Field):
    """'id' | 'conj'. Sampled homs only ever appear in output, as {"sampled": [[x, φ(x)], ...]}."""

    default_error_messages = {
        'invalid': "expected 'id' or 'conj'",
    }

    def to_internal_value(self, data):
        if not isinstance(data, str) or data not in HOMS:
            self.fail('invalid')
        return HOMS[data]

    def to_representation(self, value):
        if value.is_registered:
            return str(value)
        return {'sampled': _pairs(value.table)}


class FactorSerializer(serializers.Serializer):
    phi = HomField()
    pow = serializers.IntegerField()

    def validate(self, attrs):
        return attrs['phi'], attrs['pow']


class CharacterField(serializers.ListField):
    """[{"phi": "id", "pow": 3}, ...]; the empty list is the constant 1."""

    child = FactorSerializer()

    def to_internal_value(self, data):
        return ScalarCharacter(tuple(super().to_internal_value(data)))

    def to_representation(self, value):
        homs = HomField()
        return [{'phi': homs.to_representation(h), 'pow': p} for h, p in value.factors]


class FieldSerializer(serializers.Serializer):
    kind = serializers.ChoiceField(choices=[kind.value for kind in FieldKind])
    d = serializers.IntegerField(required=False)

    def validate(self, attrs):
        if attrs['kind'] == FieldKind.RATIONAL.value:
            return FieldDescriptor.rational()
        if 'd' not in attrs:
            raise serializers.ValidationError({'d': ['required for a quadratic field']})
        return FieldDescriptor.quadratic(attrs['d'])

    def to_representation(self, instance):
        if instance.is_quadratic:
            return {'kind': 'quadratic', 'd': instance.d}
        return {'kind': 'rational'}


class MatrixSerializer(serializers.Serializer):
    """{"field": ..., "n": int, "entries": [[scalar, ...], ...]}

    A `field` in the context pins the field the document must be over.
    """

    field = FieldSerializer()
    n = serializers.IntegerField()
    entries = serializers.ListField(
        child=serializers.ListField(child=serializers.CharField(trim_whitespace=False)),
    )

    def validate(self, attrs):
        fd, n, rows = attrs['field'], attrs['n'], attrs['entries']
        expected = self.context.get('field')
        if expected is not None and expected != fd:
            raise FieldMismatch(f"document is over {fd}, expected {expected}")
        if n < 1:
            raise DimensionMismatch("n: dimension must be at least 1")
        if len(rows) != n:
            raise DimensionMismatch(f"entries: expected {n} rows, got {len(rows)}")
        parsed, errors = [], {}
        for i, row in enumerate(rows):
            if len(row) != n:
                raise DimensionMismatch(f"entries[{i}]: expected {n} entries, got {len(row)}")
            parsed_row = []
            for j, text in enumerate(row):
                try:
                    parsed_row.append(parse_scalar(text, fd))
                except ParseError as exc:
                    errors.setdefault(i, {})[j] = [str(exc)]
            parsed.append(parsed_row)
        if errors:
            raise serializers.ValidationError({'entries': errors})
        return Matrix(fd, parsed)

    def format_entries(self, instance):
        return [[format_scalar(x) for x in row] for row in instance.rows]

    def to_representation(self, instance):
        return {
            'field': FieldSerializer().to_representation(instance.fd),
            'n': instance.n,
            'entries': self.format_entries(instance),
        }


class AtomSerializer(serializers.Serializer):
    """One atom document; which keys are required depends on `atom`."""

    REQUIRED = {
        'conj': ('R',),
        'cof': (),
        'hom': ('phi',),
        'detscale': ('lambda',),
        'trivialdet': ('chars', 'zeroPad', 'onePad'),
    }

    atom = serializers.ChoiceField(choices=list(REQUIRED))
    R = MatrixSerializer(required=False)
    phi = HomField(required=False)
    chars = serializers.ListField(child=CharacterField(), required=False)
    zeroPad = serializers.IntegerField(min_value=0, required=False)
    onePad = serializers.IntegerField(min_value=0, required=False)

    def get_fields(self):
        fields = super().get_fields()
        fields['lambda'] = CharacterField(required=False)
        return fields

    def validate(self, attrs):
        tag = attrs['atom']
        missing = {key: [f"required for a {tag} atom"] for key in self.REQUIRED[tag] if key not in attrs}
        if missing:
            raise serializers.ValidationError(missing)
        if tag == 'conj':
            return Conj(attrs['R'])
        if tag == 'cof':
            return Cof()
        if tag == 'hom':
            return Hom(attrs['phi'])
        if tag == 'detscale':
            return DetScale(attrs['lambda'])
        return TrivialDet(tuple(attrs['chars']), attrs['zeroPad'], attrs['onePad'])

    def to_representation(self, instance):
        chars = CharacterField()
        if isinstance(instance, Conj):
            return {'atom': 'conj', 'R': MatrixSerializer().to_representation(instance.R)}
        if isinstance(instance, Cof):
            return {'atom': 'cof'}
        if isinstance(instance, Hom):
            return {'atom': 'hom', 'phi': str(instance.phi)}
        if isinstance(instance, DetScale):
            return {'atom': 'detscale', 'lambda': chars.to_representation(instance.lam)}
        return {
            'atom': 'trivialdet',
            'chars': [chars.to_representation(c) for c in instance.chars],
            'zeroPad': instance.zero_pad,
            'onePad': instance.one_pad,
        }


class ExprSerializer(serializers.Serializer):
    n = serializers.IntegerField()
    field = FieldSerializer()
    atoms = AtomSerializer(many=True)
    order = serializers.ChoiceField(choices=[EXPR_ORDER], required=False)

    def validate(self, attrs):
        return MapExpr(attrs['n'], attrs['field'], tuple(attrs['atoms']))

    def to_representation(self, instance):
        atoms = AtomSerializer()
        return {
            'n': instance.n,
            'field': FieldSerializer().to_representation(instance.fd),
            'atoms': [atoms.to_representation(a) for a in instance.atoms],
            'order': EXPR_ORDER,
        }


class WordSerializer(serializers.BaseSerializer):
    """{"gens": [{"type": "P", "i": 1, "j": 2, "k": "3/2"}, ...]}; a GL factorization leads with D_1(det)."""

    def gen(self, g):
        doc = {'type': g.tag.value, 'i': g.i}
        if g.j is not None:
            doc['j'] = g.j
        if g.k is not None:
            doc['k'] = format_scalar(g.k)
        return doc

    def to_representation(self, instance):
        if isinstance(instance, GlFactorization):
            gens = [ElementaryGen.diag_unit(1, instance.det_scalar)] + list(instance.word.gens)
        else:
            gens = instance.gens
        return {'gens': [self.gen(g) for g in gens]}


def _lambda_doc(lam, table):
    if lam is not None:
        return CharacterField().to_representation(lam)
    return {'sampled': _pairs(table)}


class FormSerializer(serializers.BaseSerializer):
    """Canonical forms; trivial forms add their characters and padding."""

    def to_representation(self, instance):
        matrices = MatrixSerializer()
        doc = {
            'class': instance.form_class.value,
            'n': instance.n,
            'k': instance.k,
            'field': FieldSerializer().to_representation(instance.fd),
            'R': matrices.to_representation(instance.R),
        }
        if instance.form_class is FormClass.TRIVIAL:
            if instance.chars is None:
                doc['chars'] = {'sampled': [
                    {'x': format_scalar(x), 'block': matrices.format_entries(block)}
                    for x, block in instance.block_table
                ]}
            else:
                chars = CharacterField()
                doc['chars'] = [chars.to_representation(c) for c in instance.chars]
            doc['zeroPad'] = instance.zero_pad
            doc['onePad'] = instance.one_pad
            return doc
        doc['phi'] = HomField().to_representation(instance.phi)
        doc['eps'] = instance.eps.value
        doc['lambda'] = _lambda_doc(instance.lam, instance.lambda_table)
        return doc


class ReportSerializer(serializers.BaseSerializer):
    """Classification report: the form document plus block data, tables and the probe log."""

    def to_representation(self, instance):
        matrices = MatrixSerializer()
        doc = FormSerializer().to_representation(instance.form)
        doc.update({
            's': instance.s,
            'l': instance.l,
            'preConjugator': matrices.to_representation(instance.pre_conjugator),
            'homTable': _pairs(instance.hom_table),
            'lambdaTable': [
                [format_scalar(x), matrices.format_entries(y) if isinstance(y, Matrix) else format_scalar(y)]
                for x, y in instance.lambda_table
            ],
            'unrecognizedHom': instance.unrecognized_hom,
            'probeLog': [
                {'input': matrices.format_entries(a), 'output': matrices.format_entries(out)}
                for a, out in instance.probe_log
            ],
        })
        if 'eps' not in doc:
            doc['eps'] = Eps.PLAIN.value
            doc['phi'] = HomField().to_representation(IDENTITY)
            doc['lambda'] = CharacterField().to_representation(ScalarCharacter())
        return doc


class VerdictSerializer(serializers.BaseSerializer):

    def to_representation(self, instance):
        counterexample = None
        if instance.counterexample is not None:
            a, b = instance.counterexample
            matrices = MatrixSerializer()
            counterexample = {
                'A': matrices.to_representation(a),
                'B': None if b is None else matrices.to_representation(b),
            }
        return {
            'pass': instance.passed,
            'counterexample': counterexample,
            'samples': instance.samples,
            'seed': instance.seed,
        }
