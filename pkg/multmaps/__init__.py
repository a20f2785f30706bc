"""
multmaps: exact-arithmetic toolkit for multiplicative maps between matrix
algebras M_n(F) → M_k(F) over Q and quadratic fields Q(√d).

Modules
- field: exact scalars and the ring homs we can represent
- matrix: dense exact matrices, elimination, cofactors, matrix units
- slword: transvection words and seeded random group elements
- mapexpr: composition ASTs and their canonical forms
- classify: black-box reconstruction of a map's canonical form
- verify: multiplicativity and equality fuzzing
- serializers, cli: JSON documents and the command line
"""
from .errors import MultMapError
from .field import QQ, FieldDescriptor, FieldElem
from .matrix import Matrix

__all__ = ['FieldDescriptor', 'FieldElem', 'Matrix', 'MultMapError', 'QQ']
