"""Radial parts of elements of quantized enveloping algebras for quantum symmetric pairs."""

from .cartan import CartanMatrix
from .errors import (ContextMismatch, DivisionByZero, IdenticallySingular, IndexOutOfRange, InvalidConfig,
                     MissingGeneratorImage, NotSymmetrizable, ParseError, QRadialError,
                     SymbolicTorusUnsupported)
from .hopf import StarStructure, antipode, coproduct, counit
from .parser import parse_element, parse_expr, parse_scalar
from .qsp import AdmissiblePair, QSPContext
from .radial import (BABDecomposition, BANDecomposition, Identity, QDiffOperator, Rep, apply_reps,
                     counit_rep, cycle_identity, expand_to_uq, iwasawa_decompose, klambda, pi,
                     pi_regularity_conditions, radial_decompose_word, regularity_conditions,
                     restrict_counit, step_identity)
from .scalar import RatFunc, laurent, qpow, render
from .uqg import PBWElement, QuantumGroup, render_element

__version__ = "0.1.0"
