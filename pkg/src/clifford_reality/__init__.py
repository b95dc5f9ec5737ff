"""Exact Clifford algebras, Clifford groups and reality of semisimple spin elements."""

from .algebra import CliffordCtx, Multivector, clifford, embed_vector, extract_vector, mv_inverse
from .errors import CliffordRealityError
from .fields import FieldSpec, GF, QQ, make_field
from .groups import GroupElement, OrthMatrix, in_gamma, is_spin, lift_so, norm, spinor_norm, vector_rep
from .quadratic import QSpace, Subspace, WittBasis, parse_form, qspace_from_gram, witt_decompose
from .torus import (
    TorusElement,
    blockwise_conjugator,
    involution_decompose,
    involution_lift,
    is_real_semisimple_spin,
    make_torus_element,
    standard_conjugator,
)

__all__ = [
    "CliffordCtx", "Multivector", "clifford", "embed_vector", "extract_vector", "mv_inverse",
    "CliffordRealityError", "FieldSpec", "GF", "QQ", "make_field",
    "GroupElement", "OrthMatrix", "in_gamma", "is_spin", "lift_so", "norm", "spinor_norm", "vector_rep",
    "QSpace", "Subspace", "WittBasis", "parse_form", "qspace_from_gram", "witt_decompose",
    "TorusElement", "blockwise_conjugator", "involution_decompose", "involution_lift",
    "is_real_semisimple_spin", "make_torus_element", "standard_conjugator",
]
