"""Canonical labelling of Latin squares, Steiner triple systems and 1-factorisations."""

from .latin_core import (
    LatinSquare,
    PartialArray,
    PartialLabelling,
    PartialPermutation,
    apply_labelling,
    conjugate,
    lex_compare,
    parse,
    serialize,
    validate,
)
from .canonical import canonical_form, canonical_labelling, same_isotopism_class, species_canonical
from .onefact import canonical_1f, same_class_1f
from .sampler import JMChain, h_statistics, jm_sample
from .steiner import canonical_sts, canonical_sts_lifted, sts_isomorphic

__version__ = "0.1.0"
