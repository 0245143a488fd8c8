"""Ramp secret sharing over prime fields: construction, classification, strengthening."""

from .access import AccessStructure, PluralAccessStructure, threshold_structure
from .analysis import classify, cond_entropy, decryptable_subspace
from .gf import FieldElement, FieldMatrix
from .schemes import LinearScheme, ShareBundle, builtin_fixture, encode, pd_concat, reconstruct, shamir_ramp
from .transform import apply_T, default_T, strengthen

__all__ = [
    "AccessStructure", "PluralAccessStructure", "threshold_structure",
    "classify", "cond_entropy", "decryptable_subspace",
    "FieldElement", "FieldMatrix",
    "LinearScheme", "ShareBundle", "builtin_fixture", "encode", "pd_concat", "reconstruct", "shamir_ramp",
    "apply_T", "default_T", "strengthen",
]
