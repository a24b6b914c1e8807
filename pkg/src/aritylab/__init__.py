"""Finite-scale calculus for arities and almost arities of relational structures."""

from .core import (CapExceeded, DefSet, FinStructure, Signature, StructureError,
                   expand_with, pure_set, restrict_signature, structure,
                   validate_structure)
from .formula import evaluate, free_variables, holds, parse_formula
from .symmetry import AutGroup, TuplePartition, automorphism_group, is_invariant, orbit_partition

__version__ = "0.1.0"
