"""Supercharacter theories of parabolic contractions of GL(n), O(M) and Sp(M) over F_p."""
from .contraction import ContractionContext, Superclass, build_context
from .grouptools import CharacterTable, SmallGroup, character_table
from .orbits import ClassificationError, OrbitCapExceeded, superclasses_Ua
from .rook import BasicPair, RookPlacement, WeylElement
from .roots import LieTypeSpec, PartitionSpec
from .scalars import CycloNumber, CyclotomicField
from .superchar import ClassFunction, SupercharTheory, assemble_theory
from .verify import VerificationReport, check_axioms, check_structural_claims

__version__ = "0.1.0"

__all__ = [
    "BasicPair", "CharacterTable", "ClassFunction", "ClassificationError", "ContractionContext",
    "CycloNumber", "CyclotomicField", "LieTypeSpec", "OrbitCapExceeded", "PartitionSpec",
    "RookPlacement", "SmallGroup", "Superclass", "SupercharTheory", "VerificationReport",
    "WeylElement", "assemble_theory", "build_context", "character_table", "check_axioms",
    "check_structural_claims", "superclasses_Ua",
]
