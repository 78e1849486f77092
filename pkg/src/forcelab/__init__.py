"""Finite symmetric systems, hereditarily symmetric names, and forcing checks."""

from .atomic import AtomicEngine, AtomicQuery
from .errors import (ForcelabError, FormulaSyntaxError, ModeError,
                     ResourceLimitError, SystemFileError, UnknownConditionError,
                     ValidationError)
from .extension import (axiom_preservation_check, enumerate_generics, evaluate,
                        satisfies, set_rank, truth_lemma_check, value_repr)
from .families import build, canonical_cohen_name, orbit_size
from .kernel import BACKEND
from .logic import (QuantifierBound, check_relativization, forces,
                    forces_vector, parse, relativize, to_text)
from .names import ClassName, Name, NameStore, plain
from .niceness import (DenseFamily, collection_witness, minimal_cover,
                       orbit_closure, pretameness_witness, separation_witness,
                       stratification_check, symmetric_witness, validate_family)
from .order import Preorder
from .symmetry import (Automorphism, AutomorphismGroup, SubgroupFilter,
                       SymmetricSystem, validate_system)
from .sysfile import Workspace, loads, serialize
from .witness import WitnessCertificate, WitnessEngine, check_equivalence

__version__ = "0.1.0"

__all__ = [
    "AtomicEngine", "AtomicQuery", "Automorphism", "AutomorphismGroup",
    "BACKEND", "ClassName", "DenseFamily", "ForcelabError",
    "FormulaSyntaxError", "ModeError", "Name", "NameStore", "Preorder",
    "QuantifierBound", "ResourceLimitError", "SubgroupFilter",
    "SymmetricSystem", "SystemFileError", "UnknownConditionError",
    "ValidationError", "WitnessCertificate", "WitnessEngine", "Workspace",
    "axiom_preservation_check", "build", "canonical_cohen_name",
    "check_equivalence", "check_relativization", "collection_witness",
    "enumerate_generics",
    "evaluate", "forces", "forces_vector", "loads", "minimal_cover",
    "orbit_closure", "orbit_size", "parse", "plain", "pretameness_witness",
    "relativize", "satisfies", "separation_witness", "serialize", "set_rank",
    "stratification_check", "symmetric_witness", "to_text",
    "truth_lemma_check", "validate_family", "validate_system", "value_repr",
]
